#include "saw/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "saw/error.hpp"

namespace saw::io {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'W', 'C', 'O', 'U', 'N', 'T'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t u64() { return take(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  void expect_magic() {
    if (bytes_.size() < 8 || std::memcmp(bytes_.data(), kMagic, 8) != 0) {
      fail(ErrorKind::Validation, "count cache: bad magic");
    }
    pos_ = 8;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::uint64_t take(int n) {
    if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) fail(ErrorKind::Validation, "count cache: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t class_code(WalkClass cls) {
  switch (cls) {
    case WalkClass::All: return 0;
    case WalkClass::Bridge: return 1;
    case WalkClass::IrreducibleBridge: return 2;
  }
  return 0;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

long long to_int(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') fail(ErrorKind::Validation, "csv: bad integer '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(ErrorKind::Validation, "csv: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string encode_count_table(const CountTable& table) {
  std::string out(kMagic, 8);
  put_u32(out, kCountCacheVersion);
  put_u32(out, static_cast<std::uint32_t>(table.dim()));
  put_u32(out, static_cast<std::uint32_t>(table.cutoff()));
  put_u32(out, class_code(table.walk_class()));
  const auto endpoints = table.endpoints();
  put_u64(out, endpoints.size());
  for (const Point& x : endpoints) {
    for (int i = 0; i < table.dim(); ++i) put_u64(out, static_cast<std::uint64_t>(x[i]));
    for (Count c : table.counts(x)) {
      put_u64(out, static_cast<std::uint64_t>(c));
      put_u64(out, static_cast<std::uint64_t>(c >> 64));
    }
  }
  return out;
}

CountTable decode_count_table(const std::string& bytes) {
  Reader in(bytes);
  in.expect_magic();
  if (in.u32() != kCountCacheVersion) fail(ErrorKind::Validation, "count cache: unsupported version");
  const auto d = static_cast<int>(in.u32());
  const auto cutoff = static_cast<int>(in.u32());
  const std::uint32_t code = in.u32();
  if (code > 2) fail(ErrorKind::Validation, "count cache: bad class code");
  static constexpr WalkClass kClasses[] = {WalkClass::All, WalkClass::Bridge, WalkClass::IrreducibleBridge};
  CountTable table(d, cutoff, kClasses[code]);
  const std::uint64_t entries = in.u64();
  for (std::uint64_t e = 0; e < entries; ++e) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = static_cast<Coord>(in.u64());
    for (int n = 0; n <= cutoff; ++n) {
      const std::uint64_t lo = in.u64();
      const std::uint64_t hi = in.u64();
      table.add(x, n, (static_cast<Count>(hi) << 64) | lo);
    }
  }
  if (!in.done()) fail(ErrorKind::Validation, "count cache: trailing bytes");
  return table;
}

std::string count_table_csv(const CountTable& table) {
  std::string out;
  for (int i = 1; i <= table.dim(); ++i) out += fmt::format("x{},", i);
  out += "N,count\n";
  table.for_each([&](const Point& x, std::span<const Count> prof) {
    for (std::size_t n = 0; n < prof.size(); ++n) {
      if (prof[n] == 0) continue;
      for (int i = 0; i < table.dim(); ++i) out += fmt::format("{},", x[i]);
      out += fmt::format("{},{}\n", n, to_string(prof[n]));
    }
  });
  return out;
}

nlohmann::json step_law_to_json(const StepLaw& law) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& e : law.steps) {
    nlohmann::json y = nlohmann::json::array();
    for (int i = 0; i < e.step.y.dim(); ++i) y.push_back(e.step.y[i]);
    steps.push_back({{"t", e.step.t}, {"y", y}, {"p", e.p}});
  }
  return {{"d", law.dim},
          {"beta", law.beta},
          {"L", law.cutoff},
          {"m_hat", law.m_hat},
          {"tail_mass_proxy", law.tail_mass_proxy},
          {"steps", steps}};
}

StepLaw step_law_from_json(const nlohmann::json& j) {
  try {
    StepLaw law;
    law.dim = j.at("d").get<int>();
    law.beta = j.at("beta").get<double>();
    law.cutoff = j.at("L").get<int>();
    law.m_hat = j.at("m_hat").get<double>();
    law.tail_mass_proxy = j.value("tail_mass_proxy", 0.0);
    for (const auto& s : j.at("steps")) {
      FrameSplit f{s.at("t").get<Coord>(), Point(law.dim - 1)};
      const auto& y = s.at("y");
      if (static_cast<int>(y.size()) != law.dim - 1) fail(ErrorKind::Validation, "step law: wrong y length");
      for (int i = 0; i < law.dim - 1; ++i) f.y[i] = y.at(static_cast<std::size_t>(i)).get<Coord>();
      law.steps.push_back({f, s.at("p").get<double>()});
    }
    std::sort(law.steps.begin(), law.steps.end(), [](const StepEntry& a, const StepEntry& b) { return a.step < b.step; });
    return law;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("step law json: ") + e.what());
  }
}

std::string skeletons_csv(const std::vector<Skeleton>& skeletons) {
  const int dims = skeletons.empty() ? 1 : skeletons.front().transverse_dim();
  std::string out = "replicate,k,step_index,t";
  for (int i = 1; i <= dims; ++i) out += fmt::format(",y_{}", i);
  out += "\n";
  for (std::size_t r = 0; r < skeletons.size(); ++r) {
    const auto& incs = skeletons[r].increments;
    for (std::size_t s = 0; s < incs.size(); ++s) {
      out += fmt::format("{},{},{},{}", r, incs.size(), s, incs[s].t);
      for (int i = 0; i < dims; ++i) out += fmt::format(",{}", incs[s].y[i]);
      out += "\n";
    }
  }
  return out;
}

std::vector<Skeleton> parse_skeletons_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) fail(ErrorKind::Validation, "skeleton csv: missing header");
  const auto header = split(lines.front(), ',');
  if (header.size() < 5 || header[0] != "replicate") fail(ErrorKind::Validation, "skeleton csv: bad header");
  const int dims = static_cast<int>(header.size()) - 4;
  std::vector<Skeleton> out;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto f = split(lines[l], ',');
    if (f.size() != header.size()) fail(ErrorKind::Validation, "skeleton csv: ragged row");
    const auto r = static_cast<std::size_t>(to_int(f[0]));
    if (r == out.size()) out.emplace_back();
    if (r + 1 != out.size()) fail(ErrorKind::Validation, "skeleton csv: replicates out of order");
    FrameSplit x{to_int(f[3]), Point(dims)};
    for (int i = 0; i < dims; ++i) x.y[i] = to_int(f[static_cast<std::size_t>(4 + i)]);
    out.back().increments.push_back(x);
  }
  return out;
}

std::string process_csv(const Ensemble& ens) {
  std::string out = "replicate,t";
  for (int i = 1; i <= ens.dims; ++i) out += fmt::format(",Y_{}", i);
  out += "\n";
  for (std::size_t r = 0; r < ens.replicas; ++r) {
    for (std::size_t g = 0; g < ens.grid.size(); ++g) {
      out += fmt::format("{},{}", r, format_double(ens.grid[g]));
      for (int i = 0; i < ens.dims; ++i) out += "," + format_double(ens.at(r, g, i));
      out += "\n";
    }
  }
  return out;
}

Ensemble parse_process_csv(const std::string& text, Coord n) {
  const auto lines = lines_of(text);
  if (lines.empty()) fail(ErrorKind::Validation, "process csv: missing header");
  const auto header = split(lines.front(), ',');
  if (header.size() < 3 || header[0] != "replicate") fail(ErrorKind::Validation, "process csv: bad header");
  Ensemble ens;
  ens.n = n;
  ens.dims = static_cast<int>(header.size()) - 2;
  std::vector<double> grid;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto f = split(lines[l], ',');
    if (f.size() != header.size()) fail(ErrorKind::Validation, "process csv: ragged row");
    const auto r = static_cast<std::size_t>(to_int(f[0]));
    const double t = to_double(f[1]);
    if (r == 0) grid.push_back(t);
    if (r + 1 > ens.replicas) ens.replicas = r + 1;
    for (int i = 0; i < ens.dims; ++i) ens.values.push_back(to_double(f[static_cast<std::size_t>(2 + i)]));
  }
  ens.grid = grid;
  if (ens.values.size() != ens.replicas * grid.size() * static_cast<std::size_t>(ens.dims)) {
    fail(ErrorKind::Validation, "process csv: replicates do not share the grid");
  }
  return ens;
}

std::uint64_t content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace saw::io
