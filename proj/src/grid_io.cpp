#include "haar/grid_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "haar/error.hpp"

namespace haar {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_int(const std::string& s, const char* what) {
  T v{};
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw StructuralError(std::string("grid file: bad ") + what + " '" + s + "'");
  return v;
}

bool header_value(const std::string& line, const std::string& key, std::string& value) {
  if (line.rfind(key + "=", 0) != 0) return false;
  value = trim(line.substr(key.size() + 1));
  return true;
}

}  // namespace

void parse_dyadic(const std::string& token, std::int64_t& numerator, int& exponent) {
  const auto slash = token.find('/');
  if (slash == std::string::npos) {
    numerator = parse_int<std::int64_t>(token, "coordinate");
    exponent = 0;
    return;
  }
  numerator = parse_int<std::int64_t>(token.substr(0, slash), "coordinate numerator");
  const std::string den = token.substr(slash + 1);
  if (den.rfind("2^", 0) == 0) {
    exponent = parse_int<int>(den.substr(2), "coordinate exponent");
  } else {
    // Accept a literal power of two such as "1/4".
    const auto v = parse_int<std::int64_t>(den, "coordinate denominator");
    if (v <= 0 || (v & (v - 1)) != 0) throw StructuralError("grid file: denominator must be a power of two");
    exponent = 0;
    for (std::int64_t t = v; t > 1; t >>= 1) ++exponent;
  }
  if (exponent < 0 || exponent > 40) throw StructuralError("grid file: coordinate exponent out of range");
}

Box parse_box(const std::string& text, std::size_t d) {
  std::istringstream in(text);
  std::vector<std::int64_t> nums;
  std::vector<int> exps;
  std::string tok;
  while (in >> tok) {
    std::int64_t m = 0;
    int e = 0;
    parse_dyadic(tok, m, e);
    nums.push_back(m);
    exps.push_back(e);
  }
  if (nums.size() != 2 * d) throw StructuralError("grid file: box needs 2*d coordinates");
  int base = 0;
  for (int e : exps) base = std::max(base, e);
  std::vector<std::int64_t> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = nums[2 * i] << (base - exps[2 * i]);
    hi[i] = nums[2 * i + 1] << (base - exps[2 * i + 1]);
  }
  return Box(base, lo, hi);
}

std::string format_box(const Box& box) {
  std::ostringstream os;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (i) os << ' ';
    os << box.lo_units()[i] << "/2^" << box.base_level() << ' ' << box.hi_units()[i] << "/2^"
       << box.base_level();
  }
  return os.str();
}

void write_grid(std::ostream& os, const GridFunction& f) {
  os << "d=" << f.dim() << '\n' << "J=" << f.level() << '\n' << "box=" << format_box(f.box()) << '\n';
  char buf[32];
  for (double v : f.values()) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, ptr - buf);
    os.put('\n');
  }
}

GridFunction read_grid(std::istream& is) {
  std::string line, value;
  int d = -1, J = -1;
  std::string box_text;
  bool have_box = false;
  while (!have_box && std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (header_value(line, "d", value)) {
      d = parse_int<int>(value, "dimension");
    } else if (header_value(line, "J", value)) {
      J = parse_int<int>(value, "resolution");
    } else if (header_value(line, "box", value)) {
      box_text = value;
      have_box = true;
    } else {
      throw StructuralError("grid file: unexpected header line '" + line + "'");
    }
  }
  if (d <= 0 || J < 0 || !have_box) throw StructuralError("grid file: missing d, J or box header");
  Box box = parse_box(box_text, static_cast<std::size_t>(d));
  std::vector<double> samples;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size()) {
      throw StructuralError("grid file: bad sample '" + line + "'");
    }
    samples.push_back(v);
  }
  return GridFunction(std::move(box), J, std::move(samples));
}

void save_grid(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw StructuralError("cannot open '" + path + "' for writing");
  write_grid(os, f);
}

GridFunction load_grid(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw StructuralError("cannot open '" + path + "'");
  return read_grid(is);
}

}  // namespace haar
