#include <charconv>
#include <cmath>
#include <string>

#include "rvlab/errors.hpp"
#include "rvlab/harness.hpp"
#include "internal.hpp"

namespace rvlab {

namespace {

// Parses the whole of `text` as a double; `offset` locates it in the spec.
double parse_real(std::string_view text, std::size_t offset) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
    ++offset;
  }
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError("expected a number, got '" + std::string(text) + "'",
                     offset + static_cast<std::size_t>(ptr - text.data()));
  }
  if (!std::isfinite(v)) throw ParseError("number must be finite", offset);
  return v;
}

Complex parse_complex_at(std::string_view text, std::size_t offset) {
  if (text.empty()) throw ParseError("empty entry", offset);
  if (text.back() != 'i') return Complex(parse_real(text, offset), 0.0);
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is neither leading nor an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](std::string_view s, std::size_t at) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s, at);
  };
  if (split == std::string_view::npos) return Complex(0.0, imag_part(body, offset));
  return Complex(parse_real(body.substr(0, split), offset),
                 imag_part(body.substr(split), offset + split));
}

std::vector<std::pair<std::string_view, std::size_t>> split(std::string_view text, char sep,
                                                            std::size_t offset) {
  std::vector<std::pair<std::string_view, std::size_t>> parts;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    if (k == text.size() || text[k] == sep) {
      parts.emplace_back(text.substr(start, k - start), offset + start);
      start = k + 1;
    }
  }
  return parts;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) { return parse_complex_at(text, 0); }

DiagonalMatrix parse_d_spec(std::string_view spec, std::size_t n) {
  if (n == 0) throw ParseError("dimension must be >= 1", 0);
  DiagonalMatrix d;
  auto fill = [&](Complex v) { d.diag.assign(n, v); };
  if (spec == "zero") {
    fill(0.0);
  } else if (spec == "ident") {
    fill(1.0);
  } else if (spec == "neg-ident") {
    fill(-1.0);
  } else if (spec.starts_with("scalar:")) {
    fill(parse_complex_at(spec.substr(7), 7));
  } else if (spec.starts_with("diag:")) {
    for (const auto& [item, at] : split(spec.substr(5), ',', 5)) d.diag.push_back(parse_complex_at(item, at));
    if (d.diag.size() != n) {
      throw ParseError("expected " + std::to_string(n) + " entries, got " + std::to_string(d.diag.size()),
                       spec.size());
    }
  } else if (spec.starts_with("uniform:")) {
    const auto parts = split(spec.substr(8), ':', 8);
    if (parts.size() != 2) throw ParseError("uniform needs <lo>:<hi>", 8);
    const double lo = parse_real(parts[0].first, parts[0].second);
    const double hi = parse_real(parts[1].first, parts[1].second);
    for (double x : linspace(lo, hi, n)) d.diag.emplace_back(x);
  } else {
    throw ParseError("unknown d-spec '" + std::string(spec) +
                         "' (zero | ident | neg-ident | scalar:<c> | diag:<list> | uniform:<lo>:<hi>)",
                     0);
  }
  return d;
}

std::vector<double> parse_t_grid(std::string_view spec) {
  std::vector<double> grid;
  if (spec.starts_with("log:")) {
    const auto parts = split(spec.substr(4), ':', 4);
    if (parts.size() != 3) throw ParseError("log grid needs <lo>:<hi>:<points>", 4);
    const double lo = parse_real(parts[0].first, parts[0].second);
    const double hi = parse_real(parts[1].first, parts[1].second);
    const double pts = parse_real(parts[2].first, parts[2].second);
    if (!(lo > 0.0) || !(hi > lo)) throw ParseError("log grid needs 0 < lo < hi", 4);
    if (pts < 1.0 || pts != std::floor(pts)) throw ParseError("point count must be a positive integer", parts[2].second);
    const auto count = static_cast<std::size_t>(pts);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i) {
      grid.push_back(count == 1 ? lo
                                : std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                                                     static_cast<double>(count - 1)));
    }
    // Pin the endpoints exactly.
    grid.front() = lo;
    grid.back() = count == 1 ? lo : hi;
  } else if (spec.starts_with("list:")) {
    for (const auto& [item, at] : split(spec.substr(5), ',', 5)) grid.push_back(parse_real(item, at));
  } else {
    throw ParseError("t-grid must be log:<lo>:<hi>:<points> or list:<v1,...>", 0);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ParseError("t-grid must be strictly ascending and positive", 0);
    }
  }
  return grid;
}

namespace detail {

std::vector<Complex> parse_z_grid(std::string_view spec, double im) {
  std::vector<Complex> grid;
  if (spec.starts_with("line:")) {
    const auto parts = split(spec.substr(5), ':', 5);
    if (parts.size() != 3) throw ParseError("line grid needs <lo>:<hi>:<points>", 5);
    const double lo = parse_real(parts[0].first, parts[0].second);
    const double hi = parse_real(parts[1].first, parts[1].second);
    const double pts = parse_real(parts[2].first, parts[2].second);
    if (pts < 1.0 || pts != std::floor(pts)) throw ParseError("point count must be a positive integer", parts[2].second);
    for (double x : linspace(lo, hi, static_cast<std::size_t>(pts))) grid.emplace_back(x, im);
  } else if (spec.starts_with("list:")) {
    for (const auto& [item, at] : split(spec.substr(5), ',', 5)) grid.push_back(parse_complex_at(item, at));
  } else {
    throw ParseError("z-grid must be line:<lo>:<hi>:<points> or list:<c1,...>", 0);
  }
  return grid;
}

}  // namespace detail

}  // namespace rvlab
