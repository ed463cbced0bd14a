#include "nlab/util.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <string>

namespace nlab {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t coefficient_hash(std::span<const Scalar> coeffs) {
  std::string text;
  char buf[64];
  for (const auto& z : coeffs) {
    // +0.0 so that -0 and 0 hash alike
    std::snprintf(buf, sizeof buf, "%.11e,%.11e;", z.real() + 0.0, z.imag() + 0.0);
    text += buf;
  }
  return fnv1a(text);
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scalar parse_complex(std::string_view text) {
  static const std::regex number(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*$)");
  static const std::regex imag_only(R"(^\s*([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)\s*\*?\s*i\s*$)");
  static const std::regex full(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([+-])\s*((?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)\s*\*?\s*i\s*$)");
  const std::string s(text);
  std::smatch m;
  auto coefficient = [](const std::string& c) {
    if (c.empty() || c == "+") return 1.0;
    if (c == "-") return -1.0;
    return std::stod(c);
  };
  if (std::regex_match(s, m, number)) return {std::stod(m[1].str()), 0.0};
  if (std::regex_match(s, m, imag_only)) return {0.0, coefficient(m[1].str())};
  if (std::regex_match(s, m, full)) {
    double im = coefficient(m[3].str());
    if (m[2].str() == "-") im = -im;
    return {std::stod(m[1].str()), im};
  }
  throw Error("cannot parse complex number '" + s + "' (expected a, bi or a+bi)");
}

std::string format_complex(Scalar z) {
  char buf[64];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.12g", z.real() + 0.0);
  } else {
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real() + 0.0, z.imag());
  }
  return buf;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string piece(text.substr(start, pos - start));
    auto b = piece.find_first_not_of(" \t");
    auto e = piece.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(piece.substr(b, e - b + 1));
    start = pos + 1;
  }
  return out;
}

bool rounded_lex_less(std::span<const Scalar> a, std::span<const Scalar> b) {
  auto round = [](double x) { return std::nearbyint(x * 1e9); };
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = round(a[i].real()), br = round(b[i].real());
    if (ar != br) return ar < br;
    const double ai = round(a[i].imag()), bi = round(b[i].imag());
    if (ai != bi) return ai < bi;
  }
  return a.size() < b.size();
}

}  // namespace nlab
