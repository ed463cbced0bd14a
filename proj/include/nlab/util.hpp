#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlab/types.hpp"

namespace nlab {

/// SplitMix64 finalizer; derives independent stream seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// 64-bit FNV-1a over a byte string.
std::uint64_t fnv1a(std::string_view bytes);

/// Hash of a coefficient vector rounded to 12 significant digits, so
/// witnesses that agree to rounding noise hash identically.
std::uint64_t coefficient_hash(std::span<const Scalar> coeffs);

std::string hex64(std::uint64_t h);

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i".
Scalar parse_complex(std::string_view text);
std::string format_complex(Scalar z);

std::vector<std::string> split(std::string_view text, char sep);

/// Lexicographic order on coefficients rounded to 1e-9 (real part, then
/// imaginary part). Used to break ties between equal-value witnesses.
bool rounded_lex_less(std::span<const Scalar> a, std::span<const Scalar> b);

}  // namespace nlab
