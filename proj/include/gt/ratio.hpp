#ifndef GT_RATIO_HPP
#define GT_RATIO_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gt {

// Exact rational arithmetic. All threshold comparisons in this library are
// performed on Rat values; floating point never decides a verdict.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "p" or "p/q" (q > 0). Throws std::invalid_argument on anything else.
Rat parse_rational(const std::string& text);

// Canonical form: "p" when the denominator is 1, otherwise "p/q".
std::string rational_to_string(const Rat& value);

Int floor_rat(const Rat& value);
Int ceil_rat(const Rat& value);

std::int64_t to_i64(const Int& value);
std::uint64_t to_u64(const Int& value);

inline Rat rat_of(std::int64_t v) { return Rat(static_cast<long>(v)); }

// value^e for small non-negative integer exponents.
Rat pow_rat(const Rat& value, unsigned exponent);

// Largest dyadic m/2^frac_bits not exceeding sqrt(value); exact whenever
// value is the square of a rational whose parts fit the dyadic grid.
Rat sqrt_rat_lower(const Rat& value, unsigned frac_bits = 32);

}  // namespace gt

#endif
