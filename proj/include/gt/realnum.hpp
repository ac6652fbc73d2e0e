#ifndef GT_REALNUM_HPP
#define GT_REALNUM_HPP

#include "gt/ratio.hpp"

namespace gt {

// Rational enclosure of a real value: lo <= x <= hi.
//
// Design construction never calls libm. Every transcendental quantity a
// design depends on (1/e, eta, the test-count formula, the root c) is
// evaluated as a rational interval with pure integer arithmetic, so the
// resulting files are identical on any conforming platform.
struct RatInterval {
  Rat lo;
  Rat hi;

  Rat mid() const { return (lo + hi) / 2; }
  Rat width() const { return hi - lo; }
};

RatInterval ival_add(const RatInterval& a, const RatInterval& b);
RatInterval ival_mul(const RatInterval& a, const RatInterval& b);  // a,b >= 0
RatInterval ival_scale(const RatInterval& a, const Rat& s);        // s >= 0
RatInterval ival_inv(const RatInterval& a);                        // a > 0

// e^{-x} for rational 0 <= x <= 1, enclosure width < 2^-bits.
RatInterval exp_neg_enclosure(const Rat& x, unsigned bits = 128);

// Euler's number e.
RatInterval e_enclosure(unsigned bits = 128);

// Natural log of a positive rational, via base-2 reduction plus the
// artanh series on the reduced mantissa.
RatInterval ln_enclosure(const Rat& y, unsigned bits = 128);

}  // namespace gt

#endif
