#include "gt/realnum.hpp"

#include <stdexcept>

namespace gt {

namespace {

Rat two_pow_neg(unsigned bits) {
  return Rat(Int(1), Int(1) << bits);
}

// Keeps enclosure endpoints from accumulating huge denominators: rounds
// lo down and hi up onto a dyadic grid two bits finer than requested.
RatInterval tighten(const RatInterval& a, unsigned bits) {
  Int scale = Int(1) << (bits + 2);
  Rat lo(floor_rat(a.lo * Rat(scale)), scale);
  Rat hi(ceil_rat(a.hi * Rat(scale)), scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

}  // namespace

RatInterval ival_add(const RatInterval& a, const RatInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

RatInterval ival_mul(const RatInterval& a, const RatInterval& b) {
  if (sgn(a.lo) < 0 || sgn(b.lo) < 0) {
    throw std::domain_error("ival_mul expects non-negative intervals");
  }
  return {a.lo * b.lo, a.hi * b.hi};
}

RatInterval ival_scale(const RatInterval& a, const Rat& s) {
  if (sgn(s) < 0) throw std::domain_error("ival_scale expects s >= 0");
  return {a.lo * s, a.hi * s};
}

RatInterval ival_inv(const RatInterval& a) {
  if (sgn(a.lo) <= 0) throw std::domain_error("ival_inv expects a > 0");
  return {1 / a.hi, 1 / a.lo};
}

RatInterval exp_neg_enclosure(const Rat& x, unsigned bits) {
  if (sgn(x) < 0 || x > 1) {
    throw std::domain_error("exp_neg_enclosure expects 0 <= x <= 1");
  }
  if (sgn(x) == 0) return {Rat(1), Rat(1)};
  // Alternating series with terms decreasing in magnitude from k >= 1,
  // so consecutive partial sums bracket the value.
  Rat eps = two_pow_neg(bits + 4);
  Rat term = 1;
  Rat sum = 1;
  Rat prev_sum = 1;
  for (unsigned k = 1;; ++k) {
    term *= -x;
    term /= static_cast<long>(k);
    prev_sum = sum;
    sum += term;
    if (abs(term) < eps && k >= 2) break;
    if (k > 4096) throw std::logic_error("exp series failed to converge");
  }
  RatInterval out{sum, prev_sum};
  if (out.lo > out.hi) std::swap(out.lo, out.hi);
  return tighten(out, bits);
}

RatInterval e_enclosure(unsigned bits) {
  return ival_inv(exp_neg_enclosure(Rat(1), bits + 4));
}

RatInterval ln_enclosure(const Rat& y, unsigned bits) {
  if (sgn(y) <= 0) throw std::domain_error("ln of non-positive rational");
  // Reduce y = 2^e * m with m in [3/4, 3/2); then |(m-1)/(m+1)| <= 1/5.
  long e = 0;
  Rat m = y;
  while (m >= Rat(3, 2)) {
    m /= 2;
    ++e;
  }
  while (m < Rat(3, 4)) {
    m *= 2;
    --e;
  }

  auto atanh_series = [&](const Rat& z) -> RatInterval {
    // ln((1+z)/(1-z)) = 2 * sum z^(2k+1)/(2k+1), |z| < 1.
    Rat eps = two_pow_neg(bits + 6);
    Rat z2 = z * z;
    Rat pow = z;
    Rat sum = 0;
    unsigned k = 0;
    for (;;) {
      sum += pow / static_cast<long>(2 * k + 1);
      pow *= z2;
      ++k;
      Rat tail_bound = abs(pow) / ((1 - z2) * static_cast<long>(2 * k + 1));
      if (tail_bound < eps) {
        Rat total = 2 * sum;
        Rat slack = 2 * tail_bound;
        if (sgn(z) >= 0) return {total, total + slack};
        return {total - slack, total};
      }
      if (k > 8192) throw std::logic_error("ln series failed to converge");
    }
  };

  RatInterval ln_m = atanh_series((m - 1) / (m + 1));
  RatInterval ln2 = atanh_series(Rat(1, 3));
  RatInterval out;
  if (e >= 0) {
    out = {ln_m.lo + rat_of(e) * ln2.lo, ln_m.hi + rat_of(e) * ln2.hi};
  } else {
    out = {ln_m.lo + rat_of(e) * ln2.hi, ln_m.hi + rat_of(e) * ln2.lo};
  }
  return tighten(out, bits);
}

}  // namespace gt
