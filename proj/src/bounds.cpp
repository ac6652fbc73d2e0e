#include "gt/bounds.hpp"

#include <stdexcept>

namespace gt::bounds {

namespace {

// floor(log2(v)) for a positive rational, by comparing bit lengths.
long floor_log2(const Rat& v) {
  const Int& num = v.get_num();
  const Int& den = v.get_den();
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // e is within 1 of the answer; settle it exactly.
  auto le_pow2 = [&](long p) {
    // 2^p <= v ?
    if (p >= 0) return Int(den << p) <= num;
    return den <= Int(num << (-p));
  };
  while (!le_pow2(e)) --e;
  while (le_pow2(e + 1)) ++e;
  return e;
}

}  // namespace

Rat log2_lower(const Rat& x) {
  if (sgn(x) <= 0) throw std::domain_error("log2 of non-positive value");
  Rat powered = pow_rat(x, kLog2Grid);
  Rat out(Int(static_cast<long>(floor_log2(powered))), Int(kLog2Grid));
  out.canonicalize();
  return out;
}

Rat lower_bound_value(int n, int upper_d, const Rat& delta) {
  if (upper_d > n) throw std::invalid_argument("need D <= n");
  if (upper_d < 1 || delta <= 1) throw std::invalid_argument("bad arguments");
  Rat d_over(static_cast<long>(upper_d));
  return d_over / (delta * delta) *
         log2_lower(Rat(static_cast<long>(n), static_cast<long>(upper_d)));
}

Rat adaptive_budget(int n, int upper_d, const Rat& delta) {
  if (upper_d < 1 || n < upper_d || delta <= 1) {
    throw std::invalid_argument("bad arguments");
  }
  Rat base = Rat(static_cast<long>(upper_d)) / (delta * delta);
  if (base < 1) throw std::invalid_argument("need D >= delta^2");
  Rat log_term = log2_lower(Rat(static_cast<long>(n))) - log2_lower(base);
  return 2 * base * log_term + 2 * base;
}

Rat adaptive_budget_with_slack(int n, int upper_d, const Rat& delta) {
  return adaptive_budget(n, upper_d, delta) + 2;
}

LadderBudget ladder_budget(
    int n, int upper_d, const Rat& delta,
    const std::function<Rat(const Rat& ell)>& tester_t_formula,
    const Rat& c_family, const Rat& min_ell) {
  if (upper_d < 1 || n < upper_d || delta <= 1) {
    throw std::invalid_argument("bad arguments");
  }
  LadderBudget out;
  out.planned_sum = 0;
  Rat d_rat(static_cast<long>(upper_d));
  // Levels ell = D/delta^i for i = 0..ceil(log D / log delta), kept while
  // ell >= min_ell; mirrors the ladder planner.
  int q = 0;
  for (Rat power = 1; power < d_rat; power *= delta) ++q;
  Rat ell = d_rat;
  for (int i = 0; i <= q && ell >= min_ell; ++i, ell /= delta) {
    out.planned_sum += tester_t_formula(ell);
  }
  Rat r = delta / (delta - 1);
  Rat log_n_over_d = log2_lower(Rat(static_cast<long>(n)) / d_rat);
  Rat log_delta = log2_lower(delta);
  out.majorant = c_family * d_rat / (delta * delta) *
                 (r * log_n_over_d + r * r * log_delta);
  return out;
}

}  // namespace gt::bounds
