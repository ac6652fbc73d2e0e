#include "gt/ratio.hpp"

#include <cctype>

namespace gt {

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = text.find('/');
  auto check_int = [&](std::size_t begin, std::size_t end, bool sign_ok) {
    if (begin >= end) return false;
    std::size_t i = begin;
    if (sign_ok && (text[i] == '+' || text[i] == '-')) ++i;
    if (i >= end) return false;
    for (; i < end; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    }
    return true;
  };
  bool ok = slash == std::string::npos
                ? check_int(0, text.size(), true)
                : check_int(0, slash, true) &&
                      check_int(slash + 1, text.size(), false);
  if (!ok) throw std::invalid_argument("bad rational literal: " + text);
  Rat value;
  if (value.set_str(text, 10) != 0) {
    throw std::invalid_argument("bad rational literal: " + text);
  }
  if (value.get_den() == 0) {
    throw std::invalid_argument("zero denominator: " + text);
  }
  value.canonicalize();
  return value;
}

std::string rational_to_string(const Rat& value) { return value.get_str(); }

Int floor_rat(const Rat& value) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(),
             value.get_den().get_mpz_t());
  return q;
}

Int ceil_rat(const Rat& value) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(),
             value.get_den().get_mpz_t());
  return q;
}

std::int64_t to_i64(const Int& value) {
  if (!value.fits_slong_p()) throw std::overflow_error("integer out of range");
  return static_cast<std::int64_t>(value.get_si());
}

std::uint64_t to_u64(const Int& value) {
  if (sgn(value) < 0) throw std::overflow_error("negative value");
  if (mpz_sizeinbase(value.get_mpz_t(), 2) > 64) {
    throw std::overflow_error("integer out of range");
  }
  std::uint64_t out = 0;
  Int rest = value;
  for (int shift = 0; shift < 64 && sgn(rest) > 0; shift += 32) {
    out |= static_cast<std::uint64_t>(mpz_get_ui(rest.get_mpz_t()) &
                                      0xffffffffu)
           << shift;
    rest >>= 32;
  }
  return out;
}

Rat pow_rat(const Rat& value, unsigned exponent) {
  Rat out = 1;
  Rat base = value;
  unsigned e = exponent;
  while (e > 0) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1u;
  }
  return out;
}

Rat sqrt_rat_lower(const Rat& value, unsigned frac_bits) {
  if (sgn(value) < 0) throw std::domain_error("sqrt of negative rational");
  // floor(sqrt(floor(value * 4^frac_bits))) / 2^frac_bits
  Int scaled_num = value.get_num() << (2 * frac_bits);
  Int scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), scaled_num.get_mpz_t(),
             value.get_den().get_mpz_t());
  Int root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rat out(root, Int(1) << frac_bits);
  out.canonicalize();
  return out;
}

}  // namespace gt
