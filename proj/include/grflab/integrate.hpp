#pragma once

#include <numbers>
#include <string>

#include "grflab/polynomial.hpp"

namespace grflab {

/// Exact integral over the unit 3-sphere, stored as coeff * pi^2.
struct IntegralValue {
  Rational coeff;

  double value() const { return coeff.get_d() * std::numbers::pi * std::numbers::pi; }
  bool is_zero() const { return sgn(coeff) == 0; }
  std::string to_string() const { return grflab::to_string(coeff) + " * pi^2"; }

  IntegralValue& operator+=(const IntegralValue& o) {
    coeff += o.coeff;
    return *this;
  }
  friend IntegralValue operator+(IntegralValue a, const IntegralValue& b) { return a += b; }
  friend IntegralValue operator-(IntegralValue a, const IntegralValue& b) {
    a.coeff -= b.coeff;
    return a;
  }
  friend IntegralValue operator*(const Rational& s, IntegralValue a) {
    a.coeff *= s;
    return a;
  }
  friend bool operator==(const IntegralValue& a, const IntegralValue& b) { return a.coeff == b.coeff; }
  friend bool operator!=(const IntegralValue& a, const IntegralValue& b) { return a.coeff != b.coeff; }
};

/// int_{S^3} x^a dV / pi^2. Zero unless every exponent is even; otherwise
/// 2 prod Gamma((a_i+1)/2) / Gamma(|a|/2 + 2) with Gamma(k+1/2) = (2k)!/(4^k k!) sqrt(pi).
inline Rational sphere_moment(Monomial m) {
  Rational num = 2;
  unsigned half_total = 0;
  for (int i = 0; i < 4; ++i) {
    unsigned a = m.exp(i);
    if (a % 2 != 0) return 0;
    unsigned k = a / 2;
    half_total += k;
    mpz_class f2k, fk, four_k;
    mpz_fac_ui(f2k.get_mpz_t(), 2 * k);
    mpz_fac_ui(fk.get_mpz_t(), k);
    mpz_ui_pow_ui(four_k.get_mpz_t(), 4, k);
    num *= Rational(f2k, four_k * fk);
  }
  mpz_class den;
  mpz_fac_ui(den.get_mpz_t(), half_total + 1);
  Rational r = num / Rational(den);
  r.canonicalize();
  return r;
}

inline IntegralValue integrate_s3(const Polynomial& p) {
  IntegralValue v{0};
  for (const auto& [m, c] : p.terms()) v.coeff += c * sphere_moment(m);
  return v;
}

/// Mean value over the sphere, (int p) / (2 pi^2).
inline Rational sphere_mean(const Polynomial& p) { return integrate_s3(p).coeff / 2; }

}  // namespace grflab
