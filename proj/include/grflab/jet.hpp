#pragma once

#include "grflab/polynomial.hpp"

namespace grflab {

/// Order-2 jet c0 + c1 t + (1/2) c2 t^2: c1, c2 are the first and second t-derivatives at 0.
struct JetScalar {
  Polynomial c0, c1, c2;

  JetScalar() = default;
  JetScalar(Polynomial a0, Polynomial a1 = {}, Polynomial a2 = {})  // NOLINT(google-explicit-constructor)
      : c0(std::move(a0)), c1(std::move(a1)), c2(std::move(a2)) {}
  JetScalar(const Rational& c) : c0(c) {}  // NOLINT(google-explicit-constructor)

  /// The jet of p0 + t p1.
  static JetScalar linear(Polynomial p0, Polynomial p1) { return {std::move(p0), std::move(p1), {}}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
  bool is_constant() const { return c0.is_constant() && c1.is_constant() && c2.is_constant(); }

  JetScalar operator-() const { return {-c0, -c1, -c2}; }
  JetScalar& operator+=(const JetScalar& o) {
    c0 += o.c0;
    c1 += o.c1;
    c2 += o.c2;
    return *this;
  }
  JetScalar& operator-=(const JetScalar& o) {
    c0 -= o.c0;
    c1 -= o.c1;
    c2 -= o.c2;
    return *this;
  }
  JetScalar& operator*=(const Rational& s) {
    c0 *= s;
    c1 *= s;
    c2 *= s;
    return *this;
  }
  friend JetScalar operator+(JetScalar a, const JetScalar& b) { return a += b; }
  friend JetScalar operator-(JetScalar a, const JetScalar& b) { return a -= b; }
  friend JetScalar operator*(JetScalar a, const Rational& s) { return a *= s; }
  friend JetScalar operator*(const Rational& s, JetScalar a) { return a *= s; }
  friend JetScalar operator*(const JetScalar& a, const JetScalar& b) {
    JetScalar r;
    r.c0 = a.c0 * b.c0;
    r.c1 = a.c0 * b.c1 + a.c1 * b.c0;
    r.c2 = a.c0 * b.c2 + a.c2 * b.c0 + Rational(2) * (a.c1 * b.c1);
    return r;
  }
  friend bool operator==(const JetScalar& a, const JetScalar& b) {
    return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2;
  }
  friend bool operator!=(const JetScalar& a, const JetScalar& b) { return !(a == b); }
};

/// Inverse for a constant nonzero leading term.
inline JetScalar inverse(const JetScalar& a) {
  if (a.c0.is_zero()) throw NonInvertibleJet("jet with zero leading term");
  if (!a.c0.is_constant()) throw NonInvertibleJet("jet with non-constant leading term");
  Rational inv = 1 / a.c0.constant_term();
  Rational inv2 = inv * inv;
  JetScalar r;
  r.c0 = Polynomial(inv);
  r.c1 = a.c1 * Rational(-inv2);
  r.c2 = a.c2 * Rational(-inv2) + (a.c1 * a.c1) * Rational(2 * inv2 * inv);
  return r;
}

}  // namespace grflab
