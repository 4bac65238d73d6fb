#pragma once

#include <cmath>

#include "grflab/jet.hpp"
#include "grflab/sphere.hpp"

namespace grflab {

inline double scaled(double s, const Rational& q) { return s * q.get_d(); }
inline Rational scaled(const Rational& s, const Rational& q) { return Rational(s * q); }
inline Polynomial scaled(const Polynomial& s, const Rational& q) { return s * q; }
inline JetScalar scaled(const JetScalar& s, const Rational& q) { return s * q; }

/// Per-type operations needed by the geometry engine. `derive` applies the i-th
/// left-invariant field of the sphere frame; constant scalar types have zero derivative.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double from_rational(const Rational& q) { return q.get_d(); }
  static bool is_zero(double s) { return s == 0.0; }
  static bool is_constant(double) { return true; }
  static double derive(double, int) { return 0.0; }
  static double inverse(double s) {
    if (s == 0.0 || !std::isfinite(s)) throw SingularMetric("zero determinant");
    return 1.0 / s;
  }
};

template <>
struct ScalarTraits<Rational> {
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& s) { return sgn(s) == 0; }
  static bool is_constant(const Rational&) { return true; }
  static Rational derive(const Rational&, int) { return 0; }
  static Rational inverse(const Rational& s) {
    if (sgn(s) == 0) throw SingularMetric("zero determinant");
    return 1 / s;
  }
};

template <>
struct ScalarTraits<Polynomial> {
  static Polynomial from_rational(const Rational& q) { return Polynomial(q); }
  static bool is_zero(const Polynomial& s) { return s.is_zero(); }
  static bool is_constant(const Polynomial& s) { return s.is_constant(); }
  static Polynomial derive(const Polynomial& s, int i) { return frame_derive(s, i); }
  static Polynomial inverse(const Polynomial& s) {
    if (s.is_zero()) throw SingularMetric("zero determinant");
    if (!s.is_constant()) throw SingularMetric("determinant is not a constant polynomial");
    return Polynomial(Rational(1 / s.constant_term()));
  }
};

template <>
struct ScalarTraits<JetScalar> {
  static JetScalar from_rational(const Rational& q) { return JetScalar(q); }
  static bool is_zero(const JetScalar& s) { return s.is_zero(); }
  static bool is_constant(const JetScalar& s) { return s.is_constant(); }
  static JetScalar derive(const JetScalar& s, int i) {
    return {frame_derive(s.c0, i), frame_derive(s.c1, i), frame_derive(s.c2, i)};
  }
  static JetScalar inverse(const JetScalar& s) {
    if (s.c0.is_zero()) throw SingularMetric("determinant vanishes at t = 0");
    return grflab::inverse(s);
  }
};

}  // namespace grflab
