#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grflab/rational.hpp"

namespace grflab {

/// Exponent quadruple (a1,a2,a3,a4) packed one byte per variable, a1 most
/// significant, so integer order is lexicographic order and multiplication is
/// addition of keys.
class Monomial {
 public:
  constexpr Monomial() = default;
  constexpr explicit Monomial(std::uint32_t key) : key_(key) {}
  constexpr Monomial(unsigned a1, unsigned a2, unsigned a3, unsigned a4)
      : key_((a1 << 24) | (a2 << 16) | (a3 << 8) | a4) {}

  constexpr unsigned exp(int var) const { return (key_ >> (8 * (3 - var))) & 0xFFu; }
  constexpr std::array<unsigned, 4> exps() const { return {exp(0), exp(1), exp(2), exp(3)}; }
  constexpr unsigned degree() const { return exp(0) + exp(1) + exp(2) + exp(3); }
  constexpr std::uint32_t key() const { return key_; }

  constexpr Monomial operator*(Monomial o) const { return Monomial(key_ + o.key_); }
  constexpr Monomial with_exp(int var, unsigned e) const {
    const unsigned shift = 8 * (3 - var);
    return Monomial((key_ & ~(0xFFu << shift)) | (e << shift));
  }
  static constexpr Monomial variable(int var) { return Monomial(1u << (8 * (3 - var))); }

  friend constexpr bool operator==(Monomial a, Monomial b) { return a.key_ == b.key_; }
  friend constexpr bool operator!=(Monomial a, Monomial b) { return a.key_ != b.key_; }
  friend constexpr bool operator<(Monomial a, Monomial b) { return a.key_ < b.key_; }

 private:
  std::uint32_t key_ = 0;
};

/// Rational polynomial in the ambient coordinates x1..x4 restricted to the unit
/// sphere. Terms are kept sorted by monomial, with nonzero coefficients and no
/// x4 power above one.
class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (sgn(c) != 0) terms_.emplace_back(Monomial(), c);
  }
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}

  static Polynomial variable(int var, const Rational& c = 1) {
    if (var < 0 || var > 3) throw BadIndex("ambient variable index out of range");
    return from_terms({{Monomial::variable(var), c}});
  }
  static Polynomial monomial(std::array<unsigned, 4> a, const Rational& c = 1) {
    return from_terms({{Monomial(a[0], a[1], a[2], a[3]), c}});
  }

  /// Builds the canonical form of an arbitrary term list.
  static Polynomial from_terms(std::vector<Term> raw) {
    Polynomial p;
    p.terms_ = std::move(raw);
    p.canonicalize();
    return p;
  }

  /// Wraps terms already sorted, merged and reduced.
  static Polynomial from_canonical_terms(std::vector<Term> t) {
    Polynomial p;
    p.terms_ = std::move(t);
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first.key() == 0);
  }
  Rational constant_term() const {
    if (!terms_.empty() && terms_[0].first.key() == 0) return terms_[0].second;
    return Rational(0);
  }
  Rational coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial k) { return t.first < k; });
    return it != terms_.end() && it->first == m ? it->second : Rational(0);
  }
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
    return d;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = merge(*this, o, false); }
  Polynomial& operator-=(const Polynomial& o) { return *this = merge(*this, o, true); }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  Polynomial& operator*=(const Rational& c) {
    if (sgn(c) == 0) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.second *= c;
    }
    return *this;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b * a.terms_[0].second;
    if (b.is_constant()) return a * b.terms_[0].second;
    std::vector<Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) raw.emplace_back(ma * mb, ca * cb);
    return from_terms(std::move(raw));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Value at an ambient point; callers pass points on the sphere.
  double evaluate(const std::array<double, 4>& x) const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) {
      double v = c.get_d();
      for (int i = 0; i < 4; ++i)
        for (unsigned e = 0; e < m.exp(i); ++e) v *= x[i];
      s += v;
    }
    return s;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      Rational mag = abs(c);
      if (first) {
        if (sgn(c) < 0) out += "-";
      } else {
        out += sgn(c) < 0 ? " - " : " + ";
      }
      first = false;
      std::string mono;
      for (int i = 0; i < 4; ++i) {
        unsigned e = m.exp(i);
        if (e == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i + 1);
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        out += grflab::to_string(mag);
      } else if (mag == 1) {
        out += mono;
      } else {
        out += grflab::to_string(mag) + "*" + mono;
      }
    }
    return out;
  }

 private:
  std::vector<Term> terms_;

  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    Polynomial r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
        r.terms_.push_back(*ia++);
      } else if (ia == a.terms_.end() || ib->first < ia->first) {
        r.terms_.emplace_back(ib->first, subtract ? Rational(-ib->second) : ib->second);
        ++ib;
      } else {
        Rational c = subtract ? Rational(ia->second - ib->second) : Rational(ia->second + ib->second);
        if (sgn(c) != 0) r.terms_.emplace_back(ia->first, std::move(c));
        ++ia;
        ++ib;
      }
    }
    return r;
  }

  // x4^2 -> 1 - x1^2 - x2^2 - x3^2 until no x4 power exceeds one; then sort and merge.
  void canonicalize() {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      while (terms_[i].first.exp(3) >= 2) {
        Monomial base = terms_[i].first.with_exp(3, terms_[i].first.exp(3) - 2);
        Rational c = terms_[i].second;
        terms_[i].first = base;
        for (int v = 0; v < 3; ++v)
          terms_.emplace_back(base * Monomial::variable(v) * Monomial::variable(v), -c);
      }
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first) {
        merged.back().second += t.second;
      } else {
        if (!merged.empty() && sgn(merged.back().second) == 0) merged.pop_back();
        merged.push_back(std::move(t));
      }
    }
    if (!merged.empty() && sgn(merged.back().second) == 0) merged.pop_back();
    terms_ = std::move(merged);
  }
};

inline std::string to_string(const Polynomial& p) { return p.to_string(); }

inline Polynomial pow(const Polynomial& p, unsigned e) {
  Polynomial r(1L);
  for (unsigned i = 0; i < e; ++i) r *= p;
  return r;
}

/// Parses expressions such as "x1x2+x3x4", "x1^2 - x2^2", "3/2*x1*x4", "-0.5x3".
inline Polynomial parse_polynomial(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty polynomial");
  std::size_t pos = 0;
  auto number = [&]() {
    std::size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) ++pos;
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    return parse_rational(s.substr(start, pos - start));
  };
  std::vector<Polynomial::Term> raw;
  while (pos < s.size()) {
    Rational coeff = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') coeff = -1;
      ++pos;
    } else if (!raw.empty()) {
      throw ParseError("expected '+' or '-' at position " + std::to_string(pos));
    }
    std::array<unsigned, 4> e{0, 0, 0, 0};
    bool any = false;
    while (pos < s.size() && s[pos] != '+' && s[pos] != '-') {
      if (s[pos] == '*') {
        ++pos;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        coeff *= number();
      } else if (s[pos] == 'x') {
        ++pos;
        if (pos >= s.size() || s[pos] < '1' || s[pos] > '4') throw ParseError("expected variable x1..x4");
        int v = s[pos++] - '1';
        unsigned power = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          std::size_t start = pos;
          while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
          if (start == pos) throw ParseError("missing exponent");
          power = static_cast<unsigned>(std::stoul(s.substr(start, pos - start)));
        }
        e[v] += power;
      } else {
        throw ParseError(std::string("unexpected character '") + s[pos] + "'");
      }
      any = true;
    }
    if (!any) throw ParseError("empty term");
    for (unsigned x : e)
      if (x > 60) throw ParseError("exponent too large");
    raw.emplace_back(Monomial(e[0], e[1], e[2], e[3]), coeff);
  }
  return Polynomial::from_terms(std::move(raw));
}

}  // namespace grflab
