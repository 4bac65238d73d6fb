#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "grflab/polynomial.hpp"

namespace grflab {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

struct Echelon {
  RationalMatrix rows;       // nonzero rows of the reduced row echelon form
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form; pivots are taken in column order, first nonzero row.
inline Echelon rref(RationalMatrix m, std::size_t cols) {
  Echelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    if (m[r][c] != 1) {
      Rational inv = 1 / m[r][c];
      for (std::size_t k = c; k < cols; ++k)
        if (sgn(m[r][k]) != 0) m[r][k] *= inv;
    }
    std::vector<std::size_t> nz;
    for (std::size_t k = c; k < cols; ++k)
      if (sgn(m[r][k]) != 0) nz.push_back(k);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (std::size_t k : nz) m[i][k] -= f * m[r][k];
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

inline std::size_t rank(const RationalMatrix& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

/// Basis of {x : m x = 0}, one vector per free column, with a unit entry there.
inline std::vector<RationalVector> nullspace(const RationalMatrix& m, std::size_t cols) {
  Echelon e = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of a x = b, or nothing when inconsistent.
inline std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b, std::size_t cols) {
  RationalMatrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    aug[i].resize(cols + 1);
    aug[i][cols] = b[i];
  }
  Echelon e = rref(std::move(aug), cols + 1);
  RationalVector x(cols, Rational(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == cols) return std::nullopt;
    x[e.pivots[i]] = e.rows[i][cols];
  }
  return x;
}

/// Coordinates of polynomials against a fixed monomial list.
class MonomialIndex {
 public:
  explicit MonomialIndex(std::vector<Monomial> monomials) : monomials_(std::move(monomials)) {
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_[monomials_[i].key()] = i;
  }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  /// Writes the coordinates of p into out[offset..]; throws if p leaves the span.
  void scatter(const Polynomial& p, RationalVector& out, std::size_t offset = 0) const {
    for (const auto& [m, c] : p.terms()) {
      auto it = index_.find(m.key());
      if (it == index_.end()) throw PreconditionFailed("polynomial outside the coordinate space: " + p.to_string());
      out[offset + it->second] = c;
    }
  }
  RationalVector coordinates(const Polynomial& p) const {
    RationalVector v(size(), Rational(0));
    scatter(p, v);
    return v;
  }
  Polynomial polynomial(const RationalVector& v, std::size_t offset = 0) const {
    std::vector<Polynomial::Term> t;
    for (std::size_t i = 0; i < size(); ++i)
      if (sgn(v[offset + i]) != 0) t.emplace_back(monomials_[i], v[offset + i]);
    return Polynomial::from_terms(std::move(t));
  }

 private:
  std::vector<Monomial> monomials_;
  std::map<std::uint32_t, std::size_t> index_;
};

}  // namespace grflab
