#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "grflab/sphere.hpp"
#include "grflab/tensor.hpp"

namespace grflab {

/// Frame data of a Lie group: [e_i, e_j] = c^k_{ij} e_k and an invariant metric g0.
struct LieGroupModel {
  int n = 0;
  std::vector<Rational> c;   // c[(k*n + i)*n + j] = c^k_{ij}
  std::vector<Rational> g0;  // row-major n x n
  int torsion_sign = 1;      // H = torsion_sign * g([.,.], .)
  bool sphere_frame = false; // polynomial coefficients realized by the S^3 frame

  LieGroupModel() = default;
  explicit LieGroupModel(int dim) : n(dim), c(dim * dim * dim, Rational(0)), g0(dim * dim, Rational(0)) {
    for (int i = 0; i < n; ++i) g0[i * n + i] = 1;
  }

  Rational& C(int k, int i, int j) { return c[(k * n + i) * n + j]; }
  const Rational& C(int k, int i, int j) const { return c[(k * n + i) * n + j]; }
  Rational& G(int i, int j) { return g0[i * n + j]; }
  const Rational& G(int i, int j) const { return g0[i * n + j]; }
};

/// Ambient components of the invariant frame fields on S^3, as linear polynomials.
struct FrameTable {
  std::array<std::array<Polynomial, 4>, 3> left;
  std::array<std::array<Polynomial, 4>, 3> right;
};

struct Violation {
  std::string identity;
  std::string detail;
};

inline std::string index_string(std::initializer_list<int> idx) {
  std::string s;
  for (int i : idx) s += (s.empty() ? "(" : ",") + std::to_string(i);
  return s + ")";
}

/// Antisymmetry, Jacobi, symmetry and positivity of g0, and ad-invariance.
inline std::vector<Violation> validate_structure(const LieGroupModel& m) {
  std::vector<Violation> out;
  const int n = m.n;
  if (static_cast<int>(m.c.size()) != n * n * n || static_cast<int>(m.g0.size()) != n * n) {
    out.push_back({"shape", "structure constants or metric have the wrong size"});
    return out;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m.C(k, i, j) != -m.C(k, j, i))
          out.push_back({"antisymmetry", "c^" + std::to_string(k) + "_" + index_string({i, j})});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Rational s = 0;
          for (int p = 0; p < n; ++p)
            s += m.C(p, i, j) * m.C(l, p, k) + m.C(p, j, k) * m.C(l, p, i) + m.C(p, k, i) * m.C(l, p, j);
          if (sgn(s) != 0) out.push_back({"jacobi", "component " + std::to_string(l) + " of " + index_string({i, j, k})});
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m.G(i, j) != m.G(j, i)) out.push_back({"metric symmetry", index_string({i, j})});
  // Sylvester: leading principal minors positive
  for (int d = 1; d <= n; ++d) {
    std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a[i][j] = m.G(i, j);
    Rational det = 1;
    for (int c = 0; c < d; ++c) {
      int p = c;
      while (p < d && sgn(a[p][c]) == 0) ++p;
      if (p == d) {
        det = 0;
        break;
      }
      if (p != c) {
        std::swap(a[p], a[c]);
        det = -det;
      }
      det *= a[c][c];
      for (int r = c + 1; r < d; ++r) {
        Rational f = a[r][c] / a[c][c];
        for (int k = c; k < d; ++k) a[r][k] -= f * a[c][k];
      }
    }
    if (sgn(det) <= 0) {
      out.push_back({"metric positivity", "leading minor of order " + std::to_string(d)});
      break;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Rational s = 0;
        for (int p = 0; p < n; ++p) s += m.C(p, i, j) * m.G(p, k) + m.G(j, p) * m.C(p, i, k);
        if (sgn(s) != 0) out.push_back({"ad-invariance", index_string({i, j, k})});
      }
  return out;
}

inline bool is_bi_invariant(const LieGroupModel& m) {
  for (const auto& v : validate_structure(m))
    if (v.identity == "ad-invariance" || v.identity == "metric symmetry") return false;
  return true;
}

/// H_{ijk} = sign * g([e_i, e_j], e_k).
inline Tensor<Rational> torsion_form(const LieGroupModel& m) {
  if (!is_bi_invariant(m)) throw NotBiInvariant("metric is not ad-invariant");
  Tensor<Rational> h(m.n, 3, Symmetry::antisymmetric);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      for (int k = 0; k < m.n; ++k) {
        Rational s = 0;
        for (int p = 0; p < m.n; ++p) s += m.C(p, i, j) * m.G(p, k);
        h(i, j, k) = m.torsion_sign * s;
      }
  return h;
}

/// Unit S^3 = SU(2): [E1, E2] = 2 E3 cyclically, g0 = identity, H_{123} = 2 * torsion_sign.
inline LieGroupModel su2_lie_model(int torsion_sign = 1) {
  LieGroupModel m(3);
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    m.C(k, i, j) = 2;
    m.C(k, j, i) = -2;
  }
  m.torsion_sign = torsion_sign;
  m.sphere_frame = true;
  return m;
}

inline FrameTable su2_frame_table() {
  FrameTable f;
  for (int i = 0; i < 3; ++i) {
    f.left[i] = frame_field(i, Chirality::left);
    f.right[i] = frame_field(i, Chirality::right);
  }
  return f;
}

struct Su2Model {
  LieGroupModel model;
  FrameTable frame;
};

inline Su2Model su2_model(int torsion_sign = 1) { return {su2_lie_model(torsion_sign), su2_frame_table()}; }

/// Lie bracket of ambient polynomial vector fields, [V, W]^a = V^b d_b W^a - W^b d_b V^a.
inline std::array<Polynomial, 4> vector_field_bracket(const std::array<Polynomial, 4>& v,
                                                      const std::array<Polynomial, 4>& w) {
  auto partial = [](const Polynomial& p, int b) {
    std::vector<Polynomial::Term> raw;
    for (const auto& [m, c] : p.terms())
      if (m.exp(b) > 0) raw.emplace_back(m.with_exp(b, m.exp(b) - 1), c * static_cast<long>(m.exp(b)));
    return Polynomial::from_terms(std::move(raw));
  };
  std::array<Polynomial, 4> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[a] += v[b] * partial(w[a], b) - w[b] * partial(v[a], b);
  return out;
}

/// Tangency, left-frame orthonormality, bracket closure on c, and left/right commutation.
inline std::vector<Violation> frame_check(const LieGroupModel& m, const FrameTable& f) {
  std::vector<Violation> out;
  const std::array<Polynomial, 4> x{Polynomial::variable(0), Polynomial::variable(1), Polynomial::variable(2),
                                    Polynomial::variable(3)};
  auto dot = [](const std::array<Polynomial, 4>& a, const std::array<Polynomial, 4>& b) {
    Polynomial s;
    for (int i = 0; i < 4; ++i) s += a[i] * b[i];
    return s;
  };
  for (int i = 0; i < 3; ++i) {
    if (!dot(f.left[i], x).is_zero()) out.push_back({"tangency", "left field " + std::to_string(i)});
    if (!dot(f.right[i], x).is_zero()) out.push_back({"tangency", "right field " + std::to_string(i)});
    for (int j = 0; j < 3; ++j) {
      if (dot(f.left[i], f.left[j]) != Polynomial(m.G(i, j)))
        out.push_back({"orthonormality", index_string({i, j})});
      auto br = vector_field_bracket(f.left[i], f.left[j]);
      for (int a = 0; a < 4; ++a) {
        Polynomial expect;
        for (int k = 0; k < 3; ++k) expect += f.left[k][a] * m.C(k, i, j);
        if (br[a] != expect) {
          out.push_back({"bracket", index_string({i, j})});
          break;
        }
      }
      auto mixed = vector_field_bracket(f.left[i], f.right[j]);
      for (int a = 0; a < 4; ++a)
        if (!mixed[a].is_zero()) {
          out.push_back({"left/right commutation", index_string({i, j})});
          break;
        }
    }
  }
  return out;
}

}  // namespace grflab
