#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "grflab/integrate.hpp"
#include "grflab/polynomial.hpp"

namespace grflab {

enum class Chirality { left, right };

/// Component a of an invariant frame field is sign * x_var.
struct FrameEntry {
  int var;
  int sign;
};

using FrameFieldTable = std::array<std::array<FrameEntry, 4>, 3>;

// q = x1 + x2 i + x3 j + x4 k; left fields q*u, right fields u*q for u = i, j, k.
inline constexpr FrameFieldTable kLeftFrame{{
    {{{1, -1}, {0, 1}, {3, 1}, {2, -1}}},
    {{{2, -1}, {3, -1}, {0, 1}, {1, 1}}},
    {{{3, -1}, {2, 1}, {1, -1}, {0, 1}}},
}};
inline constexpr FrameFieldTable kRightFrame{{
    {{{1, -1}, {0, 1}, {3, -1}, {2, 1}}},
    {{{2, -1}, {3, 1}, {0, 1}, {1, -1}}},
    {{{3, -1}, {2, -1}, {1, 1}, {0, 1}}},
}};

inline const FrameFieldTable& frame_fields(Chirality c) {
  return c == Chirality::left ? kLeftFrame : kRightFrame;
}

/// Ambient components of an invariant frame field as linear polynomials.
inline std::array<Polynomial, 4> frame_field(int i, Chirality c = Chirality::left) {
  if (i < 0 || i > 2) throw BadIndex("frame index must be 0, 1 or 2");
  std::array<Polynomial, 4> out;
  for (int a = 0; a < 4; ++a) {
    const auto& e = frame_fields(c)[i][a];
    out[a] = Polynomial::variable(e.var, e.sign);
  }
  return out;
}

/// Directional derivative along the i-th invariant frame field.
inline Polynomial frame_derive(const Polynomial& p, int i, Chirality c = Chirality::left) {
  if (i < 0 || i > 2) throw BadIndex("frame index must be 0, 1 or 2");
  const auto& field = frame_fields(c)[i];
  std::vector<Polynomial::Term> raw;
  raw.reserve(p.size() * 4);
  for (const auto& [m, coeff] : p.terms()) {
    for (int a = 0; a < 4; ++a) {
      unsigned e = m.exp(a);
      if (e == 0) continue;
      Monomial dm = m.with_exp(a, e - 1) * Monomial::variable(field[a].var);
      raw.emplace_back(dm, coeff * static_cast<long>(e) * field[a].sign);
    }
  }
  return Polynomial::from_terms(std::move(raw));
}

/// Sum_i E_i E_i p over the left frame (non-positive spectrum).
inline Polynomial laplacian_scalar(const Polynomial& p) {
  Polynomial out;
  for (int i = 0; i < 3; ++i) out += frame_derive(frame_derive(p, i), i);
  return out;
}

/// Flat Laplacian of R^4 applied termwise; closed on terms with x4 power <= 1.
inline Polynomial ambient_laplacian(const Polynomial& p) {
  std::vector<Polynomial::Term> raw;
  for (const auto& [m, c] : p.terms())
    for (int a = 0; a < 4; ++a) {
      unsigned e = m.exp(a);
      if (e >= 2) raw.emplace_back(m.with_exp(a, e - 2), c * static_cast<long>(e * (e - 1)));
    }
  return Polynomial::from_terms(std::move(raw));
}

/// Canonical monomials (x4 power <= 1) of exact degree k, (k+1)^2 of them.
inline std::vector<Monomial> canonical_monomials_of_degree(unsigned k) {
  std::vector<Monomial> out;
  for (unsigned a4 = 0; a4 <= std::min(1u, k); ++a4)
    for (unsigned a1 = k - a4 + 1; a1-- > 0;)
      for (unsigned a2 = k - a4 - a1 + 1; a2-- > 0;) out.emplace_back(a1, a2, k - a4 - a1 - a2, a4);
  return out;
}

/// Canonical monomials of degree <= d ordered by degree, dimension sum_{k<=d} (k+1)^2.
inline std::vector<Monomial> canonical_monomials(unsigned d) {
  std::vector<Monomial> out;
  for (unsigned k = 0; k <= d; ++k) {
    auto layer = canonical_monomials_of_degree(k);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

inline std::size_t canonical_dimension(unsigned d) {
  std::size_t n = 0;
  for (unsigned k = 0; k <= d; ++k) n += static_cast<std::size_t>(k + 1) * (k + 1);
  return n;
}

/// Degree-k spherical harmonics: harmonic projections of the canonical monomials,
/// h = sum_j (-1)^j (k-j)! / (4^j j! k!) Delta^j x^a with |x|^2 = 1.
inline std::vector<Polynomial> harmonic_basis(unsigned k) {
  std::vector<Polynomial> out;
  mpz_class kfact;
  mpz_fac_ui(kfact.get_mpz_t(), k);
  for (Monomial m : canonical_monomials_of_degree(k)) {
    Polynomial term = Polynomial::from_terms({{m, Rational(1)}});
    Polynomial h = term;
    for (unsigned j = 1; 2 * j <= k; ++j) {
      term = ambient_laplacian(term);
      mpz_class num, jf, fourj;
      mpz_fac_ui(num.get_mpz_t(), k - j);
      mpz_fac_ui(jf.get_mpz_t(), j);
      mpz_ui_pow_ui(fourj.get_mpz_t(), 4, j);
      Rational c(num, fourj * jf * kfact);
      c.canonicalize();
      if (j % 2 == 1) c = -c;
      h += term * c;
    }
    out.push_back(std::move(h));
  }
  return out;
}

/// The nine named quadratic eigenfunctions used as the w-basis for obstructions.
inline std::vector<std::pair<std::string, Polynomial>> quadratic_eigenfunctions() {
  static const char* names[] = {"x1x2", "x1x3", "x1x4", "x2x3", "x2x4",
                                "x3x4", "x1^2-x2^2", "x1^2-x3^2", "x1^2-x4^2"};
  std::vector<std::pair<std::string, Polynomial>> out;
  for (const char* n : names) out.emplace_back(n, parse_polynomial(n));
  return out;
}

}  // namespace grflab
