#pragma once

#include <random>

#include "grflab/sphere.hpp"

namespace grflab {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, long span = 5, long max_den = 3) {
  std::uniform_int_distribution<long> num(-span, span);
  std::uniform_int_distribution<long> den(1, max_den);
  return make_rational(num(rng), den(rng));
}

/// Random canonical polynomial of degree <= d with about `terms` nonzero terms.
inline Polynomial random_polynomial(Rng& rng, unsigned d, std::size_t terms = 4) {
  auto monos = canonical_monomials(d);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  std::vector<Polynomial::Term> raw;
  for (std::size_t i = 0; i < terms; ++i) raw.emplace_back(monos[pick(rng)], random_rational(rng));
  return Polynomial::from_terms(std::move(raw));
}

}  // namespace grflab
