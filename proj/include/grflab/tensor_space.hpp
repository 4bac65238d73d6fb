#pragma once

#include <vector>

#include "grflab/linalg.hpp"
#include "grflab/tensor.hpp"

namespace grflab {

/// Rank-r frame tensors on S^3 whose components are polynomials of degree <= d.
/// Coordinates are ordered component-major: flat component index, then monomial.
class TensorSpace {
 public:
  TensorSpace(unsigned degree, int rank, int dim = 3)
      : degree_(degree), rank_(rank), dim_(dim), index_(canonical_monomials(degree)) {
    components_ = 1;
    for (int i = 0; i < rank; ++i) components_ *= static_cast<std::size_t>(dim);
  }

  unsigned degree() const { return degree_; }
  int rank() const { return rank_; }
  std::size_t size() const { return components_ * index_.size(); }
  const MonomialIndex& index() const { return index_; }

  /// k-th basis element: a single monomial in a single component.
  Tensor<Polynomial> element(std::size_t k) const {
    Tensor<Polynomial> t(dim_, rank_);
    t.data()[k / index_.size()] = Polynomial::from_canonical_terms({{index_.monomials()[k % index_.size()], Rational(1)}});
    return t;
  }

  RationalVector coordinates(const Tensor<Polynomial>& t) const {
    if (t.rank() != rank_ || t.dim() != dim_) throw BadRank("tensor does not belong to this space");
    RationalVector v(size(), Rational(0));
    for (std::size_t c = 0; c < components_; ++c) index_.scatter(t.data()[c], v, c * index_.size());
    return v;
  }

  Tensor<Polynomial> tensor(const RationalVector& v) const {
    Tensor<Polynomial> t(dim_, rank_);
    for (std::size_t c = 0; c < components_; ++c) t.data()[c] = index_.polynomial(v, c * index_.size());
    return t;
  }

 private:
  unsigned degree_;
  int rank_;
  int dim_;
  std::size_t components_ = 1;
  MonomialIndex index_;
};

}  // namespace grflab
