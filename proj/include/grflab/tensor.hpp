#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "grflab/scalar.hpp"

namespace grflab {

enum class Symmetry { none, symmetric, antisymmetric };

inline const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::antisymmetric: return "antisymmetric";
    default: return "none";
  }
}

/// Dense covariant tensor over frame indices 0..dim-1. Antisymmetric applies to
/// every pair of slots, so a rank-3 antisymmetric tensor is a 3-form.
template <class S>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank, Symmetry sym = Symmetry::none)
      : dim_(dim), rank_(rank), sym_(sym), data_(count(dim, rank), S{}) {
    if (rank < 0 || rank > 4) throw BadRank("tensor rank must be between 0 and 4");
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  Symmetry symmetry() const { return sym_; }
  void set_symmetry(Symmetry s) { sym_ = s; }
  std::size_t size() const { return data_.size(); }

  std::vector<S>& data() { return data_; }
  const std::vector<S>& data() const { return data_; }

  template <class... I>
  S& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const S& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }

  /// Multi-index of a flat position, slot 0 first.
  std::vector<int> index_of(std::size_t flat) const {
    std::vector<int> idx(rank_);
    for (int s = rank_ - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(flat % dim_);
      flat /= dim_;
    }
    return idx;
  }
  std::size_t offset(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank_) throw BadRank("index count does not match tensor rank");
    std::size_t off = 0;
    for (int i : idx) {
      if (i < 0 || i >= dim_) throw BadIndex("tensor index out of range");
      off = off * dim_ + i;
    }
    return off;
  }

  Tensor& operator+=(const Tensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    if (sym_ != o.sym_) sym_ = Symmetry::none;
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    if (sym_ != o.sym_) sym_ = Symmetry::none;
    return *this;
  }
  Tensor& scale(const Rational& c) {
    for (auto& x : data_) x = scaled(x, c);
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator-(Tensor a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.dim_ == b.dim_ && a.rank_ == b.rank_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }

  template <class F>
  auto map(F&& f) const {
    using R = std::decay_t<decltype(f(data_[0]))>;
    Tensor<R> out(dim_, rank_, sym_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = f(data_[i]);
    return out;
  }

 private:
  int dim_ = 0;
  int rank_ = 0;
  Symmetry sym_ = Symmetry::none;
  std::vector<S> data_;

  static std::size_t count(int dim, int rank) {
    std::size_t n = 1;
    for (int i = 0; i < rank; ++i) n *= static_cast<std::size_t>(dim);
    return n;
  }
  void require_same_shape(const Tensor& o) const {
    if (dim_ != o.dim_ || rank_ != o.rank_) throw BadRank("tensor shape mismatch");
  }
};

/// Symmetric and antisymmetric parts of a rank-2 tensor.
template <class S>
Tensor<S> sym_part(const Tensor<S>& t) {
  if (t.rank() != 2) throw BadRank("sym_part needs rank 2");
  Tensor<S> out(t.dim(), 2, Symmetry::symmetric);
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out(i, j) = scaled(S(t(i, j) + t(j, i)), Rational(1, 2));
  return out;
}
template <class S>
Tensor<S> antisym_part(const Tensor<S>& t) {
  if (t.rank() != 2) throw BadRank("antisym_part needs rank 2");
  Tensor<S> out(t.dim(), 2, Symmetry::antisymmetric);
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out(i, j) = scaled(S(t(i, j) - t(j, i)), Rational(1, 2));
  return out;
}
template <class S>
Tensor<S> transpose(const Tensor<S>& t) {
  if (t.rank() != 2) throw BadRank("transpose needs rank 2");
  Tensor<S> out(t.dim(), 2, t.symmetry());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out(i, j) = t(j, i);
  return out;
}

/// Exact check of the declared symmetry.
template <class S>
bool symmetry_holds(const Tensor<S>& t) {
  if (t.symmetry() == Symmetry::none || t.rank() < 2) return true;
  const bool anti = t.symmetry() == Symmetry::antisymmetric;
  for (std::size_t f = 0; f < t.size(); ++f) {
    auto idx = t.index_of(f);
    for (int a = 0; a + 1 < t.rank(); ++a) {
      auto sw = idx;
      std::swap(sw[a], sw[a + 1]);
      std::size_t g = 0;
      for (int i : sw) g = g * t.dim() + i;
      if (anti ? !(t.data()[f] == -t.data()[g]) : !(t.data()[f] == t.data()[g])) return false;
    }
  }
  return true;
}

}  // namespace grflab
