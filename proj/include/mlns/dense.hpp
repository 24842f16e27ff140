#ifndef MLNS_DENSE_HPP
#define MLNS_DENSE_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "mlns/counters.hpp"
#include "mlns/scalar.hpp"
#include "mlns/workspace.hpp"

namespace mlns {

/// Fixed-length dense vector over the scalar field. Allocations are
/// registered with the active WorkspaceMeter, if any.
template <Scalar S>
class DenseVector {
 public:
  using value_type = S;

  DenseVector() = default;
  explicit DenseVector(std::size_t n, S fill = S{}) : data_(n, fill) {
    registered_ = data_.size();
    meter_add_scalars(registered_);
  }
  DenseVector(std::initializer_list<S> init) : data_(init) {
    registered_ = data_.size();
    meter_add_scalars(registered_);
  }
  DenseVector(const DenseVector& other) : data_(other.data_) {
    registered_ = data_.size();
    meter_add_scalars(registered_);
  }
  DenseVector(DenseVector&& other) noexcept
      : data_(std::move(other.data_)), registered_(other.registered_) {
    other.registered_ = 0;
  }
  DenseVector& operator=(const DenseVector& other) {
    if (this != &other) {
      meter_release_scalars(registered_);
      data_ = other.data_;
      registered_ = data_.size();
      meter_add_scalars(registered_);
    }
    return *this;
  }
  DenseVector& operator=(DenseVector&& other) noexcept {
    if (this != &other) {
      meter_release_scalars(registered_);
      data_ = std::move(other.data_);
      registered_ = other.registered_;
      other.registered_ = 0;
    }
    return *this;
  }
  ~DenseVector() { meter_release_scalars(registered_); }

  std::size_t size() const { return data_.size(); }
  S* data() { return data_.data(); }
  const S* data() const { return data_.data(); }
  S& operator[](std::size_t i) { return data_[i]; }
  const S& operator[](std::size_t i) const { return data_[i]; }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  operator std::span<S>() { return {data_.data(), data_.size()}; }
  operator std::span<const S>() const { return {data_.data(), data_.size()}; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<S> data_;
  std::size_t registered_ = 0;
};

/// Column block of equal-length vectors, stored contiguously column-major.
template <Scalar S>
class DenseBlock {
 public:
  DenseBlock() = default;
  DenseBlock(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, S{}) {
    registered_ = data_.size();
    meter_add_scalars(registered_);
  }
  DenseBlock(const DenseBlock& other)
      : rows_(other.rows_), cols_(other.cols_), data_(other.data_) {
    registered_ = data_.size();
    meter_add_scalars(registered_);
  }
  DenseBlock(DenseBlock&& other) noexcept
      : rows_(other.rows_),
        cols_(other.cols_),
        data_(std::move(other.data_)),
        registered_(other.registered_) {
    other.registered_ = 0;
  }
  DenseBlock& operator=(DenseBlock other) noexcept {
    std::swap(rows_, other.rows_);
    std::swap(cols_, other.cols_);
    std::swap(data_, other.data_);
    std::swap(registered_, other.registered_);
    return *this;
  }
  ~DenseBlock() { meter_release_scalars(registered_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<S> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const S> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
  std::size_t registered_ = 0;
};

namespace detail {
template <class V>
concept VectorLike = requires(const V& v) {
  { v.data() };
  { v.size() } -> std::convertible_to<std::size_t>;
};
template <class V>
using element_t = std::remove_cvref_t<decltype(*std::declval<V&>().data())>;

inline void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("vector length mismatch");
}
}  // namespace detail

/// Hermitian inner product sum_i conj(u_i) v_i, conjugate-linear in the
/// first argument.
template <detail::VectorLike VU, detail::VectorLike VV>
auto dot_hermitian(const VU& u, const VV& v, OpCounters* ctr = nullptr) {
  using S = detail::element_t<VU>;
  detail::require_same_size(u.size(), v.size());
  if (ctr) ++ctr->dots;
  S acc{};
  const auto* up = u.data();
  const auto* vp = v.data();
  for (std::size_t i = 0; i < u.size(); ++i) acc += conj(up[i]) * vp[i];
  return acc;
}

/// Euclidean norm. Not counted as a dot product.
template <detail::VectorLike VV>
double norm2(const VV& v) {
  double acc = 0.0;
  const auto* vp = v.data();
  for (std::size_t i = 0; i < v.size(); ++i) acc += abs2(vp[i]);
  return std::sqrt(acc);
}

/// y += a*x
template <Scalar S, detail::VectorLike VX, detail::VectorLike VY>
void axpy(S a, const VX& x, VY&& y, OpCounters* ctr = nullptr) {
  detail::require_same_size(x.size(), y.size());
  if (ctr) ++ctr->saxpys;
  const auto* xp = x.data();
  auto* yp = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) yp[i] += a * xp[i];
}

/// out = x + a*y
template <Scalar S, detail::VectorLike VO, detail::VectorLike VX,
          detail::VectorLike VY>
void set_axpy(VO&& out, const VX& x, S a, const VY& y,
              OpCounters* ctr = nullptr) {
  detail::require_same_size(x.size(), y.size());
  detail::require_same_size(out.size(), x.size());
  if (ctr) ++ctr->saxpys;
  auto* op = out.data();
  const auto* xp = x.data();
  const auto* yp = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) op[i] = xp[i] + a * yp[i];
}

/// y *= a
template <Scalar S, detail::VectorLike VY>
void scale_in_place(S a, VY&& y, OpCounters* ctr = nullptr) {
  if (ctr) ++ctr->saxpys;
  auto* yp = y.data();
  for (std::size_t i = 0; i < y.size(); ++i) yp[i] *= a;
}

/// g = zw - g/omega (the stabilizing direction combination)
template <Scalar S, detail::VectorLike VG, detail::VectorLike VZ>
void stab_combine(VG&& g, const VZ& zw, S omega, OpCounters* ctr = nullptr) {
  detail::require_same_size(g.size(), zw.size());
  if (ctr) ++ctr->saxpys;
  auto* gp = g.data();
  const auto* zp = zw.data();
  for (std::size_t i = 0; i < zw.size(); ++i) gp[i] = zp[i] - gp[i] / omega;
}

/// y = b - y
template <detail::VectorLike VB, detail::VectorLike VY>
void sub_from(const VB& b, VY&& y, OpCounters* ctr = nullptr) {
  detail::require_same_size(b.size(), y.size());
  if (ctr) ++ctr->saxpys;
  const auto* bp = b.data();
  auto* yp = y.data();
  for (std::size_t i = 0; i < b.size(); ++i) yp[i] = bp[i] - yp[i];
}

template <detail::VectorLike VS, detail::VectorLike VD>
void copy_into(const VS& src, VD&& dst) {
  detail::require_same_size(src.size(), dst.size());
  const auto* sp = src.data();
  auto* dp = dst.data();
  for (std::size_t i = 0; i < src.size(); ++i) dp[i] = sp[i];
}

template <detail::VectorLike VV>
bool all_zero(const VV& v) {
  using S = detail::element_t<VV>;
  const auto* vp = v.data();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (vp[i] != S{}) return false;
  return true;
}

}  // namespace mlns

#endif  // MLNS_DENSE_HPP
