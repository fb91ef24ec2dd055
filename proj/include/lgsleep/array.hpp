#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "lgsleep/errors.hpp"

namespace lgsleep {

/// Dense row-major array of doubles with a runtime shape.
class Array {
 public:
  Array() = default;

  explicit Array(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), data_(count(shape_), 0.0) {}

  Array(std::vector<std::size_t> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != count(shape_)) throw ShapeError("data length does not match shape");
  }

  static Array zeros(std::vector<std::size_t> shape) { return Array(std::move(shape)); }

  static Array full(std::vector<std::size_t> shape, double v) {
    Array a(std::move(shape));
    std::fill(a.data_.begin(), a.data_.end(), v);
    return a;
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t ndim() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t dim(std::size_t i) const { return shape_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at2(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double at2(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }

  double& at3(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double at3(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  bool same_shape(const Array& o) const { return shape_ == o.shape_; }

  /// Reinterpret with a new shape of identical element count.
  void reshape(std::vector<std::size_t> shape) {
    if (count(shape) != data_.size()) throw ShapeError("reshape changes element count");
    shape_ = std::move(shape);
  }

  Array reshaped(std::vector<std::size_t> shape) const& {
    Array a = *this;
    a.reshape(std::move(shape));
    return a;
  }
  Array reshaped(std::vector<std::size_t> shape) && {
    this->reshape(std::move(shape));
    return std::move(*this);
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  static std::size_t count(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return shape.empty() ? 0 : n;
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

}  // namespace lgsleep
