// Dense rank-4 tensor in (n, h, w, c) row-major order. Carries images,
// feature maps, labels and gradients. float is the production scalar type;
// double instantiations back the finite-difference test mode.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sunet/common.hpp"

namespace sunet {

struct Dims4 {
  int n = 0, h = 0, w = 0, c = 0;

  std::int64_t count() const {
    return static_cast<std::int64_t>(n) * h * w * c;
  }
  bool operator==(const Dims4&) const = default;
};

template <typename T>
class Tensor4 {
public:
  Tensor4() = default;

  explicit Tensor4(Dims4 d) : dims_(d) {
    require(d.n >= 0 && d.h >= 0 && d.w >= 0 && d.c >= 0,
            "tensor dims must be non-negative");
    data_.assign(static_cast<std::size_t>(d.count()), T(0));
  }

  Tensor4(int n, int h, int w, int c) : Tensor4(Dims4{n, h, w, c}) {}

  const Dims4& dims() const { return dims_; }
  int n() const { return dims_.n; }
  int h() const { return dims_.h; }
  int w() const { return dims_.w; }
  int c() const { return dims_.c; }
  std::int64_t count() const { return dims_.count(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  std::int64_t index(int n, int y, int x, int c) const {
    return ((static_cast<std::int64_t>(n) * dims_.h + y) * dims_.w + x) *
               dims_.c + c;
  }

  T& at(int n, int y, int x, int c) { return data_[index(n, y, x, c)]; }
  const T& at(int n, int y, int x, int c) const {
    return data_[index(n, y, x, c)];
  }

  T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  const T& operator[](std::int64_t i) const {
    return data_[static_cast<std::size_t>(i)];
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  void zero() { fill(T(0)); }

  // Reshape without reallocation; element count must match.
  void reshape(Dims4 d) {
    require(d.count() == dims_.count(), "reshape changes element count");
    dims_ = d;
  }

  template <typename U>
  Tensor4<U> cast() const {
    Tensor4<U> out(dims_);
    for (std::int64_t i = 0; i < count(); ++i)
      out[i] = static_cast<U>(data_[static_cast<std::size_t>(i)]);
    return out;
  }

  bool same_shape(const Tensor4& o) const { return dims_ == o.dims_; }

private:
  Dims4 dims_;
  std::vector<T> data_;
};

using Tensor4f = Tensor4<float>;
using Tensor4d = Tensor4<double>;

}  // namespace sunet
