// Direct entry points of each kernel backend, used by the dispatcher and by
// the equivalence tests. Calling an avx2/avx512 function on a CPU without
// that ISA is undefined; check kern::backend_supported first.
#pragma once

#include "sunet/kernels.hpp"

namespace sunet::kern {

#define SUNET_BACKEND_DECLS(T) \
  void conv2d_forward(const ConvDims&, const T*, const T*, const T*, T*); \
  void conv2d_grad_weights(const ConvDims&, const T*, const T*, T*, T*); \
  void deconv2_forward(const Deconv2Dims&, const T*, const T*, const T*, T*); \
  void deconv2_grad_input(const Deconv2Dims&, const T*, const T*, T*); \
  void deconv2_grad_weights(const Deconv2Dims&, const T*, const T*, T*, T*); \
  void maxpool2_forward(const PoolDims&, const T*, T*, std::int32_t*); \
  void maxpool2_backward(const PoolDims&, const T*, const std::int32_t*, T*); \
  void relu_forward(std::int64_t, const T*, T*); \
  void relu_backward(std::int64_t, const T*, const T*, T*); \
  void channel_moments(const ChanDims&, const T*, T*, T*); \
  void channel_affine(const ChanDims&, const T*, const T*, const T*, T*); \
  void channel_affine2(const ChanDims&, const T*, const T*, const T*, \
                       const T*, const T*, T*); \
  void channel_dots(const ChanDims&, const T*, const T*, const T*, T*, T*); \
  void sgd_update(std::int64_t, T, T, T, const T*, T*, T*); \
  void axpy(std::int64_t, T, const T*, T*);

namespace ref {
template <typename T>
void conv2d_forward(const ConvDims&, const T*, const T*, const T*, T*);
template <typename T>
void conv2d_grad_weights(const ConvDims&, const T*, const T*, T*, T*);
template <typename T>
void deconv2_forward(const Deconv2Dims&, const T*, const T*, const T*, T*);
template <typename T>
void deconv2_grad_input(const Deconv2Dims&, const T*, const T*, T*);
template <typename T>
void deconv2_grad_weights(const Deconv2Dims&, const T*, const T*, T*, T*);
template <typename T>
void maxpool2_forward(const PoolDims&, const T*, T*, std::int32_t*);
template <typename T>
void maxpool2_backward(const PoolDims&, const T*, const std::int32_t*, T*);
template <typename T>
void relu_forward(std::int64_t, const T*, T*);
template <typename T>
void relu_backward(std::int64_t, const T*, const T*, T*);
template <typename T>
void channel_moments(const ChanDims&, const T*, T*, T*);
template <typename T>
void channel_affine(const ChanDims&, const T*, const T*, const T*, T*);
template <typename T>
void channel_affine2(const ChanDims&, const T*, const T*, const T*, const T*,
                     const T*, T*);
template <typename T>
void channel_dots(const ChanDims&, const T*, const T*, const T*, T*, T*);
template <typename T>
void sgd_update(std::int64_t, T, T, T, const T*, T*, T*);
template <typename T>
void axpy(std::int64_t, T, const T*, T*);
}  // namespace ref

namespace avx2 {
SUNET_BACKEND_DECLS(float)
}

namespace avx512 {
SUNET_BACKEND_DECLS(float)
}

#undef SUNET_BACKEND_DECLS

}  // namespace sunet::kern
