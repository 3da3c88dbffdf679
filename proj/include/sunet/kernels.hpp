// Arithmetic kernels behind the layer implementations. Every kernel exists
// as a portable scalar reference and, for float, as AVX2 and AVX-512
// variants selected at runtime. All variants accumulate each output lane in
// the same canonical order with fused multiply-adds, so their results are
// bit-identical; the equivalence tests assert exactly that.
//
// Convolutions here are always "valid": callers zero-pad beforehand.
// Weight layout is (kh, kw, c_in, c_out) row-major, which keeps c_out
// contiguous for the broadcast-FMA inner loops.
#pragma once

#include <cstddef>
#include <cstdint>

namespace sunet::kern {

enum class Backend { scalar, avx2, avx512 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);
// Highest supported backend, overridable via SUNET_BACKEND=scalar|avx2|avx512.
Backend active_backend();
// Throws sunet::Error if unsupported on this CPU.
void set_backend(Backend b);

struct ConvDims {
  int n = 1;            // batch
  int in_h = 0, in_w = 0, c_in = 0;   // pre-padded input
  int kh = 0, kw = 0, c_out = 0;
  int stride = 1;
  int out_h() const { return (in_h - kh) / stride + 1; }
  int out_w() const { return (in_w - kw) / stride + 1; }
};

struct Deconv2Dims {
  int n = 1;
  int in_h = 0, in_w = 0, c_in = 0, c_out = 0;  // output is (2h, 2w, c_out)
};

struct PoolDims {
  int n = 1;
  int in_h = 0, in_w = 0, c = 0;  // in_h, in_w even
};

// Per-channel reductions view a tensor as (rows, c) with rows = n*h*w.
struct ChanDims {
  std::int64_t rows = 0;
  int c = 0;
};

// out[n,y,x,co] = bias[co] + sum_{ky,kx,ci} in[n,y*s+ky,x*s+kx,ci] * w[ky,kx,ci,co]
// bias may be null (used when this kernel computes a gradient).
template <typename T>
void conv2d_forward(const ConvDims& d, const T* in, const T* w, const T* bias,
                    T* out);

// gw[ky,kx,ci,co] = sum_{n,y,x} in[n,y+ky,x+kx,ci] * gout[n,y,x,co]; stride 1.
// gb[co] = sum gout (skipped when null). gw/gb are overwritten.
template <typename T>
void conv2d_grad_weights(const ConvDims& d, const T* in, const T* gout, T* gw,
                         T* gb);

// Transposed 2x2 stride-2 convolution: each output pixel receives exactly one
// kernel tap, out[n,oy,ox,co] = bias[co] + sum_ci in[n,oy/2,ox/2,ci] *
// w[oy&1,ox&1,ci,co].
template <typename T>
void deconv2_forward(const Deconv2Dims& d, const T* in, const T* w,
                     const T* bias, T* out);

// gin[n,y,x,ci] = sum_{ky,kx,co} gout[n,2y+ky,2x+kx,co] * wt[ky,kx,co,ci]
// where wt is the (kh,kw,co,ci) transpose of the weights.
template <typename T>
void deconv2_grad_input(const Deconv2Dims& d, const T* gout, const T* wt,
                        T* gin);

template <typename T>
void deconv2_grad_weights(const Deconv2Dims& d, const T* in, const T* gout,
                          T* gw, T* gb);

// idx records the flat index into the input of each selected maximum; ties
// break to the lowest flat index.
template <typename T>
void maxpool2_forward(const PoolDims& d, const T* in, T* out, std::int32_t* idx);

template <typename T>
void maxpool2_backward(const PoolDims& d, const T* gout, const std::int32_t* idx,
                       T* gin);

template <typename T>
void relu_forward(std::int64_t count, const T* x, T* y);

// gx = (x > 0) ? g : 0. The kink at x == 0 routes zero gradient.
template <typename T>
void relu_backward(std::int64_t count, const T* x, const T* g, T* gx);

// Per-channel mean and biased variance over rows.
template <typename T>
void channel_moments(const ChanDims& d, const T* x, T* mean, T* var);

// y = a[c] * x + b[c]
template <typename T>
void channel_affine(const ChanDims& d, const T* x, const T* a, const T* b,
                    T* y);

// y = a[c] * p + b[c] * q + c0[c]
template <typename T>
void channel_affine2(const ChanDims& d, const T* p, const T* q, const T* a,
                     const T* b, const T* c0, T* y);

// sum_g[c] = sum_rows g; sum_gx[c] = sum_rows g * (x - mu[c])
template <typename T>
void channel_dots(const ChanDims& d, const T* g, const T* x, const T* mu,
                  T* sum_g, T* sum_gx);

// v = momentum * v + (g + wd * w); w -= lr * v
template <typename T>
void sgd_update(std::int64_t count, T lr, T momentum, T wd, const T* g, T* v,
                T* w);

// y += a * x
template <typename T>
void axpy(std::int64_t count, T a, const T* x, T* y);

}  // namespace sunet::kern
