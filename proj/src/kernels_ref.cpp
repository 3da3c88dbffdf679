// Portable reference kernels. These define the numerical contract: the SIMD
// variants replay the same per-lane operations (fused multiply-adds in the
// same order), so every backend produces bit-identical results.

#include <cmath>
#include <cstring>
#include <vector>

#include "sunet/kernels.hpp"
#include "sunet/parallel.hpp"

namespace sunet::kern::ref {

template <typename T>
void conv2d_forward(const ConvDims& d, const T* in, const T* w, const T* bias,
                    T* out) {
  const int oh = d.out_h(), ow = d.out_w();
  const int s = d.stride;
  parallel_for(static_cast<std::int64_t>(d.n) * oh, [&](std::int64_t lo,
                                                        std::int64_t hi) {
    std::vector<T> acc(static_cast<std::size_t>(d.c_out));
    for (std::int64_t row = lo; row < hi; ++row) {
      const int n = static_cast<int>(row / oh);
      const int y = static_cast<int>(row % oh);
      T* orow = out + (static_cast<std::int64_t>(n) * oh + y) * ow * d.c_out;
      for (int x = 0; x < ow; ++x) {
        for (int co = 0; co < d.c_out; ++co) acc[co] = bias ? bias[co] : T(0);
        for (int ky = 0; ky < d.kh; ++ky) {
          const T* irow = in + ((static_cast<std::int64_t>(n) * d.in_h +
                                 (y * s + ky)) * d.in_w + x * s) * d.c_in;
          for (int kx = 0; kx < d.kw; ++kx) {
            const T* ip = irow + static_cast<std::int64_t>(kx) * d.c_in;
            const T* wp = w + (static_cast<std::int64_t>(ky) * d.kw + kx) *
                                  d.c_in * d.c_out;
            for (int ci = 0; ci < d.c_in; ++ci) {
              const T v = ip[ci];
              const T* wr = wp + static_cast<std::int64_t>(ci) * d.c_out;
              for (int co = 0; co < d.c_out; ++co)
                acc[co] = std::fma(v, wr[co], acc[co]);
            }
          }
        }
        T* op = orow + static_cast<std::int64_t>(x) * d.c_out;
        for (int co = 0; co < d.c_out; ++co) op[co] = acc[co];
      }
    }
  });
}

template <typename T>
void conv2d_grad_weights(const ConvDims& d, const T* in, const T* gout, T* gw,
                         T* gb) {
  const int oh = d.out_h(), ow = d.out_w();
  const int s = d.stride;
  // Each thread owns a slice of input channels; per (ky,kx,ci,co) element the
  // accumulation order is ascending pixel order regardless of the split.
  parallel_for(d.c_in, [&](std::int64_t clo, std::int64_t chi) {
    for (int ci = static_cast<int>(clo); ci < static_cast<int>(chi); ++ci) {
      for (int ky = 0; ky < d.kh; ++ky) {
        for (int kx = 0; kx < d.kw; ++kx) {
          T* gwr = gw + ((static_cast<std::int64_t>(ky) * d.kw + kx) * d.c_in +
                         ci) * d.c_out;
          for (int co = 0; co < d.c_out; ++co) gwr[co] = T(0);
          for (int n = 0; n < d.n; ++n) {
            for (int y = 0; y < oh; ++y) {
              const T* irow = in + ((static_cast<std::int64_t>(n) * d.in_h +
                                     (y * s + ky)) * d.in_w) * d.c_in;
              const T* grow = gout + (static_cast<std::int64_t>(n) * oh + y) *
                                         ow * d.c_out;
              for (int x = 0; x < ow; ++x) {
                const T v = irow[static_cast<std::int64_t>(x * s + kx) * d.c_in + ci];
                const T* gp = grow + static_cast<std::int64_t>(x) * d.c_out;
                for (int co = 0; co < d.c_out; ++co)
                  gwr[co] = std::fma(v, gp[co], gwr[co]);
              }
            }
          }
        }
      }
    }
  }, /*grain=*/1);
  if (gb) {
    for (int co = 0; co < d.c_out; ++co) gb[co] = T(0);
    const std::int64_t pixels = static_cast<std::int64_t>(d.n) * oh * ow;
    for (std::int64_t p = 0; p < pixels; ++p) {
      const T* gp = gout + p * d.c_out;
      for (int co = 0; co < d.c_out; ++co) gb[co] += gp[co];
    }
  }
}

template <typename T>
void deconv2_forward(const Deconv2Dims& d, const T* in, const T* w,
                     const T* bias, T* out) {
  const int oh = d.in_h * 2, ow = d.in_w * 2;
  parallel_for(static_cast<std::int64_t>(d.n) * oh, [&](std::int64_t lo,
                                                        std::int64_t hi) {
    std::vector<T> acc(static_cast<std::size_t>(d.c_out));
    for (std::int64_t row = lo; row < hi; ++row) {
      const int n = static_cast<int>(row / oh);
      const int oy = static_cast<int>(row % oh);
      const int ky = oy & 1, iy = oy >> 1;
      for (int ox = 0; ox < ow; ++ox) {
        const int kx = ox & 1, ix = ox >> 1;
        const T* ip = in + ((static_cast<std::int64_t>(n) * d.in_h + iy) *
                                d.in_w + ix) * d.c_in;
        const T* wp = w + (static_cast<std::int64_t>(ky) * 2 + kx) * d.c_in *
                              d.c_out;
        for (int co = 0; co < d.c_out; ++co) acc[co] = bias ? bias[co] : T(0);
        for (int ci = 0; ci < d.c_in; ++ci) {
          const T v = ip[ci];
          const T* wr = wp + static_cast<std::int64_t>(ci) * d.c_out;
          for (int co = 0; co < d.c_out; ++co)
            acc[co] = std::fma(v, wr[co], acc[co]);
        }
        T* op = out + ((static_cast<std::int64_t>(n) * oh + oy) * ow + ox) *
                          d.c_out;
        for (int co = 0; co < d.c_out; ++co) op[co] = acc[co];
      }
    }
  });
}

template <typename T>
void deconv2_grad_input(const Deconv2Dims& d, const T* gout, const T* wt,
                        T* gin) {
  const int oh = d.in_h * 2, ow = d.in_w * 2;
  parallel_for(static_cast<std::int64_t>(d.n) * d.in_h, [&](std::int64_t lo,
                                                            std::int64_t hi) {
    std::vector<T> acc(static_cast<std::size_t>(d.c_in));
    for (std::int64_t row = lo; row < hi; ++row) {
      const int n = static_cast<int>(row / d.in_h);
      const int y = static_cast<int>(row % d.in_h);
      for (int x = 0; x < d.in_w; ++x) {
        for (int ci = 0; ci < d.c_in; ++ci) acc[ci] = T(0);
        for (int ky = 0; ky < 2; ++ky) {
          for (int kx = 0; kx < 2; ++kx) {
            const T* gp = gout + ((static_cast<std::int64_t>(n) * oh +
                                   (2 * y + ky)) * ow + (2 * x + kx)) * d.c_out;
            const T* wkr = wt + (static_cast<std::int64_t>(ky) * 2 + kx) *
                                    d.c_out * d.c_in;
            for (int co = 0; co < d.c_out; ++co) {
              const T g = gp[co];
              const T* wr = wkr + static_cast<std::int64_t>(co) * d.c_in;
              for (int ci = 0; ci < d.c_in; ++ci)
                acc[ci] = std::fma(g, wr[ci], acc[ci]);
            }
          }
        }
        T* op = gin + ((static_cast<std::int64_t>(n) * d.in_h + y) * d.in_w +
                       x) * d.c_in;
        for (int ci = 0; ci < d.c_in; ++ci) op[ci] = acc[ci];
      }
    }
  });
}

template <typename T>
void deconv2_grad_weights(const Deconv2Dims& d, const T* in, const T* gout,
                          T* gw, T* gb) {
  const int oh = d.in_h * 2, ow = d.in_w * 2;
  parallel_for(d.c_in, [&](std::int64_t clo, std::int64_t chi) {
    for (int ci = static_cast<int>(clo); ci < static_cast<int>(chi); ++ci) {
      for (int ky = 0; ky < 2; ++ky) {
        for (int kx = 0; kx < 2; ++kx) {
          T* gwr = gw + ((static_cast<std::int64_t>(ky) * 2 + kx) * d.c_in +
                         ci) * d.c_out;
          for (int co = 0; co < d.c_out; ++co) gwr[co] = T(0);
          for (int n = 0; n < d.n; ++n) {
            for (int y = 0; y < d.in_h; ++y) {
              const T* irow = in + (static_cast<std::int64_t>(n) * d.in_h + y) *
                                       d.in_w * d.c_in;
              const T* grow = gout + ((static_cast<std::int64_t>(n) * oh +
                                       (2 * y + ky)) * ow + kx) * d.c_out;
              for (int x = 0; x < d.in_w; ++x) {
                const T v = irow[static_cast<std::int64_t>(x) * d.c_in + ci];
                const T* gp = grow + static_cast<std::int64_t>(2 * x) * d.c_out;
                for (int co = 0; co < d.c_out; ++co)
                  gwr[co] = std::fma(v, gp[co], gwr[co]);
              }
            }
          }
        }
      }
    }
  }, /*grain=*/1);
  if (gb) {
    for (int co = 0; co < d.c_out; ++co) gb[co] = T(0);
    const std::int64_t pixels = static_cast<std::int64_t>(d.n) * oh * ow;
    for (std::int64_t p = 0; p < pixels; ++p) {
      const T* gp = gout + p * d.c_out;
      for (int co = 0; co < d.c_out; ++co) gb[co] += gp[co];
    }
  }
}

template <typename T>
void maxpool2_forward(const PoolDims& d, const T* in, T* out,
                      std::int32_t* idx) {
  const int oh = d.in_h / 2, ow = d.in_w / 2;
  parallel_for(static_cast<std::int64_t>(d.n) * oh, [&](std::int64_t lo,
                                                        std::int64_t hi) {
    for (std::int64_t row = lo; row < hi; ++row) {
      const int n = static_cast<int>(row / oh);
      const int oy = static_cast<int>(row % oh);
      for (int ox = 0; ox < ow; ++ox) {
        const std::int64_t o =
            ((static_cast<std::int64_t>(n) * oh + oy) * ow + ox) * d.c;
        for (int c = 0; c < d.c; ++c) {
          T best = T(0);
          std::int64_t besti = 0;
          bool first = true;
          for (int ky = 0; ky < 2; ++ky) {
            for (int kx = 0; kx < 2; ++kx) {
              const std::int64_t fi =
                  ((static_cast<std::int64_t>(n) * d.in_h + (2 * oy + ky)) *
                       d.in_w + (2 * ox + kx)) * d.c + c;
              const T v = in[fi];
              if (first || v > best) {
                best = v;
                besti = fi;
                first = false;
              }
            }
          }
          out[o + c] = best;
          idx[o + c] = static_cast<std::int32_t>(besti);
        }
      }
    }
  });
}

template <typename T>
void maxpool2_backward(const PoolDims& d, const T* gout,
                       const std::int32_t* idx, T* gin) {
  const int oh = d.in_h / 2, ow = d.in_w / 2;
  parallel_for(static_cast<std::int64_t>(d.n) * d.in_h, [&](std::int64_t lo,
                                                            std::int64_t hi) {
    for (std::int64_t row = lo; row < hi; ++row) {
      const int n = static_cast<int>(row / d.in_h);
      const int iy = static_cast<int>(row % d.in_h);
      const int oy = iy / 2;
      for (int ix = 0; ix < d.in_w; ++ix) {
        const int ox = ix / 2;
        const std::int64_t o =
            ((static_cast<std::int64_t>(n) * oh + oy) * ow + ox) * d.c;
        const std::int64_t i =
            ((static_cast<std::int64_t>(n) * d.in_h + iy) * d.in_w + ix) * d.c;
        for (int c = 0; c < d.c; ++c)
          gin[i + c] = (idx[o + c] == static_cast<std::int32_t>(i + c))
                           ? gout[o + c]
                           : T(0);
      }
    }
  });
}

template <typename T>
void relu_forward(std::int64_t count, const T* x, T* y) {
  parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
  }, /*grain=*/4096);
}

template <typename T>
void relu_backward(std::int64_t count, const T* x, const T* g, T* gx) {
  parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) gx[i] = x[i] > T(0) ? g[i] : T(0);
  }, /*grain=*/4096);
}

template <typename T>
void channel_moments(const ChanDims& d, const T* x, T* mean, T* var) {
  parallel_for(d.c, [&](std::int64_t clo, std::int64_t chi) {
    const int lo = static_cast<int>(clo), hi = static_cast<int>(chi);
    std::vector<T> sum(hi - lo, T(0)), sumsq(hi - lo, T(0));
    for (std::int64_t r = 0; r < d.rows; ++r) {
      const T* xr = x + r * d.c;
      for (int c = lo; c < hi; ++c) {
        const T v = xr[c];
        sum[c - lo] += v;
        sumsq[c - lo] = std::fma(v, v, sumsq[c - lo]);
      }
    }
    const T inv = T(1) / static_cast<T>(d.rows);
    for (int c = lo; c < hi; ++c) {
      const T m = sum[c - lo] * inv;
      const T q = sumsq[c - lo] * inv;
      const T v = q - m * m;
      mean[c] = m;
      var[c] = v > T(0) ? v : T(0);
    }
  }, /*grain=*/4);
}

template <typename T>
void channel_affine(const ChanDims& d, const T* x, const T* a, const T* b,
                    T* y) {
  parallel_for(d.rows, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      const T* xr = x + r * d.c;
      T* yr = y + r * d.c;
      for (int c = 0; c < d.c; ++c) yr[c] = std::fma(a[c], xr[c], b[c]);
    }
  }, /*grain=*/16);
}

template <typename T>
void channel_affine2(const ChanDims& d, const T* p, const T* q, const T* a,
                     const T* b, const T* c0, T* y) {
  parallel_for(d.rows, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      const T* pr = p + r * d.c;
      const T* qr = q + r * d.c;
      T* yr = y + r * d.c;
      for (int c = 0; c < d.c; ++c)
        yr[c] = std::fma(a[c], pr[c], std::fma(b[c], qr[c], c0[c]));
    }
  }, /*grain=*/16);
}

template <typename T>
void channel_dots(const ChanDims& d, const T* g, const T* x, const T* mu,
                  T* sum_g, T* sum_gx) {
  parallel_for(d.c, [&](std::int64_t clo, std::int64_t chi) {
    const int lo = static_cast<int>(clo), hi = static_cast<int>(chi);
    std::vector<T> sg(hi - lo, T(0)), sgx(hi - lo, T(0));
    for (std::int64_t r = 0; r < d.rows; ++r) {
      const T* gr = g + r * d.c;
      const T* xr = x + r * d.c;
      for (int c = lo; c < hi; ++c) {
        sg[c - lo] += gr[c];
        sgx[c - lo] = std::fma(gr[c], xr[c] - mu[c], sgx[c - lo]);
      }
    }
    for (int c = lo; c < hi; ++c) {
      sum_g[c] = sg[c - lo];
      sum_gx[c] = sgx[c - lo];
    }
  }, /*grain=*/4);
}

template <typename T>
void sgd_update(std::int64_t count, T lr, T momentum, T wd, const T* g, T* v,
                T* w) {
  parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const T geff = std::fma(wd, w[i], g[i]);
      v[i] = std::fma(momentum, v[i], geff);
      w[i] = std::fma(-lr, v[i], w[i]);
    }
  }, /*grain=*/4096);
}

template <typename T>
void axpy(std::int64_t count, T a, const T* x, T* y) {
  parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) y[i] = std::fma(a, x[i], y[i]);
  }, /*grain=*/4096);
}

#define SUNET_INSTANTIATE(T) \
  template void conv2d_forward<T>(const ConvDims&, const T*, const T*, \
                                  const T*, T*); \
  template void conv2d_grad_weights<T>(const ConvDims&, const T*, const T*, \
                                       T*, T*); \
  template void deconv2_forward<T>(const Deconv2Dims&, const T*, const T*, \
                                   const T*, T*); \
  template void deconv2_grad_input<T>(const Deconv2Dims&, const T*, const T*, \
                                      T*); \
  template void deconv2_grad_weights<T>(const Deconv2Dims&, const T*, \
                                        const T*, T*, T*); \
  template void maxpool2_forward<T>(const PoolDims&, const T*, T*, \
                                    std::int32_t*); \
  template void maxpool2_backward<T>(const PoolDims&, const T*, \
                                     const std::int32_t*, T*); \
  template void relu_forward<T>(std::int64_t, const T*, T*); \
  template void relu_backward<T>(std::int64_t, const T*, const T*, T*); \
  template void channel_moments<T>(const ChanDims&, const T*, T*, T*); \
  template void channel_affine<T>(const ChanDims&, const T*, const T*, \
                                  const T*, T*); \
  template void channel_affine2<T>(const ChanDims&, const T*, const T*, \
                                   const T*, const T*, const T*, T*); \
  template void channel_dots<T>(const ChanDims&, const T*, const T*, \
                                const T*, T*, T*); \
  template void sgd_update<T>(std::int64_t, T, T, T, const T*, T*, T*); \
  template void axpy<T>(std::int64_t, T, const T*, T*);

SUNET_INSTANTIATE(float)
SUNET_INSTANTIATE(double)
#undef SUNET_INSTANTIATE

}  // namespace sunet::kern::ref
