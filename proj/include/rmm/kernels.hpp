#pragma once

#include <cstdint>

namespace rmm {

// Dense float kernels behind the tensor ops. All reductions run in a fixed
// order per output element (sequential k, or explicit lane accumulators with a
// fixed final combine), so results do not depend on the worker count.

// C[M x N] = A[M x K] * B[K x N]; accumulate adds into C instead of overwriting.
void gemm_nn(const float* a, const float* b, float* c, int m, int k, int n, bool accumulate);

// C[M x K] = A[M x N] * B[K x N]^T, i.e. C[i,j] = sum_n A[i,n] * B[j,n].
void gemm_abt(const float* a, const float* b, float* c, int m, int k, int n, bool accumulate);

// C[K1 x K2] = A[N x K1]^T * B[N x K2]. Meant for small K1*K2 (head weights).
void gemm_atb(const float* a, const float* b, float* c, int n, int k1, int k2, bool accumulate);

// Unpacks one CHW image into patch columns for a kh x kw convolution.
// cols row r = (c*kh + ky)*kw + kx, column l = oy*ow + ox, written at
// cols[r * col_stride + col_offset + l]. Out-of-range taps produce zeros.
void im2col(const float* x, int c, int h, int w, int kh, int kw, int stride, int pad,
                        float* cols, std::int64_t col_stride, std::int64_t col_offset);

// Adjoint of im2col for one image: gathers column gradients back into dx
// (accumulating), visiting the contributing taps of each pixel in fixed order.
void col2im(const float* cols, int c, int h, int w, int kh, int kw, int stride, int pad,
                        float* dx, std::int64_t col_stride, std::int64_t col_offset);

}  // namespace rmm
