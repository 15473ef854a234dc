#include "rmm/kernels.hpp"

#include <algorithm>
#include <cstring>

#include "rmm/parallel.hpp"

namespace rmm {
namespace {

// Column tile sized so a K x TN panel of B stays resident in L2 across the
// whole M sweep. Must be a multiple of 16 so the inner loops vectorize cleanly.
int pick_tile_n(int k) {
    int tn = 147456 / std::max(k, 1);
    tn = std::min(tn, 512);
    tn = std::max(tn, 64);
    return (tn / 16) * 16;
}

constexpr int kMaxTileN = 512;

}  // namespace

void gemm_nn(const float* a, const float* b, float* c, int m, int k, int n, bool accumulate) {
    const int tile_n = pick_tile_n(k);
    const std::int64_t tiles = (n + tile_n - 1) / tile_n;
    parallel_for(tiles, [&](std::int64_t t) {
        const int n0 = static_cast<int>(t) * tile_n;
        const int tn = std::min(tile_n, n - n0);
        float acc0[kMaxTileN], acc1[kMaxTileN], acc2[kMaxTileN], acc3[kMaxTileN];
        int i = 0;
        for (; i + 4 <= m; i += 4) {
            std::memset(acc0, 0, sizeof(float) * tn);
            std::memset(acc1, 0, sizeof(float) * tn);
            std::memset(acc2, 0, sizeof(float) * tn);
            std::memset(acc3, 0, sizeof(float) * tn);
            const float* a0 = a + static_cast<std::int64_t>(i) * k;
            const float* a1 = a0 + k;
            const float* a2 = a1 + k;
            const float* a3 = a2 + k;
            for (int kk = 0; kk < k; ++kk) {
                const float* brow = b + static_cast<std::int64_t>(kk) * n + n0;
                const float v0 = a0[kk], v1 = a1[kk], v2 = a2[kk], v3 = a3[kk];
                for (int j = 0; j < tn; ++j) {
                    acc0[j] += v0 * brow[j];
                    acc1[j] += v1 * brow[j];
                    acc2[j] += v2 * brow[j];
                    acc3[j] += v3 * brow[j];
                }
            }
            float* c0 = c + static_cast<std::int64_t>(i) * n + n0;
            float* c1 = c0 + n;
            float* c2 = c1 + n;
            float* c3 = c2 + n;
            if (accumulate) {
                for (int j = 0; j < tn; ++j) c0[j] += acc0[j];
                for (int j = 0; j < tn; ++j) c1[j] += acc1[j];
                for (int j = 0; j < tn; ++j) c2[j] += acc2[j];
                for (int j = 0; j < tn; ++j) c3[j] += acc3[j];
            } else {
                std::memcpy(c0, acc0, sizeof(float) * tn);
                std::memcpy(c1, acc1, sizeof(float) * tn);
                std::memcpy(c2, acc2, sizeof(float) * tn);
                std::memcpy(c3, acc3, sizeof(float) * tn);
            }
        }
        for (; i < m; ++i) {
            std::memset(acc0, 0, sizeof(float) * tn);
            const float* arow = a + static_cast<std::int64_t>(i) * k;
            for (int kk = 0; kk < k; ++kk) {
                const float* brow = b + static_cast<std::int64_t>(kk) * n + n0;
                const float v = arow[kk];
                for (int j = 0; j < tn; ++j) acc0[j] += v * brow[j];
            }
            float* crow = c + static_cast<std::int64_t>(i) * n + n0;
            if (accumulate) {
                for (int j = 0; j < tn; ++j) crow[j] += acc0[j];
            } else {
                std::memcpy(crow, acc0, sizeof(float) * tn);
            }
        }
    });
}

namespace {

constexpr int kLanes = 16;

// One 4x4 register block of A*B^T. Lane accumulators keep the reduction order
// fixed in the source, so vectorization cannot change the result.
void abt_block(const float* a, const float* b, float* c, int n, int cols,
                              int i, int j, int bi, int bj, bool accumulate) {
    float acc[4][4][kLanes] = {};
    const float* arow[4];
    const float* brow[4];
    for (int x = 0; x < bi; ++x) arow[x] = a + static_cast<std::int64_t>(i + x) * n;
    for (int y = 0; y < bj; ++y) brow[y] = b + static_cast<std::int64_t>(j + y) * n;
    int nn = 0;
    if (bi == 4 && bj == 4) {
        for (; nn + kLanes <= n; nn += kLanes) {
            for (int x = 0; x < 4; ++x) {
                for (int y = 0; y < 4; ++y) {
                    const float* ar = arow[x] + nn;
                    const float* br = brow[y] + nn;
                    float* lane = acc[x][y];
                    for (int l = 0; l < kLanes; ++l) lane[l] += ar[l] * br[l];
                }
            }
        }
    }
    for (; nn < n; ++nn) {
        for (int x = 0; x < bi; ++x) {
            const float av = arow[x][nn];
            for (int y = 0; y < bj; ++y) acc[x][y][nn % kLanes] += av * brow[y][nn];
        }
    }
    for (int x = 0; x < bi; ++x) {
        for (int y = 0; y < bj; ++y) {
            float total = 0.0f;
            for (int l = 0; l < kLanes; ++l) total += acc[x][y][l];
            float* out = c + static_cast<std::int64_t>(i + x) * cols + (j + y);
            if (accumulate) {
                *out += total;
            } else {
                *out = total;
            }
        }
    }
}

}  // namespace

void gemm_abt(const float* a, const float* b, float* c, int m, int k, int n, bool accumulate) {
    const std::int64_t row_blocks = (m + 3) / 4;
    parallel_for(row_blocks, [&](std::int64_t rb) {
        const int i = static_cast<int>(rb) * 4;
        const int bi = std::min(4, m - i);
        for (int j = 0; j < k; j += 4) {
            const int bj = std::min(4, k - j);
            abt_block(a, b, c, n, k, i, j, bi, bj, accumulate);
        }
    });
}

void gemm_atb(const float* a, const float* b, float* c, int n, int k1, int k2, bool accumulate) {
    if (!accumulate) {
        std::memset(c, 0, sizeof(float) * static_cast<std::size_t>(k1) * k2);
    }
    for (int nn = 0; nn < n; ++nn) {
        const float* arow = a + static_cast<std::int64_t>(nn) * k1;
        const float* brow = b + static_cast<std::int64_t>(nn) * k2;
        for (int i = 0; i < k1; ++i) {
            const float av = arow[i];
            float* crow = c + static_cast<std::int64_t>(i) * k2;
            for (int j = 0; j < k2; ++j) crow[j] += av * brow[j];
        }
    }
}

void im2col(const float* x, int c, int h, int w, int kh, int kw, int stride, int pad,
                        float* cols, std::int64_t col_stride, std::int64_t col_offset) {
    const int oh = (h + 2 * pad - kh) / stride + 1;
    const int ow = (w + 2 * pad - kw) / stride + 1;
    for (int ch = 0; ch < c; ++ch) {
        const float* plane = x + static_cast<std::int64_t>(ch) * h * w;
        for (int ky = 0; ky < kh; ++ky) {
            for (int kx = 0; kx < kw; ++kx) {
                const int row = (ch * kh + ky) * kw + kx;
                float* out = cols + row * col_stride + col_offset;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * stride - pad + ky;
                    float* out_row = out + static_cast<std::int64_t>(oy) * ow;
                    if (iy < 0 || iy >= h) {
                        std::memset(out_row, 0, sizeof(float) * ow);
                        continue;
                    }
                    const float* in_row = plane + static_cast<std::int64_t>(iy) * w;
                    int ox = 0;
                    int ix = ox * stride - pad + kx;
                    for (; ox < ow && ix < 0; ++ox, ix += stride) out_row[ox] = 0.0f;
                    if (stride == 1) {
                        const int run = std::min(ow - ox, w - ix);
                        if (run > 0) {
                            std::memcpy(out_row + ox, in_row + ix, sizeof(float) * run);
                            ox += run;
                            ix += run;
                        }
                    } else {
                        for (; ox < ow && ix < w; ++ox, ix += stride) out_row[ox] = in_row[ix];
                    }
                    for (; ox < ow; ++ox) out_row[ox] = 0.0f;
                }
            }
        }
    }
}

void col2im(const float* cols, int c, int h, int w, int kh, int kw, int stride, int pad,
                        float* dx, std::int64_t col_stride, std::int64_t col_offset) {
    const int oh = (h + 2 * pad - kh) / stride + 1;
    const int ow = (w + 2 * pad - kw) / stride + 1;
    for (int ch = 0; ch < c; ++ch) {
        float* plane = dx + static_cast<std::int64_t>(ch) * h * w;
        for (int iy = 0; iy < h; ++iy) {
            for (int ix = 0; ix < w; ++ix) {
                float total = 0.0f;
                for (int ky = 0; ky < kh; ++ky) {
                    const int ty = iy + pad - ky;
                    if (ty < 0 || ty % stride != 0) continue;
                    const int oy = ty / stride;
                    if (oy >= oh) continue;
                    for (int kx = 0; kx < kw; ++kx) {
                        const int tx = ix + pad - kx;
                        if (tx < 0 || tx % stride != 0) continue;
                        const int ox = tx / stride;
                        if (ox >= ow) continue;
                        const int row = (ch * kh + ky) * kw + kx;
                        total += cols[row * col_stride + col_offset + oy * static_cast<std::int64_t>(ow) + ox];
                    }
                }
                plane[static_cast<std::int64_t>(iy) * w + ix] += total;
            }
        }
    }
}

}  // namespace rmm
