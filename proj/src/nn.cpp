#include "rmm/nn.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <utility>

#include "rmm/kernels.hpp"
#include "rmm/parallel.hpp"

namespace rmm {
namespace {

struct ConvDims {
    int n, cin, h, w, cout, kh, kw, stride, pad, oh, ow, k, l;
};

ConvDims conv_dims(const Tensor& x, const Tensor& w, int stride, int pad) {
    if (x.rank() != 4 || w.rank() != 4)
        throw std::invalid_argument("conv2d: want NCHW input and OIHW weight, got " +
                                    shape_str(x.shape) + " and " + shape_str(w.shape));
    if (x.shape[1] != w.shape[1])
        throw std::invalid_argument("conv2d: channel mismatch " + shape_str(x.shape) + " vs " +
                                    shape_str(w.shape));
    if (stride < 1) throw std::invalid_argument("conv2d: stride must be >= 1");
    ConvDims d;
    d.n = x.shape[0];
    d.cin = x.shape[1];
    d.h = x.shape[2];
    d.w = x.shape[3];
    d.cout = w.shape[0];
    d.kh = w.shape[2];
    d.kw = w.shape[3];
    d.stride = stride;
    d.pad = pad;
    d.oh = (d.h + 2 * pad - d.kh) / stride + 1;
    d.ow = (d.w + 2 * pad - d.kw) / stride + 1;
    if (d.oh < 1 || d.ow < 1) throw std::invalid_argument("conv2d: output would be empty");
    d.k = d.cin * d.kh * d.kw;
    d.l = d.oh * d.ow;
    return d;
}

// Shared forward. When cols_out is given the patch matrix of every image is
// retained (backward needs it); otherwise a per-image scratch is used.
Tensor conv2d_forward(const Tensor& x, const Tensor& w, const ConvDims& d, Tensor* cols_out) {
    Tensor y({d.n, d.cout, d.oh, d.ow});
    if (cols_out) *cols_out = Tensor({d.n, d.k, d.l});
    const std::int64_t img_in = static_cast<std::int64_t>(d.cin) * d.h * d.w;
    const std::int64_t img_out = static_cast<std::int64_t>(d.cout) * d.l;
    const std::int64_t img_cols = static_cast<std::int64_t>(d.k) * d.l;
    parallel_for(d.n, [&](std::int64_t n) {
        Tensor scratch;
        float* cols;
        if (cols_out) {
            cols = cols_out->data.data() + n * img_cols;
        } else {
            scratch = Tensor({d.k, d.l});
            cols = scratch.data.data();
        }
        im2col(x.data.data() + n * img_in, d.cin, d.h, d.w, d.kh, d.kw, d.stride, d.pad, cols, d.l,
               0);
        gemm_nn(w.data.data(), cols, y.data.data() + n * img_out, d.cout, d.k, d.l, false);
    });
    return y;
}

struct BnStats {
    std::vector<float> mean, inv_std;
};

// Biased per-channel statistics over (N,H,W); accumulation in double keeps the
// finite-difference oracle meaningful. Two-pass to dodge cancellation.
BnStats bn_batch_stats(const Tensor& x) {
    const int n = x.shape[0], c = x.shape[1];
    const std::int64_t plane = static_cast<std::int64_t>(x.shape[2]) * x.shape[3];
    const std::int64_t m = n * plane;
    BnStats s;
    s.mean.resize(static_cast<std::size_t>(c));
    s.inv_std.resize(static_cast<std::size_t>(c));
    parallel_for(c, [&](std::int64_t ch) {
        double sum = 0.0;
        for (int b = 0; b < n; ++b) {
            const float* p = x.data.data() + (static_cast<std::int64_t>(b) * c + ch) * plane;
            for (std::int64_t i = 0; i < plane; ++i) sum += p[i];
        }
        const double mean = sum / static_cast<double>(m);
        double var = 0.0;
        for (int b = 0; b < n; ++b) {
            const float* p = x.data.data() + (static_cast<std::int64_t>(b) * c + ch) * plane;
            for (std::int64_t i = 0; i < plane; ++i) {
                const double dv = p[i] - mean;
                var += dv * dv;
            }
        }
        var /= static_cast<double>(m);
        s.mean[static_cast<std::size_t>(ch)] = static_cast<float>(mean);
        s.inv_std[static_cast<std::size_t>(ch)] =
            static_cast<float>(1.0 / std::sqrt(var + static_cast<double>(kBnEps)));
    });
    return s;
}

void bn_apply(const Tensor& x, const BnStats& s, const Tensor& gamma, const Tensor& beta,
              Tensor* xhat, Tensor* y) {
    const int n = x.shape[0], c = x.shape[1];
    const std::int64_t plane = static_cast<std::int64_t>(x.shape[2]) * x.shape[3];
    parallel_for(static_cast<std::int64_t>(n) * c, [&](std::int64_t nc) {
        const int ch = static_cast<int>(nc % c);
        const float mu = s.mean[static_cast<std::size_t>(ch)];
        const float is = s.inv_std[static_cast<std::size_t>(ch)];
        const float g = gamma.data[static_cast<std::size_t>(ch)];
        const float b = beta.data[static_cast<std::size_t>(ch)];
        const float* in = x.data.data() + nc * plane;
        float* xh = xhat ? xhat->data.data() + nc * plane : nullptr;
        float* out = y->data.data() + nc * plane;
        for (std::int64_t i = 0; i < plane; ++i) {
            const float v = (in[i] - mu) * is;
            if (xh) xh[i] = v;
            out[i] = g * v + b;
        }
    });
}

void check_vec_param(const Tensor& p, int c, const char* what) {
    if (p.rank() != 1 || p.shape[0] != c)
        throw std::invalid_argument(std::string(what) + ": want [" + std::to_string(c) +
                                    "], got " + shape_str(p.shape));
}

struct SoftmaxRow {
    double lse;  // log-sum-exp after max subtraction
    float maxv;
};

SoftmaxRow softmax_into(const float* z, int c, float* p) {
    float maxv = z[0];
    for (int k = 1; k < c; ++k) maxv = std::max(maxv, z[k]);
    double sum = 0.0;
    for (int k = 0; k < c; ++k) sum += std::exp(static_cast<double>(z[k]) - maxv);
    const double lse = std::log(sum);
    for (int k = 0; k < c; ++k)
        p[k] = static_cast<float>(std::exp(static_cast<double>(z[k]) - maxv - lse));
    return {lse, maxv};
}

void check_rowset(const Tensor& z, int row_begin, int rows, const Tensor& targets,
                  const std::vector<float>& weights, double divisor, const char* what) {
    if (z.rank() != 2) throw std::invalid_argument(std::string(what) + ": logits must be [N,C]");
    if (row_begin < 0 || rows < 0 || row_begin + rows > z.shape[0])
        throw std::invalid_argument(std::string(what) + ": row range out of bounds");
    if (targets.rank() != 2 || targets.shape[0] != rows || targets.shape[1] != z.shape[1])
        throw std::invalid_argument(std::string(what) + ": target shape " +
                                    shape_str(targets.shape) + " does not match row set");
    if (static_cast<int>(weights.size()) != rows)
        throw std::invalid_argument(std::string(what) + ": weight count mismatch");
    if (!(divisor > 0.0)) throw std::invalid_argument(std::string(what) + ": divisor must be > 0");
}

}  // namespace

NodeId op_conv2d(Tape& t, NodeId x_id, NodeId w_id, int stride, int pad) {
    const Tensor& x = t.val(x_id);
    const Tensor& w = t.val(w_id);
    const ConvDims d = conv_dims(x, w, stride, pad);
    Tensor cols;
    Tensor y = conv2d_forward(x, w, d, &cols);
    const NodeId out{t.size()};
    return t.node(std::move(y), [d, x_id, w_id, out, cols = std::move(cols)](Tape& tt) {
        const Tensor& dy = tt.grad(out);
        const Tensor& w = tt.val(w_id);
        Tensor& dw = tt.grad(w_id);
        Tensor& dx = tt.grad(x_id);
        const std::int64_t img_in = static_cast<std::int64_t>(d.cin) * d.h * d.w;
        const std::int64_t img_out = static_cast<std::int64_t>(d.cout) * d.l;
        const std::int64_t img_cols = static_cast<std::int64_t>(d.k) * d.l;
        // dW via dW^T = cols * dy^T, which keeps gemm_nn's wide-N layout.
        // Images accumulate in fixed order.
        Tensor dwt({d.k, d.cout});
        Tensor dyt({d.l, d.cout});
        for (int n = 0; n < d.n; ++n) {
            const float* dyn = dy.data.data() + n * img_out;
            for (int co = 0; co < d.cout; ++co)
                for (int i = 0; i < d.l; ++i)
                    dyt.data[static_cast<std::size_t>(i) * d.cout + co] =
                        dyn[static_cast<std::int64_t>(co) * d.l + i];
            gemm_nn(cols.data.data() + n * img_cols, dyt.data.data(), dwt.data.data(), d.k, d.l,
                    d.cout, n > 0);
        }
        for (int co = 0; co < d.cout; ++co)
            for (int kk = 0; kk < d.k; ++kk)
                dw.data[static_cast<std::size_t>(co) * d.k + kk] +=
                    dwt.data[static_cast<std::size_t>(kk) * d.cout + co];
        Tensor wt({d.k, d.cout});
        for (int co = 0; co < d.cout; ++co)
            for (int kk = 0; kk < d.k; ++kk)
                wt.data[static_cast<std::size_t>(kk) * d.cout + co] =
                    w.data[static_cast<std::size_t>(co) * d.k + kk];
        parallel_for(d.n, [&](std::int64_t n) {
            Tensor dcols({d.k, d.l});
            gemm_nn(wt.data.data(), dy.data.data() + n * img_out, dcols.data.data(), d.k, d.cout,
                    d.l, false);
            col2im(dcols.data.data(), d.cin, d.h, d.w, d.kh, d.kw, d.stride, d.pad,
                   dx.data.data() + n * img_in, d.l, 0);
        });
    });
}

NodeId op_batchnorm_train(Tape& t, NodeId x_id, NodeId gamma_id, NodeId beta_id,
                          Tensor* running_mean, Tensor* running_var) {
    const Tensor& x = t.val(x_id);
    if (x.rank() != 4) throw std::invalid_argument("batchnorm: want NCHW, got " + shape_str(x.shape));
    const int c = x.shape[1];
    const Tensor& gamma = t.val(gamma_id);
    const Tensor& beta = t.val(beta_id);
    check_vec_param(gamma, c, "batchnorm gamma");
    check_vec_param(beta, c, "batchnorm beta");
    const BnStats s = bn_batch_stats(x);
    Tensor xhat(x.shape), y(x.shape);
    bn_apply(x, s, gamma, beta, &xhat, &y);
    if (running_mean) {
        check_vec_param(*running_mean, c, "batchnorm running mean");
        check_vec_param(*running_var, c, "batchnorm running var");
        for (int ch = 0; ch < c; ++ch) {
            const float var =
                1.0f / (s.inv_std[static_cast<std::size_t>(ch)] *
                        s.inv_std[static_cast<std::size_t>(ch)]) -
                kBnEps;
            float& rm = running_mean->data[static_cast<std::size_t>(ch)];
            float& rv = running_var->data[static_cast<std::size_t>(ch)];
            rm = (1.0f - kBnMomentum) * rm + kBnMomentum * s.mean[static_cast<std::size_t>(ch)];
            rv = (1.0f - kBnMomentum) * rv + kBnMomentum * var;
        }
    }
    const int n = x.shape[0];
    const std::int64_t plane = static_cast<std::int64_t>(x.shape[2]) * x.shape[3];
    const NodeId out{t.size()};
    return t.node(std::move(y), [n, c, plane, x_id, gamma_id, beta_id, out, s,
                                 xhat = std::move(xhat)](Tape& tt) {
        const Tensor& dy = tt.grad(out);
        const Tensor& gamma = tt.val(gamma_id);
        Tensor& dx = tt.grad(x_id);
        Tensor& dgamma = tt.grad(gamma_id);
        Tensor& dbeta = tt.grad(beta_id);
        const double m = static_cast<double>(n) * plane;
        parallel_for(c, [&](std::int64_t ch) {
            double s1 = 0.0, s2 = 0.0;  // sum dy, sum dy*xhat
            for (int b = 0; b < n; ++b) {
                const std::int64_t off = (static_cast<std::int64_t>(b) * c + ch) * plane;
                const float* g = dy.data.data() + off;
                const float* xh = xhat.data.data() + off;
                for (std::int64_t i = 0; i < plane; ++i) {
                    s1 += g[i];
                    s2 += static_cast<double>(g[i]) * xh[i];
                }
            }
            const float gs = gamma.data[static_cast<std::size_t>(ch)] *
                             s.inv_std[static_cast<std::size_t>(ch)];
            const float a1 = static_cast<float>(s1 / m);
            const float a2 = static_cast<float>(s2 / m);
            for (int b = 0; b < n; ++b) {
                const std::int64_t off = (static_cast<std::int64_t>(b) * c + ch) * plane;
                const float* g = dy.data.data() + off;
                const float* xh = xhat.data.data() + off;
                float* o = dx.data.data() + off;
                for (std::int64_t i = 0; i < plane; ++i) o[i] += gs * (g[i] - a1 - xh[i] * a2);
            }
            dgamma.data[static_cast<std::size_t>(ch)] += static_cast<float>(s2);
            dbeta.data[static_cast<std::size_t>(ch)] += static_cast<float>(s1);
        });
    });
}

NodeId op_relu(Tape& t, NodeId x_id) {
    const Tensor& x = t.val(x_id);
    Tensor y(x.shape);
    for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] = x.data[i] > 0.0f ? x.data[i] : 0.0f;
    const NodeId out{t.size()};
    return t.node(std::move(y), [x_id, out](Tape& tt) {
        const Tensor& yv = tt.val(out);
        const Tensor& dy = tt.grad(out);
        Tensor& dx = tt.grad(x_id);
        for (std::size_t i = 0; i < dx.data.size(); ++i)
            if (yv.data[i] > 0.0f) dx.data[i] += dy.data[i];
    });
}

NodeId op_global_avg_pool(Tape& t, NodeId x_id) {
    const Tensor& x = t.val(x_id);
    if (x.rank() != 4) throw std::invalid_argument("gap: want NCHW, got " + shape_str(x.shape));
    const int n = x.shape[0], c = x.shape[1];
    const std::int64_t plane = static_cast<std::int64_t>(x.shape[2]) * x.shape[3];
    Tensor y({n, c});
    for (std::int64_t nc = 0; nc < static_cast<std::int64_t>(n) * c; ++nc) {
        const float* p = x.data.data() + nc * plane;
        double sum = 0.0;
        for (std::int64_t i = 0; i < plane; ++i) sum += p[i];
        y.data[static_cast<std::size_t>(nc)] = static_cast<float>(sum / static_cast<double>(plane));
    }
    const NodeId out{t.size()};
    return t.node(std::move(y), [x_id, out, n, c, plane](Tape& tt) {
        const Tensor& dy = tt.grad(out);
        Tensor& dx = tt.grad(x_id);
        const float inv = 1.0f / static_cast<float>(plane);
        for (std::int64_t nc = 0; nc < static_cast<std::int64_t>(n) * c; ++nc) {
            const float g = dy.data[static_cast<std::size_t>(nc)] * inv;
            float* p = dx.data.data() + nc * plane;
            for (std::int64_t i = 0; i < plane; ++i) p[i] += g;
        }
    });
}

NodeId op_linear(Tape& t, NodeId x_id, NodeId w_id, NodeId b_id) {
    const Tensor& x = t.val(x_id);
    const Tensor& w = t.val(w_id);
    const Tensor& b = t.val(b_id);
    if (x.rank() != 2 || w.rank() != 2 || x.shape[1] != w.shape[1])
        throw std::invalid_argument("linear: shapes " + shape_str(x.shape) + " x " +
                                    shape_str(w.shape));
    const int n = x.shape[0], f = x.shape[1], c = w.shape[0];
    check_vec_param(b, c, "linear bias");
    Tensor y({n, c});
    gemm_abt(x.data.data(), w.data.data(), y.data.data(), n, c, f, false);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < c; ++k) y.at2(r, k) += b.data[static_cast<std::size_t>(k)];
    const NodeId out{t.size()};
    return t.node(std::move(y), [x_id, w_id, b_id, out, n, f, c](Tape& tt) {
        const Tensor& dy = tt.grad(out);
        gemm_nn(dy.data.data(), tt.val(w_id).data.data(), tt.grad(x_id).data.data(), n, c, f, true);
        gemm_atb(dy.data.data(), tt.val(x_id).data.data(), tt.grad(w_id).data.data(), n, c, f,
                 true);
        Tensor& db = tt.grad(b_id);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < c; ++k) db.data[static_cast<std::size_t>(k)] += dy.at2(r, k);
    });
}

NodeId op_rowset_soft_xent(Tape& t, NodeId logits_id, int row_begin, int rows,
                           const Tensor& targets, const std::vector<float>& weights,
                           double divisor) {
    if (rows == 0) return t.leaf(Tensor::scalar(0.0f));
    const Tensor& z = t.val(logits_id);
    check_rowset(z, row_begin, rows, targets, weights, divisor, "soft_xent");
    const int c = z.shape[1];
    Tensor p({rows, c});
    double total = 0.0;
    for (int r = 0; r < rows; ++r) {
        const float* zr = z.data.data() + static_cast<std::int64_t>(row_begin + r) * c;
        const SoftmaxRow sm = softmax_into(zr, c, p.data.data() + static_cast<std::int64_t>(r) * c);
        double loss = 0.0;
        for (int k = 0; k < c; ++k) {
            const float tv = targets.at2(r, k);
            if (tv != 0.0f) loss += tv * (static_cast<double>(sm.maxv) + sm.lse - zr[k]);
        }
        total += weights[static_cast<std::size_t>(r)] * loss;
    }
    const NodeId out{t.size()};
    return t.node(Tensor::scalar(static_cast<float>(total / divisor)),
                  [logits_id, out, row_begin, rows, c, divisor, p = std::move(p),
                   tg = targets, wts = weights](Tape& tt) {
                      const float g = tt.grad(out).data[0];
                      Tensor& dz = tt.grad(logits_id);
                      for (int r = 0; r < rows; ++r) {
                          double tsum = 0.0;
                          for (int k = 0; k < c; ++k) tsum += tg.at2(r, k);
                          const float scale =
                              g * static_cast<float>(wts[static_cast<std::size_t>(r)] / divisor);
                          float* o = dz.data.data() + static_cast<std::int64_t>(row_begin + r) * c;
                          const float* pr = p.data.data() + static_cast<std::int64_t>(r) * c;
                          for (int k = 0; k < c; ++k)
                              o[k] += scale * (pr[k] * static_cast<float>(tsum) - tg.at2(r, k));
                      }
                  });
}

NodeId op_rowset_sqdiff(Tape& t, NodeId logits_id, int row_begin, int rows, const Tensor& targets,
                        const std::vector<float>& weights, double divisor) {
    if (rows == 0) return t.leaf(Tensor::scalar(0.0f));
    const Tensor& z = t.val(logits_id);
    check_rowset(z, row_begin, rows, targets, weights, divisor, "sqdiff");
    const int c = z.shape[1];
    Tensor p({rows, c});
    double total = 0.0;
    for (int r = 0; r < rows; ++r) {
        const float* zr = z.data.data() + static_cast<std::int64_t>(row_begin + r) * c;
        softmax_into(zr, c, p.data.data() + static_cast<std::int64_t>(r) * c);
        double loss = 0.0;
        for (int k = 0; k < c; ++k) {
            const double d = static_cast<double>(targets.at2(r, k)) -
                             p.data[static_cast<std::int64_t>(r) * c + k];
            loss += d * d;
        }
        total += weights[static_cast<std::size_t>(r)] * loss;
    }
    const NodeId out{t.size()};
    return t.node(Tensor::scalar(static_cast<float>(total / divisor)),
                  [logits_id, out, row_begin, rows, c, divisor, p = std::move(p),
                   tg = targets, wts = weights](Tape& tt) {
                      const float g = tt.grad(out).data[0];
                      Tensor& dz = tt.grad(logits_id);
                      for (int r = 0; r < rows; ++r) {
                          const float* pr = p.data.data() + static_cast<std::int64_t>(r) * c;
                          double s = 0.0;
                          for (int k = 0; k < c; ++k)
                              s += (static_cast<double>(pr[k]) - tg.at2(r, k)) * pr[k];
                          const float scale =
                              g * static_cast<float>(2.0 * wts[static_cast<std::size_t>(r)] /
                                                     divisor);
                          float* o = dz.data.data() + static_cast<std::int64_t>(row_begin + r) * c;
                          for (int k = 0; k < c; ++k)
                              o[k] += scale * pr[k] *
                                      static_cast<float>(pr[k] - tg.at2(r, k) - s);
                      }
                  });
}

NodeId op_weighted_sum(Tape& t, const std::vector<NodeId>& terms,
                       const std::vector<float>& weights) {
    if (terms.size() != weights.size())
        throw std::invalid_argument("weighted_sum: term/weight count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Tensor& v = t.val(terms[i]);
        if (v.numel() != 1) throw std::invalid_argument("weighted_sum: terms must be scalar");
        total += static_cast<double>(weights[i]) * v.data[0];
    }
    const NodeId out{t.size()};
    return t.node(Tensor::scalar(static_cast<float>(total)),
                  [terms, weights, out](Tape& tt) {
                      const float g = tt.grad(out).data[0];
                      for (std::size_t i = 0; i < terms.size(); ++i)
                          tt.grad(terms[i]).data[0] += weights[i] * g;
                  });
}

Tensor conv2d_plain(const Tensor& x, const Tensor& w, int stride, int pad) {
    const ConvDims d = conv_dims(x, w, stride, pad);
    return conv2d_forward(x, w, d, nullptr);
}

Tensor batchnorm_plain(const Tensor& x, const BnParams& bn, bool batch_stats) {
    if (x.rank() != 4) throw std::invalid_argument("batchnorm: want NCHW, got " + shape_str(x.shape));
    const int c = x.shape[1];
    check_vec_param(bn.gamma, c, "batchnorm gamma");
    check_vec_param(bn.beta, c, "batchnorm beta");
    BnStats s;
    if (batch_stats) {
        s = bn_batch_stats(x);
    } else {
        check_vec_param(bn.running_mean, c, "batchnorm running mean");
        check_vec_param(bn.running_var, c, "batchnorm running var");
        s.mean = bn.running_mean.data;
        s.inv_std.resize(static_cast<std::size_t>(c));
        for (int ch = 0; ch < c; ++ch)
            s.inv_std[static_cast<std::size_t>(ch)] = static_cast<float>(
                1.0 / std::sqrt(static_cast<double>(bn.running_var.data[static_cast<std::size_t>(ch)]) +
                                kBnEps));
    }
    Tensor y(x.shape);
    bn_apply(x, s, bn.gamma, bn.beta, nullptr, &y);
    return y;
}

Tensor relu_plain(const Tensor& x) {
    Tensor y(x.shape);
    for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] = x.data[i] > 0.0f ? x.data[i] : 0.0f;
    return y;
}

Tensor global_avg_pool_plain(const Tensor& x) {
    if (x.rank() != 4) throw std::invalid_argument("gap: want NCHW, got " + shape_str(x.shape));
    const int n = x.shape[0], c = x.shape[1];
    const std::int64_t plane = static_cast<std::int64_t>(x.shape[2]) * x.shape[3];
    Tensor y({n, c});
    for (std::int64_t nc = 0; nc < static_cast<std::int64_t>(n) * c; ++nc) {
        const float* p = x.data.data() + nc * plane;
        double sum = 0.0;
        for (std::int64_t i = 0; i < plane; ++i) sum += p[i];
        y.data[static_cast<std::size_t>(nc)] = static_cast<float>(sum / static_cast<double>(plane));
    }
    return y;
}

Tensor linear_plain(const Tensor& x, const Tensor& w, const Tensor& b) {
    if (x.rank() != 2 || w.rank() != 2 || x.shape[1] != w.shape[1])
        throw std::invalid_argument("linear: shapes " + shape_str(x.shape) + " x " +
                                    shape_str(w.shape));
    const int n = x.shape[0], c = w.shape[0];
    check_vec_param(b, c, "linear bias");
    Tensor y({n, c});
    gemm_abt(x.data.data(), w.data.data(), y.data.data(), n, c, x.shape[1], false);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < c; ++k) y.at2(r, k) += b.data[static_cast<std::size_t>(k)];
    return y;
}

Tensor softmax_rows(const Tensor& logits) {
    if (logits.rank() != 2) throw std::invalid_argument("softmax: want [N,C]");
    const int n = logits.shape[0], c = logits.shape[1];
    Tensor p({n, c});
    for (int r = 0; r < n; ++r)
        softmax_into(logits.data.data() + static_cast<std::int64_t>(r) * c, c,
                     p.data.data() + static_cast<std::int64_t>(r) * c);
    return p;
}

}  // namespace rmm
