#pragma once

#include <cstdint>
#include <vector>

#include "rmm/tape.hpp"
#include "rmm/tensor.hpp"

namespace rmm {

// Forward flavors. kTrain records a tape and folds batch statistics into the
// normalization running averages. kInfer also normalizes with batch statistics
// but leaves running averages untouched and records nothing (the pseudo-label
// pass). kEval normalizes with running averages.
enum class Mode { kTrain, kInfer, kEval };

struct BnParams {
    Tensor gamma, beta, running_mean, running_var;
};

constexpr float kBnEps = 1e-5f;
constexpr float kBnMomentum = 0.1f;

// Tape ops. Inputs are tape nodes; each op appends its output node and a
// backward step that accumulates into the input gradients.
NodeId op_conv2d(Tape& t, NodeId x, NodeId w, int stride, int pad);
// Normalizes over (N,H,W) per channel with biased variance. Running stats are
// plain tensors updated in place (new = (1-momentum)*old + momentum*batch).
NodeId op_batchnorm_train(Tape& t, NodeId x, NodeId gamma, NodeId beta, Tensor* running_mean,
                          Tensor* running_var);
NodeId op_relu(Tape& t, NodeId x);
NodeId op_global_avg_pool(Tape& t, NodeId x);
NodeId op_linear(Tape& t, NodeId x, NodeId w, NodeId b);

// Scalar loss over logits rows [row_begin, row_begin+rows):
//   sum_r weights[r] * xent(targets row r, softmax(logits row)) / divisor.
// rows == 0 yields a constant zero. Targets need not be one-hot.
NodeId op_rowset_soft_xent(Tape& t, NodeId logits, int row_begin, int rows, const Tensor& targets,
                           const std::vector<float>& weights, double divisor);
// Same row-set convention with squared L2 between target and softmax rows.
NodeId op_rowset_sqdiff(Tape& t, NodeId logits, int row_begin, int rows, const Tensor& targets,
                        const std::vector<float>& weights, double divisor);
// total = sum_i weights[i] * terms[i]; every term must be scalar.
NodeId op_weighted_sum(Tape& t, const std::vector<NodeId>& terms,
                       const std::vector<float>& weights);

// Tape-free forwards sharing the same kernels.
Tensor conv2d_plain(const Tensor& x, const Tensor& w, int stride, int pad);
Tensor batchnorm_plain(const Tensor& x, const BnParams& bn, bool batch_stats);
Tensor relu_plain(const Tensor& x);
Tensor global_avg_pool_plain(const Tensor& x);
Tensor linear_plain(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor softmax_rows(const Tensor& logits);

}  // namespace rmm
