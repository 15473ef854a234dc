#pragma once

#include <vector>

#include "rmm/nn.hpp"
#include "rmm/tape.hpp"
#include "rmm/tensor.hpp"

namespace rmm {

// Which loss terms participate. The named presets mirror the ablation table:
// drop_mixed kills the mixed-pair term, drop_clean the strong-view consistency
// term, drop_cam the low-confidence term; cam_random_pair keeps the CAM term
// but pairs uniformly instead of class-aware. supervised_only keeps l_s alone.
struct AblationFlags {
    bool drop_mixed = false;
    bool drop_clean = false;
    bool drop_cam = false;
    bool cam_random_pair = false;
    bool supervised_only = false;

    bool use_clean() const { return !supervised_only && !drop_clean; }
    bool use_mixed() const { return !supervised_only && !drop_mixed; }
    bool use_cam() const { return !supervised_only && !drop_cam; }
};

// Per-term scalars for sensitivity experiments only; the composed objective
// defaults to the plain unweighted sum.
struct LossWeights {
    float w_s = 1.0f, w_u = 1.0f, w_m = 1.0f, w_cm = 1.0f;
};

// Row layout of one concatenated training forward, plus targets and divisors.
// Blocks in order: labeled weak rows, strong unlabeled rows, mixed
// high-confidence rows, mixed low-confidence rows; absent blocks are empty.
struct BatchPlan {
    Tensor input;  // [N_total, C, H, W]
    int rows_labeled = 0, rows_strong = 0, rows_srm = 0, rows_cam = 0;

    Tensor y_labeled;              // one-hot [rows_labeled, C]
    Tensor y_strong;               // pseudo-label one-hot [rows_strong, C]
    std::vector<float> w_strong;   // consistency mask as 0/1 weights
    Tensor y_srm;                  // mixed labels [rows_srm, C]
    Tensor y_cam;                  // mixed soft labels [rows_cam, C]

    double div_u = 1.0, div_m = 1.0, div_cm = 1.0;

    int mask_count = 0, h_count = 0, hc_count = 0, cam_matched = 0;

    int row_strong_begin() const { return rows_labeled; }
    int row_srm_begin() const { return rows_labeled + rows_strong; }
    int row_cam_begin() const { return rows_labeled + rows_strong + rows_srm; }
    int total_rows() const { return rows_labeled + rows_strong + rows_srm + rows_cam; }
};

struct LossNodes {
    NodeId l_s, l_u, l_m, l_cm, total;
};

// Appends the four loss terms over the shared logits [N_total, C]:
//   l_s  = mean labeled cross-entropy,
//   l_u  = sum of masked strong-row cross-entropies / div_u,
//   l_m  = sum of mixed-row cross-entropies / div_m,
//   l_cm = sum of mixed-row squared L2 distances / div_cm,
// and total = w_s*l_s + w_u*l_u + w_m*l_m + w_cm*l_cm. Absent blocks give
// constant-zero terms.
LossNodes build_losses(Tape& tape, NodeId logits, const BatchPlan& plan, const LossWeights& w);

struct LossReport {
    double l_s = 0.0, l_u = 0.0, l_m = 0.0, l_cm = 0.0, total = 0.0;
    int mask_count = 0, h_count = 0, hc_count = 0, cam_matched = 0;
};

LossReport read_report(const Tape& tape, const LossNodes& nodes, const BatchPlan& plan);

}  // namespace rmm
