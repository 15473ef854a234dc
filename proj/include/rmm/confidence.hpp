#pragma once

#include <cstdint>
#include <vector>

#include "rmm/rng.hpp"
#include "rmm/tensor.hpp"

namespace rmm {

struct PredictionBatch {
    Tensor probs;                // [N, C]
    std::vector<int> argmax;     // ties resolved to the lowest class index
    std::vector<float> maxconf;  // probs[b, argmax[b]]

    int size() const { return probs.rank() == 2 ? probs.shape[0] : 0; }
    int classes() const { return probs.rank() == 2 ? probs.shape[1] : 0; }
};

PredictionBatch make_predictions(Tensor probs);

// Fixed or FreeMatch-style self-adaptive confidence threshold. Adaptive state
// runs in double so the geometric recurrence tracks its closed form tightly
// over long runs; tau_global and p_tilde start at 1/C.
class ThresholdState {
  public:
    static ThresholdState fixed_mode(double tau_fixed, int classes);
    static ThresholdState adaptive_mode(int classes, double ema_decay);

    // tau_global <- m*tau_global + (1-m)*mean_b(max q_b);
    // p_tilde    <- m*p_tilde    + (1-m)*mean_b(q_b). Adaptive mode only.
    void update(const PredictionBatch& preds);

    // Per-class threshold for the consistency indicator: tau_fixed in fixed
    // mode, MaxNorm(p_tilde)[c] * tau_global in adaptive mode.
    double effective_tau_c(int cls) const;

    bool adaptive() const { return adaptive_; }
    int classes() const { return classes_; }
    double tau_global() const { return tau_global_; }
    const std::vector<double>& p_tilde() const { return p_tilde_; }

    // Checkpoint plumbing: full precision state in/out.
    void restore(double tau_global, std::vector<double> p_tilde);

  private:
    ThresholdState() = default;

    bool adaptive_ = false;
    int classes_ = 0;
    double tau_fixed_ = 0.95;
    double decay_ = 0.999;
    double tau_global_ = 0.0;
    std::vector<double> p_tilde_;
};

// One unlabeled batch split by the mixing threshold tau_m: H gets hard
// pseudo-labels, Hc keeps soft predictions, and the consistency mask marks
// rows passing the (lower) per-class tau_c. A row below tau_m but above tau_c
// sits in both mask and Hc.
struct Partition {
    std::vector<int> h;        // ascending batch indices with maxconf > tau_m
    std::vector<int> hc;       // complement (or stricter, see hc_excludes_masked)
    std::vector<char> mask;    // size N, maxconf >= tau_c(argmax)
    int masked_count = 0;
};

// hc_excludes_masked narrows Hc to rows that also fail the consistency mask.
Partition partition(const PredictionBatch& preds, const ThresholdState& state, double tau_m,
                    bool hc_excludes_masked = false);

// For each i in h (in order): one partner drawn uniformly from h with
// replacement, self-pairs allowed.
std::vector<std::pair<int, int>> pair_srm(const std::vector<int>& h, RandomSource& rng);

// For each i in hc (in order): one partner uniform over the h members whose
// pseudo-label equals argmax(q_i); rows with no candidate are skipped.
std::vector<std::pair<int, int>> pair_cam(const std::vector<int>& hc, const std::vector<int>& h,
                                          const PredictionBatch& preds, RandomSource& rng);

}  // namespace rmm
