#include "rmm/confidence.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmm {

PredictionBatch make_predictions(Tensor probs) {
    if (probs.rank() != 2) throw std::invalid_argument("predictions: want [N,C]");
    PredictionBatch out;
    const int n = probs.shape[0], c = probs.shape[1];
    out.argmax.resize(static_cast<std::size_t>(n));
    out.maxconf.resize(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
        const float* row = probs.data.data() + static_cast<std::int64_t>(b) * c;
        int best = 0;
        for (int k = 1; k < c; ++k)
            if (row[k] > row[best]) best = k;
        out.argmax[static_cast<std::size_t>(b)] = best;
        out.maxconf[static_cast<std::size_t>(b)] = row[best];
    }
    out.probs = std::move(probs);
    return out;
}

ThresholdState ThresholdState::fixed_mode(double tau_fixed, int classes) {
    if (classes < 2) throw std::invalid_argument("threshold: need >= 2 classes");
    if (!(tau_fixed > 0.0 && tau_fixed < 1.0))
        throw std::invalid_argument("threshold: tau_fixed must be in (0,1)");
    ThresholdState s;
    s.adaptive_ = false;
    s.classes_ = classes;
    s.tau_fixed_ = tau_fixed;
    s.tau_global_ = tau_fixed;
    s.p_tilde_.assign(static_cast<std::size_t>(classes), 1.0 / classes);
    return s;
}

ThresholdState ThresholdState::adaptive_mode(int classes, double ema_decay) {
    if (classes < 2) throw std::invalid_argument("threshold: need >= 2 classes");
    if (!(ema_decay >= 0.0 && ema_decay < 1.0))
        throw std::invalid_argument("threshold: decay must be in [0,1)");
    ThresholdState s;
    s.adaptive_ = true;
    s.classes_ = classes;
    s.decay_ = ema_decay;
    s.tau_global_ = 1.0 / classes;
    s.p_tilde_.assign(static_cast<std::size_t>(classes), 1.0 / classes);
    return s;
}

void ThresholdState::update(const PredictionBatch& preds) {
    if (!adaptive_) throw std::logic_error("threshold: update is adaptive-mode only");
    const int n = preds.size();
    if (n == 0) throw std::invalid_argument("threshold: empty batch");
    if (preds.classes() != classes_) throw std::invalid_argument("threshold: class count mismatch");
    double mean_max = 0.0;
    for (int b = 0; b < n; ++b) mean_max += preds.maxconf[static_cast<std::size_t>(b)];
    mean_max /= n;
    tau_global_ = decay_ * tau_global_ + (1.0 - decay_) * mean_max;
    for (int k = 0; k < classes_; ++k) {
        double mean_k = 0.0;
        for (int b = 0; b < n; ++b) mean_k += preds.probs.at2(b, k);
        mean_k /= n;
        p_tilde_[static_cast<std::size_t>(k)] =
            decay_ * p_tilde_[static_cast<std::size_t>(k)] + (1.0 - decay_) * mean_k;
    }
}

double ThresholdState::effective_tau_c(int cls) const {
    if (cls < 0 || cls >= classes_) throw std::invalid_argument("threshold: class out of range");
    if (!adaptive_) return tau_fixed_;
    const double top = *std::max_element(p_tilde_.begin(), p_tilde_.end());
    if (top <= 0.0) return tau_global_;
    return p_tilde_[static_cast<std::size_t>(cls)] / top * tau_global_;
}

void ThresholdState::restore(double tau_global, std::vector<double> p_tilde) {
    if (static_cast<int>(p_tilde.size()) != classes_)
        throw std::invalid_argument("threshold: restore size mismatch");
    tau_global_ = tau_global;
    p_tilde_ = std::move(p_tilde);
}

Partition partition(const PredictionBatch& preds, const ThresholdState& state, double tau_m,
                    bool hc_excludes_masked) {
    if (!(tau_m > 0.0 && tau_m < 1.0))
        throw std::invalid_argument("partition: tau_m must be in (0,1)");
    Partition out;
    const int n = preds.size();
    out.mask.assign(static_cast<std::size_t>(n), 0);
    for (int b = 0; b < n; ++b) {
        const double conf = preds.maxconf[static_cast<std::size_t>(b)];
        const bool masked =
            conf >= state.effective_tau_c(preds.argmax[static_cast<std::size_t>(b)]);
        if (masked) {
            out.mask[static_cast<std::size_t>(b)] = 1;
            ++out.masked_count;
        }
        if (conf > tau_m) {
            out.h.push_back(b);
        } else if (!hc_excludes_masked || !masked) {
            out.hc.push_back(b);
        }
    }
    return out;
}

std::vector<std::pair<int, int>> pair_srm(const std::vector<int>& h, RandomSource& rng) {
    std::vector<std::pair<int, int>> out;
    out.reserve(h.size());
    for (int i : h) {
        const std::size_t pick = uniform_below(rng, h.size());
        out.emplace_back(i, h[pick]);
    }
    return out;
}

std::vector<std::pair<int, int>> pair_cam(const std::vector<int>& hc, const std::vector<int>& h,
                                          const PredictionBatch& preds, RandomSource& rng) {
    std::vector<std::pair<int, int>> out;
    std::vector<int> candidates;
    for (int i : hc) {
        const int want = preds.argmax[static_cast<std::size_t>(i)];
        candidates.clear();
        for (int j : h)
            if (preds.argmax[static_cast<std::size_t>(j)] == want) candidates.push_back(j);
        if (candidates.empty()) continue;
        out.emplace_back(i, candidates[uniform_below(rng, candidates.size())]);
    }
    return out;
}

}  // namespace rmm
