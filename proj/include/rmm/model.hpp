#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmm/nn.hpp"
#include "rmm/tape.hpp"
#include "rmm/tensor.hpp"

namespace rmm {

// Fixed desk-scale classifier: three stages of [conv3x3 -> batchnorm -> ReLU]
// x2 at widths 32/64/128, stride-2 entering stages 2 and 3, global average
// pool, linear head. Convolutions carry no bias (the following norm absorbs
// it). Inputs are standardized with stored per-channel statistics.
class SmallConvNet {
  public:
    SmallConvNet(int in_channels, int num_classes);

    // He-uniform weights, norm scale 1 shift 0, zero biases. Deterministic in
    // the seed: tensor i draws from its own stream in state() order.
    void init_params(std::uint64_t root_seed);

    struct StateRef {
        std::string name;
        Tensor* value;
        bool trainable;
    };
    // Stable enumeration of every model tensor, running stats and input
    // standardization included. Names are the checkpoint names.
    std::vector<StateRef> state();

    void set_input_stats(std::vector<float> mean, std::vector<float> stdev);

    // Train-mode forward. Appends one leaf per trainable tensor (in state()
    // order, trainable subsequence) to param_leaves, then returns the logits
    // node. Updates batchnorm running stats as a side effect.
    NodeId forward_train(Tape& tape, const Tensor& x, std::vector<NodeId>& param_leaves);

    // Tape-free forward; mode selects batch (kInfer) or running (kEval)
    // normalization statistics.
    Tensor forward_logits(const Tensor& x, Mode mode) const;
    Tensor forward_probs(const Tensor& x, Mode mode) const;

    int in_channels() const { return in_channels_; }
    int num_classes() const { return num_classes_; }

  private:
    Tensor standardize(const Tensor& x) const;

    struct Block {
        Tensor w;
        BnParams bn;
        int stride;
    };

    int in_channels_;
    int num_classes_;
    std::vector<Block> blocks_;
    Tensor head_w_, head_b_;
    Tensor input_mean_, input_std_;
};

}  // namespace rmm
