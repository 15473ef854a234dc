#include "rmm/model.hpp"

#include <cmath>
#include <stdexcept>

#include "rmm/rng.hpp"

namespace rmm {
namespace {

constexpr int kWidths[3] = {32, 64, 128};
const char* const kBlockTags[6] = {"1a", "1b", "2a", "2b", "3a", "3b"};

}  // namespace

SmallConvNet::SmallConvNet(int in_channels, int num_classes)
    : in_channels_(in_channels), num_classes_(num_classes) {
    if (in_channels < 1 || num_classes < 2)
        throw std::invalid_argument("model: need >= 1 channel and >= 2 classes");
    int cin = in_channels;
    for (int stage = 0; stage < 3; ++stage) {
        for (int half = 0; half < 2; ++half) {
            Block b;
            const int cout = kWidths[stage];
            b.w = Tensor({cout, cin, 3, 3});
            b.bn.gamma = Tensor::full({cout}, 1.0f);
            b.bn.beta = Tensor({cout});
            b.bn.running_mean = Tensor({cout});
            b.bn.running_var = Tensor::full({cout}, 1.0f);
            b.stride = (stage > 0 && half == 0) ? 2 : 1;
            blocks_.push_back(std::move(b));
            cin = cout;
        }
    }
    head_w_ = Tensor({num_classes, kWidths[2]});
    head_b_ = Tensor({num_classes});
    input_mean_ = Tensor({in_channels});
    input_std_ = Tensor::full({in_channels}, 1.0f);
}

void SmallConvNet::init_params(std::uint64_t root_seed) {
    const auto refs = state();
    for (std::size_t i = 0; i < refs.size(); ++i) {
        Tensor& v = *refs[i].value;
        const std::string& name = refs[i].name;
        const bool he = name.size() > 2 && name.compare(name.size() - 2, 2, ".w") == 0;
        if (!he) continue;
        std::int64_t fan_in;
        if (v.rank() == 4) {
            fan_in = static_cast<std::int64_t>(v.shape[1]) * v.shape[2] * v.shape[3];
        } else {
            fan_in = v.shape[1];
        }
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        StreamRng rng(root_seed, StreamPurpose::kInit, 0, static_cast<std::uint64_t>(i));
        for (float& x : v.data)
            x = static_cast<float>((2.0 * uniform_unit(rng) - 1.0) * bound);
    }
}

std::vector<SmallConvNet::StateRef> SmallConvNet::state() {
    std::vector<StateRef> out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const std::string tag = kBlockTags[i];
        Block& b = blocks_[i];
        out.push_back({"conv" + tag + ".w", &b.w, true});
        out.push_back({"bn" + tag + ".gamma", &b.bn.gamma, true});
        out.push_back({"bn" + tag + ".beta", &b.bn.beta, true});
        out.push_back({"bn" + tag + ".mean", &b.bn.running_mean, false});
        out.push_back({"bn" + tag + ".var", &b.bn.running_var, false});
    }
    out.push_back({"head.w", &head_w_, true});
    out.push_back({"head.b", &head_b_, true});
    out.push_back({"in.mean", &input_mean_, false});
    out.push_back({"in.std", &input_std_, false});
    return out;
}

void SmallConvNet::set_input_stats(std::vector<float> mean, std::vector<float> stdev) {
    if (static_cast<int>(mean.size()) != in_channels_ ||
        static_cast<int>(stdev.size()) != in_channels_)
        throw std::invalid_argument("model: input stats must have one entry per channel");
    for (float s : stdev)
        if (!(s > 0.0f)) throw std::invalid_argument("model: input std must be positive");
    input_mean_.data = std::move(mean);
    input_std_.data = std::move(stdev);
}

Tensor SmallConvNet::standardize(const Tensor& x) const {
    if (x.rank() != 4 || x.shape[1] != in_channels_)
        throw std::invalid_argument("model: want [N," + std::to_string(in_channels_) +
                                    ",H,W], got " + shape_str(x.shape));
    Tensor out(x.shape);
    const std::int64_t plane = static_cast<std::int64_t>(x.shape[2]) * x.shape[3];
    const int c = in_channels_;
    for (std::int64_t nc = 0; nc < static_cast<std::int64_t>(x.shape[0]) * c; ++nc) {
        const int ch = static_cast<int>(nc % c);
        const float mu = input_mean_.data[static_cast<std::size_t>(ch)];
        const float inv = 1.0f / input_std_.data[static_cast<std::size_t>(ch)];
        const float* in = x.data.data() + nc * plane;
        float* o = out.data.data() + nc * plane;
        for (std::int64_t i = 0; i < plane; ++i) o[i] = (in[i] - mu) * inv;
    }
    return out;
}

NodeId SmallConvNet::forward_train(Tape& tape, const Tensor& x,
                                   std::vector<NodeId>& param_leaves) {
    param_leaves.clear();
    NodeId cur = tape.leaf(standardize(x));
    for (Block& b : blocks_) {
        const NodeId w = tape.leaf(b.w);
        const NodeId gamma = tape.leaf(b.bn.gamma);
        const NodeId beta = tape.leaf(b.bn.beta);
        param_leaves.push_back(w);
        param_leaves.push_back(gamma);
        param_leaves.push_back(beta);
        cur = op_conv2d(tape, cur, w, b.stride, 1);
        cur = op_batchnorm_train(tape, cur, gamma, beta, &b.bn.running_mean, &b.bn.running_var);
        cur = op_relu(tape, cur);
    }
    cur = op_global_avg_pool(tape, cur);
    const NodeId hw = tape.leaf(head_w_);
    const NodeId hb = tape.leaf(head_b_);
    param_leaves.push_back(hw);
    param_leaves.push_back(hb);
    return op_linear(tape, cur, hw, hb);
}

Tensor SmallConvNet::forward_logits(const Tensor& x, Mode mode) const {
    if (mode == Mode::kTrain)
        throw std::invalid_argument("model: train forward goes through forward_train");
    const bool batch_stats = mode == Mode::kInfer;
    Tensor cur = standardize(x);
    for (const Block& b : blocks_) {
        cur = conv2d_plain(cur, b.w, b.stride, 1);
        cur = batchnorm_plain(cur, b.bn, batch_stats);
        cur = relu_plain(cur);
    }
    cur = global_avg_pool_plain(cur);
    return linear_plain(cur, head_w_, head_b_);
}

Tensor SmallConvNet::forward_probs(const Tensor& x, Mode mode) const {
    return softmax_rows(forward_logits(x, mode));
}

}  // namespace rmm
