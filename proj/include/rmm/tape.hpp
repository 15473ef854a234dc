#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rmm/tensor.hpp"

namespace rmm {

struct NodeId {
    int idx = -1;
    bool valid() const { return idx >= 0; }
};

// Reverse-mode tape. Nodes append in execution order, so a node's inputs
// always precede it and one reverse sweep propagates every adjoint. Gradients
// are allocated eagerly as zeros; ops accumulate into them with +=.
class Tape {
  public:
    NodeId leaf(Tensor value) { return push(std::move(value), {}); }

    NodeId node(Tensor value, std::function<void(Tape&)> back) {
        return push(std::move(value), std::move(back));
    }

    Tensor& val(NodeId id) { return values_[check(id)]; }
    const Tensor& val(NodeId id) const { return values_[check(id)]; }
    Tensor& grad(NodeId id) { return grads_[check(id)]; }
    const Tensor& grad(NodeId id) const { return grads_[check(id)]; }

    // Seeds d(loss)/d(loss) = 1 and runs every recorded backward step from the
    // loss down to the first node. Nodes that never reach the loss keep their
    // zero gradients. A tape drives exactly one backward pass.
    void backward(NodeId loss) {
        if (consumed_) throw std::logic_error("tape already consumed by backward");
        const std::size_t root = check(loss);
        if (values_[root].numel() != 1) {
            throw std::invalid_argument("backward root must be scalar, got shape " +
                                                                    shape_str(values_[root].shape));
        }
        consumed_ = true;
        grads_[root].data[0] = 1.0f;
        for (std::size_t i = root + 1; i-- > 0;) {
            if (backs_[i]) backs_[i](*this);
        }
    }

    bool consumed() const { return consumed_; }
    int size() const { return static_cast<int>(values_.size()); }

  private:
    NodeId push(Tensor value, std::function<void(Tape&)> back) {
        grads_.push_back(Tensor::zeros(value.shape));
        values_.push_back(std::move(value));
        backs_.push_back(std::move(back));
        return NodeId{static_cast<int>(values_.size()) - 1};
    }

    std::size_t check(NodeId id) const {
        if (id.idx < 0 || id.idx >= static_cast<int>(values_.size())) {
            throw std::out_of_range("bad tape node id");
        }
        return static_cast<std::size_t>(id.idx);
    }

    std::vector<Tensor> values_;
    std::vector<Tensor> grads_;
    std::vector<std::function<void(Tape&)>> backs_;
    bool consumed_ = false;
};

}  // namespace rmm
