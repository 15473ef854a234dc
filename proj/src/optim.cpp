#include "rmm/optim.hpp"

#include <stdexcept>

namespace rmm {

void SgdMomentum::attach(const std::vector<Tensor*>& params) {
    vel_.clear();
    vel_.reserve(params.size());
    for (const Tensor* p : params) vel_.push_back(Tensor::zeros(p->shape));
}

void SgdMomentum::step(const std::vector<Tensor*>& params,
                       const std::vector<const Tensor*>& grads) {
    if (params.size() != vel_.size() || grads.size() != vel_.size())
        throw std::invalid_argument("sgd: parameter/velocity count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& theta = *params[i];
        const Tensor& g = *grads[i];
        Tensor& v = vel_[i];
        require_same_shape(theta, g, "sgd grad");
        require_same_shape(theta, v, "sgd velocity");
        for (std::size_t j = 0; j < theta.data.size(); ++j) {
            v.data[j] = momentum_ * v.data[j] + g.data[j] + weight_decay_ * theta.data[j];
            theta.data[j] -= lr_ * v.data[j];
        }
    }
}

void EmaShadow::attach(const std::vector<Tensor*>& values) {
    shadow_.clear();
    shadow_.reserve(values.size());
    for (const Tensor* v : values) shadow_.push_back(*v);
}

void EmaShadow::update(const std::vector<Tensor*>& values) {
    if (values.size() != shadow_.size())
        throw std::invalid_argument("ema: value/shadow count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        Tensor& s = shadow_[i];
        const Tensor& v = *values[i];
        require_same_shape(s, v, "ema update");
        for (std::size_t j = 0; j < s.data.size(); ++j)
            s.data[j] = decay_ * s.data[j] + (1.0f - decay_) * v.data[j];
    }
}

}  // namespace rmm
