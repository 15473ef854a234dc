#pragma once

#include <vector>

#include "rmm/tensor.hpp"

namespace rmm {

// Heavy-ball SGD with coupled weight decay:
//   v <- momentum*v + g + weight_decay*theta;  theta <- theta - lr*v.
class SgdMomentum {
  public:
    SgdMomentum(float lr, float momentum, float weight_decay)
        : lr_(lr), momentum_(momentum), weight_decay_(weight_decay) {}

    // Zero velocities shaped like the given parameters.
    void attach(const std::vector<Tensor*>& params);

    void step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads);

    float lr() const { return lr_; }
    void set_lr(float lr) { lr_ = lr; }
    std::vector<Tensor>& velocities() { return vel_; }

  private:
    float lr_, momentum_, weight_decay_;
    std::vector<Tensor> vel_;
};

// shadow <- d*shadow + (1-d)*value, elementwise, for every attached tensor.
class EmaShadow {
  public:
    explicit EmaShadow(float decay) : decay_(decay) {}

    // shadow starts as a copy of the current values.
    void attach(const std::vector<Tensor*>& values);

    void update(const std::vector<Tensor*>& values);

    float decay() const { return decay_; }
    std::vector<Tensor>& shadow() { return shadow_; }
    const std::vector<Tensor>& shadow() const { return shadow_; }

  private:
    float decay_;
    std::vector<Tensor> shadow_;
};

}  // namespace rmm
