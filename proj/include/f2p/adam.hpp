#pragma once

#include <cmath>

#include "f2p/errors.hpp"
#include "f2p/types.hpp"

namespace f2p {

// Adam with the usual constants and bias correction.
template <typename S>
class Adam {
public:
    Adam(Index n_params, S lr, S beta1 = S(0.9), S beta2 = S(0.999), S eps = S(1e-8))
        : lr_(lr),
          beta1_(beta1),
          beta2_(beta2),
          eps_(eps),
          m_(Vector<S>::Zero(n_params)),
          v_(Vector<S>::Zero(n_params)) {}

    void step(Vector<S>& params, const Vector<S>& grads) {
        if (params.size() != m_.size() || grads.size() != m_.size())
            throw LengthMismatch(m_.size(), params.size());
        ++t_;
        m_ = beta1_ * m_ + (S(1) - beta1_) * grads;
        v_ = beta2_ * v_ + (S(1) - beta2_) * grads.cwiseProduct(grads);
        const S c1 = S(1) - std::pow(beta1_, static_cast<S>(t_));
        const S c2 = S(1) - std::pow(beta2_, static_cast<S>(t_));
        params.array() -=
            lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
    }

private:
    S lr_, beta1_, beta2_, eps_;
    Vector<S> m_, v_;
    long t_ = 0;
};

}  // namespace f2p
