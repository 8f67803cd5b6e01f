#include "f2p/classifier.hpp"

#include <cmath>

#include "f2p/errors.hpp"

namespace f2p {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

float ClassifierState::predict(const VectorF& x) const {
    if (x.size() != input_dim()) throw LengthMismatch(input_dim(), x.size());
    double z;
    if (hidden > 0) {
        const VectorF h = (w1 * x + b1).cwiseMax(0.0f);
        z = static_cast<double>(w2.dot(h)) + b2;
    } else {
        z = static_cast<double>(w2.dot(x)) + b2;
    }
    return static_cast<float>(sigmoid(z));
}

VectorD ClassifierState::predict_batch(const MatrixF& X) const {
    if (X.cols() != input_dim()) throw LengthMismatch(input_dim(), X.cols());
    VectorD out(X.rows());
    for (Index i = 0; i < X.rows(); ++i) out[i] = predict(X.row(i).transpose());
    return out;
}

}  // namespace f2p
