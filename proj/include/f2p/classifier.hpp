#pragma once

#include <cstdint>

#include "f2p/types.hpp"

namespace f2p {

// FC head over frozen embeddings: sigmoid(w2 . x + b2), optionally with one
// hidden ReLU layer (hidden > 0) when configured.
struct ClassifierState {
    int hidden = 0;
    MatrixF w1;  // (hidden x in), empty when hidden == 0
    VectorF b1;
    VectorF w2;  // (in) when linear, (hidden) otherwise
    float b2 = 0.0f;

    Index input_dim() const { return hidden > 0 ? w1.cols() : w2.size(); }

    // Probability in [0,1].
    float predict(const VectorF& x) const;
    VectorD predict_batch(const MatrixF& X) const;  // one row per sample
};

}  // namespace f2p
