#pragma once

#include <cstdint>
#include <string>

#include "f2p/errors.hpp"
#include "f2p/types.hpp"

namespace f2p {

inline constexpr Index kEmbeddingDim = 256;
inline constexpr Index kEmbedderHidden = 512;

// Two fully connected layers mapping the flattened weighted stack (k*D) to
// the 256-D embedding; ReLU after the first, linear output.
template <typename S>
struct EmbedderState {
    Matrix<S> w1, w2;  // (hidden x k*D), (256 x hidden)
    Vector<S> b1, b2;
    std::string activation = "relu";
    std::uint64_t rng_seed = 0;

    Index input_width() const { return w1.cols(); }
    Index output_dim() const { return w2.rows(); }
};

template <typename S>
struct EmbedTrace {
    Vector<S> v, a1, h1;  // flattened input, hidden pre/post activation
};

template <typename S>
struct EmbedderGrads {
    Matrix<S> w1, w2;
    Vector<S> b1, b2;
};

template <typename S>
EmbedderGrads<S> zero_grads_like(const EmbedderState<S>& st) {
    EmbedderGrads<S> g;
    g.w1 = Matrix<S>::Zero(st.w1.rows(), st.w1.cols());
    g.w2 = Matrix<S>::Zero(st.w2.rows(), st.w2.cols());
    g.b1 = Vector<S>::Zero(st.b1.size());
    g.b2 = Vector<S>::Zero(st.b2.size());
    return g;
}

template <typename S>
Vector<S> embed_head_forward(const Matrix<S>& weighted, const EmbedderState<S>& st,
                             EmbedTrace<S>& tr) {
    if (weighted.size() != st.input_width())
        throw WidthMismatch(st.input_width(), weighted.size());
    // Row-major storage, so the map walks region rows in order.
    tr.v = Eigen::Map<const Vector<S>>(weighted.data(), weighted.size());
    tr.a1 = st.w1 * tr.v + st.b1;
    tr.h1 = tr.a1.cwiseMax(S(0));
    return st.w2 * tr.h1 + st.b2;
}

// Returns d(loss)/d(weighted stack), reshaped to k x D.
template <typename S>
Matrix<S> embed_head_backward(const EmbedderState<S>& st, const EmbedTrace<S>& tr,
                              const Vector<S>& d_embedding, Index k, Index dim,
                              EmbedderGrads<S>& g) {
    g.w2 += d_embedding * tr.h1.transpose();
    g.b2 += d_embedding;
    Vector<S> dh1 = st.w2.transpose() * d_embedding;
    dh1.array() *= (tr.a1.array() > S(0)).template cast<S>();
    g.w1 += dh1 * tr.v.transpose();
    g.b1 += dh1;
    const Vector<S> dv = st.w1.transpose() * dh1;
    return Eigen::Map<const Matrix<S>>(dv.data(), k, dim);
}

}  // namespace f2p
