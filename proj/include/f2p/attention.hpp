#pragma once

#include <cmath>
#include <vector>

#include "f2p/errors.hpp"
#include "f2p/types.hpp"

namespace f2p {

enum class GateMode : std::uint8_t { Sigmoid = 0, Softmax = 1 };

// Channel attention over a k x D stack: average- and max-pooling across D,
// one shared 3-layer MLP (k -> 2k -> 2k -> k, ReLU) applied to both pooled
// vectors, branch outputs summed, then squashed into per-row gates.
template <typename S>
struct AttentionState {
    Index rows = 0;  // k
    GateMode gate_mode = GateMode::Sigmoid;
    Matrix<S> w1, w2, w3;  // (2k x k), (2k x 2k), (k x 2k)
    Vector<S> b1, b2, b3;
};

template <typename S>
struct Mlp3Trace {
    Vector<S> x, a1, h1, a2, h2;  // input, pre/post activations
};

template <typename S>
struct AttentionTrace {
    Matrix<S> input;
    Vector<S> avg, mx;
    std::vector<Index> argmax;  // column of each row maximum
    Mlp3Trace<S> avg_pass, max_pass;
    Vector<S> gates;
};

template <typename S>
struct AttentionGrads {
    Matrix<S> w1, w2, w3;
    Vector<S> b1, b2, b3;
};

template <typename S>
struct AttentionResult {
    Matrix<S> weighted;
    Vector<S> gates;
};

template <typename S>
AttentionGrads<S> zero_grads_like(const AttentionState<S>& st) {
    AttentionGrads<S> g;
    g.w1 = Matrix<S>::Zero(st.w1.rows(), st.w1.cols());
    g.w2 = Matrix<S>::Zero(st.w2.rows(), st.w2.cols());
    g.w3 = Matrix<S>::Zero(st.w3.rows(), st.w3.cols());
    g.b1 = Vector<S>::Zero(st.b1.size());
    g.b2 = Vector<S>::Zero(st.b2.size());
    g.b3 = Vector<S>::Zero(st.b3.size());
    return g;
}

template <typename S>
Vector<S> mlp3_forward(const AttentionState<S>& st, const Vector<S>& x, Mlp3Trace<S>& tr) {
    tr.x = x;
    tr.a1 = st.w1 * x + st.b1;
    tr.h1 = tr.a1.cwiseMax(S(0));
    tr.a2 = st.w2 * tr.h1 + st.b2;
    tr.h2 = tr.a2.cwiseMax(S(0));
    return st.w3 * tr.h2 + st.b3;
}

// Accumulates into g; returns nothing because the pooled inputs are data.
template <typename S>
void mlp3_backward(const AttentionState<S>& st, const Mlp3Trace<S>& tr, const Vector<S>& dout,
                   AttentionGrads<S>& g) {
    g.w3 += dout * tr.h2.transpose();
    g.b3 += dout;
    Vector<S> dh2 = st.w3.transpose() * dout;
    dh2.array() *= (tr.a2.array() > S(0)).template cast<S>();  // ReLU' := 0 at the kink
    g.w2 += dh2 * tr.h1.transpose();
    g.b2 += dh2;
    Vector<S> dh1 = st.w2.transpose() * dh2;
    dh1.array() *= (tr.a1.array() > S(0)).template cast<S>();
    g.w1 += dh1 * tr.x.transpose();
    g.b1 += dh1;
}

template <typename S>
Vector<S> squash_gates(const Vector<S>& z, GateMode mode) {
    if (mode == GateMode::Softmax) {
        const Vector<S> e = (z.array() - z.maxCoeff()).exp();
        return e / e.sum();
    }
    Vector<S> g(z.size());
    for (Index i = 0; i < z.size(); ++i) {
        const S v = z[i];
        if (v >= S(0)) {
            g[i] = S(1) / (S(1) + std::exp(-v));
        } else {
            const S e = std::exp(v);
            g[i] = e / (S(1) + e);
        }
    }
    return g;
}

template <typename S>
AttentionResult<S> channel_attention_forward(const Matrix<S>& stack, const AttentionState<S>& st,
                                             AttentionTrace<S>& tr) {
    if (stack.rows() != st.rows) throw RowCountMismatch(st.rows, stack.rows());

    tr.input = stack;
    tr.avg = stack.rowwise().mean();
    tr.mx.resize(stack.rows());
    tr.argmax.resize(static_cast<std::size_t>(stack.rows()));
    for (Index i = 0; i < stack.rows(); ++i) {
        Index col = 0;
        tr.mx[i] = stack.row(i).maxCoeff(&col);
        tr.argmax[static_cast<std::size_t>(i)] = col;
    }

    const Vector<S> z = mlp3_forward(st, tr.avg, tr.avg_pass) + mlp3_forward(st, tr.mx, tr.max_pass);
    tr.gates = squash_gates(z, st.gate_mode);

    AttentionResult<S> out;
    out.gates = tr.gates;
    out.weighted = tr.gates.asDiagonal() * stack;
    return out;
}

template <typename S>
AttentionResult<S> channel_attention(const Matrix<S>& stack, const AttentionState<S>& st) {
    AttentionTrace<S> tr;
    return channel_attention_forward(stack, st, tr);
}

// Backward from d(loss)/d(weighted stack) into the MLP parameter grads.
// Input gradients are not produced: stacks are data, not parameters.
template <typename S>
void channel_attention_backward(const AttentionState<S>& st, const AttentionTrace<S>& tr,
                                const Matrix<S>& d_weighted, AttentionGrads<S>& g) {
    const Vector<S> d_gate = (d_weighted.array() * tr.input.array()).rowwise().sum();

    Vector<S> dz;
    if (st.gate_mode == GateMode::Softmax) {
        const S dot = d_gate.dot(tr.gates);
        dz = tr.gates.array() * (d_gate.array() - dot);
    } else {
        dz = d_gate.array() * tr.gates.array() * (S(1) - tr.gates.array());
    }
    mlp3_backward(st, tr.avg_pass, dz, g);
    mlp3_backward(st, tr.max_pass, dz, g);
}

}  // namespace f2p
