#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "f2p/attention.hpp"
#include "f2p/embedder.hpp"
#include "f2p/encoder.hpp"
#include "f2p/rng.hpp"

namespace f2p {

// The embedding network T: channel attention over the k x D stack, then the
// two-layer head down to 256 dimensions. One set of parameters serves the
// anchor, positive, and negative passes.
template <typename S>
struct TripletNet {
    AttentionState<S> attention;
    EmbedderState<S> embedder;

    Index k() const { return attention.rows; }
    Index dim() const { return attention.rows > 0 ? embedder.input_width() / attention.rows : 0; }
};

template <typename S>
struct NetGrads {
    AttentionGrads<S> attention;
    EmbedderGrads<S> embedder;
};

template <typename S>
NetGrads<S> zero_grads_like(const TripletNet<S>& net) {
    return NetGrads<S>{zero_grads_like(net.attention), zero_grads_like(net.embedder)};
}

namespace detail {

template <typename S>
void fill_uniform_fanin(Matrix<S>& m, Index fan_in, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<S>(rng.uniform(-bound, bound));
}

}  // namespace detail

// Uniform fan-in initialization, biases zero, every draw derived from `seed`.
template <typename S>
TripletNet<S> init_triplet_net(Index k, Index dim, std::uint64_t seed,
                               GateMode gate_mode = GateMode::Sigmoid) {
    TripletNet<S> net;
    Rng rng(derive_seed(seed, 0x7472694eULL));  // one stream for all blocks

    AttentionState<S>& a = net.attention;
    a.rows = k;
    a.gate_mode = gate_mode;
    a.w1.resize(2 * k, k);
    a.w2.resize(2 * k, 2 * k);
    a.w3.resize(k, 2 * k);
    detail::fill_uniform_fanin(a.w1, k, rng);
    detail::fill_uniform_fanin(a.w2, 2 * k, rng);
    detail::fill_uniform_fanin(a.w3, 2 * k, rng);
    a.b1 = Vector<S>::Zero(2 * k);
    a.b2 = Vector<S>::Zero(2 * k);
    a.b3 = Vector<S>::Zero(k);

    EmbedderState<S>& e = net.embedder;
    e.w1.resize(kEmbedderHidden, k * dim);
    e.w2.resize(kEmbeddingDim, kEmbedderHidden);
    detail::fill_uniform_fanin(e.w1, k * dim, rng);
    detail::fill_uniform_fanin(e.w2, kEmbedderHidden, rng);
    e.b1 = Vector<S>::Zero(kEmbedderHidden);
    e.b2 = Vector<S>::Zero(kEmbeddingDim);
    e.rng_seed = seed;
    return net;
}

template <typename S>
struct ForwardTrace {
    AttentionTrace<S> attention;
    Matrix<S> weighted;
    EmbedTrace<S> head;
};

template <typename S>
Vector<S> embed_forward(const Matrix<S>& stack, const TripletNet<S>& net, ForwardTrace<S>& tr) {
    AttentionResult<S> att = channel_attention_forward(stack, net.attention, tr.attention);
    tr.weighted = std::move(att.weighted);
    return embed_head_forward(tr.weighted, net.embedder, tr.head);
}

// The 256-D embedding of one stack under frozen parameters.
template <typename S>
Vector<S> embed(const Matrix<S>& stack, const AttentionState<S>& a, const EmbedderState<S>& e) {
    AttentionTrace<S> at;
    const AttentionResult<S> att = channel_attention_forward(stack, a, at);
    EmbedTrace<S> et;
    return embed_head_forward(att.weighted, e, et);
}

template <typename S>
Vector<S> embed(const Matrix<S>& stack, const TripletNet<S>& net) {
    return embed(stack, net.attention, net.embedder);
}

inline VectorF embed(const FeatureStack& stack, const TripletNet<float>& net) {
    return embed(stack.rows, net);
}

template <typename S>
void embed_backward(const TripletNet<S>& net, const ForwardTrace<S>& tr,
                    const Vector<S>& d_embedding, NetGrads<S>& g) {
    const Matrix<S> d_weighted = embed_head_backward(
        net.embedder, tr.head, d_embedding, tr.attention.input.rows(), tr.attention.input.cols(),
        g.embedder);
    channel_attention_backward(net.attention, tr.attention, d_weighted, g.attention);
}

// --- distances and loss ---

template <typename S>
S pairwise_distance(const Vector<S>& u, const Vector<S>& v) {
    if (u.size() != v.size()) throw LengthMismatch(u.size(), v.size());
    return (u - v).norm();
}

template <typename S>
S margin_ranking_loss(S d_ap, S d_an, S margin) {
    if (!(d_ap >= S(0)) || !(d_an >= S(0))) throw NegativeDistance();  // rejects NaN too
    return std::max(S(0), d_ap - d_an + margin);
}

// --- triplet batches ---

struct TripletBatch {
    std::vector<FeatureStack> anchors;
    std::vector<FeatureStack> positives;
    std::vector<FeatureStack> negatives;
    std::vector<int> labels_of_anchors;

    std::size_t size() const { return anchors.size(); }
};

template <typename S>
struct TripletEmbeddings {
    std::vector<Vector<S>> anchors, positives, negatives;
};

// Shared-parameter forward over three stack lists.
template <typename S>
TripletEmbeddings<S> triplet_forward(const std::vector<Matrix<S>>& anchors,
                                     const std::vector<Matrix<S>>& positives,
                                     const std::vector<Matrix<S>>& negatives,
                                     const TripletNet<S>& net) {
    if (anchors.size() != positives.size() || anchors.size() != negatives.size())
        throw LengthMismatch(static_cast<Index>(anchors.size()),
                             static_cast<Index>(positives.size()));
    TripletEmbeddings<S> out;
    out.anchors.reserve(anchors.size());
    out.positives.reserve(anchors.size());
    out.negatives.reserve(anchors.size());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        out.anchors.push_back(embed(anchors[i], net));
        out.positives.push_back(embed(positives[i], net));
        out.negatives.push_back(embed(negatives[i], net));
    }
    return out;
}

inline TripletEmbeddings<float> triplet_forward(const TripletBatch& batch,
                                                const TripletNet<float>& net) {
    std::vector<MatrixF> a, p, n;
    for (const auto& s : batch.anchors) a.push_back(s.rows);
    for (const auto& s : batch.positives) p.push_back(s.rows);
    for (const auto& s : batch.negatives) n.push_back(s.rows);
    return triplet_forward(a, p, n, net);
}

// Mean margin-ranking loss over the batch with parameter gradients
// accumulated into g. At a zero anchor-positive or anchor-negative distance
// the Euclidean norm has no derivative; that triplet's pull on the
// corresponding branch is dropped (subgradient zero).
template <typename S>
S triplet_loss_and_grads(const std::vector<Matrix<S>>& anchors,
                         const std::vector<Matrix<S>>& positives,
                         const std::vector<Matrix<S>>& negatives, const TripletNet<S>& net,
                         S margin, NetGrads<S>& g) {
    if (anchors.size() != positives.size() || anchors.size() != negatives.size())
        throw LengthMismatch(static_cast<Index>(anchors.size()),
                             static_cast<Index>(positives.size()));
    if (anchors.empty()) return S(0);

    const S inv_b = S(1) / static_cast<S>(anchors.size());
    const S tiny = S(1e-12);
    S loss = S(0);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        ForwardTrace<S> ta, tp, tn;
        const Vector<S> fa = embed_forward(anchors[i], net, ta);
        const Vector<S> fp = embed_forward(positives[i], net, tp);
        const Vector<S> fn = embed_forward(negatives[i], net, tn);

        const Vector<S> ap = fa - fp;
        const Vector<S> an = fa - fn;
        const S d_ap = ap.norm();
        const S d_an = an.norm();
        // Overflowed embeddings must surface as a non-finite batch loss, not
        // vanish inside max(0, inf - inf).
        if (!std::isfinite(d_ap) || !std::isfinite(d_an))
            return std::numeric_limits<S>::quiet_NaN();
        const S l = margin_ranking_loss(d_ap, d_an, margin);
        loss += l * inv_b;
        if (l <= S(0)) continue;

        Vector<S> dfa = Vector<S>::Zero(fa.size());
        if (d_ap > tiny) {
            const Vector<S> u = ap * (inv_b / d_ap);
            dfa += u;
            embed_backward(net, tp, Vector<S>(-u), g);
        }
        if (d_an > tiny) {
            const Vector<S> u = an * (inv_b / d_an);
            dfa -= u;
            embed_backward(net, tn, u, g);
        }
        embed_backward(net, ta, dfa, g);
    }
    return loss;
}

// --- flat parameter views (optimizer steps, checkpoints, gradient checks) ---
// Order: attention w1,b1,w2,b2,w3,b3 then embedder w1,b1,w2,b2, row-major
// coefficients within each block.

template <typename S>
Index param_count(const TripletNet<S>& net) {
    const auto& a = net.attention;
    const auto& e = net.embedder;
    return a.w1.size() + a.b1.size() + a.w2.size() + a.b2.size() + a.w3.size() + a.b3.size() +
           e.w1.size() + e.b1.size() + e.w2.size() + e.b2.size();
}

namespace detail {

template <typename S, typename Block>
void copy_out(Vector<S>& dst, Index& at, const Block& b) {
    dst.segment(at, b.size()) = Eigen::Map<const Vector<S>>(b.data(), b.size());
    at += b.size();
}

template <typename S, typename Block>
void copy_in(const Vector<S>& src, Index& at, Block& b) {
    Eigen::Map<Vector<S>>(b.data(), b.size()) = src.segment(at, b.size());
    at += b.size();
}

}  // namespace detail

template <typename S>
Vector<S> pack_params(const TripletNet<S>& net) {
    Vector<S> out(param_count(net));
    Index at = 0;
    detail::copy_out(out, at, net.attention.w1);
    detail::copy_out(out, at, net.attention.b1);
    detail::copy_out(out, at, net.attention.w2);
    detail::copy_out(out, at, net.attention.b2);
    detail::copy_out(out, at, net.attention.w3);
    detail::copy_out(out, at, net.attention.b3);
    detail::copy_out(out, at, net.embedder.w1);
    detail::copy_out(out, at, net.embedder.b1);
    detail::copy_out(out, at, net.embedder.w2);
    detail::copy_out(out, at, net.embedder.b2);
    return out;
}

template <typename S>
void unpack_params(const Vector<S>& flat, TripletNet<S>& net) {
    if (flat.size() != param_count(net)) throw LengthMismatch(param_count(net), flat.size());
    Index at = 0;
    detail::copy_in(flat, at, net.attention.w1);
    detail::copy_in(flat, at, net.attention.b1);
    detail::copy_in(flat, at, net.attention.w2);
    detail::copy_in(flat, at, net.attention.b2);
    detail::copy_in(flat, at, net.attention.w3);
    detail::copy_in(flat, at, net.attention.b3);
    detail::copy_in(flat, at, net.embedder.w1);
    detail::copy_in(flat, at, net.embedder.b1);
    detail::copy_in(flat, at, net.embedder.w2);
    detail::copy_in(flat, at, net.embedder.b2);
}

template <typename S>
Vector<S> pack_grads(const TripletNet<S>& net, const NetGrads<S>& g) {
    Vector<S> out(param_count(net));
    Index at = 0;
    detail::copy_out(out, at, g.attention.w1);
    detail::copy_out(out, at, g.attention.b1);
    detail::copy_out(out, at, g.attention.w2);
    detail::copy_out(out, at, g.attention.b2);
    detail::copy_out(out, at, g.attention.w3);
    detail::copy_out(out, at, g.attention.b3);
    detail::copy_out(out, at, g.embedder.w1);
    detail::copy_out(out, at, g.embedder.b1);
    detail::copy_out(out, at, g.embedder.w2);
    detail::copy_out(out, at, g.embedder.b2);
    return out;
}

// Scalar conversion, used by the float64 verification paths.
template <typename To, typename From>
TripletNet<To> cast_net(const TripletNet<From>& net) {
    TripletNet<To> out;
    out.attention.rows = net.attention.rows;
    out.attention.gate_mode = net.attention.gate_mode;
    out.attention.w1 = net.attention.w1.template cast<To>();
    out.attention.w2 = net.attention.w2.template cast<To>();
    out.attention.w3 = net.attention.w3.template cast<To>();
    out.attention.b1 = net.attention.b1.template cast<To>();
    out.attention.b2 = net.attention.b2.template cast<To>();
    out.attention.b3 = net.attention.b3.template cast<To>();
    out.embedder.w1 = net.embedder.w1.template cast<To>();
    out.embedder.w2 = net.embedder.w2.template cast<To>();
    out.embedder.b1 = net.embedder.b1.template cast<To>();
    out.embedder.b2 = net.embedder.b2.template cast<To>();
    out.embedder.activation = net.embedder.activation;
    out.embedder.rng_seed = net.embedder.rng_seed;
    return out;
}

}  // namespace f2p
