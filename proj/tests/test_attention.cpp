#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "f2p/attention.hpp"
#include "f2p/rng.hpp"
#include "f2p/triplet.hpp"

using namespace f2p;

namespace {

MatrixD random_stack(Rng& rng, Index k, Index dim) {
    MatrixD s(k, dim);
    for (Index i = 0; i < s.size(); ++i) s.data()[i] = rng.uniform(-1.0, 1.0);
    return s;
}

}  // namespace

TEST_CASE("zero stack with zero biases gives 0.5 gates and a zero weighted stack") {
    const TripletNet<double> net = init_triplet_net<double>(6, 6, 42);
    const MatrixD zero = MatrixD::Zero(6, 6);
    const AttentionResult<double> out = channel_attention(zero, net.attention);
    for (Index i = 0; i < 6; ++i) CHECK(out.gates[i] == 0.5);  // sigmoid(0), exact
    CHECK(out.weighted == MatrixD::Zero(6, 6));
}

TEST_CASE("weighted rows are the input rows scaled by their gate") {
    Rng rng(7);
    const TripletNet<double> net = init_triplet_net<double>(6, 9, 3);
    const MatrixD stack = random_stack(rng, 6, 9);
    const AttentionResult<double> out = channel_attention(stack, net.attention);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 9; ++j)
            CHECK(out.weighted(i, j) == doctest::Approx(out.gates[i] * stack(i, j)).epsilon(1e-15));
}

TEST_CASE("gates stay inside (0,1) on random inputs") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Index k = 1 + static_cast<Index>(rng.below(6));
        const TripletNet<double> net =
            init_triplet_net<double>(k, 6, rng.next_u64(), GateMode::Sigmoid);
        const MatrixD stack = random_stack(rng, k, 6);
        const AttentionResult<double> out = channel_attention(stack, net.attention);
        for (Index i = 0; i < k; ++i) {
            CHECK(out.gates[i] > 0.0);
            CHECK(out.gates[i] < 1.0);
        }
    }
}

TEST_CASE("softmax gates are a distribution over rows") {
    Rng rng(13);
    const TripletNet<double> net = init_triplet_net<double>(6, 6, 5, GateMode::Softmax);
    const MatrixD stack = random_stack(rng, 6, 6);
    const AttentionResult<double> out = channel_attention(stack, net.attention);
    double sum = 0.0;
    for (Index i = 0; i < 6; ++i) {
        CHECK(out.gates[i] > 0.0);
        CHECK(out.gates[i] < 1.0);
        sum += out.gates[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("row count mismatch is rejected") {
    const TripletNet<double> net = init_triplet_net<double>(6, 6, 1);
    CHECK_THROWS_AS(channel_attention(MatrixD(MatrixD::Zero(4, 6)), net.attention), RowCountMismatch);
}

TEST_CASE("gating is row-linear when gates are held fixed") {
    Rng rng(17);
    const TripletNet<double> net = init_triplet_net<double>(6, 6, 23);
    const MatrixD stack = random_stack(rng, 6, 6);
    const AttentionResult<double> base = channel_attention(stack, net.attention);

    MatrixD scaled = stack;
    scaled.row(2) *= 2.0;  // exact in floating point
    const MatrixD reweighted = base.gates.asDiagonal() * scaled;
    CHECK(reweighted.row(2) == 2.0 * base.weighted.row(2));
    CHECK(reweighted.row(0) == base.weighted.row(0));
}

TEST_CASE("attention parameter gradients match central finite differences") {
    // d(sum of weighted entries)/d(params), step 1e-5 in float64.
    Rng rng(29);
    for (const GateMode mode : {GateMode::Sigmoid, GateMode::Softmax}) {
        TripletNet<double> net = init_triplet_net<double>(6, 6, 31, mode);
        const MatrixD stack = random_stack(rng, 6, 6);

        AttentionTrace<double> tr;
        channel_attention_forward(stack, net.attention, tr);
        AttentionGrads<double> grads = zero_grads_like(net.attention);
        channel_attention_backward(net.attention, tr, MatrixD(MatrixD::Ones(6, 6)), grads);

        const auto loss = [&](const AttentionState<double>& st) {
            return channel_attention(stack, st).weighted.sum();
        };
        const double h = 1e-5;
        double max_rel = 0.0;
        const auto sweep = [&](auto& block, const auto& gblock) {
            for (Index i = 0; i < block.size(); ++i) {
                const double keep = block.data()[i];
                block.data()[i] = keep + h;
                const double lp = loss(net.attention);
                block.data()[i] = keep - h;
                const double lm = loss(net.attention);
                block.data()[i] = keep;
                const double fd = (lp - lm) / (2.0 * h);
                const double ga = gblock.data()[i];
                max_rel = std::max(max_rel,
                                   std::abs(ga - fd) / std::max({std::abs(ga), std::abs(fd), 1e-4}));
            }
        };
        sweep(net.attention.w1, grads.w1);
        sweep(net.attention.b1, grads.b1);
        sweep(net.attention.w2, grads.w2);
        sweep(net.attention.b2, grads.b2);
        sweep(net.attention.w3, grads.w3);
        sweep(net.attention.b3, grads.b3);
        CHECK(max_rel < 1e-4);
    }
}
