#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "f2p/errors.hpp"
#include "f2p/sampler.hpp"
#include "f2p/synthetic.hpp"

using namespace f2p;

namespace {

std::vector<int> mixed_labels(int n_real, int n_fake) {
    std::vector<int> labels;
    for (int i = 0; i < n_real; ++i) labels.push_back(0);
    for (int i = 0; i < n_fake; ++i) labels.push_back(1);
    return labels;
}

}  // namespace

TEST_CASE("a class with fewer than two samples cannot be sampled") {
    CHECK_THROWS_AS(sample_triplet_indices(mixed_labels(1, 5), 10, 0), InsufficientClassSamples);
    CHECK_THROWS_AS(sample_triplet_indices(mixed_labels(5, 1), 10, 0), InsufficientClassSamples);
    try {
        sample_triplet_indices(mixed_labels(1, 5), 10, 0);
    } catch (const InsufficientClassSamples& e) {
        CHECK(e.label == 0);
    }
}

TEST_CASE("anchors alternate real and fake") {
    const auto batch = sample_triplet_indices(mixed_labels(40, 40), 100, 7);
    REQUIRE(batch.size() == 100);
    int real_anchors = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        CHECK(batch.anchor_labels[i] == static_cast<int>(i % 2));
        real_anchors += batch.anchor_labels[i] == 0;
    }
    CHECK(real_anchors == 50);

    const auto odd = sample_triplet_indices(mixed_labels(40, 40), 31, 7);
    int reals = 0, fakes = 0;
    for (int l : odd.anchor_labels) (l == 0 ? reals : fakes) += 1;
    CHECK(std::abs(reals - fakes) <= 1);
}

TEST_CASE("500 batches satisfy every triplet constraint") {
    const std::vector<int> labels = mixed_labels(13, 57);  // deliberately imbalanced pool
    int violations = 0;
    for (int b = 0; b < 500; ++b) {
        const auto batch = sample_triplet_indices(labels, 32, 1000 + b);
        int reals = 0, fakes = 0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const Index a = batch.anchors[i], p = batch.positives[i], n = batch.negatives[i];
            if (labels[p] != labels[a]) ++violations;   // label(P) = label(A)
            if (labels[n] == labels[a]) ++violations;   // label(N) != label(A)
            if (p == a) ++violations;                   // P != A as samples
            if (labels[a] != batch.anchor_labels[i]) ++violations;
            (batch.anchor_labels[i] == 0 ? reals : fakes) += 1;
        }
        if (std::abs(reals - fakes) > 1) ++violations;  // anchor balance
    }
    CHECK(violations == 0);
}

TEST_CASE("sampling is deterministic per seed") {
    const std::vector<int> labels = mixed_labels(20, 20);
    const auto a = sample_triplet_indices(labels, 50, 99);
    const auto b = sample_triplet_indices(labels, 50, 99);
    CHECK(a.anchors == b.anchors);
    CHECK(a.positives == b.positives);
    CHECK(a.negatives == b.negatives);
    const auto c = sample_triplet_indices(labels, 50, 100);
    CHECK(a.anchors != c.anchors);
}

TEST_CASE("manifest-level sampling materializes matching stacks") {
    SyntheticSpec spec;
    spec.n_videos = 12;
    spec.frames_per_video = 3;
    const SyntheticData data = make_offset_dataset(spec);

    const TripletBatch batch = sample_triplets(data.manifest(), data.source(), 20, 5);
    REQUIRE(batch.size() == 20);
    REQUIRE(batch.labels_of_anchors.size() == 20);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        CHECK(batch.anchors[i].k() == 6);
        CHECK(batch.positives[i].k() == 6);
        CHECK(batch.negatives[i].k() == 6);
        // Positive shares the anchor's class but is a different sample.
        const bool same_sample = batch.anchors[i].source == batch.positives[i].source;
        CHECK_FALSE(same_sample);
        CHECK(data.manifest().video_label(batch.anchors[i].source.video_id) ==
              batch.labels_of_anchors[i]);
        CHECK(data.manifest().video_label(batch.positives[i].source.video_id) ==
              batch.labels_of_anchors[i]);
        CHECK(data.manifest().video_label(batch.negatives[i].source.video_id) !=
              batch.labels_of_anchors[i]);
        // Samples come from the train split only.
        CHECK(data.manifest().video_split(batch.anchors[i].source.video_id) == Split::Train);
    }
}
