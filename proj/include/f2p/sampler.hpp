#pragma once

#include <cstdint>
#include <vector>

#include "f2p/dataset.hpp"
#include "f2p/triplet.hpp"

namespace f2p {

struct TripletIndexBatch {
    std::vector<Index> anchors, positives, negatives;
    std::vector<int> anchor_labels;

    std::size_t size() const { return anchors.size(); }
};

// Balanced triplet draws over a labeled pool: anchors alternate real/fake
// (real first, so the class counts differ by at most one), the positive is a
// distinct sample of the anchor's class, the negative comes from the other
// class. Deterministic per seed. Throws InsufficientClassSamples when a
// class has fewer than two samples.
TripletIndexBatch sample_triplet_indices(const std::vector<int>& labels, int batch_size,
                                         std::uint64_t seed);

TripletBatch sample_triplets(const StackDataset& dataset, int batch_size, std::uint64_t seed);

// Convenience over a manifest's train split with full six-region stacks.
TripletBatch sample_triplets(const Manifest& manifest, const StackSourceFn& source,
                             int batch_size, std::uint64_t seed);

}  // namespace f2p
