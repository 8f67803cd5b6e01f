#include "f2p/sampler.hpp"

#include "f2p/rng.hpp"

namespace f2p {

TripletIndexBatch sample_triplet_indices(const std::vector<int>& labels, int batch_size,
                                         std::uint64_t seed) {
    std::vector<Index> real_pool, fake_pool;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == 0 ? real_pool : fake_pool).push_back(static_cast<Index>(i));
    if (real_pool.size() < 2) throw InsufficientClassSamples(0);
    if (fake_pool.size() < 2) throw InsufficientClassSamples(1);

    Rng rng(derive_seed(seed, 0x73616d70ULL));
    TripletIndexBatch batch;
    batch.anchors.reserve(static_cast<std::size_t>(batch_size));
    for (int t = 0; t < batch_size; ++t) {
        const int anchor_label = t % 2;  // real, fake, real, ...
        const auto& same = anchor_label == 0 ? real_pool : fake_pool;
        const auto& other = anchor_label == 0 ? fake_pool : real_pool;

        const std::size_t ai = rng.below(same.size());
        std::size_t pi = rng.below(same.size() - 1);
        if (pi >= ai) ++pi;  // distinct from the anchor
        const std::size_t ni = rng.below(other.size());

        batch.anchors.push_back(same[ai]);
        batch.positives.push_back(same[pi]);
        batch.negatives.push_back(other[ni]);
        batch.anchor_labels.push_back(anchor_label);
    }
    return batch;
}

TripletBatch sample_triplets(const StackDataset& dataset, int batch_size, std::uint64_t seed) {
    const TripletIndexBatch idx = sample_triplet_indices(dataset.labels, batch_size, seed);
    TripletBatch batch;
    batch.anchors.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        batch.anchors.push_back(dataset.stacks[static_cast<std::size_t>(idx.anchors[i])]);
        batch.positives.push_back(dataset.stacks[static_cast<std::size_t>(idx.positives[i])]);
        batch.negatives.push_back(dataset.stacks[static_cast<std::size_t>(idx.negatives[i])]);
    }
    batch.labels_of_anchors = idx.anchor_labels;
    return batch;
}

TripletBatch sample_triplets(const Manifest& manifest, const StackSourceFn& source, int batch_size,
                             std::uint64_t seed) {
    const std::vector<RegionId> all(kAllRegions.begin(), kAllRegions.end());
    const StackDataset train = build_dataset(manifest, Split::Train, source, all, 0, seed);
    return sample_triplets(train, batch_size, seed);
}

}  // namespace f2p
