#pragma once

#include <functional>
#include <vector>

#include "f2p/encoder.hpp"
#include "f2p/feature_cache.hpp"
#include "f2p/manifest.hpp"

namespace f2p {

// Stacks resolved per frame record: backed by the feature cache in the CLI,
// by in-memory maps in tests and synthetic runs.
using StackSourceFn = std::function<FeatureStack(const FrameRecord&)>;

StackSourceFn cache_source(FeatureCache cache, std::string encoder_id);

// In-memory view of one split with per-sample labels, ready for sampling,
// training, and scoring.
struct StackDataset {
    std::vector<FeatureStack> stacks;
    std::vector<int> labels;
    std::vector<std::string> video_ids;
    std::vector<std::string> dataset_ids;

    std::size_t size() const { return stacks.size(); }
    Index k() const { return stacks.empty() ? 0 : stacks.front().k(); }
    Index dim() const { return stacks.empty() ? 0 : stacks.front().dim(); }
};

// Gathers stacks of one split, region-subset applied, frame_budget frames per
// video (<= 0 means all), video order as first appearance in the manifest.
StackDataset build_dataset(const Manifest& manifest, Split split, const StackSourceFn& source,
                           const std::vector<RegionId>& regions, int frame_budget,
                           std::uint64_t seed);

// Same, but keeps only records accepted by `keep` (protocol filters).
StackDataset build_dataset_filtered(const Manifest& manifest, Split split,
                                    const StackSourceFn& source,
                                    const std::vector<RegionId>& regions, int frame_budget,
                                    std::uint64_t seed,
                                    const std::function<bool(const FrameRecord&)>& keep);

}  // namespace f2p
