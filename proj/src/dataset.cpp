#include "f2p/dataset.hpp"

#include <algorithm>

namespace f2p {

StackSourceFn cache_source(FeatureCache cache, std::string encoder_id) {
    return [cache = std::move(cache), encoder_id = std::move(encoder_id)](const FrameRecord& r) {
        return cache.get(FeatureCache::key_for(encoder_id, r.key()));
    };
}

StackDataset build_dataset_filtered(const Manifest& manifest, Split split,
                                    const StackSourceFn& source,
                                    const std::vector<RegionId>& regions, int frame_budget,
                                    std::uint64_t seed,
                                    const std::function<bool(const FrameRecord&)>& keep) {
    StackDataset out;
    for (const std::string& video : manifest.video_order()) {
        if (manifest.video_split(video) != split) continue;
        const int budget = frame_budget > 0 ? frame_budget
                                            : static_cast<int>(frames_for_video(manifest, video).size());
        for (const FrameRecord& r : sample_frames(manifest, video, budget, seed)) {
            if (keep && !keep(r)) continue;
            FeatureStack s = source(r);
            out.stacks.push_back(regions.size() == s.region_ids.size() &&
                                         std::equal(regions.begin(), regions.end(),
                                                    s.region_ids.begin())
                                     ? std::move(s)
                                     : subset_stack(s, regions));
            out.labels.push_back(r.label);
            out.video_ids.push_back(r.video_id);
            out.dataset_ids.push_back(r.dataset_id);
        }
    }
    return out;
}

StackDataset build_dataset(const Manifest& manifest, Split split, const StackSourceFn& source,
                           const std::vector<RegionId>& regions, int frame_budget,
                           std::uint64_t seed) {
    return build_dataset_filtered(manifest, split, source, regions, frame_budget, seed, nullptr);
}

}  // namespace f2p
