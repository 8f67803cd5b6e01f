#include "f2p/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "f2p/errors.hpp"
#include "f2p/rng.hpp"

namespace f2p {

SyntheticData::SyntheticData(Manifest manifest, std::map<std::string, FeatureStack> stacks)
    : manifest_(std::move(manifest)),
      stacks_(std::make_shared<const std::map<std::string, FeatureStack>>(std::move(stacks))) {}

StackSourceFn SyntheticData::source() const {
    return [stacks = stacks_](const FrameRecord& r) {
        const std::string key = r.video_id + "/" + std::to_string(r.frame_index);
        auto it = stacks->find(key);
        if (it == stacks->end()) throw KeyNotFound(key);
        return it->second;
    };
}

SyntheticData make_offset_dataset(const SyntheticSpec& spec) {
    const std::vector<RegionId> all(kAllRegions.begin(), kAllRegions.end());
    const auto target_row = static_cast<Index>(
        std::find(all.begin(), all.end(), spec.target_region) - all.begin());

    std::vector<FrameRecord> records;
    std::map<std::string, FeatureStack> stacks;
    const int n_train = static_cast<int>(spec.n_videos * spec.train_fraction);

    for (int v = 0; v < spec.n_videos; ++v) {
        const int label = v % 2;  // alternate so both splits hold both classes
        const Split split = v < n_train ? Split::Train : Split::Test;
        char vid[32];
        std::snprintf(vid, sizeof(vid), "v%04d", v);

        Rng video_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(v), 0x5B45Eull));
        MatrixF base(6, spec.feature_dim);
        for (Index i = 0; i < base.size(); ++i)
            base.data()[i] = static_cast<float>(video_rng.uniform(spec.base_lo, spec.base_hi));

        for (int f = 0; f < spec.frames_per_video; ++f) {
            FrameRecord r;
            r.dataset_id = spec.dataset_id;
            r.video_id = vid;
            r.frame_index = f;
            r.image_path = "synthetic://" + std::string(vid) + "/" + std::to_string(f);
            r.label = label;
            r.split = split;
            if (label == 1) r.manipulation_id = spec.manipulation_id;
            records.push_back(r);

            Rng frame_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(v),
                                      0xF4A3E000ull + static_cast<std::uint64_t>(f)));
            FeatureStack s;
            s.rows = base;
            for (Index i = 0; i < s.rows.size(); ++i)
                s.rows.data()[i] += static_cast<float>(spec.noise * frame_rng.normal());
            if (label == 1) s.rows.row(target_row).array() += spec.offset;
            s.region_ids = all;
            s.encoder_id = "test-stat";
            s.source = r.key();
            stacks.emplace(std::string(vid) + "/" + std::to_string(f), std::move(s));
        }
    }

    return SyntheticData(Manifest::from_records(std::move(records)), std::move(stacks));
}

}  // namespace f2p
