#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "f2p/dataset.hpp"
#include "f2p/manifest.hpp"

namespace f2p {

// Self-contained labeled dataset at the feature-stack level: every frame gets
// a per-video base stack plus Gaussian noise; fake videos additionally carry
// a fixed offset on one region's row, so the class signal lives in exactly
// that region. Used by the acceptance suite and for download-free demos.
struct SyntheticSpec {
    int n_videos = 200;
    int frames_per_video = 8;
    double train_fraction = 0.7;
    int feature_dim = 6;
    float base_lo = 0.2f;
    float base_hi = 0.8f;
    float noise = 0.08f;           // per-entry Gaussian sigma
    float offset = 0.30f;          // added to every entry of the target row
    RegionId target_region = RegionId::Lips;
    std::uint64_t seed = 7;
    std::string dataset_id = "synthetic";
    std::string manipulation_id = "SYN";  // tagged on fake records
};

class SyntheticData {
public:
    SyntheticData(Manifest manifest, std::map<std::string, FeatureStack> stacks);

    const Manifest& manifest() const { return manifest_; }
    StackSourceFn source() const;

private:
    Manifest manifest_;
    std::shared_ptr<const std::map<std::string, FeatureStack>> stacks_;
};

SyntheticData make_offset_dataset(const SyntheticSpec& spec = {});

}  // namespace f2p
