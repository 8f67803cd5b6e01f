#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "f2p/image.hpp"
#include "f2p/types.hpp"

namespace f2p {

enum class Modality : std::uint8_t { Spatial = 0, Temporal = 1 };

struct EncoderSpec {
    std::string encoder_id;
    int feature_dim = 0;        // D
    Modality modality = Modality::Spatial;
    int clip_length = 1;        // 1 for spatial encoders
    std::array<float, 3> mean = {0.0f, 0.0f, 0.0f};
    std::array<float, 3> stdev = {1.0f, 1.0f, 1.0f};
    int input_size = 224;

    void validate() const;  // D > 0, clip_length == 1 <=> spatial, std > 0
};

// One sample: clip_length encoder-ready crops (a single crop when spatial).
using EncoderInput = std::vector<Image>;

class Encoder {
public:
    virtual ~Encoder() = default;
    virtual const EncoderSpec& spec() const = 0;
    // One D-vector per sample; must be deterministic.
    virtual VectorF encode_one(const EncoderInput& input) = 0;
};

// Deterministic 6-D statistics encoder: [mean_R, mean_G, mean_B, std_R,
// std_G, std_B] of the raw crop (population std). Declares identity
// normalization, so preprocessing leaves its input untouched and the stats
// are those of the un-normalized crop.
class TestStatEncoder : public Encoder {
public:
    TestStatEncoder();
    const EncoderSpec& spec() const override { return spec_; }
    VectorF encode_one(const EncoderInput& input) override;

private:
    EncoderSpec spec_;
};

// Registered encoder ids: "test-stat". Pretrained backends plug in through
// this factory in deployments; none ship with the core library.
std::unique_ptr<Encoder> make_encoder(const std::string& encoder_id);
std::vector<std::string> registered_encoders();

// Batch encode with shape validation against the spec. Order-preserving.
// Throws ShapeMismatch, BackendFailure.
std::vector<VectorF> encode(const std::vector<EncoderInput>& inputs, const EncoderSpec& spec,
                            Encoder& backend);

// k x D features for one frame (or clip), rows in canonical region order.
struct FeatureStack {
    MatrixF rows;
    std::vector<RegionId> region_ids;
    std::string encoder_id;
    StackKey source;

    Index k() const { return rows.rows(); }
    Index dim() const { return rows.cols(); }
};

// Assemble the full 6-row stack in canonical order from per-region features.
// Throws MissingRegion, DimensionMismatch.
FeatureStack stack_features(const std::map<RegionId, VectorF>& features,
                            const std::string& encoder_id, const StackKey& source = {});

// Row selection by region, canonical order preserved.
// Throws EmptySubset, UnknownRegion.
FeatureStack subset_stack(const FeatureStack& stack, const std::vector<RegionId>& regions);

}  // namespace f2p
