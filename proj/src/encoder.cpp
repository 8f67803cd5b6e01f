#include "f2p/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "f2p/errors.hpp"

namespace f2p {

void EncoderSpec::validate() const {
    if (feature_dim <= 0) throw DimensionMismatch("encoder feature_dim must be positive");
    if ((clip_length == 1) != (modality == Modality::Spatial))
        throw DimensionMismatch("clip_length must be 1 exactly for spatial encoders");
    if (clip_length <= 0) throw DimensionMismatch("clip_length must be positive");
    for (float s : stdev)
        if (!(s > 0.0f)) throw DimensionMismatch("encoder std must be positive");
}

TestStatEncoder::TestStatEncoder() {
    spec_.encoder_id = "test-stat";
    spec_.feature_dim = 6;
    spec_.modality = Modality::Spatial;
    spec_.clip_length = 1;
    spec_.validate();
}

VectorF TestStatEncoder::encode_one(const EncoderInput& input) {
    const Image& crop = input.front();
    const std::size_t n = static_cast<std::size_t>(crop.width) * crop.height;

    // Double accumulation: the oracle recomputation is checked at 1e-6 over
    // ~50k pixels, which float sums would not reliably hit.
    std::array<double, 3> sum{}, sumsq{};
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) {
            const double v = crop.pixels[i * 3 + c];
            sum[c] += v;
            sumsq[c] += v * v;
        }

    VectorF out(6);
    for (int c = 0; c < 3; ++c) {
        const double mean = sum[c] / static_cast<double>(n);
        const double var = std::max(0.0, sumsq[c] / static_cast<double>(n) - mean * mean);
        out[c] = static_cast<float>(mean);
        out[c + 3] = static_cast<float>(std::sqrt(var));
    }
    return out;
}

std::unique_ptr<Encoder> make_encoder(const std::string& encoder_id) {
    if (encoder_id == "test-stat") return std::make_unique<TestStatEncoder>();
    throw BackendFailure("no encoder registered as '" + encoder_id + "'");
}

std::vector<std::string> registered_encoders() { return {"test-stat"}; }

std::vector<VectorF> encode(const std::vector<EncoderInput>& inputs, const EncoderSpec& spec,
                            Encoder& backend) {
    spec.validate();
    std::vector<VectorF> out;
    out.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const EncoderInput& sample = inputs[i];
        if (static_cast<int>(sample.size()) != spec.clip_length)
            throw ShapeMismatch("sample " + std::to_string(i) + " has " +
                                std::to_string(sample.size()) + " frames, expected clip_length " +
                                std::to_string(spec.clip_length));
        for (const Image& crop : sample) {
            if (crop.width != spec.input_size || crop.height != spec.input_size)
                throw ShapeMismatch("sample " + std::to_string(i) + " crop is " +
                                    std::to_string(crop.width) + "x" + std::to_string(crop.height) +
                                    ", expected " + std::to_string(spec.input_size));
            if (!all_finite(crop)) throw BackendFailure("non-finite crop values");
        }

        VectorF f = backend.encode_one(sample);
        if (f.size() != spec.feature_dim)
            throw BackendFailure("backend returned " + std::to_string(f.size()) +
                                 " dims, spec says " + std::to_string(spec.feature_dim));
        if (!f.allFinite()) throw BackendFailure("backend returned non-finite feature");
        out.push_back(std::move(f));
    }
    return out;
}

FeatureStack stack_features(const std::map<RegionId, VectorF>& features,
                            const std::string& encoder_id, const StackKey& source) {
    for (RegionId r : kAllRegions)
        if (!features.count(r)) throw MissingRegion(r);

    const Index dim = features.begin()->second.size();
    for (const auto& [r, f] : features)
        if (f.size() != dim)
            throw DimensionMismatch("region " + std::string(region_name(r)) + " has " +
                                    std::to_string(f.size()) + " dims, expected " +
                                    std::to_string(dim));

    FeatureStack s;
    s.rows.resize(6, dim);
    s.region_ids.assign(kAllRegions.begin(), kAllRegions.end());
    s.encoder_id = encoder_id;
    s.source = source;
    for (Index i = 0; i < 6; ++i) s.rows.row(i) = features.at(kAllRegions[i]).transpose();
    return s;
}

FeatureStack subset_stack(const FeatureStack& stack, const std::vector<RegionId>& regions) {
    if (regions.empty()) throw EmptySubset();
    const std::vector<RegionId> wanted = canonical_regions(regions);

    std::vector<Index> row_of;
    for (RegionId r : wanted) {
        auto it = std::find(stack.region_ids.begin(), stack.region_ids.end(), r);
        if (it == stack.region_ids.end()) throw UnknownRegion(std::string(region_name(r)));
        row_of.push_back(it - stack.region_ids.begin());
    }

    FeatureStack out;
    out.rows.resize(static_cast<Index>(wanted.size()), stack.dim());
    out.region_ids = wanted;
    out.encoder_id = stack.encoder_id;
    out.source = stack.source;
    for (std::size_t i = 0; i < wanted.size(); ++i) out.rows.row(static_cast<Index>(i)) = stack.rows.row(row_of[i]);
    return out;
}

}  // namespace f2p
