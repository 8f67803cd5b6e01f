#include "f2p/types.hpp"

#include <algorithm>

#include "f2p/errors.hpp"

namespace f2p {

std::string_view region_name(RegionId r) {
    switch (r) {
        case RegionId::Frame: return "frame";
        case RegionId::Face: return "face";
        case RegionId::LeftEye: return "left_eye";
        case RegionId::RightEye: return "right_eye";
        case RegionId::Lips: return "lips";
        case RegionId::Nose: return "nose";
    }
    return "?";
}

std::optional<RegionId> region_from_name(std::string_view name) {
    for (RegionId r : kAllRegions)
        if (region_name(r) == name) return r;
    return std::nullopt;
}

std::vector<RegionId> regions_for_levels(const std::vector<int>& levels) {
    std::vector<RegionId> out;
    for (RegionId r : kAllRegions)
        if (std::find(levels.begin(), levels.end(), region_level(r)) != levels.end())
            out.push_back(r);
    return out;
}

std::vector<RegionId> canonical_regions(std::vector<RegionId> regions) {
    std::sort(regions.begin(), regions.end(),
              [](RegionId a, RegionId b) { return static_cast<int>(a) < static_cast<int>(b); });
    regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
    return regions;
}

std::string regions_to_string(const std::vector<RegionId>& regions) {
    std::string out;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (i) out += ',';
        out += region_name(regions[i]);
    }
    return out;
}

std::vector<RegionId> regions_from_string(std::string_view csv) {
    std::vector<RegionId> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string_view::npos) next = csv.size();
        std::string_view token = csv.substr(pos, next - pos);
        if (!token.empty()) {
            auto r = region_from_name(token);
            if (!r) throw UnknownRegion(std::string(token));
            out.push_back(*r);
        }
        pos = next + 1;
    }
    return out;
}

}  // namespace f2p
