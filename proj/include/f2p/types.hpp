#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace f2p {

// Dense algebra aliases. Matrices are row-major so that a flattened view of a
// k x D feature stack walks region rows in order, which is also the on-disk
// payload order.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixF = Matrix<float>;
using MatrixD = Matrix<double>;
using VectorF = Vector<float>;
using VectorD = Vector<double>;
using Index = Eigen::Index;

// The six facial regions, in canonical stack order (coarse to fine).
enum class RegionId : std::uint8_t {
    Frame = 0,
    Face = 1,
    LeftEye = 2,
    RightEye = 3,
    Lips = 4,
    Nose = 5,
};

inline constexpr std::array<RegionId, 6> kAllRegions = {
    RegionId::Frame,    RegionId::Face, RegionId::LeftEye,
    RegionId::RightEye, RegionId::Lips, RegionId::Nose,
};

inline constexpr int region_level(RegionId r) {
    switch (r) {
        case RegionId::Frame: return 1;
        case RegionId::Face: return 2;
        default: return 3;
    }
}

std::string_view region_name(RegionId r);
std::optional<RegionId> region_from_name(std::string_view name);

// Regions belonging to a set of levels (subset of {1,2,3}), canonical order.
std::vector<RegionId> regions_for_levels(const std::vector<int>& levels);

// Sorts into canonical stack order and drops duplicates.
std::vector<RegionId> canonical_regions(std::vector<RegionId> regions);

std::string regions_to_string(const std::vector<RegionId>& regions);
std::vector<RegionId> regions_from_string(std::string_view csv);

// Identity of the frame (or clip) a stack was computed from.
struct StackKey {
    std::string dataset_id;
    std::string video_id;
    std::int64_t frame_index = 0;

    bool operator==(const StackKey&) const = default;
};

}  // namespace f2p
