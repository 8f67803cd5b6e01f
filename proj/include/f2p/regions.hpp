#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "f2p/image.hpp"
#include "f2p/landmarks.hpp"
#include "f2p/types.hpp"

namespace f2p {

// Axis-aligned box with inclusive float bounds, pixel coordinates.
struct BoxF {
    float x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    float width() const { return x1 - x0; }
    float height() const { return y1 - y0; }
    float area() const { return width() * height(); }
    bool contains(float x, float y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
    bool operator==(const BoxF&) const = default;
};

struct CropOptions {
    float face_pad = 0.10f;    // fraction of max(box w, h) added on every side
    float level3_pad = 0.25f;
    int out_size = 224;
};

// Tight min/max box over a region's landmark group; Frame spans the image.
BoxF landmark_bbox(const LandmarkSet& lm, RegionId region);

BoxF pad_box(const BoxF& box, float pad_fraction);

BoxF clamp_box(const BoxF& box, int image_width, int image_height);

struct RegionBoxes {
    std::map<RegionId, BoxF> boxes;       // padded, pre-clamp source boxes
    std::vector<RegionId> fallbacks;      // regions rescued by the face sub-window rule
};

// Padded pre-clamp source boxes for all six regions. A zero-area raw box
// falls back to a fixed-fraction sub-window of the padded face box (eyes:
// upper corners; nose: center; lips: lower center); a zero-area face box has
// no fallback and throws DegenerateRegion(Face).
RegionBoxes region_boxes(const LandmarkSet& lm, const CropOptions& opt = {});

// The six aligned crops of one frame, out_size x out_size each, values [0,1].
struct RegionSet {
    std::map<RegionId, Image> crops;
    StackKey source;
    std::string landmark_provenance;
    std::vector<RegionId> fallback_regions;
};

// Crop + bilinear-resize every region. Fallback regions are logged (warn).
RegionSet crop_regions(const Image& image, const LandmarkSet& lm, const CropOptions& opt = {},
                       const StackKey& source = {});

// Per-channel (x - mean) / std with encoder-declared constants.
// Throws NonFiniteInput; std must be positive.
Image preprocess(const Image& crop, const std::array<float, 3>& mean,
                 const std::array<float, 3>& stdev);

}  // namespace f2p
