#include "f2p/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "f2p/errors.hpp"
#include "f2p/log.hpp"

namespace f2p {

BoxF landmark_bbox(const LandmarkSet& lm, RegionId region) {
    if (region == RegionId::Frame)
        return BoxF{0.0f, 0.0f, static_cast<float>(lm.image_width - 1),
                    static_cast<float>(lm.image_height - 1)};

    const auto [lo, hi] = landmark_range(region);
    BoxF box{lm.points[lo].x(), lm.points[lo].y(), lm.points[lo].x(), lm.points[lo].y()};
    for (int i = lo + 1; i <= hi; ++i) {
        box.x0 = std::min(box.x0, lm.points[i].x());
        box.y0 = std::min(box.y0, lm.points[i].y());
        box.x1 = std::max(box.x1, lm.points[i].x());
        box.y1 = std::max(box.y1, lm.points[i].y());
    }
    return box;
}

BoxF pad_box(const BoxF& box, float pad_fraction) {
    const float pad = pad_fraction * std::max(box.width(), box.height());
    return BoxF{box.x0 - pad, box.y0 - pad, box.x1 + pad, box.y1 + pad};
}

BoxF clamp_box(const BoxF& box, int image_width, int image_height) {
    const float xmax = static_cast<float>(image_width - 1);
    const float ymax = static_cast<float>(image_height - 1);
    return BoxF{std::clamp(box.x0, 0.0f, xmax), std::clamp(box.y0, 0.0f, ymax),
                std::clamp(box.x1, 0.0f, xmax), std::clamp(box.y1, 0.0f, ymax)};
}

namespace {

bool degenerate(const BoxF& box) { return box.width() <= 0.0f || box.height() <= 0.0f; }

BoxF face_subwindow(const BoxF& face, RegionId region) {
    const float w = face.width(), h = face.height();
    switch (region) {
        case RegionId::LeftEye:
            return BoxF{face.x0, face.y0, face.x0 + w / 3, face.y0 + h / 3};
        case RegionId::RightEye:
            return BoxF{face.x1 - w / 3, face.y0, face.x1, face.y0 + h / 3};
        case RegionId::Nose:
            return BoxF{face.x0 + w / 3, face.y0 + h / 3, face.x1 - w / 3, face.y1 - h / 3};
        case RegionId::Lips:
            return BoxF{face.x0 + w / 4, face.y1 - h / 3, face.x1 - w / 4, face.y1};
        default:
            throw DegenerateRegion(region);
    }
}

}  // namespace

RegionBoxes region_boxes(const LandmarkSet& lm, const CropOptions& opt) {
    RegionBoxes out;
    out.boxes[RegionId::Frame] = landmark_bbox(lm, RegionId::Frame);

    const BoxF face_raw = landmark_bbox(lm, RegionId::Face);
    if (degenerate(face_raw)) throw DegenerateRegion(RegionId::Face);
    const BoxF face = pad_box(face_raw, opt.face_pad);
    out.boxes[RegionId::Face] = face;

    for (RegionId r : {RegionId::LeftEye, RegionId::RightEye, RegionId::Lips, RegionId::Nose}) {
        const BoxF raw = landmark_bbox(lm, r);
        if (degenerate(raw)) {
            out.boxes[r] = face_subwindow(face, r);
            out.fallbacks.push_back(r);
        } else {
            out.boxes[r] = pad_box(raw, opt.level3_pad);
        }
    }
    return out;
}

RegionSet crop_regions(const Image& image, const LandmarkSet& lm, const CropOptions& opt,
                       const StackKey& source) {
    if (lm.image_width != image.width || lm.image_height != image.height)
        throw ShapeMismatch("landmark set belongs to a different image size");

    RegionBoxes rb = region_boxes(lm, opt);
    for (RegionId r : rb.fallbacks)
        log_warn("degenerate " + std::string(region_name(r)) + " box for " + source.video_id +
                 "/" + std::to_string(source.frame_index) + ", using face sub-window");

    RegionSet set;
    set.source = source;
    set.landmark_provenance = lm.detector_id;
    set.fallback_regions = rb.fallbacks;
    for (const auto& [region, box] : rb.boxes) {
        const BoxF c = clamp_box(box, image.width, image.height);
        const int x0 = static_cast<int>(std::floor(c.x0));
        const int y0 = static_cast<int>(std::floor(c.y0));
        const int x1 = static_cast<int>(std::ceil(c.x1));
        const int y1 = static_cast<int>(std::ceil(c.y1));
        Image window = crop_window(image, x0, y0, x1, y1);
        set.crops[region] = bilinear_resize(window, opt.out_size, opt.out_size);
    }
    return set;
}

Image preprocess(const Image& crop, const std::array<float, 3>& mean,
                 const std::array<float, 3>& stdev) {
    if (!all_finite(crop)) throw NonFiniteInput();
    for (float s : stdev)
        if (!(s > 0.0f)) throw std::invalid_argument("preprocess: std must be positive");

    Image out = crop;
    const std::size_t n = out.pixels.size() / 3;
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c)
            out.pixels[i * 3 + c] = (out.pixels[i * 3 + c] - mean[c]) / stdev[c];
    return out;
}

}  // namespace f2p
