#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "f2p/image.hpp"
#include "f2p/types.hpp"

namespace f2p {

inline constexpr int kNumLandmarks = 81;

using Point2 = Eigen::Vector2f;
using LandmarkArray = std::array<Point2, kNumLandmarks>;

// 81-point layout: the 68 iBUG-style semantic groups plus 13 forehead points.
// Inclusive index ranges.
inline constexpr std::pair<int, int> kJawRange{0, 16};
inline constexpr std::pair<int, int> kNoseRange{27, 35};
inline constexpr std::pair<int, int> kLeftEyeRange{36, 41};
inline constexpr std::pair<int, int> kRightEyeRange{42, 47};
inline constexpr std::pair<int, int> kLipsRange{48, 67};
inline constexpr std::pair<int, int> kForeheadRange{68, 80};
inline constexpr std::pair<int, int> kFaceRange{0, 80};

// Landmark index range backing a region's box. Frame has none (whole image).
std::pair<int, int> landmark_range(RegionId region);

struct LandmarkSet {
    LandmarkArray points;
    int image_width = 0;
    int image_height = 0;
    std::string detector_id;
};

struct DetectedFace {
    float x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // detection box, pixels
    LandmarkArray points;

    float area() const { return (x1 - x0) * (y1 - y0); }
};

// Pluggable 81-point landmark source. Production adapters for external
// detectors implement this; the pipeline only needs the 81-point contract.
class LandmarkProvider {
public:
    virtual ~LandmarkProvider() = default;
    virtual std::string id() const = 0;
    virtual std::vector<DetectedFace> detect(const Image& image) = 0;
};

// Canonical face layout in the unit square; scaled into detection boxes.
const LandmarkArray& canonical_face_template();

LandmarkArray template_in_box(float x0, float y0, float x1, float y1);

// Deterministic detector for synthetic fixtures: treats connected bright
// blobs (mean channel > 0.5) as faces and lays the canonical template into
// each blob's bounding box. Blobs smaller than 8x8 are ignored.
class BrightRegionProvider : public LandmarkProvider {
public:
    std::string id() const override { return "synthetic"; }
    std::vector<DetectedFace> detect(const Image& image) override;
};

// Always reports the faces it was given. Test stub.
class FixedFaceProvider : public LandmarkProvider {
public:
    explicit FixedFaceProvider(std::vector<DetectedFace> faces, std::string id = "fixed")
        : faces_(std::move(faces)), id_(std::move(id)) {}
    std::string id() const override { return id_; }
    std::vector<DetectedFace> detect(const Image&) override { return faces_; }

private:
    std::vector<DetectedFace> faces_;
    std::string id_;
};

// Registered provider ids: "synthetic". Throws BackendFailure on unknown id.
std::unique_ptr<LandmarkProvider> make_landmark_provider(const std::string& id);

// Landmarks of the largest detected face, clamped into the image bounds.
// Throws ShapeMismatch (image below 64px), NoFaceDetected.
LandmarkSet detect_landmarks(const Image& image, LandmarkProvider& provider);

}  // namespace f2p
