#include "f2p/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "f2p/errors.hpp"

namespace f2p {

std::pair<int, int> landmark_range(RegionId region) {
    switch (region) {
        case RegionId::Face: return kFaceRange;
        case RegionId::LeftEye: return kLeftEyeRange;
        case RegionId::RightEye: return kRightEyeRange;
        case RegionId::Lips: return kLipsRange;
        case RegionId::Nose: return kNoseRange;
        case RegionId::Frame: break;
    }
    throw UnknownRegion("frame region has no landmark group");
}

namespace {

constexpr float kPi = 3.14159265358979323846f;

LandmarkArray build_template() {
    LandmarkArray p;
    // Jaw 0-16: lower face ellipse, left ear to right ear through the chin.
    for (int i = 0; i <= 16; ++i) {
        const float t = kPi * (1.0f - i / 16.0f);
        p[i] = {0.50f + 0.40f * std::cos(t), 0.50f + 0.42f * std::sin(t)};
    }
    // Brows 17-21 (left) and 22-26 (right): shallow arcs.
    for (int i = 0; i < 5; ++i) {
        const float t = i / 4.0f;
        const float lift = 0.03f * std::sin(kPi * t);
        p[17 + i] = {0.20f + 0.22f * t, 0.30f - lift};
        p[22 + i] = {0.58f + 0.22f * t, 0.30f - lift};
    }
    // Nose bridge 27-30 and base 31-35.
    for (int i = 0; i < 4; ++i) p[27 + i] = {0.50f, 0.36f + 0.06f * i};
    for (int i = 0; i < 5; ++i) p[31 + i] = {0.40f + 0.05f * i, 0.60f};
    // Eyes 36-41 / 42-47: six-point contours, corners at indices 0 and 3.
    const auto eye = [&](int base, float cx) {
        const float rx = 0.07f, ry = 0.030f, cy = 0.38f;
        p[base + 0] = {cx - rx, cy};
        p[base + 1] = {cx - rx * 0.45f, cy - ry};
        p[base + 2] = {cx + rx * 0.45f, cy - ry};
        p[base + 3] = {cx + rx, cy};
        p[base + 4] = {cx + rx * 0.45f, cy + ry};
        p[base + 5] = {cx - rx * 0.45f, cy + ry};
    };
    eye(36, 0.32f);
    eye(42, 0.68f);
    // Lips 48-67: outer ring of 12, inner ring of 8.
    for (int i = 0; i < 12; ++i) {
        const float t = 2.0f * kPi * i / 12.0f;
        p[48 + i] = {0.50f - 0.14f * std::cos(t), 0.72f + 0.055f * std::sin(t)};
    }
    for (int i = 0; i < 8; ++i) {
        const float t = 2.0f * kPi * i / 8.0f;
        p[60 + i] = {0.50f - 0.09f * std::cos(t), 0.72f + 0.025f * std::sin(t)};
    }
    // Forehead 68-80: dome across the top.
    for (int i = 0; i < 13; ++i) {
        const float t = i / 12.0f;
        p[68 + i] = {0.12f + 0.76f * t, 0.16f - 0.09f * std::sin(kPi * t)};
    }
    return p;
}

}  // namespace

const LandmarkArray& canonical_face_template() {
    static const LandmarkArray t = build_template();
    return t;
}

LandmarkArray template_in_box(float x0, float y0, float x1, float y1) {
    const LandmarkArray& unit = canonical_face_template();
    LandmarkArray out;
    const float w = x1 - x0, h = y1 - y0;
    for (int i = 0; i < kNumLandmarks; ++i)
        out[i] = {x0 + unit[i].x() * w, y0 + unit[i].y() * h};
    return out;
}

std::vector<DetectedFace> BrightRegionProvider::detect(const Image& image) {
    const int w = image.width, h = image.height;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const float lum = (image.at(x, y, 0) + image.at(x, y, 1) + image.at(x, y, 2)) / 3.0f;
            mask[static_cast<std::size_t>(y) * w + x] = lum > 0.5f;
        }

    std::vector<DetectedFace> faces;
    std::vector<std::uint8_t> seen(mask.size(), 0);
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            const std::size_t si = static_cast<std::size_t>(sy) * w + sx;
            if (!mask[si] || seen[si]) continue;
            int x0 = sx, x1 = sx, y0 = sy, y1 = sy;
            std::queue<std::pair<int, int>> q;
            q.push({sx, sy});
            seen[si] = 1;
            while (!q.empty()) {
                auto [x, y] = q.front();
                q.pop();
                x0 = std::min(x0, x); x1 = std::max(x1, x);
                y0 = std::min(y0, y); y1 = std::max(y1, y);
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny[k]) * w + nx[k];
                    if (mask[ni] && !seen[ni]) {
                        seen[ni] = 1;
                        q.push({nx[k], ny[k]});
                    }
                }
            }
            if (x1 - x0 + 1 < 8 || y1 - y0 + 1 < 8) continue;
            DetectedFace f;
            f.x0 = static_cast<float>(x0);
            f.y0 = static_cast<float>(y0);
            f.x1 = static_cast<float>(x1);
            f.y1 = static_cast<float>(y1);
            f.points = template_in_box(f.x0, f.y0, f.x1, f.y1);
            faces.push_back(f);
        }
    }
    return faces;
}

std::unique_ptr<LandmarkProvider> make_landmark_provider(const std::string& id) {
    if (id == "synthetic") return std::make_unique<BrightRegionProvider>();
    throw BackendFailure("no landmark provider registered as '" + id + "'");
}

LandmarkSet detect_landmarks(const Image& image, LandmarkProvider& provider) {
    if (std::min(image.width, image.height) < 64)
        throw ShapeMismatch("landmark detection needs min dimension >= 64, got " +
                            std::to_string(image.width) + "x" + std::to_string(image.height));

    std::vector<DetectedFace> faces = provider.detect(image);
    if (faces.empty()) throw NoFaceDetected();

    const DetectedFace* best = &faces.front();
    for (const DetectedFace& f : faces)
        if (f.area() > best->area()) best = &f;

    LandmarkSet lm;
    lm.points = best->points;
    lm.image_width = image.width;
    lm.image_height = image.height;
    lm.detector_id = provider.id();
    for (Point2& pt : lm.points) {
        pt.x() = std::clamp(pt.x(), 0.0f, static_cast<float>(image.width - 1));
        pt.y() = std::clamp(pt.y(), 0.0f, static_cast<float>(image.height - 1));
    }
    return lm;
}

}  // namespace f2p
