#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace f2p {

// Interleaved RGB, values in [0,1] for decoded images. Plain storage; stages
// that normalize (see preprocess) reuse it with values outside [0,1].
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;  // size = width * height * 3

    Image() = default;
    Image(int w, int h, float fill = 0.0f)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

    float& at(int x, int y, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    float at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

// Dispatches on extension: .png, .ppm (P6). Throws ImageUnreadable.
Image load_image(const std::filesystem::path& path);

// 8-bit RGB PNG / binary PPM; values clamped to [0,1] and rounded to 255ths.
void save_png(const Image& img, const std::filesystem::path& path);
void save_ppm(const Image& img, const std::filesystem::path& path);

// Axis-aligned integer pixel window [x0,x1] x [y0,y1], inclusive bounds.
Image crop_window(const Image& img, int x0, int y0, int x1, int y1);

// Deterministic bilinear resize (half-pixel centers, no antialias filter).
// Returns the input untouched when the size already matches, so a same-size
// "resize" is bit-exact.
Image bilinear_resize(const Image& img, int out_width, int out_height);

bool all_finite(const Image& img);

}  // namespace f2p
