#include "f2p/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <png.h>

#include "f2p/errors.hpp"

namespace f2p {

namespace {

constexpr float kInv255 = 1.0f / 255.0f;

std::uint8_t to_byte(float v) {
    const float c = std::clamp(v, 0.0f, 1.0f);
    return static_cast<std::uint8_t>(std::lround(c * 255.0f));
}

Image load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageUnreadable(path.string());
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (!in || magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
        throw ImageUnreadable(path.string());
    in.get();  // single whitespace after header
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw ImageUnreadable(path.string());
    Image img(w, h);
    for (std::size_t i = 0; i < raw.size(); ++i) img.pixels[i] = raw[i] * kInv255;
    return img;
}

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

Image load_png(const std::filesystem::path& path) {
    PngReadCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw ImageUnreadable(path.string());
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw ImageUnreadable(path.string());
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw ImageUnreadable(path.string());
    if (setjmp(png_jmpbuf(ctx.png))) throw ImageUnreadable(path.string());

    png_init_io(ctx.png, ctx.fp);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const png_byte color = png_get_color_type(ctx.png, ctx.info);
    const png_byte depth = png_get_bit_depth(ctx.png, ctx.info);

    // Normalize everything to 8-bit RGB.
    if (depth == 16) png_set_strip_16(ctx.png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(ctx.png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    Image img(static_cast<int>(w), static_cast<int>(h));
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * 3);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(ctx.png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w * 3; ++x)
            img.pixels[static_cast<std::size_t>(y) * w * 3 + x] = row[x] * kInv255;
    }
    png_read_end(ctx.png, nullptr);
    return img;
}

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

}  // namespace

Image load_image(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".ppm") return load_ppm(path);
    if (ext == ".png") return load_png(path);
    throw ImageUnreadable(path.string() + " (unsupported extension)");
}

void save_png(const Image& img, const std::filesystem::path& path) {
    PngWriteCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) throw ImageUnreadable(path.string());
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw ImageUnreadable(path.string());
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw ImageUnreadable(path.string());
    if (setjmp(png_jmpbuf(ctx.png))) throw ImageUnreadable(path.string());

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < row.size(); ++x)
            row[x] = to_byte(img.pixels[static_cast<std::size_t>(y) * img.width * 3 + x]);
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);
}

void save_ppm(const Image& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageUnreadable(path.string());
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> raw(img.pixels.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = to_byte(img.pixels[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

Image crop_window(const Image& img, int x0, int y0, int x1, int y1) {
    x0 = std::clamp(x0, 0, img.width - 1);
    x1 = std::clamp(x1, 0, img.width - 1);
    y0 = std::clamp(y0, 0, img.height - 1);
    y1 = std::clamp(y1, 0, img.height - 1);
    Image out(x1 - x0 + 1, y1 - y0 + 1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            for (int c = 0; c < 3; ++c) out.at(x - x0, y - y0, c) = img.at(x, y, c);
    return out;
}

Image bilinear_resize(const Image& img, int out_width, int out_height) {
    if (img.width == out_width && img.height == out_height) return img;

    Image out(out_width, out_height);
    const float sx = static_cast<float>(img.width) / out_width;
    const float sy = static_cast<float>(img.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        const float fy = std::max(0.0f, (y + 0.5f) * sy - 0.5f);
        const int y0 = std::min(static_cast<int>(fy), img.height - 1);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const float wy = fy - static_cast<float>(y0);
        for (int x = 0; x < out_width; ++x) {
            const float fx = std::max(0.0f, (x + 0.5f) * sx - 0.5f);
            const int x0 = std::min(static_cast<int>(fx), img.width - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const float wx = fx - static_cast<float>(x0);
            for (int c = 0; c < 3; ++c) {
                const float top = img.at(x0, y0, c) * (1.0f - wx) + img.at(x1, y0, c) * wx;
                const float bot = img.at(x0, y1, c) * (1.0f - wx) + img.at(x1, y1, c) * wx;
                out.at(x, y, c) = top * (1.0f - wy) + bot * wy;
            }
        }
    }
    return out;
}

bool all_finite(const Image& img) {
    for (float v : img.pixels)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace f2p
