#include "specmark/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "specmark/errors.hpp"

namespace specmark {

Image::Image(int h, int w, int c, double fill) : height(h), width(w), channels(c) {
    if (h <= 0 || w <= 0 || (c != 1 && c != 3))
        throw config_error("image dimensions must be positive with 1 or 3 channels");
    samples.assign(static_cast<size_t>(h) * w * c, fill);
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

double round_half_away(double v) {
    return v < 0.0 ? std::ceil(v - 0.5) : std::floor(v + 0.5);
}

}  // namespace

Image load_image(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw io_error("cannot open image file: " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw io_error("not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw io_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw io_error("libpng init failed");
    }

    std::vector<png_byte> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("failed to decode PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_RGBA || color == PNG_COLOR_TYPE_GA ||
        png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("PNG with alpha channel is not supported: " + path);
    }

    // Normalize palette and sub-byte gray to plain 8-bit samples.
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_strip_16(png);
    png_read_update_info(png, info);

    color = png_get_color_type(png, info);
    int ch = (color == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
    size_t rowbytes = png_get_rowbytes(png, info);

    data.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(static_cast<int>(h), static_cast<int>(w), ch);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < ch; ++c)
                img.at(c, y, x) = static_cast<double>(data[y * rowbytes + static_cast<size_t>(x) * ch + c]);
    return img;
}

void save_image(const Image& img, const std::string& path) {
    if (img.height <= 0 || img.width <= 0 || (img.channels != 1 && img.channels != 3))
        throw config_error("cannot save empty or malformed image");

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw io_error("cannot open file for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw io_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw io_error("libpng init failed");
    }

    std::vector<png_byte> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw io_error("failed to encode PNG: " + path);
    }

    png_init_io(png, fp.get());
    int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, 8, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    size_t rowbytes = static_cast<size_t>(img.width) * img.channels;
    data.resize(rowbytes * img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double v = round_half_away(img.at(c, y, x));
                if (v < 0.0) v = 0.0;
                if (v > 255.0) v = 255.0;
                data[y * rowbytes + static_cast<size_t>(x) * img.channels + c] =
                    static_cast<png_byte>(v);
            }

    rows.resize(img.height);
    for (int y = 0; y < img.height; ++y) rows[y] = data.data() + y * rowbytes;
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void clamp_samples(Image& img) {
    for (double& v : img.samples) {
        if (v < 0.0) v = 0.0;
        else if (v > 255.0) v = 255.0;
    }
}

Image quantized(const Image& img) {
    Image out = img;
    for (double& v : out.samples) {
        v = round_half_away(v);
        if (v < 0.0) v = 0.0;
        else if (v > 255.0) v = 255.0;
    }
    return out;
}

}  // namespace specmark
