#include "specmark/attacks.hpp"

#include <jpeglib.h>

#include <cmath>
#include <csetjmp>
#include <cstring>
#include <random>
#include <vector>

#include "specmark/errors.hpp"

namespace specmark {

namespace {

constexpr double kPi = 3.14159265358979323846;

int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

double sample_bilinear(const Image& img, int c, double y, double x) {
    const int y0 = static_cast<int>(std::floor(y));
    const int x0 = static_cast<int>(std::floor(x));
    const double fy = y - y0, fx = x - x0;
    const int ya = reflect(y0, img.height), yb = reflect(y0 + 1, img.height);
    const int xa = reflect(x0, img.width), xb = reflect(x0 + 1, img.width);
    return (1 - fy) * ((1 - fx) * img.at(c, ya, xa) + fx * img.at(c, ya, xb)) +
           fy * ((1 - fx) * img.at(c, yb, xa) + fx * img.at(c, yb, xb));
}

void check_strength(double s) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0)
        throw config_error("attack strength must lie in [0, 1]");
}

struct JpegErr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_err_exit(j_common_ptr cinfo) {
    std::longjmp(reinterpret_cast<JpegErr*>(cinfo->err)->jump, 1);
}

}  // namespace

AttackKind attack_kind_from_name(const std::string& name) {
    if (name == "none") return AttackKind::none;
    if (name == "rotation") return AttackKind::rotation;
    if (name == "crop") return AttackKind::crop;
    if (name == "brightness") return AttackKind::brightness;
    if (name == "contrast") return AttackKind::contrast;
    if (name == "blur") return AttackKind::blur;
    if (name == "noise") return AttackKind::noise;
    if (name == "jpeg") return AttackKind::jpeg;
    if (name == "geo") return AttackKind::geo;
    if (name == "deg") return AttackKind::deg;
    if (name == "combine") return AttackKind::combine;
    if (name == "flip_h") return AttackKind::flip_h;
    if (name == "flip_v") return AttackKind::flip_v;
    if (name == "rescale") return AttackKind::rescale;
    if (name == "saturation") return AttackKind::saturation;
    throw config_error("unknown attack kind: '" + name + "'");
}

std::string to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::none: return "none";
        case AttackKind::rotation: return "rotation";
        case AttackKind::crop: return "crop";
        case AttackKind::brightness: return "brightness";
        case AttackKind::contrast: return "contrast";
        case AttackKind::blur: return "blur";
        case AttackKind::noise: return "noise";
        case AttackKind::jpeg: return "jpeg";
        case AttackKind::geo: return "geo";
        case AttackKind::deg: return "deg";
        case AttackKind::combine: return "combine";
        case AttackKind::flip_h: return "flip_h";
        case AttackKind::flip_v: return "flip_v";
        case AttackKind::rescale: return "rescale";
        case AttackKind::saturation: return "saturation";
    }
    throw config_error("unhandled attack kind");
}

AttackParams attack_params(AttackKind kind, double x) {
    check_strength(x);
    AttackParams p;
    switch (kind) {
        case AttackKind::rotation:
            p.rotation_deg = 9.0 + x * (45.0 - 9.0);
            break;
        case AttackKind::crop:
            p.crop_ratio = 0.10 + x * (0.50 - 0.10);
            break;
        case AttackKind::brightness:
        case AttackKind::contrast:
            p.gain = 1.0 + (0.20 + x * (1.00 - 0.20));
            break;
        case AttackKind::blur:
            p.kernel_px = 4.0 + x * (20.0 - 4.0);
            p.gauss_sigma = p.kernel_px / 4.0;
            break;
        case AttackKind::noise:
            p.noise_sigma = 0.02 + x * (0.10 - 0.02);
            break;
        case AttackKind::jpeg:
            p.jpeg_quality = static_cast<int>(std::lround(90.0 - x * (90.0 - 10.0)));
            break;
        case AttackKind::geo: {
            AttackParams r = attack_params(AttackKind::rotation, x);
            AttackParams c = attack_params(AttackKind::crop, x);
            p.rotation_deg = r.rotation_deg;
            p.crop_ratio = c.crop_ratio;
            break;
        }
        case AttackKind::deg: {
            AttackParams b = attack_params(AttackKind::blur, x);
            AttackParams n = attack_params(AttackKind::noise, x);
            AttackParams j = attack_params(AttackKind::jpeg, x);
            p.kernel_px = b.kernel_px;
            p.gauss_sigma = b.gauss_sigma;
            p.noise_sigma = n.noise_sigma;
            p.jpeg_quality = j.jpeg_quality;
            break;
        }
        case AttackKind::combine: {
            AttackParams g = attack_params(AttackKind::geo, x);
            AttackParams d = attack_params(AttackKind::deg, x);
            p.rotation_deg = g.rotation_deg;
            p.crop_ratio = g.crop_ratio;
            p.kernel_px = d.kernel_px;
            p.gauss_sigma = d.gauss_sigma;
            p.noise_sigma = d.noise_sigma;
            p.jpeg_quality = d.jpeg_quality;
            break;
        }
        case AttackKind::none:
        case AttackKind::flip_h:
        case AttackKind::flip_v:
        case AttackKind::rescale:
        case AttackKind::saturation:
            break;
    }
    return p;
}

Image rotate_image(const Image& img, double degrees) {
    const double th = degrees * kPi / 180.0;
    const double ct = std::cos(th), st = std::sin(th);
    const double cy = (img.height - 1) / 2.0, cx = (img.width - 1) / 2.0;
    Image out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                const double dy = y - cy, dx = x - cx;
                const double sy = cy + dy * ct - dx * st;
                const double sx = cx + dy * st + dx * ct;
                out.at(c, y, x) = sample_bilinear(img, c, sy, sx);
            }
    clamp_samples(out);
    return out;
}

Image resize_bilinear(const Image& img, int new_h, int new_w) {
    if (new_h < 1 || new_w < 1) throw config_error("resize target must be at least 1x1");
    Image out(new_h, new_w, img.channels);
    const double ry = static_cast<double>(img.height) / new_h;
    const double rx = static_cast<double>(img.width) / new_w;
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < new_h; ++y) {
            const double sy = (y + 0.5) * ry - 0.5;
            for (int x = 0; x < new_w; ++x) {
                const double sx = (x + 0.5) * rx - 0.5;
                out.at(c, y, x) = sample_bilinear(img, c, sy, sx);
            }
        }
    clamp_samples(out);
    return out;
}

Image central_crop_resize(const Image& img, double removed_area_ratio) {
    if (removed_area_ratio < 0.0 || removed_area_ratio >= 1.0)
        throw config_error("crop ratio must lie in [0, 1)");
    const double keep = std::sqrt(1.0 - removed_area_ratio);
    const int ch = std::max(1, static_cast<int>(std::lround(img.height * keep)));
    const int cw = std::max(1, static_cast<int>(std::lround(img.width * keep)));
    const int y0 = (img.height - ch) / 2;
    const int x0 = (img.width - cw) / 2;
    Image cropped(ch, cw, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < ch; ++y)
            for (int x = 0; x < cw; ++x) cropped.at(c, y, x) = img.at(c, y0 + y, x0 + x);
    return resize_bilinear(cropped, img.height, img.width);
}

Image gaussian_blur(const Image& img, double kernel_px) {
    if (kernel_px <= 0.0) throw config_error("blur kernel extent must be positive");
    const double sigma = kernel_px / 4.0;
    const int half = std::max(1, static_cast<int>(std::floor(kernel_px / 2.0)));
    std::vector<double> taps(2 * half + 1);
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        taps[i + half] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        sum += taps[i + half];
    }
    for (double& t : taps) t /= sum;

    Image tmp(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                double s = 0.0;
                for (int i = -half; i <= half; ++i)
                    s += taps[i + half] * img.at(c, y, reflect(x + i, img.width));
                tmp.at(c, y, x) = s;
            }
    Image out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                double s = 0.0;
                for (int i = -half; i <= half; ++i)
                    s += taps[i + half] * tmp.at(c, reflect(y + i, img.height), x);
                out.at(c, y, x) = s;
            }
    clamp_samples(out);
    return out;
}

Image add_gaussian_noise(const Image& img, double sigma_255, uint64_t seed) {
    if (sigma_255 < 0.0) throw config_error("noise sigma must be >= 0");
    std::mt19937_64 g(seed);
    auto unit = [&g]() {
        return (static_cast<double>(g() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    };
    Image out = img;
    bool have_spare = false;
    double spare = 0.0;
    for (double& v : out.samples) {
        double z;
        if (have_spare) {
            z = spare;
            have_spare = false;
        } else {
            const double u1 = unit(), u2 = unit();
            const double r = std::sqrt(-2.0 * std::log(u1));
            z = r * std::cos(2.0 * kPi * u2);
            spare = r * std::sin(2.0 * kPi * u2);
            have_spare = true;
        }
        v += sigma_255 * z;
    }
    clamp_samples(out);
    return out;
}

Image jpeg_roundtrip(const Image& img, int quality) {
    if (quality < 1 || quality > 100) throw config_error("jpeg quality must lie in [1, 100]");

    Image q = quantized(img);
    const int h = q.height, w = q.width, ch = q.channels;
    std::vector<unsigned char> interleaved(static_cast<size_t>(h) * w * ch);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c)
                interleaved[(static_cast<size_t>(y) * w + x) * ch + c] =
                    static_cast<unsigned char>(q.at(c, y, x));

    JpegErr err{};
    unsigned char* buf = nullptr;
    unsigned long buflen = 0;

    // compress
    {
        jpeg_compress_struct cinfo{};
        cinfo.err = jpeg_std_error(&err.pub);
        err.pub.error_exit = jpeg_err_exit;
        if (setjmp(err.jump)) {
            jpeg_destroy_compress(&cinfo);
            if (buf) free(buf);
            throw io_error("jpeg encoding failed");
        }
        jpeg_create_compress(&cinfo);
        jpeg_mem_dest(&cinfo, &buf, &buflen);
        cinfo.image_width = w;
        cinfo.image_height = h;
        cinfo.input_components = ch;
        cinfo.in_color_space = ch == 1 ? JCS_GRAYSCALE : JCS_RGB;
        jpeg_set_defaults(&cinfo);
        jpeg_set_quality(&cinfo, quality, TRUE);
        jpeg_start_compress(&cinfo, TRUE);
        const size_t stride = static_cast<size_t>(w) * ch;
        while (cinfo.next_scanline < cinfo.image_height) {
            JSAMPROW row = interleaved.data() + cinfo.next_scanline * stride;
            jpeg_write_scanlines(&cinfo, &row, 1);
        }
        jpeg_finish_compress(&cinfo);
        jpeg_destroy_compress(&cinfo);
    }

    // decompress
    Image out(h, w, ch);
    {
        jpeg_decompress_struct dinfo{};
        dinfo.err = jpeg_std_error(&err.pub);
        err.pub.error_exit = jpeg_err_exit;
        if (setjmp(err.jump)) {
            jpeg_destroy_decompress(&dinfo);
            free(buf);
            throw io_error("jpeg decoding failed");
        }
        jpeg_create_decompress(&dinfo);
        jpeg_mem_src(&dinfo, buf, buflen);
        jpeg_read_header(&dinfo, TRUE);
        dinfo.out_color_space = ch == 1 ? JCS_GRAYSCALE : JCS_RGB;
        jpeg_start_decompress(&dinfo);
        std::vector<unsigned char> row(static_cast<size_t>(w) * ch);
        int y = 0;
        while (dinfo.output_scanline < dinfo.output_height) {
            JSAMPROW rp = row.data();
            jpeg_read_scanlines(&dinfo, &rp, 1);
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < ch; ++c)
                    out.at(c, y, x) = static_cast<double>(row[static_cast<size_t>(x) * ch + c]);
            ++y;
        }
        jpeg_finish_decompress(&dinfo);
        jpeg_destroy_decompress(&dinfo);
    }
    free(buf);
    return out;
}

Image flip_horizontal(const Image& img) {
    Image out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
    return out;
}

Image flip_vertical(const Image& img) {
    Image out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) out.at(c, y, x) = img.at(c, img.height - 1 - y, x);
    return out;
}

Image adjust_brightness(const Image& img, double gain) {
    Image out = img;
    for (double& v : out.samples) v *= gain;
    clamp_samples(out);
    return out;
}

Image adjust_contrast(const Image& img, double gain) {
    Image out = img;
    const size_t plane = static_cast<size_t>(img.height) * img.width;
    for (int c = 0; c < img.channels; ++c) {
        double mean = 0.0;
        for (size_t i = 0; i < plane; ++i) mean += img.samples[c * plane + i];
        mean /= static_cast<double>(plane);
        for (size_t i = 0; i < plane; ++i)
            out.samples[c * plane + i] = mean + (img.samples[c * plane + i] - mean) * gain;
    }
    clamp_samples(out);
    return out;
}

Image boost_saturation(const Image& img, double factor) {
    if (img.channels != 3) return img;
    Image out = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const double gray =
                0.299 * img.at(0, y, x) + 0.587 * img.at(1, y, x) + 0.114 * img.at(2, y, x);
            for (int c = 0; c < 3; ++c)
                out.at(c, y, x) = gray + (img.at(c, y, x) - gray) * factor;
        }
    clamp_samples(out);
    return out;
}

Image apply_attack(const Image& img, const AttackSpec& spec) {
    check_strength(spec.strength);
    const AttackParams p = attack_params(spec.kind, spec.strength);
    switch (spec.kind) {
        case AttackKind::none:
            return img;
        case AttackKind::rotation:
            return rotate_image(img, p.rotation_deg);
        case AttackKind::crop:
            return central_crop_resize(img, p.crop_ratio);
        case AttackKind::brightness:
            return adjust_brightness(img, p.gain);
        case AttackKind::contrast:
            return adjust_contrast(img, p.gain);
        case AttackKind::blur:
            return gaussian_blur(img, p.kernel_px);
        case AttackKind::noise:
            return add_gaussian_noise(img, p.noise_sigma * 255.0, spec.seed);
        case AttackKind::jpeg:
            return jpeg_roundtrip(img, p.jpeg_quality);
        case AttackKind::geo: {
            Image r = rotate_image(img, p.rotation_deg);
            return central_crop_resize(r, p.crop_ratio);
        }
        case AttackKind::deg: {
            Image b = gaussian_blur(img, p.kernel_px);
            Image n = add_gaussian_noise(b, p.noise_sigma * 255.0, spec.seed);
            return jpeg_roundtrip(n, p.jpeg_quality);
        }
        case AttackKind::combine: {
            Image g = central_crop_resize(rotate_image(img, p.rotation_deg), p.crop_ratio);
            Image b = gaussian_blur(g, p.kernel_px);
            Image n = add_gaussian_noise(b, p.noise_sigma * 255.0, spec.seed);
            return jpeg_roundtrip(n, p.jpeg_quality);
        }
        case AttackKind::flip_h:
            return flip_horizontal(img);
        case AttackKind::flip_v:
            return flip_vertical(img);
        case AttackKind::rescale: {
            const int sh = std::max(1, static_cast<int>(std::lround(img.height * 0.75)));
            const int sw = std::max(1, static_cast<int>(std::lround(img.width * 0.75)));
            return resize_bilinear(resize_bilinear(img, sh, sw), img.height, img.width);
        }
        case AttackKind::saturation:
            return boost_saturation(img, 1.4);
    }
    throw config_error("unhandled attack kind");
}

}  // namespace specmark
