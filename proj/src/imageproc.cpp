#include "heb/imageproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace heb {

namespace {

constexpr uint8_t kPadGray = 114;

void check_tag(int tag) {
    if (tag < 1 || tag > 8) {
        throw std::invalid_argument("orientation tag " + std::to_string(tag) +
                                    " outside [1,8]");
    }
}

// dst(x, y) = src(sx, sy) per EXIF orientation semantics.
void source_coords(int tag, int x, int y, int src_w, int src_h, int& sx, int& sy) {
    switch (tag) {
        case 1: sx = x; sy = y; break;
        case 2: sx = src_w - 1 - x; sy = y; break;
        case 3: sx = src_w - 1 - x; sy = src_h - 1 - y; break;
        case 4: sx = x; sy = src_h - 1 - y; break;
        case 5: sx = y; sy = x; break;
        case 6: sx = y; sy = src_h - 1 - x; break;
        case 7: sx = src_w - 1 - y; sy = src_h - 1 - x; break;
        case 8: sx = src_w - 1 - y; sy = x; break;
        default: sx = x; sy = y; break;
    }
}

double bilinear_channel(const Raster& img, double x, double y, int c) {
    // clamp-to-edge sampling at pixel centers
    double fx = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    double fy = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    int x1 = std::min(x0 + 1, img.width - 1);
    int y1 = std::min(y0 + 1, img.height - 1);
    double ax = fx - x0;
    double ay = fy - y0;
    double top = img.at(x0, y0)[c] * (1.0 - ax) + img.at(x1, y0)[c] * ax;
    double bot = img.at(x0, y1)[c] * (1.0 - ax) + img.at(x1, y1)[c] * ax;
    return top * (1.0 - ay) + bot * ay;
}

}  // namespace

BBoxNorm AffineMap::forward(const BBoxNorm& b) const {
    double cx_px = b.cx * src_w * scale + pad_x;
    double cy_px = b.cy * src_h * scale + pad_y;
    return BBoxNorm{cx_px / target, cy_px / target,
                    b.w * src_w * scale / target, b.h * src_h * scale / target};
}

BBoxNorm AffineMap::inverse(const BBoxNorm& b) const {
    double cx_px = b.cx * target - pad_x;
    double cy_px = b.cy * target - pad_y;
    return BBoxNorm{cx_px / scale / src_w, cy_px / scale / src_h,
                    b.w * target / scale / src_w, b.h * target / scale / src_h};
}

Raster auto_orient(const Raster& src, int orientation_tag) {
    check_tag(orientation_tag);
    if (orientation_tag == 1) return src;
    bool swap_dims = orientation_tag >= 5;
    Raster dst(swap_dims ? src.height : src.width, swap_dims ? src.width : src.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < dst.height; ++y) {
        for (int x = 0; x < dst.width; ++x) {
            int sx, sy;
            source_coords(orientation_tag, x, y, src.width, src.height, sx, sy);
            const uint8_t* s = src.at(sx, sy);
            uint8_t* d = dst.at(x, y);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    return dst;
}

BBoxNorm orient_box(const BBoxNorm& b, int orientation_tag) {
    check_tag(orientation_tag);
    switch (orientation_tag) {
        case 1: return b;
        case 2: return {1.0 - b.cx, b.cy, b.w, b.h};
        case 3: return {1.0 - b.cx, 1.0 - b.cy, b.w, b.h};
        case 4: return {b.cx, 1.0 - b.cy, b.w, b.h};
        case 5: return {b.cy, b.cx, b.h, b.w};
        case 6: return {1.0 - b.cy, b.cx, b.h, b.w};
        case 7: return {1.0 - b.cy, 1.0 - b.cx, b.h, b.w};
        case 8: return {b.cy, 1.0 - b.cx, b.h, b.w};
        default: return b;
    }
}

LetterboxResult letterbox_resize(const Raster& src,
                                 const std::vector<Annotation>& annotations,
                                 int target) {
    if (src.empty()) throw std::invalid_argument("letterbox_resize: empty raster");
    LetterboxResult out;
    double scale = static_cast<double>(target) / std::max(src.width, src.height);
    out.map = AffineMap{scale,
                        (target - src.width * scale) / 2.0,
                        (target - src.height * scale) / 2.0,
                        src.width, src.height, target};

    int content_w = static_cast<int>(std::lround(src.width * scale));
    int content_h = static_cast<int>(std::lround(src.height * scale));
    int left = (target - content_w) / 2;
    int top = (target - content_h) / 2;

    out.raster = Raster(target, target, kPadGray);
    double inv_sx = static_cast<double>(src.width) / content_w;
    double inv_sy = static_cast<double>(src.height) / content_h;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < content_h; ++y) {
        double sy = (y + 0.5) * inv_sy - 0.5;
        for (int x = 0; x < content_w; ++x) {
            double sx = (x + 0.5) * inv_sx - 0.5;
            uint8_t* d = out.raster.at(left + x, top + y);
            for (int c = 0; c < 3; ++c) {
                d[c] = clamp_u8(bilinear_channel(src, sx, sy, c));
            }
        }
    }

    out.annotations.reserve(annotations.size());
    for (const auto& a : annotations) {
        out.annotations.push_back(Annotation{a.class_id, out.map.forward(a.box)});
    }
    return out;
}

Raster auto_contrast(const Raster& src, double clip_percent) {
    if (clip_percent < 0.0 || clip_percent >= 50.0) {
        throw std::invalid_argument("clip_percent must be in [0,50)");
    }
    size_t n = static_cast<size_t>(src.width) * static_cast<size_t>(src.height);
    if (n == 0) return src;
    double clip_count = clip_percent / 100.0 * static_cast<double>(n);

    Raster dst = src;
    for (int c = 0; c < 3; ++c) {
        std::array<size_t, 256> hist{};
        for (size_t i = 0; i < n; ++i) hist[src.pixels[i * 3 + static_cast<size_t>(c)]]++;

        int lo = 0, hi = 255;
        size_t acc = 0;
        for (int v = 0; v < 256; ++v) {
            acc += hist[static_cast<size_t>(v)];
            if (static_cast<double>(acc) > clip_count) { lo = v; break; }
        }
        acc = 0;
        for (int v = 255; v >= 0; --v) {
            acc += hist[static_cast<size_t>(v)];
            if (static_cast<double>(acc) > clip_count) { hi = v; break; }
        }
        if (hi <= lo) continue;  // degenerate channel, pass through

        std::array<uint8_t, 256> lut;
        for (int v = 0; v < 256; ++v) {
            lut[static_cast<size_t>(v)] = clamp_u8((v - lo) * 255.0 / (hi - lo));
        }
        for (size_t i = 0; i < n; ++i) {
            dst.pixels[i * 3 + static_cast<size_t>(c)] =
                lut[src.pixels[i * 3 + static_cast<size_t>(c)]];
        }
    }
    return dst;
}

namespace {

// Shared CDF remap; the parallel and serial entry points differ only in the
// per-pixel application loop.
std::array<int, 256> equalize_lut(const Raster& src, bool& degenerate) {
    size_t n = static_cast<size_t>(src.width) * static_cast<size_t>(src.height);
    std::array<size_t, 256> hist{};
    for (size_t i = 0; i < n; ++i) {
        const uint8_t* p = src.pixels.data() + i * 3;
        hist[static_cast<size_t>(luma601(p[0], p[1], p[2]))]++;
    }
    std::array<size_t, 256> cdf{};
    size_t running = 0;
    size_t cdf_min = 0;
    for (int v = 0; v < 256; ++v) {
        running += hist[static_cast<size_t>(v)];
        cdf[static_cast<size_t>(v)] = running;
        if (cdf_min == 0 && running > 0) cdf_min = running;
    }
    std::array<int, 256> lut{};
    degenerate = (n == 0 || cdf_min == n);
    if (degenerate) return lut;
    for (int v = 0; v < 256; ++v) {
        double num = static_cast<double>(cdf[static_cast<size_t>(v)]) -
                     static_cast<double>(cdf_min);
        double den = static_cast<double>(n) - static_cast<double>(cdf_min);
        lut[static_cast<size_t>(v)] = static_cast<int>(std::lround(255.0 * num / den));
    }
    return lut;
}

void equalize_pixel(const uint8_t* s, uint8_t* d, const std::array<int, 256>& lut) {
    int y = luma601(s[0], s[1], s[2]);
    int hy = lut[static_cast<size_t>(y)];
    if (y == 0) {
        d[0] = d[1] = d[2] = static_cast<uint8_t>(hy);
        return;
    }
    double gain = static_cast<double>(hy) / y;
    for (int c = 0; c < 3; ++c) d[c] = clamp_u8(s[c] * gain);
}

}  // namespace

Raster hist_equalize(const Raster& src) {
    bool degenerate = false;
    auto lut = equalize_lut(src, degenerate);
    if (degenerate) return src;
    Raster dst(src.width, src.height);
    int64_t n = static_cast<int64_t>(src.width) * src.height;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        equalize_pixel(src.pixels.data() + i * 3, dst.pixels.data() + i * 3, lut);
    }
    return dst;
}

Raster bilateral_filter(const Raster& src, double sigma_space, double sigma_range) {
    if (sigma_space <= 0.0 || sigma_range <= 0.0) {
        throw std::invalid_argument("bilateral_filter: sigmas must be positive");
    }
    int radius = static_cast<int>(std::ceil(3.0 * sigma_space));
    int k = 2 * radius + 1;

    std::vector<double> space_w(static_cast<size_t>(k) * static_cast<size_t>(k));
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            space_w[static_cast<size_t>((dy + radius) * k + dx + radius)] =
                std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                         (2.0 * sigma_space * sigma_space));
        }
    }
    std::array<double, 256> range_w;
    for (int d = 0; d < 256; ++d) {
        range_w[static_cast<size_t>(d)] =
            std::exp(-(static_cast<double>(d) * d) / (2.0 * sigma_range * sigma_range));
    }

    Raster dst(src.width, src.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            const uint8_t* center = src.at(x, y);
            double num[3] = {0, 0, 0};
            double den[3] = {0, 0, 0};
            for (int dy = -radius; dy <= radius; ++dy) {
                int ny = y + dy;
                if (ny < 0 || ny >= src.height) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    int nx = x + dx;
                    if (nx < 0 || nx >= src.width) continue;
                    double sw = space_w[static_cast<size_t>((dy + radius) * k + dx + radius)];
                    const uint8_t* p = src.at(nx, ny);
                    for (int c = 0; c < 3; ++c) {
                        double w = sw * range_w[static_cast<size_t>(std::abs(p[c] - center[c]))];
                        num[c] += w * p[c];
                        den[c] += w;
                    }
                }
            }
            uint8_t* d = dst.at(x, y);
            for (int c = 0; c < 3; ++c) d[c] = clamp_u8(num[c] / den[c]);
        }
    }
    return dst;
}

namespace serial {

Raster bilateral_filter(const Raster& src, double sigma_space, double sigma_range) {
    int radius = static_cast<int>(std::ceil(3.0 * sigma_space));
    Raster dst(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            const uint8_t* center = src.at(x, y);
            double num[3] = {0, 0, 0};
            double den[3] = {0, 0, 0};
            for (int dy = -radius; dy <= radius; ++dy) {
                int ny = y + dy;
                if (ny < 0 || ny >= src.height) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    int nx = x + dx;
                    if (nx < 0 || nx >= src.width) continue;
                    double sw =
                        std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                                 (2.0 * sigma_space * sigma_space));
                    const uint8_t* p = src.at(nx, ny);
                    for (int c = 0; c < 3; ++c) {
                        int d = std::abs(p[c] - center[c]);
                        double w = sw * std::exp(-(static_cast<double>(d) * d) /
                                                 (2.0 * sigma_range * sigma_range));
                        num[c] += w * p[c];
                        den[c] += w;
                    }
                }
            }
            uint8_t* d = dst.at(x, y);
            for (int c = 0; c < 3; ++c) d[c] = clamp_u8(num[c] / den[c]);
        }
    }
    return dst;
}

Raster gaussian_blur(const Raster& src, double sigma_space) {
    int radius = static_cast<int>(std::ceil(3.0 * sigma_space));
    Raster dst(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double num[3] = {0, 0, 0};
            double den = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                int ny = y + dy;
                if (ny < 0 || ny >= src.height) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    int nx = x + dx;
                    if (nx < 0 || nx >= src.width) continue;
                    double w =
                        std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                                 (2.0 * sigma_space * sigma_space));
                    const uint8_t* p = src.at(nx, ny);
                    for (int c = 0; c < 3; ++c) num[c] += w * p[c];
                    den += w;
                }
            }
            uint8_t* d = dst.at(x, y);
            for (int c = 0; c < 3; ++c) d[c] = clamp_u8(num[c] / den);
        }
    }
    return dst;
}

Raster hist_equalize(const Raster& src) {
    bool degenerate = false;
    auto lut = equalize_lut(src, degenerate);
    if (degenerate) return src;
    Raster dst(src.width, src.height);
    size_t n = static_cast<size_t>(src.width) * static_cast<size_t>(src.height);
    for (size_t i = 0; i < n; ++i) {
        equalize_pixel(src.pixels.data() + i * 3, dst.pixels.data() + i * 3, lut);
    }
    return dst;
}

}  // namespace serial

}  // namespace heb
