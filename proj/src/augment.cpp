#include "heb/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "heb/rng.hpp"

namespace heb {

namespace {

constexpr uint8_t kPadGray = 114;

double bilinear_channel(const Raster& img, double x, double y, int c) {
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

// cos/sin with exact values at multiples of 90 deg so the 90-family is
// numerically clean.
void rotation_terms(double angle_deg, double& c, double& s) {
    double a = angle_deg * std::numbers::pi / 180.0;
    c = std::cos(a);
    s = std::sin(a);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    if (std::abs(c - 1.0) < 1e-15) c = 1.0;
    if (std::abs(c + 1.0) < 1e-15) c = -1.0;
    if (std::abs(s - 1.0) < 1e-15) s = 1.0;
    if (std::abs(s + 1.0) < 1e-15) s = -1.0;
}

}  // namespace

AugmentedImage rotate_with_boxes(const Raster& src,
                                 const std::vector<Annotation>& annotations,
                                 double angle_deg, double drop_threshold) {
    if (std::abs(angle_deg) > 180.0) {
        throw std::invalid_argument("rotation angle outside [-180,180]");
    }
    double c, s;
    rotation_terms(angle_deg, c, s);
    double cx0 = src.width / 2.0;
    double cy0 = src.height / 2.0;

    AugmentedImage out;
    out.raster = Raster(src.width, src.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            // inverse map: rotate the destination center back by -angle
            double dx = (x + 0.5) - cx0;
            double dy = (y + 0.5) - cy0;
            double sx = cx0 + dx * c + dy * s - 0.5;
            double sy = cy0 - dx * s + dy * c - 0.5;
            uint8_t* d = out.raster.at(x, y);
            if (sx < -0.5 || sx > src.width - 0.5 || sy < -0.5 || sy > src.height - 0.5) {
                d[0] = d[1] = d[2] = kPadGray;
            } else {
                for (int ch = 0; ch < 3; ++ch) {
                    d[ch] = clamp_u8(bilinear_channel(src, sx, sy, ch));
                }
            }
        }
    }

    for (const auto& a : annotations) {
        double bw = a.box.w * src.width;
        double bh = a.box.h * src.height;
        double bx = a.box.cx * src.width;
        double by = a.box.cy * src.height;
        double corners[4][2] = {{bx - bw / 2, by - bh / 2},
                                {bx + bw / 2, by - bh / 2},
                                {bx + bw / 2, by + bh / 2},
                                {bx - bw / 2, by + bh / 2}};
        double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
        for (auto& p : corners) {
            double dx = p[0] - cx0;
            double dy = p[1] - cy0;
            double rx = cx0 + dx * c - dy * s;
            double ry = cy0 + dx * s + dy * c;
            min_x = std::min(min_x, rx);
            max_x = std::max(max_x, rx);
            min_y = std::min(min_y, ry);
            max_y = std::max(max_y, ry);
        }
        double cx1 = std::clamp(min_x, 0.0, static_cast<double>(src.width));
        double cx2 = std::clamp(max_x, 0.0, static_cast<double>(src.width));
        double cy1 = std::clamp(min_y, 0.0, static_cast<double>(src.height));
        double cy2 = std::clamp(max_y, 0.0, static_cast<double>(src.height));
        double clipped_area = std::max(0.0, cx2 - cx1) * std::max(0.0, cy2 - cy1);
        if (clipped_area < drop_threshold * bw * bh) continue;
        out.annotations.push_back(Annotation{
            a.class_id,
            BBoxNorm{(cx1 + cx2) / 2.0 / src.width, (cy1 + cy2) / 2.0 / src.height,
                     (cx2 - cx1) / src.width, (cy2 - cy1) / src.height}});
    }
    return out;
}

Raster adjust_brightness(const Raster& src, double delta_pct) {
    if (std::abs(delta_pct) > 100.0) {
        throw std::invalid_argument("brightness delta outside [-100,100]");
    }
    double gain = 1.0 + delta_pct / 100.0;
    Raster dst(src.width, src.height);
    for (size_t i = 0; i < src.pixels.size(); ++i) {
        dst.pixels[i] = clamp_u8(src.pixels[i] * gain);
    }
    return dst;
}

void rgb_to_hsv(uint8_t r8, uint8_t g8, uint8_t b8, double& h, double& s, double& v) {
    double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    double mx = std::max({r, g, b});
    double mn = std::min({r, g, b});
    double delta = mx - mn;
    v = mx;
    s = mx > 0.0 ? delta / mx : 0.0;
    if (delta == 0.0) {
        h = 0.0;
    } else if (mx == r) {
        h = 60.0 * std::fmod((g - b) / delta + 6.0, 6.0);
    } else if (mx == g) {
        h = 60.0 * ((b - r) / delta + 2.0);
    } else {
        h = 60.0 * ((r - g) / delta + 4.0);
    }
}

void hsv_to_rgb(double h, double s, double v, uint8_t& r, uint8_t& g, uint8_t& b) {
    h = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0);
    double c = v * s;
    double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
    double m = v - c;
    double rp, gp, bp;
    if (h < 60)       { rp = c; gp = x; bp = 0; }
    else if (h < 120) { rp = x; gp = c; bp = 0; }
    else if (h < 180) { rp = 0; gp = c; bp = x; }
    else if (h < 240) { rp = 0; gp = x; bp = c; }
    else if (h < 300) { rp = x; gp = 0; bp = c; }
    else              { rp = c; gp = 0; bp = x; }
    r = clamp_u8((rp + m) * 255.0);
    g = clamp_u8((gp + m) * 255.0);
    b = clamp_u8((bp + m) * 255.0);
}

Raster adjust_hue(const Raster& src, double shift_pct) {
    double shift_deg = shift_pct * 360.0 / 100.0;
    Raster dst(src.width, src.height);
    for (size_t i = 0; i < src.pixels.size(); i += 3) {
        double h, s, v;
        rgb_to_hsv(src.pixels[i], src.pixels[i + 1], src.pixels[i + 2], h, s, v);
        hsv_to_rgb(h + shift_deg, s, v, dst.pixels[i], dst.pixels[i + 1], dst.pixels[i + 2]);
    }
    return dst;
}

Raster adjust_saturation(const Raster& src, double scale_pct) {
    double gain = 1.0 + scale_pct / 100.0;
    Raster dst(src.width, src.height);
    for (size_t i = 0; i < src.pixels.size(); i += 3) {
        double h, s, v;
        rgb_to_hsv(src.pixels[i], src.pixels[i + 1], src.pixels[i + 2], h, s, v);
        s = std::clamp(s * gain, 0.0, 1.0);
        hsv_to_rgb(h, s, v, dst.pixels[i], dst.pixels[i + 1], dst.pixels[i + 2]);
    }
    return dst;
}

Raster add_noise(const Raster& src, double frac, uint64_t seed, double frac_max,
                 bool gaussian) {
    if (frac < 0.0 || frac > frac_max) {
        throw std::invalid_argument("noise fraction outside [0, frac_max]");
    }
    size_t n = static_cast<size_t>(src.width) * static_cast<size_t>(src.height);
    size_t k = static_cast<size_t>(std::floor(frac * static_cast<double>(n)));
    Raster dst = src;
    if (k == 0) return dst;

    // partial Fisher-Yates picks k distinct pixel indices
    std::vector<uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    SplitMix64 rng(seed);
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + rng.next_below(n - i);
        std::swap(idx[i], idx[j]);
        uint8_t* p = dst.pixels.data() + static_cast<size_t>(idx[i]) * 3;
        if (gaussian) {
            // Box-Muller, sigma 25
            double u1 = std::max(rng.next_unit(), 1e-12);
            double u2 = rng.next_unit();
            double z = std::sqrt(-2.0 * std::log(u1)) *
                       std::cos(2.0 * std::numbers::pi * u2);
            for (int c = 0; c < 3; ++c) p[c] = clamp_u8(p[c] + 25.0 * z);
        } else {
            uint8_t v = rng.next_bool() ? 255 : 0;
            p[0] = p[1] = p[2] = v;
        }
    }
    return dst;
}

BBoxNorm flip_box(const BBoxNorm& b, FlipAxis axis) {
    if (axis == FlipAxis::horizontal) return {1.0 - b.cx, b.cy, b.w, b.h};
    return {b.cx, 1.0 - b.cy, b.w, b.h};
}

AugmentedImage flip(const Raster& src, const std::vector<Annotation>& annotations,
                    FlipAxis axis) {
    AugmentedImage out;
    out.raster = Raster(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            int sx = axis == FlipAxis::horizontal ? src.width - 1 - x : x;
            int sy = axis == FlipAxis::vertical ? src.height - 1 - y : y;
            const uint8_t* s = src.at(sx, sy);
            uint8_t* d = out.raster.at(x, y);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    for (const auto& a : annotations) {
        out.annotations.push_back(Annotation{a.class_id, flip_box(a.box, axis)});
    }
    return out;
}

AugmentedImage augment_record(const Raster& src,
                              const std::vector<Annotation>& annotations,
                              const AugmentSpec& spec, uint64_t record_index,
                              uint64_t copy_index) {
    SplitMix64 rng(mix_seed(spec.seed, record_index, copy_index));

    double angle = rng.next_in(-spec.rotation_deg, spec.rotation_deg);
    double brightness = rng.next_in(-spec.brightness_pct, spec.brightness_pct);
    double hue = rng.next_in(-spec.hue_pct, spec.hue_pct);
    double saturation = rng.next_in(-spec.saturation_pct, spec.saturation_pct);
    double noise_frac = rng.next_unit() * spec.noise_frac_max;
    bool do_hflip = spec.flip_horizontal && rng.next_bool();
    bool do_vflip = spec.flip_vertical && rng.next_bool();
    uint64_t noise_seed = rng.next();

    AugmentedImage cur{src, annotations};
    if (angle != 0.0) {
        cur = rotate_with_boxes(cur.raster, cur.annotations, angle, spec.drop_threshold);
    }
    if (do_hflip) cur = flip(cur.raster, cur.annotations, FlipAxis::horizontal);
    if (do_vflip) cur = flip(cur.raster, cur.annotations, FlipAxis::vertical);
    if (brightness != 0.0) cur.raster = adjust_brightness(cur.raster, brightness);
    if (hue != 0.0) cur.raster = adjust_hue(cur.raster, hue);
    if (saturation != 0.0) cur.raster = adjust_saturation(cur.raster, saturation);
    if (noise_frac > 0.0) {
        cur.raster = add_noise(cur.raster, noise_frac, noise_seed, spec.noise_frac_max,
                               spec.gaussian_noise);
    }
    return cur;
}

std::vector<AugmentOutput> augment_batch(const std::vector<AugmentInput>& records,
                                         const AugmentSpec& spec) {
    if (spec.copies_per_image < 1) {
        throw std::invalid_argument("copies_per_image must be >= 1");
    }
    size_t n = records.size();
    size_t copies = static_cast<size_t>(spec.copies_per_image);
    size_t originals = spec.keep_originals ? n : 0;
    std::vector<AugmentOutput> out(originals + n * copies);

    if (spec.keep_originals) {
        for (size_t i = 0; i < n; ++i) {
            out[i] = AugmentOutput{records[i].raster, records[i].annotations,
                                   records[i].name};
        }
    }
#pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < static_cast<int64_t>(n * copies); ++v) {
        size_t rec = static_cast<size_t>(v) / copies;
        size_t copy = static_cast<size_t>(v) % copies;
        auto aug = augment_record(records[rec].raster, records[rec].annotations, spec,
                                  rec, copy);
        out[originals + static_cast<size_t>(v)] =
            AugmentOutput{std::move(aug.raster), std::move(aug.annotations),
                          records[rec].name + "_aug" + std::to_string(copy)};
    }
    return out;
}

}  // namespace heb
