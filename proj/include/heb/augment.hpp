#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heb/raster.hpp"
#include "heb/types.hpp"

namespace heb {

// Symmetric-range augmentation recipe. Detection default: +-15 deg rotation,
// +-15% brightness, +-15% hue, +-31% saturation, noise up to 1.8% of pixels.
// Classification recipe uses +-90 deg rotation plus flips.
struct AugmentSpec {
    double rotation_deg = 15.0;
    double brightness_pct = 15.0;
    double hue_pct = 15.0;
    double saturation_pct = 31.0;
    double noise_frac_max = 0.018;
    bool flip_horizontal = false;
    bool flip_vertical = false;
    bool gaussian_noise = false;   // salt-and-pepper otherwise
    double drop_threshold = 0.2;   // min residual area fraction for clipped boxes
    int copies_per_image = 1;
    bool keep_originals = true;
    uint64_t seed = 0;
};

enum class FlipAxis { horizontal, vertical };

struct AugmentedImage {
    Raster raster;
    std::vector<Annotation> annotations;
};

// Rotation about the image center (positive = clockwise), bilinear sampling,
// canvas kept at the original size, out-of-frame filled with pad gray. Boxes
// become the axis-aligned hull of their rotated corners, clipped to the
// frame; boxes keeping less than drop_threshold of their area are dropped.
AugmentedImage rotate_with_boxes(const Raster& src,
                                 const std::vector<Annotation>& annotations,
                                 double angle_deg, double drop_threshold = 0.2);

Raster adjust_brightness(const Raster& src, double delta_pct);
Raster adjust_hue(const Raster& src, double shift_pct);
Raster adjust_saturation(const Raster& src, double scale_pct);

// Replaces exactly floor(frac * W * H) distinct pixels with salt (255) or
// pepper (0), chosen by a seeded stream.
Raster add_noise(const Raster& src, double frac, uint64_t seed,
                 double frac_max = 0.018, bool gaussian = false);

AugmentedImage flip(const Raster& src, const std::vector<Annotation>& annotations,
                    FlipAxis axis);
BBoxNorm flip_box(const BBoxNorm& b, FlipAxis axis);

// One deterministic variant: parameters drawn from a stream seeded by
// hash(spec.seed, record_index, copy_index), so results are independent of
// iteration order and worker count.
AugmentedImage augment_record(const Raster& src,
                              const std::vector<Annotation>& annotations,
                              const AugmentSpec& spec, uint64_t record_index,
                              uint64_t copy_index);

struct AugmentInput {
    Raster raster;
    std::vector<Annotation> annotations;
    std::string name;
};

struct AugmentOutput {
    Raster raster;
    std::vector<Annotation> annotations;
    std::string name;  // "<name>" for originals, "<name>_augN" for variants
};

// In-memory batch augmentation; emits copies_per_image variants per input
// (plus the originals when configured). OpenMP-parallel across variants.
std::vector<AugmentOutput> augment_batch(const std::vector<AugmentInput>& records,
                                         const AugmentSpec& spec);

// RGB <-> HSV helpers shared with the tests' reference conversions.
void rgb_to_hsv(uint8_t r, uint8_t g, uint8_t b, double& h, double& s, double& v);
void hsv_to_rgb(double h, double s, double v, uint8_t& r, uint8_t& g, uint8_t& b);

}  // namespace heb
