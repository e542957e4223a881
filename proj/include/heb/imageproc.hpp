#pragma once

#include <vector>

#include "heb/raster.hpp"
#include "heb/types.hpp"

namespace heb {

// Transports normalized boxes through letterboxing and back.
struct AffineMap {
    double scale = 1.0;   // uniform source->target scale
    double pad_x = 0.0;   // target-space padding, pixels (may be fractional)
    double pad_y = 0.0;
    int src_w = 0;
    int src_h = 0;
    int target = 0;

    BBoxNorm forward(const BBoxNorm& b) const;
    BBoxNorm inverse(const BBoxNorm& b) const;
};

// Re-lays the pixel grid so EXIF tag-1 semantics hold. Tags 5-8 swap
// dimensions. Throws std::invalid_argument for tags outside [1,8].
Raster auto_orient(const Raster& src, int orientation_tag);

// Transports a box through an orientation tag (needed when labels exist in
// the untransformed frame).
BBoxNorm orient_box(const BBoxNorm& b, int orientation_tag);

struct LetterboxResult {
    Raster raster;
    std::vector<Annotation> annotations;
    AffineMap map;
};

// Aspect-preserving resize onto a target square with symmetric gray(114)
// padding; bilinear resampling. Boxes are transported exactly through the
// affine map, so map.inverse recovers the originals within 1e-6.
LetterboxResult letterbox_resize(const Raster& src,
                                 const std::vector<Annotation>& annotations,
                                 int target = 640);

// Per-channel linear stretch mapping the clip / (100-clip) percentiles to
// 0/255. Degenerate (constant) channels pass through unchanged.
Raster auto_contrast(const Raster& src, double clip_percent);

// Luminance (Rec.601) CDF equalization, chroma preserved by scaling RGB
// proportionally; constant-luminance images unchanged.
Raster hist_equalize(const Raster& src);

// Gaussian-space x Gaussian-range weighted mean; kernel radius
// ceil(3*sigma_space), window truncated at image borders. OpenMP-parallel
// over rows.
Raster bilateral_filter(const Raster& src, double sigma_space, double sigma_range);

// Serial reference kernels. Kept as plain double-loop implementations for
// testing the parallel paths and as the oracle targets of the benchmark.
namespace serial {
Raster bilateral_filter(const Raster& src, double sigma_space, double sigma_range);
Raster gaussian_blur(const Raster& src, double sigma_space);
Raster hist_equalize(const Raster& src);
}  // namespace serial

}  // namespace heb
