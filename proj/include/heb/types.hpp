#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace heb {

// Normalized center-format box: cx, cy, w, h as fractions of image size.
struct BBoxNorm {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    double area() const { return w * h; }

    bool operator==(const BBoxNorm&) const = default;
};

constexpr double kCoordTolerance = 1e-6;

// Accepts boundary round-off in [-1e-6, 1+1e-6] and clamps into [0,1].
inline double clamp_unit(double v) {
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

inline bool in_unit_tolerant(double v) {
    return v >= -kCoordTolerance && v <= 1.0 + kCoordTolerance;
}

// Clamp a box so its corners lie in [0,1]^2; callers validate tolerance first.
inline BBoxNorm clamp_box(const BBoxNorm& b) {
    double x1 = clamp_unit(b.cx - b.w / 2.0);
    double y1 = clamp_unit(b.cy - b.h / 2.0);
    double x2 = clamp_unit(b.cx + b.w / 2.0);
    double y2 = clamp_unit(b.cy + b.h / 2.0);
    return BBoxNorm{(x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1};
}

struct Annotation {
    int class_id = 0;
    BBoxNorm box;

    bool operator==(const Annotation&) const = default;
};

struct Prediction {
    int class_id = 0;
    BBoxNorm box;
    double confidence = 0.0;
};

// Corner-form box used by the geometric losses.
struct BoxXYXY {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }

    static BoxXYXY from_norm(const BBoxNorm& b) {
        return BoxXYXY{b.cx - b.w / 2.0, b.cy - b.h / 2.0,
                       b.cx + b.w / 2.0, b.cy + b.h / 2.0};
    }
    BBoxNorm to_norm() const {
        return BBoxNorm{(x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1};
    }
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace heb
