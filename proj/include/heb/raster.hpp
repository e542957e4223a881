#pragma once

#include <cstdint>
#include <vector>

namespace heb {

// Row-major 8-bit RGB image buffer.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // width * height * 3 bytes

    Raster() = default;
    Raster(int w, int h, uint8_t fill = 0)
        : width(w), height(h),
          pixels(static_cast<size_t>(w) * static_cast<size_t>(h) * 3, fill) {}

    size_t index(int x, int y) const {
        return (static_cast<size_t>(y) * static_cast<size_t>(width) +
                static_cast<size_t>(x)) * 3;
    }
    uint8_t* at(int x, int y) { return pixels.data() + index(x, y); }
    const uint8_t* at(int x, int y) const { return pixels.data() + index(x, y); }

    bool empty() const { return width == 0 || height == 0; }

    bool operator==(const Raster&) const = default;
};

inline uint8_t clamp_u8(double v) {
    if (v < 0.0) return 0;
    if (v > 255.0) return 255;
    return static_cast<uint8_t>(v + 0.5);
}

// Rec.601 luma, rounded to the nearest integer.
inline int luma601(uint8_t r, uint8_t g, uint8_t b) {
    return static_cast<int>(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
}

}  // namespace heb
