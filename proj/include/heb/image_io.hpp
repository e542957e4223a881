#pragma once

#include <filesystem>

#include "heb/raster.hpp"

namespace heb {

struct LoadedImage {
    Raster raster;
    int exif_orientation = 1;  // EXIF tag when present, 1 otherwise
};

// Decodes PNG or baseline JPEG by file extension / signature.
// JPEG EXIF orientation is read from the APP1 segment when present.
LoadedImage load_image(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const Raster& raster);

}  // namespace heb
