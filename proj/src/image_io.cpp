#include "heb/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace heb {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw std::runtime_error("cannot open " + path.string());
    return f;
}

uint16_t read_u16(const uint8_t* p, bool big_endian) {
    return big_endian ? static_cast<uint16_t>((p[0] << 8) | p[1])
                      : static_cast<uint16_t>((p[1] << 8) | p[0]);
}

uint32_t read_u32(const uint8_t* p, bool big_endian) {
    return big_endian
               ? (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
                     (static_cast<uint32_t>(p[2]) << 8) | p[3]
               : (static_cast<uint32_t>(p[3]) << 24) | (static_cast<uint32_t>(p[2]) << 16) |
                     (static_cast<uint32_t>(p[1]) << 8) | p[0];
}

// Orientation tag (0x0112) from IFD0 of the Exif APP1 segment.
int exif_orientation_from_app1(const uint8_t* data, size_t len) {
    if (len < 14 || std::memcmp(data, "Exif\0\0", 6) != 0) return 1;
    const uint8_t* tiff = data + 6;
    size_t tiff_len = len - 6;
    bool big_endian;
    if (tiff[0] == 'M' && tiff[1] == 'M') big_endian = true;
    else if (tiff[0] == 'I' && tiff[1] == 'I') big_endian = false;
    else return 1;
    if (read_u16(tiff + 2, big_endian) != 42) return 1;
    uint32_t ifd_off = read_u32(tiff + 4, big_endian);
    if (ifd_off + 2 > tiff_len) return 1;
    uint16_t n_entries = read_u16(tiff + ifd_off, big_endian);
    for (uint16_t i = 0; i < n_entries; ++i) {
        size_t entry = ifd_off + 2 + static_cast<size_t>(i) * 12;
        if (entry + 12 > tiff_len) return 1;
        if (read_u16(tiff + entry, big_endian) == 0x0112) {
            int v = read_u16(tiff + entry + 8, big_endian);
            return (v >= 1 && v <= 8) ? v : 1;
        }
    }
    return 1;
}

// Scans raw JPEG bytes for the APP1/Exif marker (before the first SOS).
int read_jpeg_exif_orientation(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::vector<uint8_t> head(64 * 1024);
    in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
    size_t n = static_cast<size_t>(in.gcount());
    size_t i = 2;  // skip SOI
    while (i + 4 <= n) {
        if (head[i] != 0xFF) break;
        uint8_t marker = head[i + 1];
        if (marker == 0xDA) break;  // start of scan
        uint16_t seg_len = static_cast<uint16_t>((head[i + 2] << 8) | head[i + 3]);
        if (seg_len < 2 || i + 2 + seg_len > n) break;
        if (marker == 0xE1) {
            return exif_orientation_from_app1(head.data() + i + 4,
                                              static_cast<size_t>(seg_len) - 2);
        }
        i += 2 + seg_len;
    }
    return 1;
}

Raster load_png_file(const fs::path& path) {
    auto file = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("PNG decode failed: " + path.string());
    }
    png_init_io(png, file.get());
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_set_palette_to_rgb(png);
    png_read_update_info(png, info);

    Raster out(static_cast<int>(png_get_image_width(png, info)),
               static_cast<int>(png_get_image_height(png, info)));
    std::vector<png_bytep> rows(static_cast<size_t>(out.height));
    for (int y = 0; y < out.height; ++y) rows[static_cast<size_t>(y)] = out.at(0, y);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

struct JpegErrorJmp {
    jpeg_error_mgr mgr;
    jmp_buf env;
};

void jpeg_error_longjmp(j_common_ptr ci) {
    longjmp(reinterpret_cast<JpegErrorJmp*>(ci->err)->env, 1);
}

Raster load_jpeg_file(const fs::path& path) {
    auto file = open_file(path, "rb");
    jpeg_decompress_struct cinfo;
    JpegErrorJmp err;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_longjmp;
    jpeg_create_decompress(&cinfo);
    Raster out;
    if (setjmp(err.env)) {
        jpeg_destroy_decompress(&cinfo);
        throw std::runtime_error("JPEG decode failed: " + path.string());
    }
    jpeg_stdio_src(&cinfo, file.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    out = Raster(static_cast<int>(cinfo.output_width),
                 static_cast<int>(cinfo.output_height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = out.at(0, static_cast<int>(cinfo.output_scanline));
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

bool has_png_signature(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    uint8_t sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    static const uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return in.gcount() == 8 && std::memcmp(sig, png_sig, 8) == 0;
}

}  // namespace

LoadedImage load_image(const fs::path& path) {
    LoadedImage out;
    if (has_png_signature(path)) {
        out.raster = load_png_file(path);
    } else {
        out.raster = load_jpeg_file(path);
        out.exif_orientation = read_jpeg_exif_orientation(path);
    }
    return out;
}

void save_png(const fs::path& path, const Raster& raster) {
    auto file = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encode failed: " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width),
                 static_cast<png_uint_32>(raster.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < raster.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(raster.at(0, y)));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace heb
