// Benchmarks the OpenMP kernels against their serial reference
// implementations and verifies the outputs agree.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "heb/augment.hpp"
#include "heb/imageproc.hpp"
#include "heb/rng.hpp"

using heb::Raster;

namespace {

Raster random_raster(int w, int h, uint64_t seed) {
    Raster img(w, h);
    heb::SplitMix64 rng(seed);
    for (auto& px : img.pixels) px = static_cast<uint8_t>(rng.next_below(256));
    return img;
}

double time_ms(const std::function<void()>& fn, int reps) {
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-22s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                match ? "outputs match" : "OUTPUT MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    const int reps = 3;

    {
        auto img = random_raster(640, 640, 1);
        Raster par, ser;
        double tp = time_ms([&] { par = heb::bilateral_filter(img, 3.0, 25.0); }, reps);
        double ts = time_ms([&] { ser = heb::serial::bilateral_filter(img, 3.0, 25.0); }, reps);
        report("bilateral 640x640", ts, tp, par == ser);
    }
    {
        auto img = random_raster(1920, 1080, 2);
        Raster par, ser;
        double tp = time_ms([&] { par = heb::hist_equalize(img); }, reps);
        double ts = time_ms([&] { ser = heb::serial::hist_equalize(img); }, reps);
        report("equalize 1920x1080", ts, tp, par == ser);
    }
    {
        auto img = random_raster(1280, 960, 3);
        std::vector<heb::Annotation> anns{{0, {0.5, 0.5, 0.3, 0.3}}};
        heb::AugmentedImage out;
        double tp = time_ms([&] { out = heb::rotate_with_boxes(img, anns, 13.0); }, reps);
        std::printf("%-22s parallel %8.2f ms\n", "rotate 1280x960", tp);
    }
    {
        auto img = random_raster(1280, 960, 4);
        heb::LetterboxResult out;
        double tp = time_ms([&] { out = heb::letterbox_resize(img, {}, 640); }, reps);
        std::printf("%-22s parallel %8.2f ms\n", "letterbox 1280->640", tp);
    }
    return 0;
}
