#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phyllo/grid.hpp"

namespace phyllo {

/// Square scalar raster covering [−r_max, r_max]²; NaN outside the annulus.
struct Raster {
    int size = 0;
    std::vector<double> values;  ///< row-major, row 0 at the top

    double at(int x, int y) const { return values[std::size_t(y) * std::size_t(size) + std::size_t(x)]; }
};

/// Polar → Cartesian resampling with bilinear interpolation in (r, θ).
Raster rasterize(const ScalarField& u, int size);

struct Rgb {
    std::uint8_t r, g, b;
    bool operator==(const Rgb&) const = default;
};

/// Diverging blue–white–red map of t ∈ [−1, 1]; t = 0 (and NaN) is white.
Rgb diverging(double t);

/// RGB pixels, colour scale symmetric about u = 0.
std::vector<Rgb> colorize(const Raster& raster);

/// Lossless 8-bit RGB PNG.
std::string encode_png(int width, int height, const std::vector<Rgb>& pixels);

void render_png(const ScalarField& u, const std::filesystem::path& path, int size = 512);

}  // namespace phyllo
