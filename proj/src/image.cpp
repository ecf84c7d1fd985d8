#include "phyllo/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <zlib.h>

#include "phyllo/csv.hpp"

namespace phyllo {

Raster rasterize(const ScalarField& u, int size) {
    const GridSpec& g = u.grid;
    if (g.geometry != Geometry::Annulus) throw InvalidArgument("rasterize requires an annulus grid");
    if (size < 2) throw InvalidArgument("raster size must be at least 2");
    Raster out;
    out.size = size;
    out.values.assign(std::size_t(size) * std::size_t(size), std::numeric_limits<double>::quiet_NaN());
    const double half = 0.5 * double(size);
    const double scale = g.r_max / half;
    const Index nt = g.n_theta;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double X = (double(x) + 0.5 - half) * scale;
            const double Y = (half - double(y) - 0.5) * scale;
            const double r = std::hypot(X, Y);
            if (r < g.r_min || r > g.r_max) continue;
            double th = std::atan2(Y, X);
            if (th < 0.0) th += 2.0 * std::numbers::pi;
            const double fi = std::min((r - g.r_min) / g.dr(), double(g.n_r - 1));
            const Index i0 = std::min<Index>(Index(fi), g.n_r - 2);
            const double wi = fi - double(i0);
            const double fj = th / g.dtheta();
            const Index j0 = Index(std::floor(fj)) % nt;
            const Index j1 = (j0 + 1) % nt;
            const double wj = fj - std::floor(fj);
            const double v0 = (1.0 - wj) * u.values(i0, j0) + wj * u.values(i0, j1);
            const double v1 = (1.0 - wj) * u.values(i0 + 1, j0) + wj * u.values(i0 + 1, j1);
            out.values[std::size_t(y) * std::size_t(size) + std::size_t(x)] = (1.0 - wi) * v0 + wi * v1;
        }
    }
    return out;
}

Rgb diverging(double t) {
    if (!std::isfinite(t)) t = 0.0;
    t = std::clamp(t, -1.0, 1.0);
    const double lo[3] = {59.0, 76.0, 192.0};
    const double mid[3] = {247.0, 247.0, 247.0};
    const double hi[3] = {180.0, 4.0, 38.0};
    const double* end = t < 0.0 ? lo : hi;
    const double s = std::abs(t);
    auto c = [&](int k) { return std::uint8_t(std::lround(mid[k] + s * (end[k] - mid[k]))); };
    return {c(0), c(1), c(2)};
}

std::vector<Rgb> colorize(const Raster& raster) {
    double top = 0.0;
    for (double v : raster.values)
        if (std::isfinite(v)) top = std::max(top, std::abs(v));
    std::vector<Rgb> out;
    out.reserve(raster.values.size());
    for (double v : raster.values) out.push_back(diverging(top > 0.0 && std::isfinite(v) ? v / top : 0.0));
    return out;
}

namespace {

void put_u32(std::string& s, std::uint32_t v) {
    for (int k = 3; k >= 0; --k) s.push_back(char((v >> (8 * k)) & 0xffu));
}

void chunk(std::string& out, const char* type, const std::string& data) {
    put_u32(out, std::uint32_t(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    put_u32(out, std::uint32_t(crc32(0L, reinterpret_cast<const Bytef*>(body.data()), uInt(body.size()))));
}

}  // namespace

std::string encode_png(int width, int height, const std::vector<Rgb>& pixels) {
    if (width < 1 || height < 1 || pixels.size() != std::size_t(width) * std::size_t(height))
        throw InvalidArgument("encode_png: pixel count does not match dimensions");
    std::string raw;
    raw.reserve(std::size_t(height) * (std::size_t(width) * 3 + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back('\0');
        for (int x = 0; x < width; ++x) {
            const Rgb& p = pixels[std::size_t(y) * std::size_t(width) + std::size_t(x)];
            raw.push_back(char(p.r));
            raw.push_back(char(p.g));
            raw.push_back(char(p.b));
        }
    }
    uLongf len = compressBound(uLong(raw.size()));
    std::string z(len, '\0');
    if (compress2(reinterpret_cast<Bytef*>(z.data()), &len, reinterpret_cast<const Bytef*>(raw.data()),
                  uLong(raw.size()), 9) != Z_OK)
        throw IoError("PNG compression failed");
    z.resize(len);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    put_u32(ihdr, std::uint32_t(width));
    put_u32(ihdr, std::uint32_t(height));
    ihdr += std::string("\x08\x02\x00\x00\x00", 5);  // 8-bit RGB, no interlace
    chunk(out, "IHDR", ihdr);
    chunk(out, "IDAT", z);
    chunk(out, "IEND", "");
    return out;
}

void render_png(const ScalarField& u, const std::filesystem::path& path, int size) {
    const Raster r = rasterize(u, size);
    write_file_atomic(path, encode_png(size, size, colorize(r)));
}

}  // namespace phyllo
