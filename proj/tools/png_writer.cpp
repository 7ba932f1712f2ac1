#include "phasepairs/png_writer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>

#include <png.h>

#include "phasepairs/errors.hpp"

namespace phasepairs {

namespace {

constexpr int kLevels = 16;
constexpr double kFloorDecades = 16.0;

using Rgb = std::array<unsigned char, 3>;

Rgb palette(double u) {
  static constexpr std::array<Rgb, 5> anchors{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
                                              {253, 231, 37}}};
  u = std::clamp(u, 0.0, 1.0) * (anchors.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), anchors.size() - 2);
  const double t = u - i;
  Rgb out;
  for (int c = 0; c < 3; ++c)
    out[c] = static_cast<unsigned char>(std::lround(anchors[i][c] * (1 - t) + anchors[i + 1][c] * t));
  return out;
}

}  // namespace

void write_contour_png(const std::filesystem::path& path, const QxGrid& grid, const std::vector<Vec>& nodes,
                       int scale) {
  if (grid.grid.dim() != 2) throw DimensionError("contour images need a two-dimensional grid");
  const int n1 = grid.grid.counts[0], n2 = grid.grid.counts[1];
  const int width = n1 * scale, height = n2 * scale;
  const double top = grid.max();

  std::vector<unsigned char> pixels(static_cast<std::size_t>(width) * height * 3);
  auto put = [&](int px, int py, const Rgb& c) {
    if (px < 0 || py < 0 || px >= width || py >= height) return;
    const std::size_t o = (static_cast<std::size_t>(py) * width + px) * 3;
    std::copy(c.begin(), c.end(), pixels.begin() + static_cast<std::ptrdiff_t>(o));
  };
  for (int i1 = 0; i1 < n1; ++i1) {
    for (int i2 = 0; i2 < n2; ++i2) {
      const double q = grid.values[static_cast<std::size_t>(i1) * n2 + i2];
      double decades = top > 0 && q > 0 ? std::log10(q / top) : -kFloorDecades;
      decades = std::clamp(decades, -kFloorDecades, 0.0);
      const double level = std::floor((decades + kFloorDecades) / kFloorDecades * kLevels);
      const Rgb c = palette(std::min(level, kLevels - 1.0) / (kLevels - 1));
      for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx) put(i1 * scale + dx, (n2 - 1 - i2) * scale + dy, c);
    }
  }
  const Rgb white{255, 255, 255};
  for (const auto& w : nodes) {
    const double cx = ((w(0) - grid.grid.origin(0)) / grid.grid.step(0) + 0.5) * scale;
    const double cy = (n2 - 0.5 - (w(1) - grid.grid.origin(1)) / grid.grid.step(1)) * scale;
    const int r = std::max(2, scale);
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (dx * dx + dy * dy <= r * r) put(static_cast<int>(cx) + dx, static_cast<int>(cy) + dy, white);
  }

  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error("cannot open '" + path.string() + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng failed while writing '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    png_write_row(png, pixels.data() + static_cast<std::size_t>(y) * width * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace phasepairs
