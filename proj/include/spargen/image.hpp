#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spargen/util.hpp"
#include "spargen/visibility.hpp"

namespace spargen {

/// 8-bit RGB raster. Binary PPM (P6) is the interchange format.
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // 3 bytes per pixel, row-major

    ImageRgb() = default;
    ImageRgb(int w, int h, std::array<uint8_t, 3> fill = {128, 128, 128});

    uint8_t* pixel(int x, int y) { return &data[(static_cast<size_t>(y) * width + x) * 3]; }
    const uint8_t* pixel(int x, int y) const {
        return &data[(static_cast<size_t>(y) * width + x) * 3];
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

ImageRgb load_ppm(const std::filesystem::path& path);
void save_ppm(const std::filesystem::path& path, const ImageRgb& image);

enum class MarkKind { Point, Bbox };
enum class MarkColor { Red, Green, Blue };

const char* to_string(MarkKind k);
const char* to_string(MarkColor c);
std::array<uint8_t, 3> rgb(MarkColor c);

/// A visual prompt anchored to one image of a QA item.
struct VisualMark {
    int frame_ref = -1;              // frame index the mark belongs to
    MarkKind kind = MarkKind::Point;
    std::vector<double> pixels;      // point: {u, v}; bbox: {x_min, y_min, x_max, y_max}
    MarkColor color = MarkColor::Red;
};

constexpr int kPointMarkRadius = 6;   // px, filled disk
constexpr int kBboxMarkStroke = 3;    // px, outline width

/// Draw marks onto a copy of `image`. Marks must lie inside the image;
/// out-of-bounds coordinates throw ValidationError. Draw order is red,
/// green, blue regardless of input order.
ImageRgb render_marks(const ImageRgb& image, const std::vector<VisualMark>& marks);

}  // namespace spargen
