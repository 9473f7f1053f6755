#pragma once

#include <limits>
#include <vector>

#include "spargen/geometry.hpp"

namespace spargen {

constexpr int kNoFace = -1;

/// Per-pixel face-index and depth maps produced by rasterize().
struct RasterResult {
    int width = 0;
    int height = 0;
    std::vector<int> pix_to_face;   // row-major, kNoFace where uncovered
    std::vector<double> z_buffer;   // meters, +inf where uncovered

    int face_at(int x, int y) const { return pix_to_face[static_cast<size_t>(y) * width + x]; }
    double depth_at(int x, int y) const { return z_buffer[static_cast<size_t>(y) * width + x]; }
};

/// Software z-buffer rasterization of the full mesh into a frame. Pixel
/// centers at (x+0.5, y+0.5); perspective-correct depth; triangles are not
/// backface-culled; geometry behind the camera is clipped at a near plane.
RasterResult rasterize(const FrameMeta& frame, const TriangleMesh& mesh,
                       double raster_scale = 1.0);

}  // namespace spargen
