#include "neuroseg/tiling.hpp"

#include <algorithm>

namespace neuroseg {

int tiles_along(int length, int patch, int overlap) {
  if (length <= patch) return 1;
  const int stride = patch - overlap;
  return (length - patch + stride - 1) / stride + 1;
}

TileGrid plan_tiles(int width, int height, int patch_size, int overlap) {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "image must be at least 1x1");
  if (overlap < 0 || patch_size <= overlap) {
    throw Error(ErrorCode::InvalidArgument, "need patch_size > overlap >= 0");
  }
  TileGrid g;
  g.patch_width = std::min(patch_size, width);
  g.patch_height = std::min(patch_size, height);
  g.patch_shrunk = patch_size > std::min(width, height);
  g.overlap = overlap;
  g.tiles_x = tiles_along(width, g.patch_width, overlap);
  g.tiles_y = tiles_along(height, g.patch_height, overlap);
  const int stride = patch_size - overlap;
  for (int j = 0; j < g.tiles_y; ++j) {
    const int y0 = std::min(j * stride, height - g.patch_height);
    for (int i = 0; i < g.tiles_x; ++i) {
      const int x0 = std::min(i * stride, width - g.patch_width);
      g.tiles.push_back({x0, y0, g.patch_width, g.patch_height});
    }
  }
  return g;
}

namespace {
Eigen::VectorXd ramp(int n, int overlap) {
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    const int d = std::min(i, n - 1 - i);
    r(i) = d < overlap ? double(d + 1) / double(overlap + 1) : 1.0;
  }
  return r;
}
}  // namespace

WeightMap weight_map(int width, int height, int overlap) {
  if (width < 1 || height < 1 || overlap < 0 || 2 * overlap >= std::min(width, height)) {
    throw Error(ErrorCode::InvalidArgument, "weight map needs 0 <= overlap < patch / 2");
  }
  return (ramp(height, overlap) * ramp(width, overlap).transpose()).array();
}

WeightMap weight_map(const TileGrid& grid) {
  const int limit = (std::min(grid.patch_width, grid.patch_height) - 1) / 2;
  return weight_map(grid.patch_width, grid.patch_height, std::min(grid.overlap, limit));
}

}  // namespace neuroseg
