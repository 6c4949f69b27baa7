#pragma once

#include "neuroseg/core_image.hpp"
#include "neuroseg/error.hpp"
#include "neuroseg/probability.hpp"

#include <span>
#include <string>
#include <vector>

namespace neuroseg {

struct TileRect {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
  friend bool operator==(const TileRect&, const TileRect&) = default;
};

struct TileGrid {
  int patch_width = 0;
  int patch_height = 0;
  int overlap = 0;
  int tiles_x = 0;
  int tiles_y = 0;
  /// Set when the requested patch did not fit and was shrunk to the image.
  bool patch_shrunk = false;
  /// Row-major over (tile row, tile column).
  std::vector<TileRect> tiles;
};

inline constexpr int kDefaultPatchSize = 1344;
inline constexpr int kDefaultOverlap = 120;

/// Tiles at multiples of the stride patch_size - overlap, the last tile of
/// each axis pulled back flush with the image edge. A patch larger than the
/// image along an axis is shrunk to the image extent on that axis.
TileGrid plan_tiles(int width, int height, int patch_size = kDefaultPatchSize,
                    int overlap = kDefaultOverlap);

/// Number of tiles along an axis of `length` px.
int tiles_along(int length, int patch, int overlap);

using WeightMap = Raster<double>;

/// Separable linear border ramp: 1/(overlap+1) on the outermost pixel up to 1
/// at `overlap` px from the border. Requires 2 * overlap < min(width, height).
WeightMap weight_map(int width, int height, int overlap);
inline WeightMap weight_map(int patch_size, int overlap) { return weight_map(patch_size, patch_size, overlap); }

/// Weight map for the tiles of `grid`, with the ramp narrowed if the patch was shrunk.
WeightMap weight_map(const TileGrid& grid);

template <typename Scalar>
struct Tile {
  TileRect rect;
  ProbabilityMap<Scalar> prob;
};

template <typename Scalar>
ProbabilityMap<Scalar> crop(const ProbabilityMap<Scalar>& pm, const TileRect& r) {
  ProbabilityMap<Scalar> out;
  for (int c = 0; c < 3; ++c) out.channels[c] = pm.channels[c].block(r.y0, r.x0, r.height, r.width);
  return out;
}

/// Weighted blend sum(w_i p_i) / sum(w_i) over covering tiles, accumulated in
/// tile order, then renormalized per pixel. Throws CoverageGap if some pixel
/// receives no weight.
template <typename Scalar>
ProbabilityMap<Scalar> stitch(std::span<const Tile<Scalar>> tiles, const WeightMap& weights, int width,
                              int height) {
  using Acc = long double;
  std::array<Raster<Acc>, 3> acc;
  for (auto& a : acc) a = Raster<Acc>::Zero(height, width);
  Raster<Acc> wsum = Raster<Acc>::Zero(height, width);

  for (const auto& tile : tiles) {
    const TileRect& r = tile.rect;
    if (tile.prob.width() != r.width || tile.prob.height() != r.height) {
      throw Error(ErrorCode::DimensionMismatch, "tile probability map does not match its rectangle");
    }
    if (weights.cols() != r.width || weights.rows() != r.height) {
      throw Error(ErrorCode::DimensionMismatch, "weight map does not match tile size");
    }
    if (r.x0 < 0 || r.y0 < 0 || r.x0 + r.width > width || r.y0 + r.height > height) {
      throw Error(ErrorCode::OutOfBounds, "tile extends past the canvas");
    }
    for (int y = 0; y < r.height; ++y) {
      for (int x = 0; x < r.width; ++x) {
        const Acc w = weights(y, x);
        wsum(r.y0 + y, r.x0 + x) += w;
        for (int c = 0; c < 3; ++c) acc[c](r.y0 + y, r.x0 + x) += w * static_cast<Acc>(tile.prob.channels[c](y, x));
      }
    }
  }

  ProbabilityMap<Scalar> out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Acc w = wsum(y, x);
      if (!(w > 0)) {
        throw Error(ErrorCode::CoverageGap,
                    "pixel (" + std::to_string(x) + "," + std::to_string(y) + ") is not covered by any tile");
      }
      std::array<Acc, 3> v;
      Acc s = 0;
      for (int c = 0; c < 3; ++c) {
        v[c] = acc[c](y, x) / w;
        s += v[c];
      }
      for (int c = 0; c < 3; ++c) out.channels[c](y, x) = static_cast<Scalar>(s > 0 ? v[c] / s : v[c]);
    }
  }
  return out;
}

template <typename Scalar>
ProbabilityMap<Scalar> stitch(const std::vector<Tile<Scalar>>& tiles, const WeightMap& weights, int width,
                              int height) {
  return stitch(std::span<const Tile<Scalar>>(tiles), weights, width, height);
}

}  // namespace neuroseg
