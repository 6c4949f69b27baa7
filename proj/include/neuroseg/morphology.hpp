#pragma once

#include "neuroseg/core_image.hpp"
#include "neuroseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <vector>

namespace neuroseg {

/// Last non-empty stage of one component lineage under repeated erosion.
/// `erosion_count` is the number of erosions that produced it; dilating the
/// residue that many times brings it back to the scale of the original object.
struct UltimateResidue {
  std::vector<Point> pixels;  // raster order
  int erosion_count = 0;
  Label label = 0;
};

template <typename Scalar>
using DistanceMap = Raster<Scalar>;

template <typename Scalar>
using Topography = Raster<Scalar>;

/// Binary erosion; pixels outside the raster count as background.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

/// Iterated erosion with lineage tracking. A component of the k-th erosion
/// that contains no pixel of the (k+1)-th erosion is a residue with
/// erosion_count k. A component that splits is not a residue; its children
/// continue independently. Residue labels are 1..n in raster order of each
/// residue's first pixel.
std::vector<UltimateResidue> ultimate_erosion(const BinaryMask& mask, const StructuringElement& se,
                                              Connectivity conn = Connectivity::eight);

/// Grows every labeled region of `seeds` by `steps[label]` successive
/// dilations, all regions advancing together one dilation per step. An
/// unclaimed pixel reached by several regions in the same step goes to the
/// lowest label. Claimed pixels that end up disconnected from their seed are
/// released. Labels missing from `steps` do not grow.
LabelMap grow_regions(const LabelMap& seeds, const std::map<Label, int>& steps,
                      const StructuringElement& se, Connectivity conn = Connectivity::eight);

/// Re-dilates each residue `erosion_count` times on a width x height canvas.
LabelMap dynamic_reconstruction(const std::vector<UltimateResidue>& residues,
                                const StructuringElement& se, int width, int height,
                                Connectivity conn = Connectivity::eight);

namespace detail {

// Lower envelope of parabolas for one line of squared distances (in place).
inline void squared_distance_1d(std::vector<double>& f, std::vector<double>& d,
                                std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  d.resize(n);
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = 0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = double(q) - v[k];
    d[q] = dq * dq + f[v[k]];
  }
  f.swap(d);
}

}  // namespace detail

/// Exact Euclidean distance from each foreground pixel to the nearest
/// background pixel, where everything outside the raster is background.
template <typename Scalar = double>
DistanceMap<Scalar> distance_transform(const BinaryMask& mask) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  // Padded by one background pixel on every side; large finite "infinity"
  // keeps the envelope arithmetic free of inf - inf.
  const int ph = h + 2;
  const int pw = w + 2;
  const double far = 4.0 * (double(ph) * ph + double(pw) * pw);
  Raster<double> sq = Raster<double>::Zero(ph, pw);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) sq(y + 1, x + 1) = mask(y, x) ? far : 0.0;

  std::vector<double> line, scratch, z;
  std::vector<int> v;
  for (int x = 0; x < pw; ++x) {
    line.resize(ph);
    for (int y = 0; y < ph; ++y) line[y] = sq(y, x);
    detail::squared_distance_1d(line, scratch, v, z);
    for (int y = 0; y < ph; ++y) sq(y, x) = line[y];
  }
  for (int y = 0; y < ph; ++y) {
    line.resize(pw);
    for (int x = 0; x < pw; ++x) line[x] = sq(y, x);
    detail::squared_distance_1d(line, scratch, v, z);
    for (int x = 0; x < pw; ++x) sq(y, x) = line[x];
  }
  DistanceMap<Scalar> out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(y, x) = static_cast<Scalar>(std::sqrt(sq(y + 1, x + 1)));
  return out;
}

/// Peaks of a distance map: positive pixels that are >= every value within
/// `min_distance` (Euclidean), thinned so that accepted peaks are at least
/// `min_distance` apart. Higher peaks win; equal peaks resolve in raster order.
/// Returned in raster order.
template <typename Scalar>
PointSet local_maxima(const DistanceMap<Scalar>& dm, int min_distance) {
  if (min_distance < 1) {
    throw Error(ErrorCode::InvalidArgument, "min_distance must be >= 1");
  }
  const int h = static_cast<int>(dm.rows());
  const int w = static_cast<int>(dm.cols());
  const StructuringElement window = disk_structuring_element(min_distance);
  const auto nbrs = neighbor_offsets(Connectivity::eight);

  auto dominates_window = [&](int x, int y, std::span<const Offset> offs) {
    const Scalar v = dm(y, x);
    for (const auto& o : offs) {
      const int nx = x + o.dx;
      const int ny = y + o.dy;
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      if (dm(ny, nx) > v) return false;
    }
    return true;
  };

  std::vector<Point> candidates;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (dm(y, x) > 0 && dominates_window(x, y, nbrs) && dominates_window(x, y, window.offsets))
        candidates.push_back({x, y});

  std::stable_sort(candidates.begin(), candidates.end(), [&](const Point& a, const Point& b) {
    return dm(a.y, a.x) > dm(b.y, b.x);
  });

  const long min_d2 = static_cast<long>(min_distance) * min_distance;
  PointSet accepted;
  for (const auto& c : candidates) {
    bool spaced = true;
    for (const auto& a : accepted) {
      const long dx = c.x - a.x;
      const long dy = c.y - a.y;
      if (dx * dx + dy * dy < min_d2) {
        spaced = false;
        break;
      }
    }
    if (spaced) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(), raster_less);
  return accepted;
}

/// Marker-controlled watershed by priority flooding. Pixels are flooded in
/// increasing elevation, FIFO among equal elevations; a pixel takes the label
/// of the first basin that reaches it. Pixels outside `mask` stay 0.
template <typename Scalar>
LabelMap seeded_watershed(const Topography<Scalar>& topo, const LabelMap& markers,
                          const BinaryMask& mask, Connectivity conn = Connectivity::eight) {
  if (!same_shape(topo, markers) || !same_shape(topo, mask)) {
    throw Error(ErrorCode::DimensionMismatch, "topography, markers and mask must share a shape");
  }
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());

  struct Entry {
    Scalar elevation;
    std::uint64_t seq;
    int x, y;
    bool operator>(const Entry& o) const {
      return elevation != o.elevation ? elevation > o.elevation : seq > o.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  std::uint64_t seq = 0;

  LabelMap out = LabelMap::Zero(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Label l = markers(y, x);
      if (l == 0) continue;
      if (!mask(y, x)) {
        throw Error(ErrorCode::MarkerOutsideMask,
                    "marker " + std::to_string(l) + " at (" + std::to_string(x) + "," +
                        std::to_string(y) + ") lies on mask background");
      }
      out(y, x) = l;
      queue.push({topo(y, x), seq++, x, y});
    }
  }

  const auto nbrs = neighbor_offsets(conn);
  while (!queue.empty()) {
    const Entry e = queue.top();
    queue.pop();
    const Label l = out(e.y, e.x);
    for (const auto& o : nbrs) {
      const int nx = e.x + o.dx;
      const int ny = e.y + o.dy;
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      if (!mask(ny, nx) || out(ny, nx) != 0) continue;
      out(ny, nx) = l;
      queue.push({topo(ny, nx), seq++, nx, ny});
    }
  }
  return out;
}

}  // namespace neuroseg
