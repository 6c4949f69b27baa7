#pragma once

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace neuroseg {

/// Row-major raster, indexed (y, x) with origin at the top-left.
/// rows() is the height, cols() the width.
template <typename T>
using Raster = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Label = std::int32_t;
using BinaryMask = Raster<bool>;
using LabelMap = Raster<Label>;

struct Point {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Raster-scan order: row first, then column.
inline bool raster_less(const Point& a, const Point& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

using PointSet = std::vector<Point>;

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Discrete disk. `offsets` are listed in raster order; `row_half_width[dy + radius]`
/// is the horizontal half extent of the row at vertical offset dy.
struct StructuringElement {
  int radius = 0;
  std::vector<Offset> offsets;
  std::vector<int> row_half_width;

  std::size_t size() const { return offsets.size(); }
};

enum class Connectivity { four, eight };

std::span<const Offset> neighbor_offsets(Connectivity conn);

/// All lattice offsets with dx^2 + dy^2 <= radius^2.
StructuringElement disk_structuring_element(int radius);

/// Labels maximal connected foreground regions 1..n in raster order of each
/// region's first pixel.
LabelMap connected_components(const BinaryMask& mask, Connectivity conn = Connectivity::eight);

/// Pixel count per nonzero label.
std::map<Label, std::size_t> component_sizes(const LabelMap& labels);

inline BinaryMask foreground(const LabelMap& labels) { return labels != 0; }

template <typename Derived>
bool in_bounds(const Eigen::DenseBase<Derived>& raster, int x, int y) {
  return x >= 0 && y >= 0 && x < raster.cols() && y < raster.rows();
}

template <typename A, typename B>
bool same_shape(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

}  // namespace neuroseg
