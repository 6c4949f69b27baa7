#pragma once

#include "neuroseg/core_image.hpp"
#include "neuroseg/mask_synthesis.hpp"
#include "neuroseg/probability.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace neuroseg {

/// Synthetic stand-in for a predictor: disks as instances, the contour class
/// between touching instances, and a probability map rendered from them.

struct Disk {
  Point center;
  int radius = 0;
};

struct RenderOptions {
  int contour_thickness = 4;
  /// Fraction of each touching interface rendered as contour in the
  /// probability map, measured from the line through the two centres. 1 keeps
  /// the full band; smaller values leave the two instances bridged by neuron
  /// pixels near the rim of the interface.
  double ridge_coverage = 1.0;
  /// Per-pair override of ridge_coverage, keyed by (lower label, higher label).
  std::map<std::pair<Label, Label>, double> pair_coverage;
  double blur_sigma = 1.0;
  /// Amplitude of uniform noise added to every channel before renormalizing.
  double noise = 0.0;
  std::uint64_t noise_seed = 0;
};

struct Scene {
  std::vector<Disk> disks;
  /// Disk i carries label i + 1; overlaps go to the disk with the smaller
  /// radius-normalized distance.
  LabelMap labels;
  PointSet centroids;
  ThreeClassMask classes;
  ProbabilityMap<double> prob;
};

Scene render_scene(int width, int height, const std::vector<Disk>& disks, const RenderOptions& opts);

struct SceneSpec {
  int width = 512;
  int height = 512;
  int count = 100;
  int radius_min = 10;
  int radius_max = 16;
  /// Probability that a new disk is placed overlapping an existing one.
  double touching_fraction = 0.0;
  /// Overlapping centres are at least this fraction of the radius sum apart.
  double min_center_ratio = 0.7;
  /// Per touching pair, ridge coverage is drawn uniformly from [ridge_coverage_min, 1].
  double ridge_coverage_min = 1.0;
  double blur_sigma = 1.0;
  double noise = 0.0;
  int contour_thickness = 4;

  void validate() const;
};

/// Deterministic for a given (spec, seed) on every platform.
Scene generate_scene(const SceneSpec& spec, std::uint64_t seed);

/// Uniform double in [0,1) from a 64-bit generator word.
double unit_interval(std::uint64_t word);

}  // namespace neuroseg
