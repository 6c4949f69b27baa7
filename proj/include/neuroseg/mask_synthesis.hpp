#pragma once

#include "neuroseg/core_image.hpp"
#include "neuroseg/probability.hpp"

#include <vector>

namespace neuroseg {

/// Categorical ground truth: background (tissue), contour, neuron.
using ThreeClassMask = ClassMap;

struct RegionGrowing {
  LabelMap labels;
  /// Seeds that did not land on foreground; they were skipped.
  std::vector<Point> rejected_seeds;
};

/// Competitive region growing inside `binary`. All seeds advance one
/// neighbourhood step at a time. A pixel reached by several fronts in the same
/// step goes to the seed closest in Euclidean distance, then to the lower seed
/// index. Seed i carries label i + 1; unseeded components stay 0.
RegionGrowing region_growing(const BinaryMask& binary, const PointSet& seeds,
                             Connectivity conn = Connectivity::eight);

/// Marks as contour every foreground pixel that has a foreground pixel of a
/// different label within Chebyshev radius thickness / 2. `thickness` must be
/// even and >= 2.
ThreeClassMask contour_class(const LabelMap& labels, int thickness = 4);

struct SynthesizedMasks {
  LabelMap instances;
  ThreeClassMask classes;
  std::vector<Point> rejected_seeds;
};

SynthesizedMasks synthesize(const BinaryMask& binary, const PointSet& seeds, int thickness = 4,
                            Connectivity conn = Connectivity::eight);

}  // namespace neuroseg
