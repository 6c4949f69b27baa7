#pragma once

#include "neuroseg/core_image.hpp"
#include "neuroseg/error.hpp"
#include "neuroseg/mask_synthesis.hpp"
#include "neuroseg/probability.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>

namespace neuroseg {

struct DetectionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  friend bool operator==(const DetectionCounts&, const DetectionCounts&) = default;
};

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Centroid-based detection counts. An object holding exactly one centroid is
/// a TP; each centroid on background or sharing its object with another
/// centroid is a FN; an object holding no centroid is a FP.
DetectionCounts match_detections(const LabelMap& pred, const PointSet& centroids);

/// Zero denominators yield 0.
PrecisionRecall precision_recall_f1(const DetectionCounts& c);

/// |FP - FN| / (TP + FN). Throws UndefinedRCE when TP + FN == 0.
double rce(const DetectionCounts& c);

/// 2|A∩B| / (|A|+|B|), and 1 when both masks are empty.
double dice(const BinaryMask& pred, const BinaryMask& gt);

/// Pixel overlap between two instance maps.
struct OverlapTable {
  std::map<Label, std::size_t> pred_area;
  std::map<Label, std::size_t> gt_area;
  /// (gt label, pred label) -> intersection size, nonzero entries only.
  std::map<std::pair<Label, Label>, std::size_t> intersection;
};

OverlapTable overlap_table(const LabelMap& pred, const LabelMap& gt);

/// Object-level F1 where a pair matches when IoU > iou_threshold.
PrecisionRecall f1_seg(const LabelMap& pred, const LabelMap& gt, double iou_threshold = 0.5);

/// Aggregated Jaccard Index. Ground-truth objects are visited in label order;
/// each takes the still-unassigned overlapping prediction of highest IoU
/// (lower label on ties). Unassigned predictions are added to the denominator.
double aji(const LabelMap& pred, const LabelMap& gt);

inline constexpr double kProbabilityClamp = 1e-7;

/// Mean categorical cross-entropy over pixels and the three classes.
template <typename Scalar>
double cross_entropy(const ProbabilityMap<Scalar>& pred, const ThreeClassMask& gt,
                     double clamp = kProbabilityClamp) {
  if (pred.height() != gt.rows() || pred.width() != gt.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "probability map and mask differ in shape");
  }
  const double n = static_cast<double>(gt.size());
  if (n == 0) return 0.0;
  double sum = 0;
  for (Eigen::Index y = 0; y < gt.rows(); ++y)
    for (Eigen::Index x = 0; x < gt.cols(); ++x) {
      const double p = static_cast<double>(pred.channels[gt(y, x)](y, x));
      sum += std::log(std::clamp(p, clamp, 1.0));
    }
  return sum == 0 ? 0.0 : -sum / (n * 3.0);
}

/// 1 - (2 Σ t·p + 1) / (Σ t + Σ p + 1) for one class plane.
template <typename Derived>
double soft_dice(const Eigen::DenseBase<Derived>& prob, const BinaryMask& truth) {
  if (!same_shape(prob, truth)) {
    throw Error(ErrorCode::DimensionMismatch, "probability plane and mask differ in shape");
  }
  const Raster<double> p = prob.derived().template cast<double>().array();
  const Raster<double> t = truth.template cast<double>();
  const double overlap = (p * t).sum();
  return 1.0 - (2.0 * overlap + 1.0) / (t.sum() + p.sum() + 1.0);
}

struct LossWeights {
  double cross_entropy = 0.5;
  double dice_neuron = 0.3;
  double dice_contour = 0.2;
};

struct LossTerms {
  double cross_entropy = 0;
  double dice_neuron = 0;
  double dice_contour = 0;
};

inline double combine(const LossTerms& terms, const LossWeights& w) {
  return w.cross_entropy * terms.cross_entropy + w.dice_neuron * terms.dice_neuron +
         w.dice_contour * terms.dice_contour;
}

template <typename Scalar>
LossTerms loss_terms(const ProbabilityMap<Scalar>& pred, const ThreeClassMask& gt) {
  LossTerms t;
  t.cross_entropy = cross_entropy(pred, gt);
  t.dice_neuron = soft_dice(pred.neuron(), class_mask(gt, PixelClass::neuron));
  t.dice_contour = soft_dice(pred.contour(), class_mask(gt, PixelClass::contour));
  return t;
}

template <typename Scalar>
double compound_loss(const ProbabilityMap<Scalar>& pred, const ThreeClassMask& gt,
                     const LossWeights& w = {}) {
  return combine(loss_terms(pred, gt), w);
}

}  // namespace neuroseg
