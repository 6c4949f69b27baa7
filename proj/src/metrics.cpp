#include "neuroseg/metrics.hpp"

#include <set>
#include <string>

namespace neuroseg {

namespace {

void require_same_shape(const LabelMap& a, const LabelMap& b) {
  if (!same_shape(a, b)) {
    throw Error(ErrorCode::DimensionMismatch, "label maps differ in shape");
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// i_a / u_a > i_b / u_b, exactly.
bool iou_greater(std::size_t ia, std::size_t ua, std::size_t ib, std::size_t ub) {
  return static_cast<unsigned long long>(ia) * ub > static_cast<unsigned long long>(ib) * ua;
}

}  // namespace

DetectionCounts match_detections(const LabelMap& pred, const PointSet& centroids) {
  std::map<Label, std::size_t> hits;
  DetectionCounts c;
  for (const auto& p : centroids) {
    if (!in_bounds(pred, p.x, p.y)) {
      throw Error(ErrorCode::OutOfBounds,
                  "centroid (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") outside the image");
    }
    const Label l = pred(p.y, p.x);
    if (l == 0) {
      ++c.fn;
    } else {
      ++hits[l];
    }
  }
  for (const auto& [label, area] : component_sizes(pred)) {
    const auto it = hits.find(label);
    const std::size_t n = it == hits.end() ? 0 : it->second;
    if (n == 0) {
      ++c.fp;
    } else if (n == 1) {
      ++c.tp;
    } else {
      c.fn += n;
    }
  }
  return c;
}

PrecisionRecall precision_recall_f1(const DetectionCounts& c) {
  PrecisionRecall r;
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  const double s = r.precision + r.recall;
  r.f1 = s > 0 ? 2.0 * r.precision * r.recall / s : 0.0;
  return r;
}

double rce(const DetectionCounts& c) {
  if (c.tp + c.fn == 0) {
    throw Error(ErrorCode::UndefinedRCE, "no annotated centroids (TP + FN == 0)");
  }
  const std::size_t diff = c.fp > c.fn ? c.fp - c.fn : c.fn - c.fp;
  return ratio(diff, c.tp + c.fn);
}

double dice(const BinaryMask& pred, const BinaryMask& gt) {
  if (!same_shape(pred, gt)) {
    throw Error(ErrorCode::DimensionMismatch, "masks differ in shape");
  }
  const auto a = static_cast<std::size_t>(pred.count());
  const auto b = static_cast<std::size_t>(gt.count());
  if (a + b == 0) return 1.0;
  const auto both = static_cast<std::size_t>((pred && gt).count());
  return 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
}

OverlapTable overlap_table(const LabelMap& pred, const LabelMap& gt) {
  require_same_shape(pred, gt);
  OverlapTable t;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const Label p = pred.data()[i];
    const Label g = gt.data()[i];
    if (p != 0) ++t.pred_area[p];
    if (g != 0) ++t.gt_area[g];
    if (p != 0 && g != 0) ++t.intersection[{g, p}];
  }
  return t;
}

PrecisionRecall f1_seg(const LabelMap& pred, const LabelMap& gt, double iou_threshold) {
  const OverlapTable t = overlap_table(pred, gt);
  std::set<Label> consumed;
  DetectionCounts c;
  auto it = t.intersection.begin();
  for (const auto& [g, g_area] : t.gt_area) {
    Label best = 0;
    std::size_t best_i = 0, best_u = 1;
    for (; it != t.intersection.end() && it->first.first == g; ++it) {
      const Label p = it->first.second;
      const std::size_t i = it->second;
      const std::size_t u = g_area + t.pred_area.at(p) - i;
      if (best == 0 || iou_greater(i, u, best_i, best_u)) {
        best = p;
        best_i = i;
        best_u = u;
      }
    }
    const bool hit = best != 0 && static_cast<double>(best_i) > iou_threshold * static_cast<double>(best_u) &&
                     !consumed.contains(best);
    if (hit) {
      consumed.insert(best);
      ++c.tp;
    } else {
      ++c.fn;
    }
  }
  c.fp = t.pred_area.size() - consumed.size();
  return precision_recall_f1(c);
}

double aji(const LabelMap& pred, const LabelMap& gt) {
  const OverlapTable t = overlap_table(pred, gt);
  if (t.gt_area.empty()) {
    throw Error(ErrorCode::EmptyGroundTruth, "ground truth has no objects");
  }
  std::set<Label> assigned;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  auto it = t.intersection.begin();
  for (const auto& [g, g_area] : t.gt_area) {
    Label best = 0;
    std::size_t best_i = 0, best_u = 1;
    for (; it != t.intersection.end() && it->first.first == g; ++it) {
      const Label p = it->first.second;
      if (assigned.contains(p)) continue;
      const std::size_t i = it->second;
      const std::size_t u = g_area + t.pred_area.at(p) - i;
      if (best == 0 || iou_greater(i, u, best_i, best_u)) {
        best = p;
        best_i = i;
        best_u = u;
      }
    }
    if (best == 0) {
      denominator += g_area;
    } else {
      assigned.insert(best);
      numerator += best_i;
      denominator += best_u;
    }
  }
  for (const auto& [p, area] : t.pred_area)
    if (!assigned.contains(p)) denominator += area;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace neuroseg
