#pragma once

// Fixtures, random generators and slow reference implementations shared by
// the test binaries. The references favour obviousness over speed.

#include "neuroseg/core_image.hpp"
#include "neuroseg/metrics.hpp"
#include "neuroseg/morphology.hpp"
#include "neuroseg/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

namespace neuroseg::testing {

// ------------------------------------------------------------------ fixtures

inline void paint_disk(BinaryMask& m, int cx, int cy, int r) {
  for (int y = 0; y < m.rows(); ++y)
    for (int x = 0; x < m.cols(); ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m(y, x) = true;
}

inline void paint_disk(LabelMap& m, int cx, int cy, int r, Label l) {
  for (int y = 0; y < m.rows(); ++y)
    for (int x = 0; x < m.cols(); ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m(y, x) = l;
}

inline BinaryMask disk_mask(int w, int h, int cx, int cy, int r) {
  BinaryMask m = BinaryMask::Constant(h, w, false);
  paint_disk(m, cx, cy, r);
  return m;
}

/// Two disks of radius r, centres `gap` apart on a horizontal line, joined by a
/// neck of the given half-height.
inline BinaryMask dumbbell(int r, int gap, int neck_half_height) {
  const int w = 2 * r + gap + 8;
  const int h = 2 * r + 8;
  const int cy = h / 2;
  const int x1 = r + 4;
  const int x2 = x1 + gap;
  BinaryMask m = BinaryMask::Constant(h, w, false);
  paint_disk(m, x1, cy, r);
  paint_disk(m, x2, cy, r);
  m.block(cy - neck_half_height, x1, 2 * neck_half_height + 1, gap + 1).setConstant(true);
  return m;
}

// --------------------------------------------------------------- generators

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return unit_interval(engine_()); }
  int uniform_int(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
  bool coin(double p = 0.5) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Union of a few random disks and rectangles.
inline BinaryMask random_blob_mask(Rng& rng, int max_side) {
  const int w = rng.uniform_int(8, max_side);
  const int h = rng.uniform_int(8, max_side);
  BinaryMask m = BinaryMask::Constant(h, w, false);
  const int shapes = rng.uniform_int(1, 6);
  for (int s = 0; s < shapes; ++s) {
    const int cx = rng.uniform_int(0, w - 1);
    const int cy = rng.uniform_int(0, h - 1);
    if (rng.coin(0.7)) {
      paint_disk(m, cx, cy, rng.uniform_int(1, std::max(1, std::min(w, h) / 3)));
    } else {
      const int bw = rng.uniform_int(1, w - cx);
      const int bh = rng.uniform_int(1, h - cy);
      m.block(cy, cx, bh, bw).setConstant(true);
    }
  }
  return m;
}

/// Up to `max_objects` labels painted as overlapping rectangles and disks.
inline LabelMap random_label_map(Rng& rng, int w, int h, int max_objects) {
  LabelMap m = LabelMap::Zero(h, w);
  const int n = rng.uniform_int(0, max_objects);
  for (int l = 1; l <= n; ++l) {
    const int cx = rng.uniform_int(0, w - 1);
    const int cy = rng.uniform_int(0, h - 1);
    if (rng.coin()) {
      paint_disk(m, cx, cy, rng.uniform_int(1, std::max(1, std::min(w, h) / 3)), l);
    } else {
      const int bw = rng.uniform_int(1, w - cx);
      const int bh = rng.uniform_int(1, h - cy);
      m.block(cy, cx, bh, bw).setConstant(l);
    }
  }
  return m;
}

// --------------------------------------------------------------- references

inline BinaryMask naive_erode(const BinaryMask& m, int r) {
  BinaryMask out = BinaryMask::Constant(m.rows(), m.cols(), false);
  for (int y = 0; y < m.rows(); ++y)
    for (int x = 0; x < m.cols(); ++x) {
      bool all = true;
      for (int dy = -r; dy <= r && all; ++dy)
        for (int dx = -r; dx <= r && all; ++dx) {
          if (dx * dx + dy * dy > r * r) continue;
          const int nx = x + dx, ny = y + dy;
          all = nx >= 0 && ny >= 0 && nx < m.cols() && ny < m.rows() && m(ny, nx);
        }
      out(y, x) = all;
    }
  return out;
}

inline BinaryMask naive_dilate(const BinaryMask& m, int r) {
  BinaryMask out = BinaryMask::Constant(m.rows(), m.cols(), false);
  for (int y = 0; y < m.rows(); ++y)
    for (int x = 0; x < m.cols(); ++x)
      for (int dy = -r; dy <= r && !out(y, x); ++dy)
        for (int dx = -r; dx <= r && !out(y, x); ++dx) {
          if (dx * dx + dy * dy > r * r) continue;
          const int nx = x + dx, ny = y + dy;
          out(y, x) = nx >= 0 && ny >= 0 && nx < m.cols() && ny < m.rows() && m(ny, nx);
        }
  return out;
}

inline bool adjacent(int dx, int dy, Connectivity conn) {
  if (dx == 0 && dy == 0) return false;
  if (std::abs(dx) > 1 || std::abs(dy) > 1) return false;
  return conn == Connectivity::eight || dx == 0 || dy == 0;
}

/// Components as sets of points, found by breadth-first search; the returned
/// list is ordered by each component's first pixel in raster order.
inline std::vector<std::vector<Point>> naive_components(const BinaryMask& m, Connectivity conn) {
  std::vector<std::vector<Point>> comps;
  BinaryMask seen = BinaryMask::Constant(m.rows(), m.cols(), false);
  for (int y = 0; y < m.rows(); ++y)
    for (int x = 0; x < m.cols(); ++x) {
      if (!m(y, x) || seen(y, x)) continue;
      std::vector<Point> comp;
      std::deque<Point> queue{{x, y}};
      seen(y, x) = true;
      while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        comp.push_back(p);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (!adjacent(dx, dy, conn)) continue;
            const int nx = p.x + dx, ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= m.cols() || ny >= m.rows() || !m(ny, nx) || seen(ny, nx)) continue;
            seen(ny, nx) = true;
            queue.push_back({nx, ny});
          }
      }
      std::sort(comp.begin(), comp.end(), raster_less);
      comps.push_back(std::move(comp));
    }
  return comps;
}

struct NaiveResidue {
  std::vector<Point> pixels;
  int erosion_count = 0;
  friend bool operator==(const NaiveResidue&, const NaiveResidue&) = default;
};

/// Erode, label, keep the components that vanish in the next erosion; repeat.
inline std::vector<NaiveResidue> naive_ultimate_erosion(const BinaryMask& mask, int r, Connectivity conn) {
  std::vector<NaiveResidue> out;
  BinaryMask current = mask;
  for (int t = 0; current.any(); ++t) {
    const BinaryMask next = naive_erode(current, r);
    for (auto& comp : naive_components(current, conn)) {
      const bool survives = std::any_of(comp.begin(), comp.end(), [&](const Point& p) { return next(p.y, p.x); });
      if (!survives) out.push_back({std::move(comp), t});
    }
    current = next;
  }
  std::sort(out.begin(), out.end(), [](const NaiveResidue& a, const NaiveResidue& b) {
    return raster_less(a.pixels.front(), b.pixels.front());
  });
  return out;
}

/// Simultaneous growth by definition: at step s every unlabelled pixel within
/// the disk of any pixel of a label still allowed to grow takes the lowest
/// such label. Afterwards pixels not connected to their own seed are dropped.
inline LabelMap naive_grow_regions(const LabelMap& seeds, const std::map<Label, int>& steps, int r,
                                   Connectivity conn) {
  LabelMap out = seeds;
  int max_steps = 0;
  for (const auto& [l, s] : steps) max_steps = std::max(max_steps, s);
  for (int s = 1; s <= max_steps; ++s) {
    LabelMap next = out;
    for (int y = 0; y < out.rows(); ++y)
      for (int x = 0; x < out.cols(); ++x) {
        if (out(y, x) != 0) continue;
        Label best = 0;
        for (int dy = -r; dy <= r; ++dy)
          for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy > r * r) continue;
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= out.cols() || ny >= out.rows()) continue;
            const Label l = out(ny, nx);
            if (l == 0) continue;
            const auto it = steps.find(l);
            if (it == steps.end() || it->second < s) continue;
            if (best == 0 || l < best) best = l;
          }
        next(y, x) = best;
      }
    out = next;
  }
  LabelMap kept = LabelMap::Zero(out.rows(), out.cols());
  for (const auto& comp : naive_components(out != 0, conn)) {
    // Split the component by label and keep each piece that holds a seed pixel.
    std::map<Label, std::vector<Point>> by_label;
    for (const auto& p : comp) by_label[out(p.y, p.x)].push_back(p);
    for (const auto& [l, pts] : by_label) {
      LabelMap piece = LabelMap::Zero(out.rows(), out.cols());
      for (const auto& p : pts) piece(p.y, p.x) = 1;
      for (const auto& sub : naive_components(piece != 0, conn)) {
        const bool seeded = std::any_of(sub.begin(), sub.end(), [&](const Point& p) { return seeds(p.y, p.x) == l; });
        if (seeded)
          for (const auto& p : sub) kept(p.y, p.x) = l;
      }
    }
  }
  return kept;
}

/// Euclidean distance to the nearest background pixel; everything outside
/// the raster counts as background.
inline Raster<double> brute_force_edt(const BinaryMask& m) {
  const int h = static_cast<int>(m.rows());
  const int w = static_cast<int>(m.cols());
  std::vector<Point> background;
  for (int y = -1; y <= h; ++y)
    for (int x = -1; x <= w; ++x)
      if (x < 0 || y < 0 || x >= w || y >= h || !m(y, x)) background.push_back({x, y});
  Raster<double> out = Raster<double>::Zero(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!m(y, x)) continue;
      long best = std::numeric_limits<long>::max();
      for (const auto& b : background) {
        const long dx = b.x - x, dy = b.y - y;
        best = std::min(best, dx * dx + dy * dy);
      }
      out(y, x) = std::sqrt(static_cast<double>(best));
    }
  return out;
}

inline std::set<Label> labels_of(const LabelMap& m) {
  std::set<Label> s;
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m.data()[i] != 0) s.insert(m.data()[i]);
  return s;
}

/// Pixel sets, counted directly.
struct PairCounts {
  std::size_t inter = 0, uni = 0;
};

inline PairCounts count_pair(const LabelMap& pred, Label p, const LabelMap& gt, Label g) {
  PairCounts c;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const bool a = pred.data()[i] == p;
    const bool b = gt.data()[i] == g;
    c.inter += a && b;
    c.uni += a || b;
  }
  return c;
}

inline std::size_t area(const LabelMap& m, Label l) { return static_cast<std::size_t>((m == l).count()); }

/// Largest number of one-to-one (gt, pred) pairs with IoU > 0.5, by trying
/// every injective assignment; returns the F1 it implies.
inline double exhaustive_f1_seg(const LabelMap& pred, const LabelMap& gt) {
  const std::set<Label> gt_set = labels_of(gt), pred_set = labels_of(pred);
  const std::vector<Label> gts(gt_set.begin(), gt_set.end());
  const std::vector<Label> preds(pred_set.begin(), pred_set.end());
  std::vector<bool> used(preds.size(), false);
  std::function<std::size_t(std::size_t)> best = [&](std::size_t i) -> std::size_t {
    if (i == gts.size()) return 0;
    std::size_t result = best(i + 1);
    for (std::size_t j = 0; j < preds.size(); ++j) {
      if (used[j]) continue;
      const PairCounts c = count_pair(pred, preds[j], gt, gts[i]);
      if (!(2 * c.inter > c.uni)) continue;
      used[j] = true;
      result = std::max(result, 1 + best(i + 1));
      used[j] = false;
    }
    return result;
  };
  const double tp = static_cast<double>(best(0));
  const double fp = static_cast<double>(preds.size()) - tp;
  const double fn = static_cast<double>(gts.size()) - tp;
  return tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
}

/// AJI from the assignment that is lexicographically best over ground-truth
/// objects in label order: each gets the highest IoU it can (lower prediction
/// label on ties) among overlapping predictions, found by trying every
/// injective assignment.
inline double exhaustive_aji(const LabelMap& pred, const LabelMap& gt) {
  const std::set<Label> gt_set = labels_of(gt), pred_set = labels_of(pred);
  const std::vector<Label> gts(gt_set.begin(), gt_set.end());
  const std::vector<Label> preds(pred_set.begin(), pred_set.end());
  // Key per gt: (inter, union, pred label); "none" is (0, 1, max).
  struct Choice {
    std::size_t inter = 0, uni = 1;
    Label pred = std::numeric_limits<Label>::max();
  };
  auto better = [](const Choice& a, const Choice& b) {
    const auto lhs = static_cast<unsigned __int128>(a.inter) * b.uni;
    const auto rhs = static_cast<unsigned __int128>(b.inter) * a.uni;
    if (lhs != rhs) return lhs > rhs;
    return a.pred < b.pred;
  };
  auto lex_better = [&](const std::vector<Choice>& a, const std::vector<Choice>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (better(a[i], b[i])) return true;
      if (better(b[i], a[i])) return false;
    }
    return false;
  };
  std::vector<Choice> current(gts.size()), best_assignment;
  bool have_best = false;
  std::vector<bool> used(preds.size(), false);
  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (i == gts.size()) {
      if (!have_best || lex_better(current, best_assignment)) {
        best_assignment = current;
        have_best = true;
      }
      return;
    }
    current[i] = Choice{};
    search(i + 1);
    for (std::size_t j = 0; j < preds.size(); ++j) {
      if (used[j]) continue;
      const PairCounts c = count_pair(pred, preds[j], gt, gts[i]);
      if (c.inter == 0) continue;
      used[j] = true;
      current[i] = Choice{c.inter, c.uni, preds[j]};
      search(i + 1);
      used[j] = false;
    }
  };
  search(0);

  std::size_t num = 0, den = 0;
  std::set<Label> assigned;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    const Choice& c = best_assignment[i];
    if (c.pred == std::numeric_limits<Label>::max()) {
      den += area(gt, gts[i]);
    } else {
      num += c.inter;
      den += c.uni;
      assigned.insert(c.pred);
    }
  }
  for (Label p : preds)
    if (!assigned.contains(p)) den += area(pred, p);
  return static_cast<double>(num) / static_cast<double>(den);
}

// ------------------------------------------------------------------- files

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() / ("neuroseg_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace neuroseg::testing
