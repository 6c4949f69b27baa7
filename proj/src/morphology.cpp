#include "neuroseg/morphology.hpp"

#include <algorithm>

namespace neuroseg {

namespace {

// Per-row prefix counts: counts(y, x) = number of set pixels in row y before column x.
Raster<std::int32_t> row_prefix_counts(const BinaryMask& mask) {
  const Eigen::Index h = mask.rows();
  const Eigen::Index w = mask.cols();
  Raster<std::int32_t> counts(h, w + 1);
  for (Eigen::Index y = 0; y < h; ++y) {
    counts(y, 0) = 0;
    for (Eigen::Index x = 0; x < w; ++x) counts(y, x + 1) = counts(y, x) + (mask(y, x) ? 1 : 0);
  }
  return counts;
}

struct Box {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
  bool empty() const { return x1 < x0 || y1 < y0; }
};

Box bounding_box(const BinaryMask& mask) {
  Box b{static_cast<int>(mask.cols()), static_cast<int>(mask.rows()), -1, -1};
  for (int y = 0; y < mask.rows(); ++y)
    for (int x = 0; x < mask.cols(); ++x)
      if (mask(y, x)) {
        b.x0 = std::min(b.x0, x);
        b.y0 = std::min(b.y0, y);
        b.x1 = std::max(b.x1, x);
        b.y1 = std::max(b.y1, y);
      }
  return b;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  const auto counts = row_prefix_counts(mask);
  const int r = se.radius;
  BinaryMask out = BinaryMask::Constant(h, w, false);
  for (int y = 0; y < h; ++y) {
    if (y - r < 0 || y + r >= h) continue;
    for (int x = 0; x < w; ++x) {
      if (!mask(y, x)) continue;
      bool fits = true;
      for (int dy = -r; dy <= r && fits; ++dy) {
        const int half = se.row_half_width[dy + r];
        const int lo = x - half;
        const int hi = x + half;
        if (lo < 0 || hi >= w) {
          fits = false;
          break;
        }
        fits = counts(y + dy, hi + 1) - counts(y + dy, lo) == hi - lo + 1;
      }
      out(y, x) = fits;
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  const auto counts = row_prefix_counts(mask);
  const int r = se.radius;
  BinaryMask out = BinaryMask::Constant(h, w, false);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = false;
      for (int dy = -r; dy <= r && !hit; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        const int half = se.row_half_width[dy + r];
        const int lo = std::max(0, x - half);
        const int hi = std::min(w - 1, x + half);
        hit = lo <= hi && counts(yy, hi + 1) - counts(yy, lo) > 0;
      }
      out(y, x) = hit;
    }
  }
  return out;
}

std::vector<UltimateResidue> ultimate_erosion(const BinaryMask& mask, const StructuringElement& se,
                                              Connectivity conn) {
  if (se.radius < 1) {
    throw Error(ErrorCode::InvalidArgument, "ultimate erosion needs a structuring element radius >= 1");
  }
  std::vector<UltimateResidue> residues;
  BinaryMask current = mask;
  for (int step = 0;; ++step) {
    // Work on the bounding box of what is left; outside it everything is background.
    const Box box = bounding_box(current);
    if (box.empty()) break;
    const int bw = box.x1 - box.x0 + 1;
    const int bh = box.y1 - box.y0 + 1;
    const BinaryMask crop = current.block(box.y0, box.x0, bh, bw);
    const BinaryMask next_crop = erode(crop, se);
    const LabelMap comps = connected_components(crop, conn);

    const Label n = comps.maxCoeff();
    std::vector<bool> has_child(n + 1, false);
    for (int y = 0; y < bh; ++y)
      for (int x = 0; x < bw; ++x)
        if (next_crop(y, x)) has_child[comps(y, x)] = true;

    std::vector<int> slot(n + 1, -1);
    for (int y = 0; y < bh; ++y) {
      for (int x = 0; x < bw; ++x) {
        const Label c = comps(y, x);
        if (c == 0 || has_child[c]) continue;
        if (slot[c] < 0) {
          slot[c] = static_cast<int>(residues.size());
          residues.push_back({{}, step, 0});
        }
        residues[slot[c]].pixels.push_back({x + box.x0, y + box.y0});
      }
    }

    current.setConstant(false);
    current.block(box.y0, box.x0, bh, bw) = next_crop;
  }

  std::sort(residues.begin(), residues.end(), [](const UltimateResidue& a, const UltimateResidue& b) {
    return raster_less(a.pixels.front(), b.pixels.front());
  });
  for (std::size_t i = 0; i < residues.size(); ++i) residues[i].label = static_cast<Label>(i + 1);
  return residues;
}

LabelMap grow_regions(const LabelMap& seeds, const std::map<Label, int>& steps,
                      const StructuringElement& se, Connectivity conn) {
  const int h = static_cast<int>(seeds.rows());
  const int w = static_cast<int>(seeds.cols());
  LabelMap out = seeds;

  auto steps_of = [&](Label l) {
    const auto it = steps.find(l);
    return it == steps.end() ? 0 : it->second;
  };

  int max_steps = 0;
  for (const auto& [l, s] : steps) max_steps = std::max(max_steps, s);

  std::vector<Point> seed_pixels;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (seeds(y, x) != 0) seed_pixels.push_back({x, y});

  // Only pixels claimed in the previous step can reach new ground: anything
  // within reach of older pixels was claimed (by someone) back then.
  std::vector<Point> frontier;
  for (const auto& p : seed_pixels)
    if (steps_of(seeds(p.y, p.x)) >= 1) frontier.push_back(p);

  LabelMap claim = LabelMap::Zero(h, w);
  std::vector<Point> touched;
  for (int step = 1; step <= max_steps && !frontier.empty(); ++step) {
    touched.clear();
    for (const auto& q : frontier) {
      const Label l = out(q.y, q.x);
      for (const auto& o : se.offsets) {
        const int x = q.x + o.dx;
        const int y = q.y + o.dy;
        if (x < 0 || y < 0 || x >= w || y >= h || out(y, x) != 0) continue;
        Label& c = claim(y, x);
        if (c == 0) {
          c = l;
          touched.push_back({x, y});
        } else if (l < c) {
          c = l;
        }
      }
    }
    frontier.clear();
    for (const auto& p : touched) {
      const Label l = claim(p.y, p.x);
      out(p.y, p.x) = l;
      claim(p.y, p.x) = 0;
      if (steps_of(l) > step) frontier.push_back(p);
    }
  }

  // Release pixels cut off from their own seed by a neighbour's territory.
  BinaryMask reached = BinaryMask::Constant(h, w, false);
  std::vector<Point> stack = seed_pixels;
  for (const auto& p : seed_pixels) reached(p.y, p.x) = true;
  const auto nbrs = neighbor_offsets(conn);
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    const Label l = out(p.y, p.x);
    for (const auto& o : nbrs) {
      const int x = p.x + o.dx;
      const int y = p.y + o.dy;
      if (x < 0 || y < 0 || x >= w || y >= h || reached(y, x) || out(y, x) != l) continue;
      reached(y, x) = true;
      stack.push_back({x, y});
    }
  }
  out = reached.select(out, LabelMap::Zero(h, w));
  return out;
}

LabelMap dynamic_reconstruction(const std::vector<UltimateResidue>& residues,
                                const StructuringElement& se, int width, int height,
                                Connectivity conn) {
  LabelMap seeds = LabelMap::Zero(height, width);
  std::map<Label, int> steps;
  for (const auto& r : residues) {
    for (const auto& p : r.pixels) {
      if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
        throw Error(ErrorCode::OutOfBounds, "residue pixel outside the canvas");
      }
      if (seeds(p.y, p.x) != 0) {
        throw Error(ErrorCode::InvalidArgument, "residues must have disjoint pixel sets");
      }
      seeds(p.y, p.x) = r.label;
    }
    steps[r.label] = r.erosion_count;
  }
  return grow_regions(seeds, steps, se, conn);
}

}  // namespace neuroseg
