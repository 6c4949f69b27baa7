#include "neuroseg/mask_synthesis.hpp"
#include "neuroseg/error.hpp"

#include <algorithm>
#include <string>

namespace neuroseg {

RegionGrowing region_growing(const BinaryMask& binary, const PointSet& seeds, Connectivity conn) {
  const int h = static_cast<int>(binary.rows());
  const int w = static_cast<int>(binary.cols());
  RegionGrowing result;
  result.labels = LabelMap::Zero(h, w);
  LabelMap& labels = result.labels;

  std::vector<Point> frontier;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Point s = seeds[i];
    if (!in_bounds(binary, s.x, s.y) || !binary(s.y, s.x)) {
      result.rejected_seeds.push_back(s);
      continue;
    }
    if (labels(s.y, s.x) != 0) {
      throw Error(ErrorCode::DuplicatePoint,
                  "seed (" + std::to_string(s.x) + "," + std::to_string(s.y) + ") given twice");
    }
    labels(s.y, s.x) = static_cast<Label>(i + 1);
    frontier.push_back(s);
  }

  auto seed_d2 = [&](Label l, int x, int y) {
    const Point& s = seeds[l - 1];
    const long dx = x - s.x;
    const long dy = y - s.y;
    return dx * dx + dy * dy;
  };

  const auto nbrs = neighbor_offsets(conn);
  LabelMap claim = LabelMap::Zero(h, w);
  std::vector<Point> touched;
  while (!frontier.empty()) {
    touched.clear();
    for (const auto& q : frontier) {
      const Label l = labels(q.y, q.x);
      for (const auto& o : nbrs) {
        const int x = q.x + o.dx;
        const int y = q.y + o.dy;
        if (x < 0 || y < 0 || x >= w || y >= h || !binary(y, x) || labels(y, x) != 0) continue;
        Label& c = claim(y, x);
        if (c == 0) {
          c = l;
          touched.push_back({x, y});
        } else if (c != l) {
          const long dl = seed_d2(l, x, y);
          const long dc = seed_d2(c, x, y);
          if (dl < dc || (dl == dc && l < c)) c = l;
        }
      }
    }
    for (const auto& p : touched) {
      labels(p.y, p.x) = claim(p.y, p.x);
      claim(p.y, p.x) = 0;
    }
    frontier.swap(touched);
  }
  return result;
}

ThreeClassMask contour_class(const LabelMap& labels, int thickness) {
  if (thickness < 2 || thickness % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "contour thickness must be even and >= 2");
  }
  const int r = thickness / 2;
  const int h = static_cast<int>(labels.rows());
  const int w = static_cast<int>(labels.cols());
  ThreeClassMask cls = ThreeClassMask::Constant(h, w, static_cast<std::uint8_t>(PixelClass::background));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Label l = labels(y, x);
      if (l == 0) continue;
      bool touches = false;
      for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r) && !touches; ++yy)
        for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) {
          const Label o = labels(yy, xx);
          if (o != 0 && o != l) {
            touches = true;
            break;
          }
        }
      cls(y, x) = static_cast<std::uint8_t>(touches ? PixelClass::contour : PixelClass::neuron);
    }
  }
  return cls;
}

SynthesizedMasks synthesize(const BinaryMask& binary, const PointSet& seeds, int thickness,
                            Connectivity conn) {
  RegionGrowing grown = region_growing(binary, seeds, conn);
  SynthesizedMasks out;
  out.classes = contour_class(grown.labels, thickness);
  out.instances = std::move(grown.labels);
  out.rejected_seeds = std::move(grown.rejected_seeds);
  return out;
}

}  // namespace neuroseg
