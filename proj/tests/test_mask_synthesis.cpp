#include "support.hpp"

#include "neuroseg/error.hpp"
#include "neuroseg/mask_synthesis.hpp"

#include <doctest.h>

using namespace neuroseg;
using namespace neuroseg::testing;

namespace {

/// One growth step at a time over the whole image: an unlabelled foreground
/// pixel next to labelled pixels takes the label whose seed is nearest, then
/// the lowest label.
LabelMap stepwise_region_growing(const BinaryMask& binary, const PointSet& seeds, Connectivity conn) {
  LabelMap out = LabelMap::Zero(binary.rows(), binary.cols());
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (in_bounds(binary, seeds[i].x, seeds[i].y) && binary(seeds[i].y, seeds[i].x))
      out(seeds[i].y, seeds[i].x) = static_cast<Label>(i + 1);
  for (bool changed = true; changed;) {
    changed = false;
    LabelMap next = out;
    for (int y = 0; y < out.rows(); ++y)
      for (int x = 0; x < out.cols(); ++x) {
        if (!binary(y, x) || out(y, x) != 0) continue;
        Label best = 0;
        long best_d = 0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (!adjacent(dx, dy, conn) || !in_bounds(out, x + dx, y + dy)) continue;
            const Label l = out(y + dy, x + dx);
            if (l == 0) continue;
            const Point s = seeds[l - 1];
            const long d = long(x - s.x) * (x - s.x) + long(y - s.y) * (y - s.y);
            if (best == 0 || d < best_d || (d == best_d && l < best)) {
              best = l;
              best_d = d;
            }
          }
        if (best != 0) {
          next(y, x) = best;
          changed = true;
        }
      }
    out = next;
  }
  return out;
}

LabelMap abutting_squares() {
  LabelMap l = LabelMap::Zero(10, 20);
  l.block(0, 0, 10, 10).setConstant(1);
  l.block(0, 10, 10, 10).setConstant(2);
  return l;
}

}  // namespace

TEST_CASE("region growing splits a rectangle between two seeds") {
  BinaryMask m = BinaryMask::Constant(6, 10, true);
  const RegionGrowing g = region_growing(m, {{2, 2}, {7, 2}});
  CHECK(g.rejected_seeds.empty());
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 5; ++x) CHECK(g.labels(y, x) == 1);
    for (int x = 5; x < 10; ++x) CHECK(g.labels(y, x) == 2);
  }
}

TEST_CASE("region growing rejects seeds on background and duplicates") {
  BinaryMask m = BinaryMask::Constant(5, 5, false);
  m.block(0, 0, 2, 2).setConstant(true);
  const RegionGrowing g = region_growing(m, {{0, 0}, {4, 4}});
  REQUIRE(g.rejected_seeds.size() == 1);
  CHECK(g.rejected_seeds[0] == Point{4, 4});
  CHECK((g.labels == 1).count() == 4);
  CHECK(labels_of(g.labels).size() == 1);

  try {
    region_growing(m, {{0, 0}, {0, 0}});
    FAIL("expected DuplicatePoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicatePoint);
  }
}

TEST_CASE("region growing leaves unseeded components unlabelled") {
  BinaryMask m = BinaryMask::Constant(5, 9, false);
  m.block(0, 0, 5, 3).setConstant(true);
  m.block(0, 6, 5, 3).setConstant(true);
  const RegionGrowing g = region_growing(m, {{1, 1}});
  CHECK((g.labels == 1).count() == 15);
  CHECK((g.labels.block(0, 6, 5, 3) == 0).all());
}

TEST_CASE("region growing matches the stepwise definition") {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const BinaryMask m = random_blob_mask(rng, 40);
    PointSet seeds;
    const int n = rng.uniform_int(1, 6);
    for (int i = 0; i < n; ++i) {
      const Point p{rng.uniform_int(0, static_cast<int>(m.cols()) - 1), rng.uniform_int(0, static_cast<int>(m.rows()) - 1)};
      if (std::find(seeds.begin(), seeds.end(), p) == seeds.end()) seeds.push_back(p);
    }
    for (Connectivity conn : {Connectivity::four, Connectivity::eight})
      CHECK((region_growing(m, seeds, conn).labels == stepwise_region_growing(m, seeds, conn)).all());
  }
}

TEST_CASE("contour band between abutting squares") {
  const LabelMap l = abutting_squares();
  const auto contour = [](const ThreeClassMask& c) {
    std::set<int> cols;
    for (int y = 0; y < c.rows(); ++y)
      for (int x = 0; x < c.cols(); ++x)
        if (c(y, x) == static_cast<std::uint8_t>(PixelClass::contour)) cols.insert(x);
    return cols;
  };
  CHECK(contour(contour_class(l, 4)) == std::set<int>{8, 9, 10, 11});
  CHECK(contour(contour_class(l, 2)) == std::set<int>{9, 10});
  CHECK(contour(contour_class(l)) == std::set<int>{8, 9, 10, 11});
  CHECK_THROWS_AS(contour_class(l, 3), Error);
  CHECK_THROWS_AS(contour_class(l, 0), Error);
}

TEST_CASE("contour class ignores the border with background") {
  LabelMap l = LabelMap::Zero(12, 12);
  l.block(2, 2, 8, 8).setConstant(1);
  const ThreeClassMask c = contour_class(l);
  CHECK((c == static_cast<std::uint8_t>(PixelClass::contour)).count() == 0);
  CHECK((c == static_cast<std::uint8_t>(PixelClass::neuron)).count() == 64);
}

TEST_CASE("synthesize composes growing and contour marking") {
  BinaryMask m = BinaryMask::Constant(10, 20, true);
  const SynthesizedMasks s = synthesize(m, {{4, 5}, {15, 5}, {30, 30}});
  CHECK(labels_of(s.instances).size() == 2);
  CHECK(s.rejected_seeds.size() == 1);
  CHECK((s.classes == static_cast<std::uint8_t>(PixelClass::contour)).count() == 40);
}
