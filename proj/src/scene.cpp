#include "neuroseg/scene.hpp"
#include "neuroseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace neuroseg {

double unit_interval(std::uint64_t word) { return static_cast<double>(word >> 11) * 0x1.0p-53; }

namespace {

Raster<double> gaussian_blur(const Raster<double>& in, double sigma) {
  if (sigma <= 0) return in;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double ksum = 0;
  for (int i = -radius; i <= radius; ++i) ksum += k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (auto& v : k) v /= ksum;

  const int h = static_cast<int>(in.rows());
  const int w = static_cast<int>(in.cols());
  Raster<double> tmp(h, w), out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int i = -radius; i <= radius; ++i) s += k[i + radius] * in(y, std::clamp(x + i, 0, w - 1));
      tmp(y, x) = s;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int i = -radius; i <= radius; ++i) s += k[i + radius] * tmp(std::clamp(y + i, 0, h - 1), x);
      out(y, x) = s;
    }
  return out;
}

long d2(const Point& a, int x, int y) {
  const long dx = x - a.x;
  const long dy = y - a.y;
  return dx * dx + dy * dy;
}

// Half-length of the chord shared by two overlapping disks, and the
// perpendicular distance of (x, y) from the line through their centres.
struct Interface {
  double half_chord = 0;
  double offset = 0;
};

Interface interface_geometry(const Disk& a, const Disk& b, int x, int y) {
  const double dx = b.center.x - a.center.x;
  const double dy = b.center.y - a.center.y;
  const double d = std::hypot(dx, dy);
  Interface g;
  if (d == 0) return g;
  const double along = (d * d + double(a.radius) * a.radius - double(b.radius) * b.radius) / (2 * d);
  g.half_chord = std::sqrt(std::max(0.0, double(a.radius) * a.radius - along * along));
  g.offset = std::abs((x - a.center.x) * dy - (y - a.center.y) * dx) / d;
  return g;
}

}  // namespace

Scene render_scene(int width, int height, const std::vector<Disk>& disks, const RenderOptions& opts) {
  Scene s;
  s.disks = disks;
  s.labels = LabelMap::Zero(height, width);

  // Owner is the disk with the smallest (distance / radius); ties to the lower index.
  Raster<long> best_d2 = Raster<long>::Zero(height, width);
  Raster<long> best_r2 = Raster<long>::Ones(height, width);
  for (std::size_t i = 0; i < disks.size(); ++i) {
    const Disk& dk = disks[i];
    const long r2 = static_cast<long>(dk.radius) * dk.radius;
    for (int y = std::max(0, dk.center.y - dk.radius); y <= std::min(height - 1, dk.center.y + dk.radius); ++y)
      for (int x = std::max(0, dk.center.x - dk.radius); x <= std::min(width - 1, dk.center.x + dk.radius); ++x) {
        const long dd = d2(dk.center, x, y);
        if (dd > r2) continue;
        if (s.labels(y, x) == 0 || dd * best_r2(y, x) < best_d2(y, x) * r2) {
          s.labels(y, x) = static_cast<Label>(i + 1);
          best_d2(y, x) = dd;
          best_r2(y, x) = r2;
        }
      }
  }
  for (const auto& dk : disks) s.centroids.push_back(dk.center);
  s.classes = contour_class(s.labels, opts.contour_thickness);

  // Rendered classes: contour kept only on the covered part of each interface.
  ClassMap rendered = s.classes;
  const int reach = opts.contour_thickness / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (rendered(y, x) != static_cast<std::uint8_t>(PixelClass::contour)) continue;
      const Label own = s.labels(y, x);
      Label other = 0;
      for (int yy = std::max(0, y - reach); yy <= std::min(height - 1, y + reach); ++yy)
        for (int xx = std::max(0, x - reach); xx <= std::min(width - 1, x + reach); ++xx) {
          const Label o = s.labels(yy, xx);
          if (o != 0 && o != own && (other == 0 || o < other)) other = o;
        }
      const auto key = std::minmax(own, other);
      const auto it = opts.pair_coverage.find({key.first, key.second});
      const double coverage = it != opts.pair_coverage.end() ? it->second : opts.ridge_coverage;
      if (coverage >= 1.0) continue;
      const Interface g = interface_geometry(disks[own - 1], disks[other - 1], x, y);
      if (g.offset > coverage * g.half_chord) rendered(y, x) = static_cast<std::uint8_t>(PixelClass::neuron);
    }
  }

  s.prob = ProbabilityMap<double>(width, height);
  for (int c = 0; c < 3; ++c) {
    const Raster<double> onehot = (rendered == static_cast<std::uint8_t>(c)).cast<double>();
    s.prob.channels[c] = gaussian_blur(onehot, opts.blur_sigma);
  }
  if (opts.noise > 0) {
    std::mt19937_64 rng(opts.noise_seed);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        for (auto& ch : s.prob.channels)
          ch(y, x) = std::max(0.0, ch(y, x) + opts.noise * (2.0 * unit_interval(rng()) - 1.0));
  }
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0;
      for (auto& ch : s.prob.channels) sum += ch(y, x);
      if (sum <= 0) {
        s.prob.channels[0](y, x) = 1.0;
        continue;
      }
      for (auto& ch : s.prob.channels) ch(y, x) /= sum;
    }
  return s;
}

void SceneSpec::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "scene must be at least 1x1");
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 0");
  if (radius_min < 1 || radius_max < radius_min) throw Error(ErrorCode::InvalidArgument, "need 1 <= radius_min <= radius_max");
  if (2 * radius_max + 2 > std::min(width, height)) throw Error(ErrorCode::InvalidArgument, "disks do not fit the scene");
  if (touching_fraction < 0 || touching_fraction > 1) throw Error(ErrorCode::InvalidArgument, "touching_fraction outside [0,1]");
  if (min_center_ratio <= 0 || min_center_ratio >= 1) throw Error(ErrorCode::InvalidArgument, "min_center_ratio outside (0,1)");
  if (ridge_coverage_min < 0 || ridge_coverage_min > 1) throw Error(ErrorCode::InvalidArgument, "ridge_coverage_min outside [0,1]");
  if (blur_sigma < 0 || noise < 0) throw Error(ErrorCode::InvalidArgument, "blur and noise must be >= 0");
}

Scene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return unit_interval(rng()); };
  auto uniform_int = [&](int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); };

  constexpr int kSeparationGap = 4;
  constexpr int kAttempts = 2000;
  std::vector<Disk> disks;
  std::vector<std::pair<std::size_t, std::size_t>> touching;

  for (int n = 0; n < spec.count; ++n) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      Disk cand;
      cand.radius = uniform_int(spec.radius_min, spec.radius_max);
      std::size_t partner = disks.size();
      if (!disks.empty() && uniform() < spec.touching_fraction) {
        partner = std::min(disks.size() - 1, static_cast<std::size_t>(uniform() * disks.size()));
        const Disk& p = disks[partner];
        const double sum = cand.radius + p.radius;
        const double dist = spec.min_center_ratio * sum + uniform() * ((sum - 2.0) - spec.min_center_ratio * sum);
        const double angle = 2.0 * std::numbers::pi * uniform();
        cand.center = {static_cast<int>(std::lround(p.center.x + dist * std::cos(angle))),
                       static_cast<int>(std::lround(p.center.y + dist * std::sin(angle)))};
      } else {
        cand.center = {uniform_int(cand.radius + 1, spec.width - cand.radius - 2),
                       uniform_int(cand.radius + 1, spec.height - cand.radius - 2)};
      }
      if (cand.center.x - cand.radius < 1 || cand.center.y - cand.radius < 1 ||
          cand.center.x + cand.radius > spec.width - 2 || cand.center.y + cand.radius > spec.height - 2) {
        continue;
      }
      bool ok = true;
      std::vector<std::size_t> overlaps;
      for (std::size_t k = 0; k < disks.size() && ok; ++k) {
        const double d = std::sqrt(static_cast<double>(d2(disks[k].center, cand.center.x, cand.center.y)));
        const double sum = cand.radius + disks[k].radius;
        if (d < sum) {
          ok = partner != disks.size() && d >= spec.min_center_ratio * sum;
          overlaps.push_back(k);
        } else {
          ok = d >= sum + kSeparationGap;
        }
      }
      if (!ok) continue;
      for (std::size_t k : overlaps) touching.emplace_back(k, disks.size());
      disks.push_back(cand);
      break;
    }
  }

  RenderOptions opts;
  opts.contour_thickness = spec.contour_thickness;
  opts.blur_sigma = spec.blur_sigma;
  opts.noise = spec.noise;
  opts.noise_seed = seed ^ 0x9e3779b97f4a7c15ULL;
  for (const auto& [a, b] : touching) {
    const double c = spec.ridge_coverage_min + uniform() * (1.0 - spec.ridge_coverage_min);
    opts.pair_coverage[{static_cast<Label>(a + 1), static_cast<Label>(b + 1)}] = c;
  }
  return render_scene(spec.width, spec.height, disks, opts);
}

}  // namespace neuroseg
