#include "neuroseg/core_image.hpp"
#include "neuroseg/error.hpp"

#include <string>

namespace neuroseg {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MarkerOutsideMask: return "MarkerOutsideMask";
    case ErrorCode::SeedOnBackground: return "SeedOnBackground";
    case ErrorCode::UndefinedRCE: return "UndefinedRCE";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::NotThreeChannel: return "NotThreeChannel";
    case ErrorCode::LabelOverflow: return "LabelOverflow";
    case ErrorCode::UnknownColor: return "UnknownColor";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::MissingPair: return "MissingPair";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {
constexpr std::array<Offset, 4> kFour{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
constexpr std::array<Offset, 8> kEight{
    {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
}  // namespace

std::span<const Offset> neighbor_offsets(Connectivity conn) {
  if (conn == Connectivity::four) return kFour;
  return kEight;
}

StructuringElement disk_structuring_element(int radius) {
  if (radius < 0) {
    throw Error(ErrorCode::InvalidArgument, "disk radius must be >= 0, got " + std::to_string(radius));
  }
  StructuringElement se;
  se.radius = radius;
  se.row_half_width.assign(2 * radius + 1, 0);
  const long r2 = static_cast<long>(radius) * radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    int half = 0;
    while (static_cast<long>(half + 1) * (half + 1) + static_cast<long>(dy) * dy <= r2) ++half;
    se.row_half_width[dy + radius] = half;
    for (int dx = -half; dx <= half; ++dx) se.offsets.push_back({dx, dy});
  }
  return se;
}

LabelMap connected_components(const BinaryMask& mask, Connectivity conn) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  LabelMap labels = LabelMap::Zero(h, w);
  const auto nbrs = neighbor_offsets(conn);
  std::vector<Point> stack;
  Label next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(y, x) || labels(y, x) != 0) continue;
      ++next;
      labels(y, x) = next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (const auto& o : nbrs) {
          const int nx = p.x + o.dx;
          const int ny = p.y + o.dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (mask(ny, nx) && labels(ny, nx) == 0) {
            labels(ny, nx) = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  return labels;
}

std::map<Label, std::size_t> component_sizes(const LabelMap& labels) {
  std::map<Label, std::size_t> sizes;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const Label l = labels.data()[i];
    if (l != 0) ++sizes[l];
  }
  return sizes;
}

}  // namespace neuroseg
