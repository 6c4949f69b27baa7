#pragma once

#include "neuroseg/core_image.hpp"
#include "neuroseg/mask_synthesis.hpp"
#include "neuroseg/probability.hpp"
#include "neuroseg/tiling.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace neuroseg::io {

namespace fs = std::filesystem;

/// Decoded PNG with interleaved samples (8- or 16-bit values widened to u16).
struct PngImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;

  std::uint16_t at(int x, int y, int c) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

/// Palette and sub-byte images are expanded to 8-bit gray/RGB on read.
PngImage read_png(const fs::path& path);
void write_png(const fs::path& path, const PngImage& image);

PngImage crop(const PngImage& image, const TileRect& r);

/// 8-bit RGB, R = background, G = contour, B = neuron, p = v / 255. Each
/// pixel must sum to 1 within 0.02 and is renormalized.
ProbabilityMap<double> read_probability_map(const fs::path& path);

/// Quantizes to 8-bit with largest-remainder rounding so every pixel sums to 255.
void write_probability_map(const fs::path& path, const ProbabilityMap<double>& pm);

/// 16-bit single-channel, value == label id.
LabelMap read_label_map(const fs::path& path);
void write_label_map(const fs::path& path, const LabelMap& labels);

/// 8-bit single-channel; nonzero reads as foreground, written as 0/255.
BinaryMask read_mask(const fs::path& path);
void write_mask(const fs::path& path, const BinaryMask& mask);

struct Rgb {
  std::uint8_t r, g, b;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};
inline constexpr Rgb kTissueColor{0, 0, 0};
inline constexpr Rgb kNeuronColor{0, 0, 255};
inline constexpr Rgb kContourColor{0, 255, 0};

/// 8-bit RGB: black tissue, blue neuron, green contour.
ThreeClassMask read_class_mask(const fs::path& path);
void write_class_mask(const fs::path& path, const ThreeClassMask& mask);

/// One "x,y" integer pair per line; '#' starts a comment line. Points are
/// checked against a width x height image and must be unique.
PointSet read_points(const fs::path& path, int width, int height);
PointSet parse_points(const std::string& text, int width, int height);
void write_points(const fs::path& path, const PointSet& points);

struct ManifestEntry {
  std::string id;
  fs::path probability_map;
  std::optional<fs::path> centroids;
  std::optional<fs::path> ground_truth;
};

/// Tab-separated: id, probability map, centroids, ground truth. Optional
/// fields may be empty or "-". Relative paths resolve against the manifest's
/// directory; every path must exist.
std::vector<ManifestEntry> read_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries);

struct TileManifest {
  int width = 0;
  int height = 0;
  int overlap = 0;
  std::vector<std::pair<TileRect, fs::path>> tiles;
};

/// Header "canvas<TAB>W<TAB>H<TAB>overlap<TAB>O", then one
/// "x0<TAB>y0<TAB>w<TAB>h<TAB>path" line per tile. Relative paths resolve
/// against the manifest's directory.
TileManifest read_tile_manifest(const fs::path& path);
void write_tile_manifest(const fs::path& path, const TileManifest& manifest);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

}  // namespace neuroseg::io
