#pragma once

#include "neuroseg/core_image.hpp"

#include <array>
#include <cstdint>

namespace neuroseg {

/// Class order shared by probability channels and categorical masks. In
/// ground-truth masks `background` is the tissue class.
enum class PixelClass : std::uint8_t { background = 0, contour = 1, neuron = 2 };

/// Per-pixel probabilities of (background, contour, neuron), one plane each.
template <typename Scalar = double>
struct ProbabilityMap {
  std::array<Raster<Scalar>, 3> channels;

  ProbabilityMap() = default;
  ProbabilityMap(int width, int height) {
    for (auto& c : channels) c = Raster<Scalar>::Zero(height, width);
  }

  int width() const { return static_cast<int>(channels[0].cols()); }
  int height() const { return static_cast<int>(channels[0].rows()); }

  Raster<Scalar>& operator[](PixelClass c) { return channels[static_cast<int>(c)]; }
  const Raster<Scalar>& operator[](PixelClass c) const { return channels[static_cast<int>(c)]; }

  const Raster<Scalar>& background() const { return (*this)[PixelClass::background]; }
  const Raster<Scalar>& contour() const { return (*this)[PixelClass::contour]; }
  const Raster<Scalar>& neuron() const { return (*this)[PixelClass::neuron]; }
};

inline constexpr double kProbabilitySumTolerance = 0.02;

/// Throws InvalidArgument unless every channel is in [0,1] and each pixel's
/// channels sum to 1 within `tolerance`.
template <typename Scalar>
void validate(const ProbabilityMap<Scalar>& pm, double tolerance = kProbabilitySumTolerance);

/// Divides each pixel by its channel sum. Pixels whose sum is already within a
/// few ulps of 1 are left untouched, which makes the operation idempotent.
template <typename Scalar>
void normalize(ProbabilityMap<Scalar>& pm);

/// Holds PixelClass values as bytes.
using ClassMap = Raster<std::uint8_t>;

/// Ties resolve in channel order background < contour < neuron.
template <typename Scalar>
ClassMap argmax_class(const ProbabilityMap<Scalar>& pm);

inline BinaryMask class_mask(const ClassMap& cls, PixelClass c) {
  return cls == static_cast<std::uint8_t>(c);
}

/// Pixels whose most likely class is neuron or contour.
template <typename Scalar>
BinaryMask merged_mask(const ProbabilityMap<Scalar>& pm);

}  // namespace neuroseg
