#pragma once

#include "neuroseg/core_image.hpp"
#include "neuroseg/morphology.hpp"
#include "neuroseg/probability.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace neuroseg {

struct PipelineConfig {
  int se_radius = 10;
  double ws_threshold = 0.5;
  int min_distance = 20;
  Connectivity connectivity = Connectivity::eight;
  /// Final objects smaller than this are dropped as noise.
  int min_object_area = 20;

  void validate() const;
};

enum class Scheme { proposed, baseline, distance, contour_strip };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);
inline constexpr std::array<Scheme, 4> kAllSchemes{Scheme::proposed, Scheme::baseline,
                                                   Scheme::distance, Scheme::contour_strip};

/// Intermediate stages of the ultimate-erosion pipeline.
struct ProposedTrace {
  BinaryMask neuron_mask;
  std::vector<UltimateResidue> residues;
  LabelMap reconstructed;
  BinaryMask merged;
  LabelMap labels;
};

template <typename Scalar>
ProposedTrace run_proposed_traced(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg);

/// Neuron argmax -> ultimate erosion -> dynamic reconstruction -> watershed
/// on the negated neuron probability, constrained to the neuron+contour mask.
template <typename Scalar>
LabelMap run_proposed(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg);

/// Connected components of the thresholded neuron channel.
template <typename Scalar>
LabelMap run_baseline(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg);

/// Distance-map peaks as single-pixel markers, watershed on the negated distance.
template <typename Scalar>
LabelMap run_distance_ws(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg);

/// Drops pixels that lean towards contour, labels what remains and floods the
/// labels back over the neuron+contour mask.
template <typename Scalar>
LabelMap run_contour_strip(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg);

template <typename Scalar>
LabelMap run_scheme(const ProbabilityMap<Scalar>& pm, Scheme scheme, const PipelineConfig& cfg);

/// Zeroes every label whose area is below `min_area`.
LabelMap remove_small_objects(const LabelMap& labels, int min_area);

}  // namespace neuroseg
