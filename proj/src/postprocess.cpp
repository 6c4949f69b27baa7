#include "neuroseg/postprocess.hpp"
#include "neuroseg/error.hpp"

namespace neuroseg {

void PipelineConfig::validate() const {
  if (se_radius < 1) throw Error(ErrorCode::InvalidArgument, "se_radius must be >= 1");
  if (!(ws_threshold > 0.0 && ws_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "ws_threshold must lie in (0,1)");
  }
  if (min_distance < 1) throw Error(ErrorCode::InvalidArgument, "min_distance must be >= 1");
  if (min_object_area < 0) throw Error(ErrorCode::InvalidArgument, "min_object_area must be >= 0");
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::baseline: return "baseline";
    case Scheme::distance: return "distance";
    case Scheme::contour_strip: return "contour-strip";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

LabelMap remove_small_objects(const LabelMap& labels, int min_area) {
  if (min_area <= 1) return labels;
  const auto sizes = component_sizes(labels);
  LabelMap out = labels;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    Label& l = out.data()[i];
    if (l != 0 && sizes.at(l) < static_cast<std::size_t>(min_area)) l = 0;
  }
  return out;
}

template <typename Scalar>
ProposedTrace run_proposed_traced(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg) {
  cfg.validate();
  ProposedTrace t;
  const ClassMap cls = argmax_class(pm);
  t.neuron_mask = class_mask(cls, PixelClass::neuron);
  t.merged = cls != static_cast<std::uint8_t>(PixelClass::background);

  const StructuringElement se = disk_structuring_element(cfg.se_radius);
  t.residues = ultimate_erosion(t.neuron_mask, se, cfg.connectivity);
  t.reconstructed = dynamic_reconstruction(t.residues, se, pm.width(), pm.height(), cfg.connectivity);

  const Topography<Scalar> elevation = -pm.neuron();
  t.labels = seeded_watershed(elevation, t.reconstructed, t.merged, cfg.connectivity);
  t.labels = remove_small_objects(t.labels, cfg.min_object_area);
  return t;
}

template <typename Scalar>
LabelMap run_proposed(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg) {
  return run_proposed_traced(pm, cfg).labels;
}

template <typename Scalar>
LabelMap run_baseline(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg) {
  cfg.validate();
  const BinaryMask mask = pm.neuron() >= static_cast<Scalar>(cfg.ws_threshold);
  // With one marker per component the watershed reproduces the components.
  return remove_small_objects(connected_components(mask, cfg.connectivity), cfg.min_object_area);
}

template <typename Scalar>
LabelMap run_distance_ws(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg) {
  cfg.validate();
  const ClassMap cls = argmax_class(pm);
  const BinaryMask neuron = class_mask(cls, PixelClass::neuron);
  const BinaryMask merged = cls != static_cast<std::uint8_t>(PixelClass::background);

  const DistanceMap<Scalar> dist = distance_transform<Scalar>(neuron);
  const PointSet peaks = local_maxima(dist, cfg.min_distance);
  LabelMap markers = LabelMap::Zero(pm.height(), pm.width());
  for (std::size_t i = 0; i < peaks.size(); ++i) markers(peaks[i].y, peaks[i].x) = static_cast<Label>(i + 1);

  const Topography<Scalar> elevation = -dist;
  const LabelMap labels = seeded_watershed(elevation, markers, merged, cfg.connectivity);
  return remove_small_objects(labels, cfg.min_object_area);
}

template <typename Scalar>
LabelMap run_contour_strip(const ProbabilityMap<Scalar>& pm, const PipelineConfig& cfg) {
  cfg.validate();
  const BinaryMask core =
      (pm.neuron() > pm.contour()) && (pm.neuron() >= static_cast<Scalar>(cfg.ws_threshold));
  const LabelMap comps = connected_components(core, cfg.connectivity);
  const BinaryMask merged = argmax_class(pm) != static_cast<std::uint8_t>(PixelClass::background);
  const Topography<Scalar> elevation = -pm.neuron();
  const LabelMap grown = seeded_watershed(elevation, comps, merged, cfg.connectivity);
  return remove_small_objects(grown, cfg.min_object_area);
}

template <typename Scalar>
LabelMap run_scheme(const ProbabilityMap<Scalar>& pm, Scheme scheme, const PipelineConfig& cfg) {
  switch (scheme) {
    case Scheme::proposed: return run_proposed(pm, cfg);
    case Scheme::baseline: return run_baseline(pm, cfg);
    case Scheme::distance: return run_distance_ws(pm, cfg);
    case Scheme::contour_strip: return run_contour_strip(pm, cfg);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scheme");
}

#define NEUROSEG_INSTANTIATE(Scalar)                                                                  \
  template ProposedTrace run_proposed_traced(const ProbabilityMap<Scalar>&, const PipelineConfig&);   \
  template LabelMap run_proposed(const ProbabilityMap<Scalar>&, const PipelineConfig&);               \
  template LabelMap run_baseline(const ProbabilityMap<Scalar>&, const PipelineConfig&);               \
  template LabelMap run_distance_ws(const ProbabilityMap<Scalar>&, const PipelineConfig&);            \
  template LabelMap run_contour_strip(const ProbabilityMap<Scalar>&, const PipelineConfig&);          \
  template LabelMap run_scheme(const ProbabilityMap<Scalar>&, Scheme, const PipelineConfig&);

NEUROSEG_INSTANTIATE(float)
NEUROSEG_INSTANTIATE(double)

#undef NEUROSEG_INSTANTIATE

}  // namespace neuroseg
