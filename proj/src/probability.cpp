#include "neuroseg/probability.hpp"
#include "neuroseg/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace neuroseg {

template <typename Scalar>
void validate(const ProbabilityMap<Scalar>& pm, double tolerance) {
  const int w = pm.width();
  const int h = pm.height();
  for (const auto& c : pm.channels) {
    if (c.rows() != h || c.cols() != w) {
      throw Error(ErrorCode::DimensionMismatch, "probability channels differ in shape");
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0;
      for (const auto& c : pm.channels) {
        const double v = c(y, x);
        if (!(v >= 0.0 && v <= 1.0)) {
          throw Error(ErrorCode::InvalidArgument, "probability outside [0,1] at (" + std::to_string(x) +
                                                      "," + std::to_string(y) + ")");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > tolerance) {
        throw Error(ErrorCode::InvalidArgument, "channel sum " + std::to_string(sum) + " at (" +
                                                    std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }
}

template <typename Scalar>
void normalize(ProbabilityMap<Scalar>& pm) {
  const Scalar slack = 8 * std::numeric_limits<Scalar>::epsilon();
  for (int y = 0; y < pm.height(); ++y) {
    for (int x = 0; x < pm.width(); ++x) {
      const Scalar sum = pm.channels[0](y, x) + pm.channels[1](y, x) + pm.channels[2](y, x);
      if (sum <= 0 || std::abs(sum - Scalar(1)) <= slack) continue;
      for (auto& c : pm.channels) c(y, x) /= sum;
    }
  }
}

template <typename Scalar>
ClassMap argmax_class(const ProbabilityMap<Scalar>& pm) {
  ClassMap cls(pm.height(), pm.width());
  for (int y = 0; y < pm.height(); ++y) {
    for (int x = 0; x < pm.width(); ++x) {
      int best = 0;
      for (int k = 1; k < 3; ++k)
        if (pm.channels[k](y, x) > pm.channels[best](y, x)) best = k;
      cls(y, x) = static_cast<std::uint8_t>(best);
    }
  }
  return cls;
}

template <typename Scalar>
BinaryMask merged_mask(const ProbabilityMap<Scalar>& pm) {
  return argmax_class(pm) != static_cast<std::uint8_t>(PixelClass::background);
}

template void validate(const ProbabilityMap<float>&, double);
template void validate(const ProbabilityMap<double>&, double);
template void normalize(ProbabilityMap<float>&);
template void normalize(ProbabilityMap<double>&);
template ClassMap argmax_class(const ProbabilityMap<float>&);
template ClassMap argmax_class(const ProbabilityMap<double>&);
template BinaryMask merged_mask(const ProbabilityMap<float>&);
template BinaryMask merged_mask(const ProbabilityMap<double>&);

}  // namespace neuroseg
