#ifndef PATSPAN_SATURATION_HPP
#define PATSPAN_SATURATION_HPP

#include "patspan/pattern.hpp"

namespace patspan {

struct SaturationReport {
  std::string object;
  bool saturated = false;
  int colimit_objects = 0;
  int slice_objects = 0;
  std::string failure;  // empty when saturated
};

/// Checks that the elementary slice of p0 is the colimit of the elementary
/// slices of its own elementaries, by building the strict colimit of gaunt
/// slice categories and testing the canonical comparison functor.
SaturationReport check_global_saturation(const Pattern& p, const std::string& p0,
                                         const ColimitOptions& opts = {});

std::vector<SaturationReport> saturation_sweep(const Pattern& p,
                                               const ColimitOptions& opts = {});

}  // namespace patspan

#endif
