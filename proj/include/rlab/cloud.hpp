#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlab/core_math.hpp"
#include "rlab/sources.hpp"

namespace rlab {

/// Evaluation points for sign certification: a shifted Halton sequence in a
/// box, plus stress points close to each atom and in the far field.
struct SampleSpec {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  std::optional<Vec> box_lo;
  std::optional<Vec> box_hi;
  double min_atom_distance = 1e-3;
  bool stress_points = true;
  double near_atom_distance = 1e-2;
  bool far_field = true;
};

std::vector<Vec> make_cloud(const SourceMeasure& source, const SampleSpec& spec);

/// Radical-inverse Halton coordinate of `index` in the given prime base.
double halton(std::uint64_t index, std::uint32_t base);

/// Uniform double in [0, 1) from a 64-bit generator output (top 53 bits).
double unit_interval(std::uint64_t bits);

}  // namespace rlab
