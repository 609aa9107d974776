#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "techevo/errors.hpp"

namespace techevo {

/// Evolution rate of one technology: generation changes per year of
/// observation. The exact ratio is stored; rounding happens only in
/// display code.
struct EvolutionIndex {
  std::string tech_name;
  long generations = 0;  // count of generation changes, >= 1
  double duration = 0.0;  // elapsed years, > 0
  double ev = 0.0;        // generations / duration
};

inline EvolutionIndex evolution_index(std::string name, long generations, double duration) {
  if (generations < 1)
    fail(errc::invalid_count, "technology '" + name + "' needs at least 1 generation, got " +
                                  std::to_string(generations));
  if (!(duration > 0.0) || !std::isfinite(duration))
    fail(errc::invalid_duration, "technology '" + name + "' needs a positive duration, got " +
                                     std::to_string(duration));
  EvolutionIndex idx;
  idx.tech_name = std::move(name);
  idx.generations = generations;
  idx.duration = duration;
  idx.ev = static_cast<double>(generations) / duration;
  return idx;
}

/// Coevolution of a set of interacting technologies (first component is
/// the host): cv is the product of the component rates. The system counts
/// as coevolving when cv exceeds the threshold (default 0.1). When every
/// component rate is at least 1, cv is at least the largest rate; a
/// component rate below 1 breaks that guarantee, so the flag
/// has_sub_unit_rate marks it for a report warning.
struct CoevolutionIndex {
  std::vector<EvolutionIndex> components;
  double cv = 1.0;
  double threshold = 0.1;
  bool coevolution = false;
  bool has_sub_unit_rate = false;
};

inline CoevolutionIndex coevolution_index(std::vector<EvolutionIndex> components,
                                          double threshold = 0.1) {
  if (components.size() < 2)
    fail(errc::too_few_components, "coevolution needs at least 2 technologies, got " +
                                       std::to_string(components.size()));
  CoevolutionIndex out;
  out.threshold = threshold;
  out.cv = 1.0;
  for (const EvolutionIndex& c : components) {
    out.cv *= c.ev;
    if (c.ev < 1.0) out.has_sub_unit_rate = true;
  }
  out.coevolution = out.cv > threshold;
  out.components = std::move(components);
  return out;
}

}  // namespace techevo
