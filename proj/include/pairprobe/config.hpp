#pragma once

#include <optional>
#include <string>

#include "pairprobe/experiments.hpp"
#include "pairprobe/forward_model.hpp"
#include "pairprobe/layout.hpp"
#include "pairprobe/medium.hpp"
#include "pairprobe/medium_solver.hpp"
#include "pairprobe/stability.hpp"
#include "pairprobe/waves.hpp"

namespace pairprobe {

/// Everything one CLI invocation needs.  Sections absent from the file stay empty.
struct ExperimentConfig {
  std::optional<MediumSpec> medium;
  std::optional<WaveConfig> waves;
  SolverOptions solver;
  std::optional<InclusionLayout> layout;
  SynthesisOptions synthesis;
  std::optional<NoiseModel> noise;
  std::optional<ShiftModel> shift;
  std::optional<RateSweepSpec> sweep;
  std::optional<NoiseStudySpec> noise_study;
  bool mie_validation = false;
};

/// Parses JSON text.  Unknown keys, wrong types and violated invariants raise
/// ConfigError with a "source:line:" prefix.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

}  // namespace pairprobe
