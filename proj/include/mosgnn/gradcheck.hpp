#pragma once

#include <functional>
#include <span>

#include "mosgnn/tape.hpp"

namespace mosgnn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
  /// Location of the worst coordinate, for diagnostics.
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
};

/// Records a scalar loss on the given tape, reading the current parameter values.
using LossBuilder = std::function<Var(Tape&)>;

/// Compares tape gradients against central differences (f(w+h) - f(w-h)) / 2h
/// for every coordinate of every parameter. Relative error per coordinate is
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
///
/// The builder must be deterministic. Parameter values are restored on return;
/// gradients are left holding the analytic result.
GradCheckResult check_gradients(const LossBuilder& build, std::span<Parameter* const> params,
                                double h = 1e-5);

}  // namespace mosgnn
