#include "mosgnn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "mosgnn/error.hpp"

namespace mosgnn {
namespace {

double evaluate(const LossBuilder& build) {
  Tape tape;
  const Var loss = build(tape);
  const auto& v = tape.value(loss);
  if (v.rows() != 1 || v.cols() != 1) {
    throw StateError("check_gradients: loss must be 1x1, got " + v.shape_string());
  }
  if (!std::isfinite(v(0, 0))) throw NumericError("check_gradients: loss is not finite");
  return v(0, 0);
}

}  // namespace

GradCheckResult check_gradients(const LossBuilder& build, std::span<Parameter* const> params,
                                double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParameterError("check_gradients: step must be positive and finite");
  }
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    const Var loss = build(tape);
    if (!std::isfinite(tape.value(loss)(0, 0))) {
      throw NumericError("check_gradients: loss is not finite");
    }
    tape.backward(loss);
  }

  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value.data()[i];
      p.value.data()[i] = saved + h;
      const double up = evaluate(build);
      p.value.data()[i] = saved - h;
      const double down = evaluate(build);
      p.value.data()[i] = saved;

      const double numeric = (up - down) / (2.0 * h);
      const double analytic = p.grad.data()[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double rel = std::abs(analytic - numeric) / denom;
      ++result.coordinates;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_param = pi;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace mosgnn
