#pragma once

// Reference evaluation of Riemann-Stieltjes integrals.

#include <cstddef>
#include <optional>
#include <string_view>

#include "rsquad/catalog.hpp"

namespace rsquad {

enum class IntegralMethod { exact_step, reduce_to_riemann, refined_rs_sums };

std::string_view to_string(IntegralMethod m);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  IntegralMethod method = IntegralMethod::exact_step;
  std::size_t evaluations = 0;
};

struct OracleOptions {
  double tol = 1e-9;
  std::size_t max_evaluations = std::size_t{1} << 22;
  /// Skip method selection. Forcing exact_step requires one of the maps to be a step map.
  std::optional<IntegralMethod> force;
};

/// ∫_c^d f du.
///
/// A step integrator gives the jump sum Σ f(c_j)(u(c_j+) - u(c_j-)), with
/// u(c+) - u(c) and u(d) - u(d-) at the ends. A step integrand with a
/// continuous integrator is handled by parts with the same jump sum. A
/// differentiable integrator reduces to ∫ f u' dt. Anything else falls back
/// to left/right-tagged Riemann-Stieltjes sums on dyadic meshes.
///
/// Throws IntegralDoesNotExist when f and u are discontinuous at a common
/// point and OracleNonConvergence when the refinement cap is reached.
IntegralResult rs_integral(const RealMap& f, const RealMap& u, double c, double d, OracleOptions opts = {});

/// Left- and right-tagged sums Σ f(t_{i-1}) Δu_i and Σ f(t_i) Δu_i on the
/// uniform mesh with n cells.
struct TaggedSums {
  double left = 0.0;
  double right = 0.0;
};
TaggedSums rs_sums(const RealMap& f, const RealMap& u, double c, double d, std::size_t n);

struct PartsIdentity {
  double residual = 0.0;
  IntegralResult f_du;
  IntegralResult u_df;
  double boundary = 0.0;  // f(d)u(d) - f(c)u(c)
};

/// |∫f du + ∫u df - [f(d)u(d) - f(c)u(c)]|.
PartsIdentity parts_identity_check(const RealMap& f, const RealMap& u, double c, double d, double tol = 1e-9);

}  // namespace rsquad
