#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "rsquad/catalog.hpp"

namespace rsquad {

enum class VariationMethod {
  exact_monotone,         // single increment of a monotone map
  exact_step,             // sequence DP over the value sequence of a step map
  exact_extremal_dp,      // sequence DP over closed-form turning points
  partition_lower_bound,  // DP over sampled local extrema
  oscillation,            // sup - inf (p = infinity)
};

std::string_view to_string(VariationMethod m);

/// p-variation (or oscillation) of a map over [lo, hi].
///
/// `p` is +infinity for the oscillation. The witness is the partition that
/// attains `value` (for oscillation: the arg-inf and arg-sup points).
struct VariationEstimate {
  double p = 1.0;
  double value = 0.0;
  VariationMethod method = VariationMethod::exact_monotone;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> witness_points;
  std::vector<double> witness_values;

  bool is_exact() const noexcept { return method != VariationMethod::partition_lower_bound; }
};

struct VariationOptions {
  /// Ignore closed-form structure and work from a uniform sample.
  bool force_sampled = false;
  /// Sample size for the sampled paths.
  std::size_t samples = 20001;
};

/// sup - inf over [c, d].
VariationEstimate oscillation(const RealMap& map, double c, double d, VariationOptions opts = {});

/// Total p-variation sup_P (sum |Δf|^p)^(1/p) over partitions of [c, d].
/// p = +infinity routes to oscillation.
VariationEstimate p_variation(const RealMap& map, double p, double c, double d,
                              VariationOptions opts = {});

/// Maximises sum |v[j_k] - v[j_{k-1}]|^p over index chains 0 = j_0 < ... < j_m = n-1.
/// Returns the optimal sum (not its p-th root) and writes the chain to `chain`.
double max_pvar_chain(const std::vector<double>& values, double p, std::vector<std::size_t>* chain);

/// The value sequence whose chain DP gives the exact p-variation: the
/// endpoint values, the turning-point values and, for step maps, the
/// constant values between consecutive jumps.
struct CandidateSequence {
  std::vector<double> points;
  std::vector<double> values;
};
CandidateSequence candidate_sequence(const RealMap& map, double c, double d);

/// (inf, sup) of the map over [c, d].
std::pair<double, double> value_range(const RealMap& map, double c, double d, VariationOptions opts = {});
/// sup |f| over [c, d].
double sup_abs(const RealMap& map, double c, double d);

/// (∫_c^d |f^(order)|^p dt)^(1/p), adaptive quadrature to relative `tol`.
/// p = +infinity gives the sup norm of the derivative.
struct NormEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  double p = 1.0;
  int order = 0;
};
NormEstimate derivative_norm(const RealMap& map, int order, double p, double c, double d,
                             double tol = 1e-10);

}  // namespace rsquad
