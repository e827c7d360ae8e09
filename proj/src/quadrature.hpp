#pragma once

// Piecewise tanh-sinh quadrature shared by the variation and oracle modules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rsquad/numeric.hpp"

namespace rsquad::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Sorted, de-duplicated cut list [c, interior..., d] with interior points in (c, d).
inline std::vector<double> make_cuts(double c, double d, std::vector<double> interior) {
  std::vector<double> cuts{c};
  std::sort(interior.begin(), interior.end());
  for (double t : interior) {
    if (t > c && t < d && t != cuts.back()) cuts.push_back(t);
  }
  cuts.push_back(d);
  return cuts;
}

/// Integrates fn over each [cuts[i], cuts[i+1]] with tanh-sinh, which never
/// evaluates at the piece ends; endpoint singularities of fn are therefore
/// admissible. Convergence means error <= tol * max(L1, 1) on every piece.
template <class F>
QuadratureResult integrate_pieces(F&& fn, const std::vector<double>& cuts, double tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(18);
  QuadratureResult out;
  CompensatedSum total;
  auto counted = [&](double t) {
    ++out.evaluations;
    return fn(t);
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    double err = 0.0;
    double l1 = 0.0;
    const double piece = integrator.integrate(counted, lo, hi, 0.1 * tol, &err, &l1);
    total += piece;
    out.error += err;
    out.l1 += l1;
    if (!(err <= tol * std::max(l1, 1.0)) || !std::isfinite(piece)) out.converged = false;
  }
  out.value = total.value();
  return out;
}

}  // namespace rsquad::detail
