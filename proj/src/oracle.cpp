#include "rsquad/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "quadrature.hpp"
#include "rsquad/error.hpp"
#include "rsquad/numeric.hpp"

namespace rsquad {

namespace {

void check_range(const RealMap& m, double c, double d, const char* name) {
  if (!(c <= d)) throw InvalidArgument(fmt::format("inverted interval [{}, {}]", c, d));
  if (!m.domain().contains(c) || !m.domain().contains(d))
    throw InvalidArgument(fmt::format("[{}, {}] is outside the domain of {}", c, d, name));
}

bool discontinuous_within(const RealMap& m, double t, double c, double d) {
  if (t < c || t > d) return false;
  const bool from_left = t > c && m.jumps_from_left(t);
  const bool from_right = t < d && m.jumps_from_right(t);
  return from_left || from_right;
}

void check_existence(const RealMap& f, const RealMap& u, double c, double d) {
  for (double t : u.discontinuities()) {
    if (discontinuous_within(u, t, c, d) && discontinuous_within(f, t, c, d))
      throw IntegralDoesNotExist(fmt::format("{} and {} are both discontinuous at t = {}", f.id(), u.id(), t));
  }
}

/// ∫_c^d f dg for a step integrator g; f is continuous at every jump of g.
IntegralResult jump_sum(const RealMap& f, const RealMap& g, double c, double d) {
  IntegralResult out;
  out.method = IntegralMethod::exact_step;
  if (c == d) return out;
  CompensatedSum sum;
  const auto& s = std::get<StepMap>(g.params());
  for (double t : s.points) {
    if (t < c || t > d) continue;
    const double lower = t == c ? g(t) : g.left_limit(t);
    const double upper = t == d ? g(t) : g.right_limit(t);
    const double jump = upper - lower;
    if (jump == 0.0) continue;
    sum += f(t) * jump;
    out.evaluations += 1;
  }
  out.value = sum.value();
  return out;
}

IntegralResult by_parts_over_step(const RealMap& f, const RealMap& u, double c, double d) {
  auto out = jump_sum(u, f, c, d);
  CompensatedSum sum;
  sum += f(d) * u(d);
  sum += -f(c) * u(c);
  sum += -out.value;
  out.value = sum.value();
  out.evaluations += 4;
  return out;
}

IntegralResult reduce_to_riemann(const RealMap& f, const RealMap& u, double c, double d, double tol) {
  IntegralResult out;
  out.method = IntegralMethod::reduce_to_riemann;
  if (c == d) return out;
  auto cuts_inside = f.breakpoints(c, d);
  for (double t : u.breakpoints(c, d)) cuts_inside.push_back(t);
  const auto cuts = detail::make_cuts(c, d, std::move(cuts_inside));
  const auto q = detail::integrate_pieces([&](double t) { return f(t) * u.derivative(1, t); }, cuts, tol);
  if (!q.converged)
    throw OracleNonConvergence(
        fmt::format("quadrature of f u' did not reach tolerance {} (error estimate {})", tol, q.error));
  out.value = q.value;
  out.error_estimate = q.error;
  out.evaluations = 2 * q.evaluations;
  return out;
}

IntegralResult refined_sums(const RealMap& f, const RealMap& u, double c, double d, const OracleOptions& opts) {
  IntegralResult out;
  out.method = IntegralMethod::refined_rs_sums;
  if (c == d) return out;
  for (std::size_t n = 2;; n *= 2) {
    if (out.evaluations + 2 * (n + 1) > opts.max_evaluations)
      throw OracleNonConvergence(fmt::format(
          "tagged sums did not agree to {} within {} evaluations (gap {})", opts.tol, opts.max_evaluations,
          out.error_estimate));
    const auto s = rs_sums(f, u, c, d, n);
    out.evaluations += 2 * (n + 1);
    out.value = 0.5 * (s.left + s.right);
    out.error_estimate = std::abs(s.left - s.right);
    if (out.error_estimate <= opts.tol * std::max(1.0, std::abs(out.value))) return out;
  }
}

}  // namespace

std::string_view to_string(IntegralMethod m) {
  switch (m) {
    case IntegralMethod::exact_step: return "exact-step";
    case IntegralMethod::reduce_to_riemann: return "reduce-to-riemann";
    case IntegralMethod::refined_rs_sums: return "refined-rs-sums";
  }
  return "unknown";
}

TaggedSums rs_sums(const RealMap& f, const RealMap& u, double c, double d, std::size_t n) {
  check_range(f, c, d, "f");
  check_range(u, c, d, "u");
  if (n == 0) throw InvalidArgument("tagged sums need at least one cell");
  CompensatedSum left;
  CompensatedSum right;
  const double h = (d - c) / static_cast<double>(n);
  double f_prev = f(c);
  double u_prev = u(c);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = i == n ? d : c + h * static_cast<double>(i);
    const double f_cur = f(t);
    const double u_cur = u(t);
    const double du = u_cur - u_prev;
    left += f_prev * du;
    right += f_cur * du;
    f_prev = f_cur;
    u_prev = u_cur;
  }
  return {left.value(), right.value()};
}

IntegralResult rs_integral(const RealMap& f, const RealMap& u, double c, double d, OracleOptions opts) {
  check_range(f, c, d, "f");
  check_range(u, c, d, "u");
  if (!(opts.tol > 0.0)) throw InvalidArgument("oracle tolerance must be positive");
  check_existence(f, u, c, d);

  if (opts.force) {
    switch (*opts.force) {
      case IntegralMethod::exact_step:
        if (u.kind() == MapKind::step) return jump_sum(f, u, c, d);
        if (f.kind() == MapKind::step) return by_parts_over_step(f, u, c, d);
        throw InvalidArgument("exact-step needs a step integrand or integrator");
      case IntegralMethod::reduce_to_riemann:
        if (u.derivative_order_available() < 1) throw InvalidArgument("reduce-to-riemann needs a differentiable u");
        return reduce_to_riemann(f, u, c, d, opts.tol);
      case IntegralMethod::refined_rs_sums: return refined_sums(f, u, c, d, opts);
    }
  }

  if (u.kind() == MapKind::step) return jump_sum(f, u, c, d);
  if (f.kind() == MapKind::step) return by_parts_over_step(f, u, c, d);
  if (u.derivative_order_available() >= 1) return reduce_to_riemann(f, u, c, d, opts.tol);
  return refined_sums(f, u, c, d, opts);
}

PartsIdentity parts_identity_check(const RealMap& f, const RealMap& u, double c, double d, double tol) {
  PartsIdentity out;
  OracleOptions opts;
  opts.tol = tol;
  out.f_du = rs_integral(f, u, c, d, opts);
  out.u_df = rs_integral(u, f, c, d, opts);
  out.boundary = f(d) * u(d) - f(c) * u(c);
  out.residual = std::abs(out.f_du.value + out.u_df.value - out.boundary);
  return out;
}

}  // namespace rsquad
