#include "rsquad/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "quadrature.hpp"
#include "rsquad/error.hpp"
#include "rsquad/numeric.hpp"

namespace rsquad {

namespace {

void check_interval(const RealMap& map, double c, double d) {
  if (!(c <= d)) throw InvalidArgument(fmt::format("inverted interval [{}, {}]", c, d));
  if (!map.domain().contains(c) || !map.domain().contains(d))
    throw InvalidArgument(fmt::format("[{}, {}] is not inside the domain [{}, {}]", c, d, map.domain().lo,
                                      map.domain().hi));
}

/// Drops points strictly inside monotone runs and repeated values; the
/// chain optimum is unchanged because |Δ|^p is convex in each interior value.
CandidateSequence compress_to_extrema(const CandidateSequence& seq) {
  CandidateSequence out;
  const auto n = seq.values.size();
  if (n == 0) return out;
  out.points.push_back(seq.points.front());
  out.values.push_back(seq.values.front());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double prev = out.values.back();
    const double cur = seq.values[i];
    const double next = seq.values[i + 1];
    if (cur == prev) continue;
    const bool monotone_through = (cur - prev) * (next - cur) > 0.0;
    if (monotone_through) continue;
    if (next == cur) {
      // flat continuation: keep the first point of the plateau only
      out.points.push_back(seq.points[i]);
      out.values.push_back(cur);
      continue;
    }
    out.points.push_back(seq.points[i]);
    out.values.push_back(cur);
  }
  if (n > 1) {
    out.points.push_back(seq.points.back());
    out.values.push_back(seq.values.back());
  }
  return out;
}

VariationEstimate chain_estimate(const CandidateSequence& raw, double p, double c, double d,
                                 VariationMethod method) {
  const auto seq = compress_to_extrema(raw);
  VariationEstimate est;
  est.p = p;
  est.lo = c;
  est.hi = d;
  est.method = method;
  std::vector<std::size_t> chain;
  const double sum = max_pvar_chain(seq.values, p, &chain);
  est.value = p == 1.0 ? sum : std::pow(sum, 1.0 / p);
  for (auto idx : chain) {
    est.witness_points.push_back(seq.points[idx]);
    est.witness_values.push_back(seq.values[idx]);
  }
  return est;
}

CandidateSequence sampled_sequence(const RealMap& map, double c, double d, std::size_t samples) {
  CandidateSequence seq;
  const std::size_t n = std::max<std::size_t>(samples, 2);
  seq.points.reserve(n);
  seq.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? d : c + (d - c) * static_cast<double>(i) / static_cast<double>(n - 1);
    seq.points.push_back(t);
    seq.values.push_back(map(t));
  }
  return seq;
}

/// Zeros of the order-th derivative in (c, d) where |f^(order)|^p has a kink.
std::vector<double> derivative_zeros(const RealMap& map, int order, double c, double d) {
  std::vector<double> out;
  if (const auto* poly = std::get_if<PolynomialMap>(&map.params())) {
    auto q = poly->coefficients;
    for (int i = 0; i < order; ++i) {
      std::vector<double> dq;
      for (std::size_t k = 1; k < q.size(); ++k) dq.push_back(q[k] * static_cast<double>(k));
      if (dq.empty()) dq.push_back(0.0);
      q = std::move(dq);
    }
    for (double t : polynomial_sign_changes(q, c, d)) {
      if (t > c && t < d) out.push_back(t);
    }
  } else if (const auto* s = std::get_if<SineMap>(&map.params())) {
    // sin(freq t + phase + order pi/2) = 0
    const double pi = std::numbers::pi;
    const double shift = s->phase + order * pi / 2.0;
    for (double k = std::ceil((s->freq * c + shift) / pi);; k += 1.0) {
      const double t = (k * pi - shift) / s->freq;
      if (t >= d) break;
      if (t > c) out.push_back(t);
    }
  } else if (const auto* pl = std::get_if<PiecewiseLinearMap>(&map.params()); pl && order == 0) {
    for (std::size_t i = 0; i + 1 < pl->knots.size(); ++i) {
      const double v0 = pl->values[i];
      const double v1 = pl->values[i + 1];
      if (v0 * v1 < 0.0) {
        const double t = pl->knots[i] + (pl->knots[i + 1] - pl->knots[i]) * v0 / (v0 - v1);
        if (t > c && t < d) out.push_back(t);
      }
    }
  }
  return out;
}

double sampled_derivative_sup(const RealMap& map, int order, double c, double d) {
  constexpr std::size_t n = 20001;
  auto g = [&](double t) { return std::abs(map.derivative(order, t)); };
  double best = std::max(g(c), g(d));
  std::size_t best_i = 0;
  const double h = (d - c) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = g(c + h * static_cast<double>(i));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i != 0) {
    const double lo = c + h * static_cast<double>(best_i - 1);
    const double hi = c + h * static_cast<double>(best_i + 1);
    auto res = boost::math::tools::brent_find_minima([&](double t) { return -g(t); }, lo, hi, 52);
    best = std::max(best, -res.second);
  }
  return best;
}

}  // namespace

std::string_view to_string(VariationMethod m) {
  switch (m) {
    case VariationMethod::exact_monotone: return "exact-monotone";
    case VariationMethod::exact_step: return "exact-step";
    case VariationMethod::exact_extremal_dp: return "exact-extremal-dp";
    case VariationMethod::partition_lower_bound: return "partition-lower-bound";
    case VariationMethod::oscillation: return "oscillation";
  }
  return "unknown";
}

double max_pvar_chain(const std::vector<double>& values, double p, std::vector<std::size_t>* chain) {
  const auto n = values.size();
  if (chain) chain->clear();
  if (n == 0) return 0.0;
  if (n == 1) {
    if (chain) chain->push_back(0);
    return 0.0;
  }
  std::vector<double> best(n, -1.0);
  std::vector<std::size_t> from(n, 0);
  best[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double inc = std::abs(values[j] - values[i]);
      const double cand = best[i] + (p == 1.0 ? inc : std::pow(inc, p));
      if (cand > best[j]) {
        best[j] = cand;
        from[j] = i;
      }
    }
  }
  if (chain) {
    for (std::size_t j = n - 1;; j = from[j]) {
      chain->push_back(j);
      if (j == 0) break;
    }
    std::reverse(chain->begin(), chain->end());
  }
  return best[n - 1];
}

CandidateSequence candidate_sequence(const RealMap& map, double c, double d) {
  check_interval(map, c, d);
  CandidateSequence seq;
  std::vector<double> pts{c};
  for (double t : map.turning_points(c, d)) pts.push_back(t);
  if (d != c) pts.push_back(d);
  const bool step = map.kind() == MapKind::step;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (step && i > 0) {
      const double mid = 0.5 * (pts[i - 1] + pts[i]);
      seq.points.push_back(mid);
      seq.values.push_back(map(mid));
    }
    seq.points.push_back(pts[i]);
    seq.values.push_back(map(pts[i]));
  }
  return seq;
}

std::pair<double, double> value_range(const RealMap& map, double c, double d, VariationOptions opts) {
  const auto seq = opts.force_sampled ? (check_interval(map, c, d), sampled_sequence(map, c, d, opts.samples))
                                      : candidate_sequence(map, c, d);
  const auto [lo, hi] = std::minmax_element(seq.values.begin(), seq.values.end());
  return {*lo, *hi};
}

double sup_abs(const RealMap& map, double c, double d) {
  const auto [lo, hi] = value_range(map, c, d);
  return std::max(std::abs(lo), std::abs(hi));
}

VariationEstimate oscillation(const RealMap& map, double c, double d, VariationOptions opts) {
  check_interval(map, c, d);
  const auto seq = opts.force_sampled ? sampled_sequence(map, c, d, opts.samples) : candidate_sequence(map, c, d);
  const auto [lo, hi] = std::minmax_element(seq.values.begin(), seq.values.end());
  VariationEstimate est;
  est.p = kInfinity;
  est.value = *hi - *lo;
  est.method = opts.force_sampled ? VariationMethod::partition_lower_bound : VariationMethod::oscillation;
  est.lo = c;
  est.hi = d;
  const auto ilo = static_cast<std::size_t>(lo - seq.values.begin());
  const auto ihi = static_cast<std::size_t>(hi - seq.values.begin());
  for (auto i : {std::min(ilo, ihi), std::max(ilo, ihi)}) {
    est.witness_points.push_back(seq.points[i]);
    est.witness_values.push_back(seq.values[i]);
  }
  return est;
}

VariationEstimate p_variation(const RealMap& map, double p, double c, double d, VariationOptions opts) {
  if (std::isnan(p) || p < 1.0) throw InvalidArgument(fmt::format("p-variation needs p >= 1, got {}", p));
  if (std::isinf(p)) return oscillation(map, c, d, opts);
  check_interval(map, c, d);

  if (opts.force_sampled)
    return chain_estimate(sampled_sequence(map, c, d, opts.samples), p, c, d,
                          VariationMethod::partition_lower_bound);

  if (map.kind() == MapKind::step)
    return chain_estimate(candidate_sequence(map, c, d), p, c, d, VariationMethod::exact_step);

  if (map.turning_points(c, d).empty()) {
    VariationEstimate est;
    est.p = p;
    est.lo = c;
    est.hi = d;
    est.method = VariationMethod::exact_monotone;
    est.value = std::abs(map(d) - map(c));
    est.witness_points = {c, d};
    est.witness_values = {map(c), map(d)};
    if (c == d) {
      est.witness_points.pop_back();
      est.witness_values.pop_back();
    }
    return est;
  }
  return chain_estimate(candidate_sequence(map, c, d), p, c, d, VariationMethod::exact_extremal_dp);
}

NormEstimate derivative_norm(const RealMap& map, int order, double p, double c, double d, double tol) {
  check_interval(map, c, d);
  if (order < 0 || order > map.derivative_order_available())
    throw InvalidArgument(fmt::format("{} map has no derivative of order {}", to_string(map.kind()), order));
  if (std::isnan(p) || p < 1.0) throw InvalidArgument(fmt::format("norm exponent must be >= 1, got {}", p));
  NormEstimate est;
  est.p = p;
  est.order = order;
  if (c == d) return est;

  if (std::isinf(p)) {
    if (order == 0) {
      est.value = sup_abs(map, c, d);
    } else if (const auto* poly = std::get_if<PolynomialMap>(&map.params())) {
      (void)poly;
      double best = std::max(std::abs(map.derivative(order, c)), std::abs(map.derivative(order, d)));
      for (double t : derivative_zeros(map, order + 1, c, d)) best = std::max(best, std::abs(map.derivative(order, t)));
      est.value = best;
    } else {
      est.value = sampled_derivative_sup(map, order, c, d);
    }
    return est;
  }

  std::vector<double> interior = map.breakpoints(c, d);
  for (double t : derivative_zeros(map, order, c, d)) interior.push_back(t);
  const auto cuts = detail::make_cuts(c, d, std::move(interior));
  auto integrand = [&](double t) {
    const double v = std::abs(map.derivative(order, t));
    return p == 1.0 ? v : std::pow(v, p);
  };
  const auto q = detail::integrate_pieces(integrand, cuts, tol);
  if (!q.converged)
    throw OracleNonConvergence(fmt::format("norm quadrature did not reach tolerance {} (error {})", tol, q.error));
  est.value = p == 1.0 ? q.value : std::pow(q.value, 1.0 / p);
  est.error_estimate = q.value > 0.0 ? est.value * q.error / (p * q.value) : q.error;
  return est;
}

}  // namespace rsquad
