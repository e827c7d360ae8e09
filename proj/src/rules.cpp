#include "rsquad/rules.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "rsquad/error.hpp"
#include "rsquad/numeric.hpp"

namespace rsquad {

namespace {

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    double v = 0.0;
    const auto* first = piece.data();
    const auto* last = piece.data() + piece.size();
    while (first != last && *first == ' ') ++first;
    while (last != first && last[-1] == ' ') --last;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
      throw InvalidArgument(fmt::format("bad preset parameter '{}'", piece));
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::size_t expected_params(PresetKind k) {
  switch (k) {
    case PresetKind::midpoint: return 2;
    case PresetKind::quartile: return 0;
    default: return 1;
  }
}

}  // namespace

std::string_view to_string(NodeOrder o) {
  switch (o) {
    case NodeOrder::x_before: return "x<=t0";
    case NodeOrder::x_inside: return "t0<=x<=t1";
    case NodeOrder::x_after: return "t1<=x";
  }
  return "unknown";
}

std::string_view to_string(PresetKind k) {
  switch (k) {
    case PresetKind::trapezoid: return "trapezoid";
    case PresetKind::midpoint: return "midpoint";
    case PresetKind::symmetric: return "symmetric";
    case PresetKind::half_nodes: return "half-nodes";
    case PresetKind::quartile: return "quartile";
  }
  return "unknown";
}

void NodeTriple::validate() const {
  interval.validate();
  const double a = interval.lo;
  const double b = interval.hi;
  if (!std::isfinite(t0) || !std::isfinite(x) || !std::isfinite(t1))
    throw InvalidArgument("nodes must be finite");
  if (!(a <= t0 && t0 <= t1 && t1 <= b))
    throw InvalidArgument(fmt::format("nodes need a <= t0 <= t1 <= b, got t0={} t1={} on [{}, {}]", t0, t1, a, b));
  if (!(a <= x && x <= b)) throw InvalidArgument(fmt::format("x = {} lies outside [{}, {}]", x, a, b));
}

NodeOrder NodeTriple::order() const noexcept {
  if (x_between()) return NodeOrder::x_inside;
  return x < t0 ? NodeOrder::x_before : NodeOrder::x_after;
}

NodeTriple make_nodes(double t0, double x, double t1, Interval interval) {
  NodeTriple n{t0, x, t1, interval};
  n.validate();
  return n;
}

double two_point_eval(const RealMap& f, const RealMap& u, const NodeTriple& nodes) {
  nodes.validate();
  const double a = nodes.interval.lo;
  const double b = nodes.interval.hi;
  const double ux = u(nodes.x);
  return (ux - u(a)) * f(nodes.t0) + (u(b) - ux) * f(nodes.t1);
}

RuleResult remainder(const RealMap& f, const RealMap& u, const NodeTriple& nodes, double tol) {
  RuleResult out;
  out.q_value = two_point_eval(f, u, nodes);
  OracleOptions opts;
  opts.tol = tol;
  out.oracle = rs_integral(f, u, nodes.interval.lo, nodes.interval.hi, opts);
  out.remainder = out.oracle.value - out.q_value;
  return out;
}

PresetSpec parse_preset(std::string_view text) {
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  PresetSpec spec;
  if (name == "trapezoid") {
    spec.kind = PresetKind::trapezoid;
  } else if (name == "midpoint") {
    spec.kind = PresetKind::midpoint;
  } else if (name == "symmetric") {
    spec.kind = PresetKind::symmetric;
  } else if (name == "half-nodes" || name == "half_nodes") {
    spec.kind = PresetKind::half_nodes;
  } else if (name == "quartile") {
    spec.kind = PresetKind::quartile;
  } else {
    throw InvalidArgument(fmt::format("unknown preset '{}'", name));
  }
  if (colon != std::string_view::npos && colon + 1 < text.size()) spec.params = parse_numbers(text.substr(colon + 1));
  if (!spec.params.empty() && spec.params.size() != expected_params(spec.kind))
    throw InvalidArgument(fmt::format("preset {} takes {} parameter(s), got {}", to_string(spec.kind),
                                      expected_params(spec.kind), spec.params.size()));
  return spec;
}

std::string format_preset(const PresetSpec& spec) {
  if (spec.params.empty()) return std::string(to_string(spec.kind));
  return fmt::format("{}:{}", to_string(spec.kind), fmt::join(spec.params, ","));
}

NodeTriple preset_nodes(const PresetSpec& spec, Interval interval) {
  interval.validate();
  const double a = interval.lo;
  const double b = interval.hi;
  const double mid = 0.5 * (a + b);
  if (!spec.params.empty() && spec.params.size() != expected_params(spec.kind))
    throw InvalidArgument(fmt::format("preset {} takes {} parameter(s)", to_string(spec.kind),
                                      expected_params(spec.kind)));
  const auto param = [&](std::size_t i, double fallback) {
    return spec.params.empty() ? fallback : spec.params[i];
  };
  switch (spec.kind) {
    case PresetKind::trapezoid: return make_nodes(a, param(0, mid), b, interval);
    case PresetKind::midpoint: {
      const double t0 = param(0, 0.75 * a + 0.25 * b);
      const double t1 = param(1, 0.25 * a + 0.75 * b);
      if (!(t0 <= mid && mid <= t1))
        throw InvalidArgument(fmt::format("midpoint preset needs t0 <= (a+b)/2 <= t1, got {}, {}", t0, t1));
      return make_nodes(t0, mid, t1, interval);
    }
    case PresetKind::symmetric: {
      const double y = param(0, a);
      if (!(a <= y && y <= mid))
        throw InvalidArgument(fmt::format("symmetric preset needs y in [{}, {}], got {}", a, mid, y));
      return make_nodes(y, mid, a + b - y, interval);
    }
    case PresetKind::half_nodes: {
      const double x = param(0, mid);
      return make_nodes(0.5 * (a + x), x, 0.5 * (x + b), interval);
    }
    case PresetKind::quartile: return make_nodes(0.75 * a + 0.25 * b, mid, 0.25 * a + 0.75 * b, interval);
  }
  throw InvalidArgument("unknown preset");
}

NodeTriple preset_nodes_relative(const PresetSpec& spec, Interval interval) {
  PresetSpec absolute = spec;
  for (double& v : absolute.params) v = interval.lo + v * interval.length();
  auto nodes = preset_nodes(absolute, interval);
  // guard against rounding past the cell ends
  nodes.t0 = std::clamp(nodes.t0, interval.lo, interval.hi);
  nodes.x = std::clamp(nodes.x, interval.lo, interval.hi);
  nodes.t1 = std::clamp(nodes.t1, nodes.t0, interval.hi);
  return nodes;
}

CompositeResult composite_rule(const RealMap& f, const RealMap& u, const std::vector<double>& breakpoints,
                               const PresetSpec& per_cell, double tol) {
  if (breakpoints.size() < 2) throw InvalidArgument("composite rule needs at least one cell");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw InvalidArgument("composite breakpoints must be strictly increasing");
  }
  CompositeResult out;
  CompensatedSum total;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const Interval cell{breakpoints[i - 1], breakpoints[i]};
    const auto nodes = preset_nodes_relative(per_cell, cell);
    const double q = two_point_eval(f, u, nodes);
    out.cells.push_back(nodes);
    out.cell_q.push_back(q);
    total += q;
  }
  out.q_total = total.value();
  OracleOptions opts;
  opts.tol = tol;
  out.oracle = rs_integral(f, u, breakpoints.front(), breakpoints.back(), opts);
  out.remainder_total = out.oracle.value - out.q_total;
  return out;
}

CompositeResult composite_rule(const RealMap& f, const RealMap& u, Interval interval, int n,
                               const PresetSpec& per_cell, double tol) {
  interval.validate();
  if (n < 1) throw InvalidArgument(fmt::format("composite rule needs n >= 1, got {}", n));
  std::vector<double> pts(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) pts[static_cast<std::size_t>(i)] = interval.lo + interval.length() * i / n;
  pts.back() = interval.hi;
  return composite_rule(f, u, pts, per_cell, tol);
}

}  // namespace rsquad
