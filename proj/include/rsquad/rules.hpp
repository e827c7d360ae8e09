#pragma once

// Two-point rule Q = [u(x) - u(a)] f(t0) + [u(b) - u(x)] f(t1) and its remainder.

#include <string>
#include <string_view>
#include <vector>

#include "rsquad/catalog.hpp"
#include "rsquad/oracle.hpp"

namespace rsquad {

/// Position of x relative to [t0, t1].
enum class NodeOrder { x_before, x_inside, x_after };

std::string_view to_string(NodeOrder o);

struct NodeTriple {
  double t0 = 0.0;
  double x = 0.0;
  double t1 = 0.0;
  Interval interval;

  /// Throws InvalidArgument unless a <= t0 <= t1 <= b and a <= x <= b.
  void validate() const;
  /// x_inside whenever t0 <= x <= t1, including the degenerate boundaries.
  NodeOrder order() const noexcept;
  bool x_between() const noexcept { return t0 <= x && x <= t1; }
};

NodeTriple make_nodes(double t0, double x, double t1, Interval interval);

struct RuleResult {
  double q_value = 0.0;
  IntegralResult oracle;
  double remainder = 0.0;  // ∫ f du - Q
};

double two_point_eval(const RealMap& f, const RealMap& u, const NodeTriple& nodes);

RuleResult remainder(const RealMap& f, const RealMap& u, const NodeTriple& nodes, double tol = 1e-9);

enum class PresetKind { trapezoid, midpoint, symmetric, half_nodes, quartile };

std::string_view to_string(PresetKind k);

/// A preset and its free parameters; empty parameters take the defaults
/// x = (a+b)/2 (trapezoid, half-nodes), t0,t1 = (3a+b)/4,(a+3b)/4 (midpoint)
/// and y = a (symmetric).
struct PresetSpec {
  PresetKind kind = PresetKind::trapezoid;
  std::vector<double> params;
};

/// Parses "trapezoid:0.3", "midpoint:0.2,0.8", "symmetric:0.1", "half-nodes", "quartile".
PresetSpec parse_preset(std::string_view text);
std::string format_preset(const PresetSpec& spec);

/// Nodes of the preset on `interval`; parameters are absolute coordinates.
NodeTriple preset_nodes(const PresetSpec& spec, Interval interval);
/// Same, with parameters given as fractions of the interval.
NodeTriple preset_nodes_relative(const PresetSpec& spec, Interval interval);

struct CompositeResult {
  double q_total = 0.0;
  IntegralResult oracle;
  double remainder_total = 0.0;
  std::vector<NodeTriple> cells;
  std::vector<double> cell_q;
};

/// Applies the preset on every cell of the partition given by `breakpoints`
/// (a = b_0 < ... < b_n = b); preset parameters are relative to each cell.
CompositeResult composite_rule(const RealMap& f, const RealMap& u, const std::vector<double>& breakpoints,
                               const PresetSpec& per_cell, double tol = 1e-9);
/// Uniform partition with n cells.
CompositeResult composite_rule(const RealMap& f, const RealMap& u, Interval interval, int n,
                               const PresetSpec& per_cell, double tol = 1e-9);

}  // namespace rsquad
