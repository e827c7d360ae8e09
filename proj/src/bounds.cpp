#include "rsquad/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "rsquad/error.hpp"
#include "rsquad/numeric.hpp"

namespace rsquad {

namespace {

void require_nonneg(double v, std::string_view what) {
  if (!(v >= 0.0) || std::isnan(v)) throw InvalidArgument(fmt::format("{} must be a nonnegative number, got {}", what, v));
}

void require_p(double p) {
  if (std::isnan(p) || p < 1.0) throw InvalidArgument(fmt::format("p must be >= 1, got {}", p));
}

void require_finite_p(double p) {
  require_p(p);
  if (std::isinf(p)) throw InvalidArgument("this bound needs a finite p");
}

void require_hoelder(const HoelderPair& h) {
  require_nonneg(h.constant, "Hoelder constant");
  if (!(h.order > 0.0 && h.order <= 1.0))
    throw InvalidArgument(fmt::format("Hoelder order must lie in (0, 1], got {}", h.order));
}

double checked_variation(const VariationEstimate& v, bool allow_lower_bound) {
  if (!v.is_exact() && !allow_lower_bound)
    throw InvalidArgument("variation is only a partition lower bound; pass the override to use it");
  require_nonneg(v.value, "variation");
  return v.value;
}

void require_inside(const NodeTriple& nodes, std::string_view theorem) {
  nodes.validate();
  if (!nodes.x_between())
    throw InvalidArgument(fmt::format("{} needs a <= t0 <= x <= t1 <= b, got ({}, {}, {})", theorem, nodes.t0,
                                      nodes.x, nodes.t1));
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::thm1: return "thm1";
    case TheoremId::thm1_safe: return "thm1-safe";
    case TheoremId::thm2: return "thm2";
    case TheoremId::thm3: return "thm3";
    case TheoremId::thm4: return "thm4";
    case TheoremId::thm4_safe: return "thm4-safe";
    case TheoremId::thm5: return "thm5";
    case TheoremId::lemma1: return "lemma1";
    case TheoremId::lemma2: return "lemma2";
    case TheoremId::cor4: return "cor4";
    case TheoremId::eq3_6: return "eq3.6";
    case TheoremId::eq3_7: return "eq3.7";
  }
  return "unknown";
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids{TheoremId::thm1,   TheoremId::thm1_safe, TheoremId::thm2,
                                          TheoremId::thm3,   TheoremId::thm4,      TheoremId::thm4_safe,
                                          TheoremId::thm5,   TheoremId::lemma1,    TheoremId::lemma2,
                                          TheoremId::cor4,   TheoremId::eq3_6,     TheoremId::eq3_7};
  return ids;
}

TheoremId parse_theorem_id(std::string_view text) {
  for (auto id : all_theorems()) {
    if (to_string(id) == text) return id;
  }
  throw InvalidArgument(fmt::format("unknown theorem id '{}'", text));
}

std::string_view to_string(BoundForm form) {
  switch (form) {
    case BoundForm::stated: return "stated";
    case BoundForm::proof_safe: return "proof-safe";
    case BoundForm::oscillation: return "oscillation";
  }
  return "unknown";
}

BoundValue lemma1_bound(double sup_w, const VariationEstimate& variation, bool allow_lower_bound) {
  require_nonneg(sup_w, "sup|w|");
  return {sup_w * checked_variation(variation, allow_lower_bound), TheoremId::lemma1, BoundForm::stated};
}

BoundValue lemma1_oscillation_bound(double sup_w, const VariationEstimate& oscillation, bool allow_lower_bound) {
  require_nonneg(sup_w, "sup|w|");
  return {sup_w * checked_variation(oscillation, allow_lower_bound), TheoremId::lemma1, BoundForm::oscillation};
}

BoundValue lemma2_bound(double lipschitz, Interval interval, double p, double w_norm) {
  interval.validate();
  require_p(p);
  require_nonneg(lipschitz, "Lipschitz constant");
  require_nonneg(w_norm, "‖w‖_p");
  return {lipschitz * nonneg_pow(interval.length(), 1.0 - inv(p)) * w_norm, TheoremId::lemma2, BoundForm::stated};
}

Thm1Terms thm1_terms(const NodeTriple& n) {
  const double a = n.interval.lo;
  const double b = n.interval.hi;
  return {(n.x - a) / 2.0 + std::abs(n.t0 - (a + n.x) / 2.0), (b - n.x) / 2.0 + std::abs(n.t1 - (n.x + b) / 2.0)};
}

BoundValue thm1_bound(const HoelderPair& f, const NodeTriple& nodes, const VariationEstimate& v_ab,
                      bool allow_lower_bound) {
  require_hoelder(f);
  require_inside(nodes, "thm1");
  const auto t = thm1_terms(nodes);
  const double v = checked_variation(v_ab, allow_lower_bound);
  return {f.constant * nonneg_pow(std::max(t.left, t.right), f.order) * v, TheoremId::thm1, BoundForm::stated};
}

BoundValue thm1_safe_bound(const HoelderPair& f, const NodeTriple& nodes, const VariationEstimate& v_ax,
                           const VariationEstimate& v_xb, bool allow_lower_bound) {
  require_hoelder(f);
  require_inside(nodes, "thm1-safe");
  const auto t = thm1_terms(nodes);
  const double left = f.constant * nonneg_pow(t.left, f.order) * checked_variation(v_ax, allow_lower_bound);
  const double right = f.constant * nonneg_pow(t.right, f.order) * checked_variation(v_xb, allow_lower_bound);
  return {left + right, TheoremId::thm1_safe, BoundForm::proof_safe};
}

BoundValue thm1_corollary_bound(Thm1Corollary which, Interval interval, const HoelderPair& f, double variation,
                                const std::vector<double>& params) {
  interval.validate();
  require_hoelder(f);
  require_nonneg(variation, "variation");
  const double a = interval.lo;
  const double b = interval.hi;
  const double len = interval.length();
  auto need = [&](std::size_t k) {
    if (params.size() != k) throw InvalidArgument(fmt::format("corollary case takes {} parameter(s)", k));
  };
  double base = 0.0;
  double scale = f.constant;
  switch (which) {
    case Thm1Corollary::trapezoid:
      need(1);
      base = len / 2.0 + std::abs(params[0] - (a + b) / 2.0);
      break;
    case Thm1Corollary::midpoint:
      need(2);
      base = std::max(len / 4.0 + std::abs(params[0] - (3.0 * a + b) / 4.0),
                      len / 4.0 + std::abs(params[1] - (a + 3.0 * b) / 4.0));
      break;
    case Thm1Corollary::symmetric:
      need(1);
      base = len / 4.0 + std::abs(params[0] - (3.0 * a + b) / 4.0);
      break;
    case Thm1Corollary::half_nodes:
      need(1);
      base = len / 2.0 + std::abs(params[0] - (a + b) / 2.0);
      scale /= std::pow(2.0, f.order);
      break;
  }
  return {scale * nonneg_pow(base, f.order) * variation, TheoremId::thm1, BoundForm::stated};
}

BoundValue cor4_bound(const HoelderPair& f, const NodeTriple& nodes, double g_norm) {
  require_hoelder(f);
  require_inside(nodes, "cor4");
  require_nonneg(g_norm, "‖g‖_p");
  const auto t = thm1_terms(nodes);
  return {f.constant * nonneg_pow(std::max(t.left, t.right), f.order) * g_norm, TheoremId::cor4, BoundForm::stated};
}

BoundValue thm2_bound(const HoelderPair& f, double lipschitz_u, double p, const NodeTriple& nodes) {
  require_hoelder(f);
  require_nonneg(lipschitz_u, "Lipschitz constant");
  require_finite_p(p);
  require_inside(nodes, "thm2");
  const double a = nodes.interval.lo;
  const double b = nodes.interval.hi;
  const double q = f.order * p + 1.0;
  const double e = 1.0 - 1.0 / p;
  auto half = [&](double len, double s1, double s2) {
    return nonneg_pow(len, e) * nonneg_pow((nonneg_pow(s1, q) + nonneg_pow(s2, q)) / q, 1.0 / p);
  };
  const double left = half(nodes.x - a, nodes.t0 - a, nodes.x - nodes.t0);
  const double right = half(b - nodes.x, nodes.t1 - nodes.x, b - nodes.t1);
  return {f.constant * lipschitz_u * (left + right), TheoremId::thm2, BoundForm::stated};
}

double thm2_quartile_closed_form(const HoelderPair& f, double lipschitz_u, double p, Interval interval) {
  require_hoelder(f);
  require_finite_p(p);
  interval.validate();
  const double r = f.order;
  return f.constant * lipschitz_u * std::pow(interval.length(), 1.0 + r) /
         (std::pow(2.0, 2.0 * r + 1.0 / p) * std::pow(r * p + 1.0, 1.0 / p));
}

QuartileReport thm2_quartile_report(const HoelderPair& f, double lipschitz_u, double p, Interval interval) {
  QuartileReport out;
  out.general = thm2_bound(f, lipschitz_u, p, preset_nodes({PresetKind::quartile, {}}, interval)).value;
  out.closed_form = thm2_quartile_closed_form(f, lipschitz_u, p, interval);
  out.ratio = out.closed_form > 0.0 ? out.general / out.closed_form : kInfinity;
  return out;
}

double thm3_constant(double p, int n) {
  if (n < 1) throw InvalidArgument("derivative order n must be >= 1");
  if (std::isnan(p) || !(p > 1.0)) throw InvalidArgument(fmt::format("thm3 needs p > 1, got {}", p));
  if (std::isinf(p)) return 1.0;
  const double pi = std::numbers::pi;
  const double base = p * std::sin(pi / p) / (pi * std::pow(p - 1.0, 1.0 / p));
  return std::pow(base, n);
}

double thm3_geometric_factor(double p, int n, const NodeTriple& nodes) {
  require_inside(nodes, "thm3");
  const double a = nodes.interval.lo;
  const double b = nodes.interval.hi;
  const double e = 1.0 - inv(p);
  const double left = (nodes.x - a) / 2.0 + std::abs(nodes.t0 - (nodes.x + a) / 2.0);
  const double right = (b - nodes.x) / 2.0 + std::abs(nodes.t1 - (nodes.x + b) / 2.0);
  return nonneg_pow(nodes.x - a, e) * nonneg_pow(left, n) + nonneg_pow(b - nodes.x, e) * nonneg_pow(right, n);
}

BoundValue thm3_bound(double lipschitz_u, double p, int n, const NodeTriple& nodes, double fn_norm) {
  require_nonneg(lipschitz_u, "Lipschitz constant");
  require_nonneg(fn_norm, "‖f^(n)‖");
  const double c = thm3_constant(p, n);
  return {lipschitz_u * c * thm3_geometric_factor(p, n, nodes) * fn_norm, TheoremId::thm3, BoundForm::stated};
}

double thm4_middle_term(const NodeTriple& n) { return (n.t1 - n.t0) / 2.0 + std::abs(n.x - (n.t0 + n.t1) / 2.0); }

BoundValue thm4_bound(const HoelderPair& u, const NodeTriple& nodes, const VariationEstimate& v_ab,
                      bool allow_lower_bound) {
  require_hoelder(u);
  require_inside(nodes, "thm4");
  const double a = nodes.interval.lo;
  const double b = nodes.interval.hi;
  const double m = std::max({nodes.t0 - a, thm4_middle_term(nodes), b - nodes.t1});
  return {u.constant * nonneg_pow(m, u.order) * checked_variation(v_ab, allow_lower_bound), TheoremId::thm4,
          BoundForm::stated};
}

BoundValue thm4_safe_bound(const HoelderPair& u, const NodeTriple& nodes, const VariationEstimate& v_a_t0,
                           const VariationEstimate& v_t0_t1, const VariationEstimate& v_t1_b,
                           bool allow_lower_bound) {
  require_hoelder(u);
  require_inside(nodes, "thm4-safe");
  const double a = nodes.interval.lo;
  const double b = nodes.interval.hi;
  const double h = u.constant;
  const double r = u.order;
  const double sum = h * nonneg_pow(nodes.t0 - a, r) * checked_variation(v_a_t0, allow_lower_bound) +
                     h * nonneg_pow(thm4_middle_term(nodes), r) * checked_variation(v_t0_t1, allow_lower_bound) +
                     h * nonneg_pow(b - nodes.t1, r) * checked_variation(v_t1_b, allow_lower_bound);
  return {sum, TheoremId::thm4_safe, BoundForm::proof_safe};
}

double thm5_middle_mass(NodeOrder branch, double r, double p, const NodeTriple& n) {
  const double q = r * p + 1.0;
  switch (branch) {
    case NodeOrder::x_before: return nonneg_pow(n.t1 - n.x, q) - nonneg_pow(n.t0 - n.x, q);
    case NodeOrder::x_inside: return nonneg_pow(n.x - n.t0, q) + nonneg_pow(n.t1 - n.x, q);
    case NodeOrder::x_after: return nonneg_pow(n.x - n.t0, q) - nonneg_pow(n.x - n.t1, q);
  }
  return 0.0;
}

BoundValue thm5_bound(double lipschitz_f, const HoelderPair& u, double p, const NodeTriple& nodes) {
  require_hoelder(u);
  require_nonneg(lipschitz_f, "Lipschitz constant");
  require_finite_p(p);
  nodes.validate();
  const double a = nodes.interval.lo;
  const double b = nodes.interval.hi;
  const double r = u.order;
  const double q = r * p + 1.0;
  const double root = std::pow(q, 1.0 / p);
  const double m = std::max(0.0, thm5_middle_mass(nodes.order(), r, p, nodes));
  const double outer = (nonneg_pow(nodes.t0 - a, r + 1.0) + nonneg_pow(b - nodes.t1, r + 1.0)) / root;
  const double middle = nonneg_pow(nodes.t1 - nodes.t0, 1.0 - 1.0 / p) * nonneg_pow(m / q, 1.0 / p);
  return {lipschitz_f * u.constant * (outer + middle), TheoremId::thm5, BoundForm::stated};
}

BoundValue eq3_6_bound(double lipschitz_f, double r, double p, const NodeTriple& nodes) {
  auto v = thm5_bound(lipschitz_f, HoelderPair{1.0, r}, p, nodes);
  v.theorem = TheoremId::eq3_6;
  return v;
}

BoundValue eq3_7_bound(double lipschitz_f, double k, double p, const NodeTriple& nodes) {
  auto v = thm5_bound(lipschitz_f, HoelderPair{k, 1.0}, p, nodes);
  v.theorem = TheoremId::eq3_7;
  return v;
}

BoundValue evaluate_bound(TheoremId id, const BoundInput& in) {
  auto need = [&](const auto& opt, std::string_view what) -> decltype(auto) {
    if (!opt) throw InvalidArgument(fmt::format("{} needs {}", to_string(id), what));
    return *opt;
  };
  auto variations = [&](std::size_t k) -> const std::vector<VariationEstimate>& {
    if (in.variation.size() != k)
      throw InvalidArgument(fmt::format("{} needs {} variation value(s), got {}", to_string(id), k, in.variation.size()));
    return in.variation;
  };
  switch (id) {
    case TheoremId::thm1:
      return thm1_bound(need(in.hoelder, "a Hoelder pair"), in.nodes, variations(1)[0], in.allow_lower_bound);
    case TheoremId::thm1_safe: {
      const auto& v = variations(2);
      return thm1_safe_bound(need(in.hoelder, "a Hoelder pair"), in.nodes, v[0], v[1], in.allow_lower_bound);
    }
    case TheoremId::cor4: return cor4_bound(need(in.hoelder, "a Hoelder pair"), in.nodes, need(in.g_norm, "‖g‖_p"));
    case TheoremId::thm2:
      return thm2_bound(need(in.hoelder, "a Hoelder pair"), need(in.lipschitz, "a Lipschitz constant"), in.p,
                        in.nodes);
    case TheoremId::thm3:
      return thm3_bound(need(in.lipschitz, "a Lipschitz constant"), in.p, need(in.n, "a derivative order"), in.nodes,
                        need(in.derivative_norm, "‖f^(n)‖_p"));
    case TheoremId::thm4:
      return thm4_bound(need(in.hoelder, "a Hoelder pair"), in.nodes, variations(1)[0], in.allow_lower_bound);
    case TheoremId::thm4_safe: {
      const auto& v = variations(3);
      return thm4_safe_bound(need(in.hoelder, "a Hoelder pair"), in.nodes, v[0], v[1], v[2], in.allow_lower_bound);
    }
    case TheoremId::thm5:
      return thm5_bound(need(in.lipschitz, "a Lipschitz constant"), need(in.hoelder, "a Hoelder pair"), in.p,
                        in.nodes);
    case TheoremId::eq3_6:
      return eq3_6_bound(need(in.lipschitz, "a Lipschitz constant"), need(in.hoelder, "a Hoelder pair").order, in.p,
                         in.nodes);
    case TheoremId::eq3_7:
      return eq3_7_bound(need(in.lipschitz, "a Lipschitz constant"), need(in.k, "the constant K"), in.p, in.nodes);
    case TheoremId::lemma1: return lemma1_bound(need(in.sup_w, "sup|w|"), variations(1)[0], in.allow_lower_bound);
    case TheoremId::lemma2:
      return lemma2_bound(need(in.lipschitz, "a Lipschitz constant"), in.nodes.interval, in.p,
                          need(in.w_norm, "‖w‖_p"));
  }
  throw InvalidArgument("unknown theorem");
}

}  // namespace rsquad
