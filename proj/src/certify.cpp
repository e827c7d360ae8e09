#include "rsquad/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rsquad/error.hpp"
#include "rsquad/numeric.hpp"
#include "rsquad/variation.hpp"

namespace rsquad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

HoelderPair hoelder_of(const CatalogEntry& e, const std::optional<double>& r, std::string_view role,
                       TheoremId id) {
  const auto pair = r ? e.profile.hoelder_at_order(*r, e.map.domain().length()) : e.profile.hoelder_pair();
  if (!pair) {
    if (r)
      throw HypothesisMismatch(
          fmt::format("{} needs {} Hoelder of order {}, which {} does not provide", to_string(id), role, *r, e.id));
    throw HypothesisMismatch(fmt::format("{} needs {} Hoelder continuous, but {} has no Hoelder pair", to_string(id),
                                         role, e.id));
  }
  return *pair;
}

double lipschitz_of(const CatalogEntry& e, std::string_view role, TheoremId id) {
  if (!e.profile.lipschitz)
    throw HypothesisMismatch(
        fmt::format("{} needs {} Lipschitz, but {} has no Lipschitz constant", to_string(id), role, e.id));
  return *e.profile.lipschitz;
}

VariationEstimate exact_variation(const RealMap& m, double p, double c, double d, bool allow_lower_bound,
                                  TheoremId id) {
  auto v = p_variation(m, p, c, d);
  if (!v.is_exact() && !allow_lower_bound)
    throw HypothesisMismatch(fmt::format("{}: only a lower bound on the {}-variation of {} is available",
                                         to_string(id), p, m.id()));
  return v;
}

bool same_nodes(const NodeTriple& a, const NodeTriple& b) { return a.t0 == b.t0 && a.x == b.x && a.t1 == b.t1; }

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

nlohmann::json bound_json(const BoundValue& b) {
  return {{"value", b.value}, {"theorem", to_string(b.theorem)}, {"form", to_string(b.form)}};
}

nlohmann::json nodes_json(const NodeTriple& n) {
  return {{"t0", n.t0}, {"x", n.x}, {"t1", n.t1}, {"a", n.interval.lo}, {"b", n.interval.hi},
          {"order", to_string(n.order())}};
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::equality: return "equality";
    case Verdict::error: return "error";
  }
  return "unknown";
}

std::string_view to_string(LhsKind k) {
  switch (k) {
    case LhsKind::remainder: return "remainder";
    case LhsKind::integral: return "integral";
  }
  return "unknown";
}

std::optional<double> BoundCertificate::annotation(std::string_view key) const {
  for (const auto& a : annotations) {
    if (a.key == key) return a.value;
  }
  return std::nullopt;
}

Verdict classify(double slack, double bound, double oracle_error) {
  if (std::isnan(slack)) return Verdict::error;
  if (std::abs(slack) <= oracle_error + 1e-10) return Verdict::equality;
  if (slack >= -(oracle_error + 1e-12 * std::max(1.0, std::abs(bound)))) return Verdict::holds;
  return Verdict::violated;
}

Certifier::Certifier(CatalogEntry f, CatalogEntry u, TheoremId theorem, CertifyOptions opts)
    : f_(std::move(f)), u_(std::move(u)), theorem_(theorem), opts_(opts), interval_(f_.map.domain()) {
  const auto& ud = u_.map.domain();
  if (ud.lo != interval_.lo || ud.hi != interval_.hi)
    throw InvalidArgument(fmt::format("f and u must share a domain, got [{}, {}] and [{}, {}]", interval_.lo,
                                      interval_.hi, ud.lo, ud.hi));
  if (std::isnan(opts_.p) || opts_.p < 1.0) throw InvalidArgument(fmt::format("p must be >= 1, got {}", opts_.p));
  if (!(opts_.tol > 0.0)) throw InvalidArgument("tolerance must be positive");

  const double a = interval_.lo;
  const double b = interval_.hi;
  const double p = opts_.p;
  base_.p = p;
  base_.allow_lower_bound = opts_.allow_lower_bound;
  const auto id = theorem_;

  switch (id) {
    case TheoremId::thm1:
    case TheoremId::thm1_safe:
      base_.hoelder = hoelder_of(f_, opts_.r, "f", id);
      base_.variation = {exact_variation(u_.map, p, a, b, opts_.allow_lower_bound, id)};
      break;
    case TheoremId::cor4:
      base_.hoelder = hoelder_of(f_, opts_.r, "f", id);
      if (u_.map.derivative_order_available() < 1)
        throw HypothesisMismatch(fmt::format("cor4 needs u = ∫g with g = u', but {} has no derivative", u_.id));
      base_.g_norm = derivative_norm(u_.map, 1, p, a, b).value;
      break;
    case TheoremId::thm2:
      base_.hoelder = hoelder_of(f_, opts_.r, "f", id);
      base_.lipschitz = lipschitz_of(u_, "u", id);
      break;
    case TheoremId::thm3: {
      if (!f_.profile.up_class)
        throw HypothesisMismatch(fmt::format("thm3 needs f in the class U^p, but {} carries no class marker", f_.id));
      const int n = opts_.n.value_or(f_.profile.up_class->order);
      if (n != f_.profile.up_class->order)
        throw HypothesisMismatch(fmt::format("thm3: {} belongs to the class with n = {}, not n = {}", f_.id,
                                             f_.profile.up_class->order, n));
      if (!(p > 1.0)) throw InvalidArgument("thm3 needs p > 1");
      base_.n = n;
      base_.lipschitz = lipschitz_of(u_, "u", id);
      base_.derivative_norm = derivative_norm(f_.map, n, p, a, b).value;
      pair_annotations_.push_back({"thm3_constant", thm3_constant(p, n)});
      break;
    }
    case TheoremId::thm4:
    case TheoremId::thm4_safe:
      base_.hoelder = hoelder_of(u_, opts_.r, "u", id);
      base_.variation = {exact_variation(f_.map, p, a, b, opts_.allow_lower_bound, id)};
      break;
    case TheoremId::thm5:
      base_.hoelder = hoelder_of(u_, opts_.r, "u", id);
      base_.lipschitz = lipschitz_of(f_, "f", id);
      break;
    case TheoremId::eq3_6: {
      const auto* pw = std::get_if<PowerMap>(&u_.map.params());
      if (!pw || pw->scale != 1.0 || !(pw->exponent > 0.0 && pw->exponent <= 1.0) || a < 0.0)
        throw HypothesisMismatch(
            fmt::format("eq3.6 needs u(t) = t^r with r in (0, 1] on a nonnegative interval, got {}", u_.id));
      base_.hoelder = HoelderPair{1.0, pw->exponent};
      base_.lipschitz = lipschitz_of(f_, "f", id);
      break;
    }
    case TheoremId::eq3_7:
      base_.lipschitz = lipschitz_of(f_, "f", id);
      base_.k = lipschitz_of(u_, "u", id);
      break;
    case TheoremId::lemma1:
      if (!f_.map.is_continuous())
        throw HypothesisMismatch(fmt::format("lemma1 needs a continuous integrand, but {} jumps", f_.id));
      base_.sup_w = sup_abs(f_.map, a, b);
      base_.variation = {exact_variation(u_.map, p, a, b, opts_.allow_lower_bound, id)};
      break;
    case TheoremId::lemma2:
      base_.lipschitz = lipschitz_of(u_, "u", id);
      base_.w_norm = derivative_norm(f_.map, 0, p, a, b).value;
      break;
  }
  if (!base_.variation.empty()) pair_annotations_.push_back({"variation", base_.variation.front().value});

  OracleOptions oo;
  oo.tol = opts_.tol;
  try {
    integral_ = rs_integral(f_.map, u_.map, a, b, oo);
  } catch (const Error&) {
    integral_error_ = std::current_exception();
  }

  if (id == TheoremId::eq3_6 && integral_) {
    // the literal left side ∫ s^(r-1) f(s) ds, i.e. ∫ f d(s^r / r)
    const double r = base_.hoelder->order;
    const RealMap scaled(interval_, PowerMap{r, 1.0 / r});
    try {
      pair_annotations_.push_back({"literal_integral", rs_integral(f_.map, scaled, a, b, oo).value});
    } catch (const Error&) {
    }
  }
}

bool Certifier::needs_x_inside() const noexcept {
  switch (theorem_) {
    case TheoremId::thm5:
    case TheoremId::eq3_6:
    case TheoremId::eq3_7:
    case TheoremId::lemma1:
    case TheoremId::lemma2: return false;
    default: return true;
  }
}

std::optional<TheoremId> Certifier::companion_id() const {
  switch (theorem_) {
    case TheoremId::thm1: return TheoremId::thm1_safe;
    case TheoremId::thm1_safe: return TheoremId::thm1;
    case TheoremId::thm4: return TheoremId::thm4_safe;
    case TheoremId::thm4_safe: return TheoremId::thm4;
    default: return std::nullopt;
  }
}

BoundInput Certifier::input_for(const NodeTriple& nodes) const {
  BoundInput in = base_;
  in.nodes = nodes;
  return in;
}

BoundCertificate Certifier::certify(const NodeTriple& given) const {
  NodeTriple nodes = given;
  nodes.interval = interval_;
  nodes.validate();
  if (needs_x_inside() && !nodes.x_between())
    throw InvalidArgument(fmt::format("{} needs t0 <= x <= t1, got ({}, {}, {})", to_string(theorem_), nodes.t0,
                                      nodes.x, nodes.t1));
  if (integral_error_) std::rethrow_exception(integral_error_);

  const double a = interval_.lo;
  const double b = interval_.hi;
  const double p = opts_.p;
  auto bound_for = [&](TheoremId id) {
    BoundInput in = input_for(nodes);
    if (id == TheoremId::thm1_safe) {
      in.variation = {exact_variation(u_.map, p, a, nodes.x, opts_.allow_lower_bound, id),
                      exact_variation(u_.map, p, nodes.x, b, opts_.allow_lower_bound, id)};
    } else if (id == TheoremId::thm4_safe) {
      in.variation = {exact_variation(f_.map, p, a, nodes.t0, opts_.allow_lower_bound, id),
                      exact_variation(f_.map, p, nodes.t0, nodes.t1, opts_.allow_lower_bound, id),
                      exact_variation(f_.map, p, nodes.t1, b, opts_.allow_lower_bound, id)};
    }
    return evaluate_bound(id, in);
  };

  BoundCertificate cert;
  cert.f_id = f_.id;
  cert.u_id = u_.id;
  cert.nodes = nodes;
  cert.theorem = theorem_;
  cert.p = p;
  cert.tolerance = opts_.tol;
  cert.oracle = *integral_;
  cert.q_value = two_point_eval(f_.map, u_.map, nodes);
  cert.remainder = cert.oracle.value - cert.q_value;
  const bool lemma = theorem_ == TheoremId::lemma1 || theorem_ == TheoremId::lemma2;
  cert.lhs_kind = lemma ? LhsKind::integral : LhsKind::remainder;
  cert.lhs = lemma ? std::abs(cert.oracle.value) : std::abs(cert.remainder);
  cert.bound = bound_for(theorem_);
  if (auto other = companion_id()) {
    cert.companion = bound_for(*other);
  } else if (theorem_ == TheoremId::lemma1) {
    cert.companion = lemma1_oscillation_bound(*base_.sup_w, oscillation(u_.map, a, b), opts_.allow_lower_bound);
  }
  cert.slack = cert.bound.value - cert.lhs;
  cert.verdict = classify(cert.slack, cert.bound.value, cert.oracle.error_estimate);

  cert.annotations = pair_annotations_;
  if (auto lit = cert.annotation("literal_integral"))
    cert.annotations.push_back({"literal_remainder_abs", std::abs(*lit - cert.q_value)});
  if (theorem_ == TheoremId::thm2 && same_nodes(nodes, preset_nodes({PresetKind::quartile, {}}, interval_))) {
    const auto rep = thm2_quartile_report(*base_.hoelder, *base_.lipschitz, p, interval_);
    cert.annotations.push_back({"quartile_closed_form", rep.closed_form});
    cert.annotations.push_back({"quartile_ratio", rep.ratio});
  }
  return cert;
}

BoundCertificate certify_one(const CatalogEntry& f, const CatalogEntry& u, const NodeTriple& nodes, TheoremId theorem,
                             const CertifyOptions& opts) {
  return Certifier(f, u, theorem, opts).certify(nodes);
}

std::vector<double> GridAxis::points() const {
  if (steps < 1) throw InvalidArgument("grid axes need at least one step");
  if (!(lo <= hi)) throw InvalidArgument(fmt::format("grid axis [{}, {}] is inverted", lo, hi));
  if (steps == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  out.back() = hi;
  return out;
}

GridSpec default_grid(Interval interval, int steps) {
  const GridAxis axis{interval.lo, interval.hi, steps};
  return {axis, axis, axis};
}

GridSpec parse_grid(std::string_view text, Interval interval) {
  GridSpec grid = default_grid(interval);
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string item(text.substr(start, comma - start));
    start = comma + 1;
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::size_t s = 0;
    while (true) {
      const auto colon = item.find(':', s);
      parts.push_back(item.substr(s, colon == std::string::npos ? std::string::npos : colon - s));
      if (colon == std::string::npos) break;
      s = colon + 1;
    }
    if (parts.size() != 4) throw InvalidArgument(fmt::format("grid axis '{}' is not name:lo:hi:steps", item));
    GridAxis axis;
    try {
      std::size_t used = 0;
      axis.lo = std::stod(parts[1], &used);
      if (used != parts[1].size()) throw std::invalid_argument("lo");
      axis.hi = std::stod(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("hi");
      axis.steps = std::stoi(parts[3], &used);
      if (used != parts[3].size()) throw std::invalid_argument("steps");
    } catch (const std::logic_error&) {
      throw InvalidArgument(fmt::format("grid axis '{}' has a malformed number", item));
    }
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi) || axis.steps < 1 || axis.lo > axis.hi)
      throw InvalidArgument(fmt::format("grid axis '{}' is invalid", item));
    if (axis.lo < interval.lo || axis.hi > interval.hi)
      throw InvalidArgument(fmt::format("grid axis '{}' leaves [{}, {}]", item, interval.lo, interval.hi));
    if (parts[0] == "t0") grid.t0 = axis;
    else if (parts[0] == "x") grid.x = axis;
    else if (parts[0] == "t1") grid.t1 = axis;
    else throw InvalidArgument(fmt::format("unknown grid axis '{}'", parts[0]));
  }
  return grid;
}

std::string format_grid(const GridSpec& g) {
  auto axis = [](std::string_view name, const GridAxis& a) {
    return fmt::format("{}:{}:{}:{}", name, a.lo, a.hi, a.steps);
  };
  return fmt::format("{},{},{}", axis("t0", g.t0), axis("x", g.x), axis("t1", g.t1));
}

SweepReport sweep(const CatalogEntry& f, const CatalogEntry& u, TheoremId theorem, const GridSpec& grid,
                  const CertifyOptions& opts) {
  const Certifier certifier(f, u, theorem, opts);
  SweepReport report;
  report.f_id = f.id;
  report.u_id = u.id;
  report.theorem = theorem;
  report.p = opts.p;
  report.grid = grid;
  auto& sum = report.summary;
  sum.min_slack = kInfinity;
  const auto& iv = certifier.interval();
  const auto t0s = grid.t0.points();
  const auto xs = grid.x.points();
  const auto t1s = grid.t1.points();
  for (double t0 : t0s) {
    for (double x : xs) {
      for (double t1 : t1s) {
        const NodeTriple nodes{t0, x, t1, iv};
        const bool valid = iv.lo <= t0 && t0 <= t1 && t1 <= iv.hi && iv.contains(x) &&
                           (!certifier.needs_x_inside() || (t0 <= x && x <= t1));
        if (!valid) {
          ++sum.skipped;
          continue;
        }
        ++sum.points;
        BoundCertificate cert;
        try {
          cert = certifier.certify(nodes);
        } catch (const Error& e) {
          cert.f_id = f.id;
          cert.u_id = u.id;
          cert.nodes = nodes;
          cert.theorem = theorem;
          cert.p = opts.p;
          cert.tolerance = opts.tol;
          cert.q_value = cert.lhs = cert.remainder = cert.slack = kNaN;
          cert.oracle.value = cert.oracle.error_estimate = kNaN;
          cert.bound = {kNaN, theorem, BoundForm::stated};
          cert.verdict = Verdict::error;
          cert.error = e.what();
        }
        switch (cert.verdict) {
          case Verdict::holds: ++sum.holds; break;
          case Verdict::equality: ++sum.equalities; break;
          case Verdict::violated: ++sum.violations; break;
          case Verdict::error: ++sum.errors; break;
        }
        if (cert.verdict != Verdict::error) {
          if (cert.slack < sum.min_slack) {
            sum.min_slack = cert.slack;
            sum.argmin = cert.nodes;
          }
          if (cert.companion &&
              classify(cert.companion->value - cert.lhs, cert.companion->value, cert.oracle.error_estimate) ==
                  Verdict::violated)
            ++sum.companion_violations;
          std::size_t bin = 10;
          if (cert.verdict != Verdict::violated) {
            const double ratio = cert.bound.value > 0.0 ? cert.lhs / cert.bound.value : 0.0;
            bin = std::min<std::size_t>(static_cast<std::size_t>(std::floor(ratio * 10.0)), 9);
          }
          ++sum.tightness[bin];
        }
        report.certificates.push_back(std::move(cert));
      }
    }
  }
  if (!sum.argmin) sum.min_slack = kNaN;
  return report;
}

std::vector<BoundCertificate> sharpness_suite(const std::vector<double>& r_values, double tol) {
  const Interval unit{0.0, 1.0};
  std::vector<BoundCertificate> out;
  CertifyOptions opts;
  opts.tol = tol;

  const auto jump_at_zero = parse_catalog_entry("step:points=0;left=-1;right=0", unit);
  for (double r : r_values) {
    const auto f = parse_catalog_entry(fmt::format("power:r={}", r), unit);
    auto cert = certify_one(f, jump_at_zero, make_nodes(0.5, 1.0, 1.0, unit), TheoremId::thm1, opts);
    cert.label = fmt::format("thm1 extremal, jump at 0, r={}", r);
    out.push_back(std::move(cert));
  }

  const auto indicator = parse_catalog_entry("step:points=0,1;left=1,0;right=0,1", unit);
  for (double r : r_values) {
    const auto u = parse_catalog_entry(fmt::format("power:r={}", r), unit);
    CertifyOptions o = opts;
    o.p = 1.0 / r;
    auto cert = certify_one(indicator, u, make_nodes(0.0, 0.5, 1.0, unit), TheoremId::thm4, o);
    cert.label = fmt::format("thm4 extremal, indicator of {{0,1}}, r={}", r);
    out.push_back(std::move(cert));
  }

  const auto jump_at_one = parse_catalog_entry("step:points=1;left=0;right=1", unit);
  for (double r : r_values) {
    const auto f = parse_catalog_entry(fmt::format("power:r={}", r), unit);
    auto cert = certify_one(f, jump_at_one, make_nodes(0.0, 0.0, 0.5, unit), TheoremId::thm1, opts);
    cert.label = fmt::format("thm1 extremal, jump at 1, r={}", r);
    cert.annotations.push_back({"claimed_integral", 0.0});
    cert.annotations.push_back({"claimed_remainder_abs", std::abs(0.0 - cert.q_value)});
    out.push_back(std::move(cert));
  }
  return out;
}

nlohmann::json to_json(const BoundCertificate& c) {
  nlohmann::json j;
  if (!c.label.empty()) j["label"] = c.label;
  j["f"] = c.f_id;
  j["u"] = c.u_id;
  j["theorem"] = to_string(c.theorem);
  j["p"] = c.p;
  j["nodes"] = nodes_json(c.nodes);
  j["q"] = c.q_value;
  j["integral"] = {{"value", c.oracle.value},
                   {"error_estimate", c.oracle.error_estimate},
                   {"method", to_string(c.oracle.method)},
                   {"evaluations", c.oracle.evaluations}};
  j["remainder"] = c.remainder;
  j["lhs_kind"] = to_string(c.lhs_kind);
  j["lhs"] = c.lhs;
  j["bound"] = bound_json(c.bound);
  if (c.companion) j["companion_bound"] = bound_json(*c.companion);
  j["slack"] = c.slack;
  j["verdict"] = to_string(c.verdict);
  j["tolerance"] = c.tolerance;
  if (!c.annotations.empty()) {
    auto& ann = j["annotations"];
    ann = nlohmann::json::object();
    for (const auto& a : c.annotations) ann[a.key] = a.value;
  }
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

nlohmann::json to_json(const SweepSummary& s) {
  nlohmann::json j{{"points", s.points},         {"skipped", s.skipped},
                   {"holds", s.holds},           {"equalities", s.equalities},
                   {"violations", s.violations}, {"errors", s.errors},
                   {"companion_violations", s.companion_violations},
                   {"min_slack", s.min_slack},   {"tightness_histogram", s.tightness}};
  if (s.argmin) j["argmin"] = nodes_json(*s.argmin);
  return j;
}

nlohmann::json to_json(const SweepReport& r, bool with_certificates) {
  nlohmann::json j{{"f", r.f_id},
                   {"u", r.u_id},
                   {"theorem", to_string(r.theorem)},
                   {"p", r.p},
                   {"grid", format_grid(r.grid)},
                   {"summary", to_json(r.summary)}};
  if (with_certificates) {
    auto& arr = j["certificates"];
    arr = nlohmann::json::array();
    for (const auto& c : r.certificates) arr.push_back(to_json(c));
  }
  return j;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "t0,x,t1,q,integral,remainder_abs,bound,slack,verdict,companion_bound\n";
  for (const auto& c : report.certificates) {
    out << csv_number(c.nodes.t0) << ',' << csv_number(c.nodes.x) << ',' << csv_number(c.nodes.t1) << ','
        << csv_number(c.q_value) << ',' << csv_number(c.oracle.value) << ',' << csv_number(std::abs(c.remainder))
        << ',' << csv_number(c.bound.value) << ',' << csv_number(c.slack) << ',' << to_string(c.verdict) << ','
        << (c.companion ? csv_number(c.companion->value) : std::string()) << '\n';
  }
}

}  // namespace rsquad
