// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "rsquad/bounds.hpp"
#include "rsquad/certify.hpp"
#include "rsquad/error.hpp"
#include "rsquad/oracle.hpp"
#include "rsquad/rules.hpp"
#include "rsquad/variation.hpp"

using namespace rsquad;

namespace {

const Interval kUnit{0.0, 1.0};

const std::vector<std::string> kCatalog{
    "power:r=0.5",
    "power:r=0.25",
    "power:r=2",
    "poly:1x",
    "poly:1-3x+2x^3",
    "const:c=2",
    "sine:freq=6.283185307179586",
    "exp:rate=-1.5",
    "pwl:knots=0,0.5,1;values=0,1,0",
    "step:points=0;left=-1;right=0",
    "step:points=0.5;left=0;right=1",
    "step:points=0,1;left=1,0;right=0,1",
    "step:points=0.2,0.5,0.8;left=0,1,-1;right=1,-1,0.5",
    "ubump:n=1",
    "ubump:n=2",
};

CatalogEntry entry(const std::string& id) { return parse_catalog_entry(id, kUnit); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  fmt::print("criterion {} {} {}: {} [{:.3f} s]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail, secs);
  std::fflush(stdout);
}

Outcome thm1_extremal() {
  bool ok = true;
  std::string detail;
  for (double r : {0.25, 0.5, 1.0}) {
    const auto c = certify_one(make_catalog_entry(kUnit, PowerMap{r, 1.0}), entry("step:points=0;left=-1;right=0"),
                               make_nodes(0.5, 1.0, 1.0, kUnit), TheoremId::thm1);
    const double target = std::pow(0.5, r);
    ok = ok && c.oracle.method == IntegralMethod::exact_step && std::abs(c.lhs - target) <= 1e-10 &&
         std::abs(c.bound.value - target) <= 1e-10 && c.verdict == Verdict::equality;
    detail += fmt::format("r={} |R|={:.12g} bound={:.12g} {}; ", r, c.lhs, c.bound.value, to_string(c.verdict));
  }
  return {ok, detail};
}

Outcome thm4_extremal() {
  const auto c = certify_one(entry("step:points=0,1;left=1,0;right=0,1"), entry("poly:1x"),
                             make_nodes(0.0, 0.5, 1.0, kUnit), TheoremId::thm4);
  const double v = c.annotation("variation").value_or(NAN);
  const bool ok = std::abs(c.lhs - 1.0) <= 1e-10 && std::abs(c.bound.value - 1.0) <= 1e-10 && v == 2.0 &&
                  c.verdict == Verdict::equality;
  return {ok, fmt::format("|R|={:.12g} bound={:.12g} V1={} {}", c.lhs, c.bound.value, v, to_string(c.verdict))};
}

Outcome soundness_p1() {
  const std::vector<TheoremId> theorems{TheoremId::thm1, TheoremId::thm4, TheoremId::thm2, TheoremId::thm5,
                                        TheoremId::lemma1, TheoremId::lemma2, TheoremId::cor4};
  std::vector<CatalogEntry> entries;
  for (const auto& id : kCatalog) entries.push_back(entry(id));
  const auto grid = default_grid(kUnit, 21);
  bool ok = true;
  std::string detail;
  for (auto thm : theorems) {
    std::size_t pairs = 0, points = 0, violations = 0, errors = 0;
    double min_slack = INFINITY;
    for (const auto& f : entries) {
      for (const auto& u : entries) {
        SweepReport rep;
        try {
          rep = sweep(f, u, thm, grid);
        } catch (const HypothesisMismatch&) {
          continue;
        }
        ++pairs;
        points += rep.summary.points;
        violations += rep.summary.violations;
        errors += rep.summary.errors;
        min_slack = std::min(min_slack, rep.summary.min_slack);
      }
    }
    ok = ok && pairs >= 10 && violations == 0 && errors == 0;
    detail += fmt::format("{}: {} pairs, {} points, {} violated, {} errors, min slack {:.3g}; ", to_string(thm), pairs,
                          points, violations, errors, min_slack);
  }
  return {ok, detail};
}

Outcome thm2_quartile() {
  // eq 2.8 by hand at (1/4, 1/2, 3/4), H = L = r = 1, p = 2
  const double hand = 2.0 * std::sqrt(0.5) * std::sqrt(2.0 * std::pow(0.25, 3) / 3.0);
  const auto rep = thm2_quartile_report(HoelderPair{1.0, 1.0}, 1.0, 2.0, kUnit);
  const auto cert =
      certify_one(entry("poly:1x"), entry("poly:1x"), preset_nodes({PresetKind::quartile, {}}, kUnit), TheoremId::thm2,
                  CertifyOptions{2.0, {}, {}, 1e-9, false});
  const auto flagged = cert.annotation("quartile_ratio");
  const bool ok = std::abs(rep.general - 0.144338) <= 1e-6 && std::abs(rep.general - hand) <= 1e-12 &&
                  std::abs(rep.closed_form - 0.102062) <= 1e-6 && flagged &&
                  std::abs(*flagged - std::sqrt(2.0)) <= 1e-9;
  return {ok, fmt::format("eq 2.8 = {:.6f} (hand {:.6f}), closed form {:.6f}, flagged ratio {:.6f}", rep.general, hand,
                          rep.closed_form, flagged.value_or(NAN))};
}

Outcome thm3_limit() {
  const double c2 = thm3_constant(2.0, 1);
  const double c4 = thm3_constant(1e4, 1);
  const bool ok = std::abs(c2 - 2.0 / std::numbers::pi) <= 1e-12 && std::abs(c4 - 1.0) <= 1e-3 &&
                  thm3_constant(INFINITY, 1) == 1.0;
  return {ok, fmt::format("p=2: {:.15f}, p=1e4: {:.6f}, p=inf: 1", c2, c4)};
}

Outcome variation_properties() {
  const std::vector<double> ps{1.0, 1.5, 2.0, 4.0, 10.0};
  std::size_t monotone_fail = 0, sandwich_fail = 0, additivity_fail = 0;
  for (const auto& id : kCatalog) {
    const auto e = entry(id);
    const double osc = oscillation(e.map, 0.0, 1.0).value;
    const double v1 = p_variation(e.map, 1.0, 0.0, 1.0).value;
    double prev = INFINITY;
    for (double p : ps) {
      const double v = p_variation(e.map, p, 0.0, 1.0).value;
      if (v > prev + 1e-14) ++monotone_fail;
      if (osc > v + 1e-14 || v > v1 + 1e-14) ++sandwich_fail;
      prev = v;
    }
    for (double x : {0.1, 0.25, 0.5, 0.77}) {
      const double split = p_variation(e.map, 1.0, 0.0, x).value + p_variation(e.map, 1.0, x, 1.0).value;
      if (std::abs(split - v1) > 1e-12) ++additivity_fail;
    }
  }
  const double b = 2.0 * std::numbers::pi;
  const auto sine = parse_catalog_entry("sine:scale=1;freq=1", Interval{0.0, b});
  const double norm = derivative_norm(sine.map, 1, 2.0, 0.0, b).value;
  const double dp = p_variation(sine.map, 2.0, 0.0, b).value;
  const double root_pi = std::sqrt(std::numbers::pi);
  const bool norm_ok = std::abs(norm - root_pi) <= 1e-6;
  const bool dp_ok = std::abs(dp - root_pi) <= 0.01 * root_pi;
  const bool ok = monotone_fail == 0 && sandwich_fail == 0 && additivity_fail == 0 && norm_ok && dp_ok;
  return {ok, fmt::format("{} entries: monotone-in-p failures {}, osc<=V_p<=V_1 failures {}, additivity failures {}; "
                          "sine ||cos||_2 = {:.9f} vs sqrt(pi) = {:.9f} ({}); partition DP V_2 = {:.9f} = sqrt(6), "
                          "{:.1f}% from sqrt(pi) ({})",
                          kCatalog.size(), monotone_fail, sandwich_fail, additivity_fail, norm, root_pi,
                          norm_ok ? "ok" : "off", dp, 100.0 * std::abs(dp - root_pi) / root_pi,
                          dp_ok ? "ok" : "the Wiener 2-variation of sine is sqrt(6), not the L2 norm of its derivative")};
}

Outcome oracle_integrity() {
  const std::vector<std::string> smooth{"poly:1x", "power:r=2", "poly:1-3x+2x^3", "sine:freq=6.283185307179586",
                                        "exp:rate=-1.5"};
  std::size_t pairs = 0;
  double worst = 0.0;
  for (const auto& f : smooth)
    for (const auto& u : smooth) {
      if (f == u) continue;
      ++pairs;
      worst = std::max(worst, parts_identity_check(entry(f).map, entry(u).map, 0.0, 1.0).residual);
    }
  const auto f = entry("power:r=0.5");
  const auto first = rs_integral(f.map, entry("step:points=0;left=-1;right=0").map, 0.0, 1.0);
  const auto second = rs_integral(f.map, entry("step:points=1;left=0;right=1").map, 0.0, 1.0);
  const bool ok = pairs == 20 && worst <= 1e-8 && first.method == IntegralMethod::exact_step && first.value == 0.0 &&
                  second.method == IntegralMethod::exact_step && second.value == f.map(1.0);
  return {ok, fmt::format("{} pairs, worst parts residual {:.3g}; jump at 0: {} ; jump at 1: {} = f(1) "
                          "(the published construction states 0)",
                          pairs, worst, first.value, second.value)};
}

Outcome p2_probe() {
  const auto u = entry("pwl:knots=0,0.5,1;values=0,1,0");
  const double v_whole = p_variation(u.map, 2.0, 0.0, 1.0).value;
  const double v_halves = p_variation(u.map, 2.0, 0.0, 0.5).value + p_variation(u.map, 2.0, 0.5, 1.0).value;
  CertifyOptions opts;
  opts.p = 2.0;
  std::size_t points = 0, violations = 0, safe_violations = 0, missing = 0, errors = 0;
  for (const char* f : {"power:r=0.5", "power:r=0.25", "poly:1x", "poly:1-3x+2x^3", "sine:freq=6.283185307179586"}) {
    const auto rep = sweep(entry(f), u, TheoremId::thm1, default_grid(kUnit, 21), opts);
    points += rep.summary.points;
    violations += rep.summary.violations;
    safe_violations += rep.summary.companion_violations;
    errors += rep.summary.errors;
    for (const auto& c : rep.certificates)
      if (!c.companion || c.companion->form != BoundForm::proof_safe) ++missing;
  }
  const bool ok = missing == 0 && errors == 0 && points > 0;
  return {ok, fmt::format("V_2 = {:.6f}, halves {:.6f}; {} points, stated-form violations {}, proof-safe violations {}, "
                          "points without proof-safe bound {}",
                          v_whole, v_halves, points, violations, safe_violations, missing)};
}

Outcome composite() {
  const auto f = entry("power:r=2");
  const auto u = entry("poly:1x");
  const HoelderPair h = *f.profile.hoelder_pair();
  double prev = INFINITY;
  bool ok = true;
  std::string detail = fmt::format("H={} r={}; ", h.constant, h.order);
  for (int n : {1, 2, 4, 8, 16}) {
    const auto c = composite_rule(f.map, u.map, kUnit, n, parse_preset("half-nodes"));
    const double abs_r = std::abs(c.remainder_total);
    double summed = 0.0;
    for (const auto& cell : c.cells) {
      const auto v = p_variation(u.map, 1.0, cell.interval.lo, cell.interval.hi);
      summed += thm1_bound(h, cell, v).value;
    }
    const double formula = h.constant * kUnit.length() * 1.0 / (2.0 * n);
    ok = ok && abs_r < prev && abs_r <= summed && abs_r <= formula;
    detail += fmt::format("n={} |R|={:.3e} summed bound={:.4g} H(b-a)V/(2n)={:.4g}; ", n, abs_r, summed, formula);
    prev = abs_r;
  }
  return {ok, detail};
}

}  // namespace

int main() {
  report(1, "thm1 sharpness equality", thm1_extremal);
  report(2, "thm4 sharpness equality", thm4_extremal);
  report(3, "soundness sweep at p=1", soundness_p1);
  report(4, "thm2 quartile consistency", thm2_quartile);
  report(5, "thm3 constant limit", thm3_limit);
  report(6, "variation properties", variation_properties);
  report(7, "oracle integrity", oracle_integrity);
  report(8, "p>1 dual-form probe", p2_probe);
  report(9, "composite convergence", composite);
  fmt::print("{} of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
