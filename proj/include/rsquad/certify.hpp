#pragma once

// Runtime checks of the bounds against the oracle: single certificates,
// node-grid sweeps and the extremal configurations.

#include <array>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsquad/bounds.hpp"
#include "rsquad/catalog.hpp"
#include "rsquad/oracle.hpp"
#include "rsquad/rules.hpp"

namespace rsquad {

enum class Verdict { holds, violated, equality, error };

std::string_view to_string(Verdict v);

/// What the bound is compared against: |∫f du - Q| for the rule theorems,
/// |∫f du| for the two lemmas.
enum class LhsKind { remainder, integral };

std::string_view to_string(LhsKind k);

struct Annotation {
  std::string key;
  double value = 0.0;
};

struct BoundCertificate {
  std::string label;
  std::string f_id;
  std::string u_id;
  NodeTriple nodes;
  TheoremId theorem = TheoremId::thm1;
  double p = 1.0;
  double tolerance = 1e-9;
  double q_value = 0.0;
  IntegralResult oracle;
  double remainder = 0.0;
  LhsKind lhs_kind = LhsKind::remainder;
  double lhs = 0.0;
  BoundValue bound;
  std::optional<BoundValue> companion;
  double slack = 0.0;
  Verdict verdict = Verdict::holds;
  std::vector<Annotation> annotations;
  std::string error;

  std::optional<double> annotation(std::string_view key) const;
};

/// equality if |slack| <= err + 1e-10, holds if slack >= -(err + 1e-12 max(1, |bound|)).
Verdict classify(double slack, double bound, double oracle_error);

struct CertifyOptions {
  double p = 1.0;
  /// Hoelder order to use instead of the catalog's own pair.
  std::optional<double> r;
  /// Derivative order for thm3; defaults to the catalog marker.
  std::optional<int> n;
  double tol = 1e-9;
  bool allow_lower_bound = false;
};

/// Checks one theorem's hypotheses for a fixed (f, u) once, caches the
/// oracle integral and the node-independent constants, then certifies any
/// number of node triples.
class Certifier {
 public:
  /// Throws HypothesisMismatch when the catalog metadata does not meet the theorem.
  Certifier(CatalogEntry f, CatalogEntry u, TheoremId theorem, CertifyOptions opts = {});

  const Interval& interval() const noexcept { return interval_; }
  TheoremId theorem() const noexcept { return theorem_; }
  /// True when the theorem constrains x to [t0, t1].
  bool needs_x_inside() const noexcept;

  /// Throws the oracle failure, if any, and InvalidArgument for bad nodes.
  BoundCertificate certify(const NodeTriple& nodes) const;

 private:
  BoundInput input_for(const NodeTriple& nodes) const;
  std::optional<TheoremId> companion_id() const;

  CatalogEntry f_;
  CatalogEntry u_;
  TheoremId theorem_;
  CertifyOptions opts_;
  Interval interval_;
  BoundInput base_;
  std::optional<IntegralResult> integral_;
  std::exception_ptr integral_error_;
  std::vector<Annotation> pair_annotations_;
};

BoundCertificate certify_one(const CatalogEntry& f, const CatalogEntry& u, const NodeTriple& nodes, TheoremId theorem,
                             const CertifyOptions& opts = {});

struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 21;

  std::vector<double> points() const;
};

struct GridSpec {
  GridAxis t0;
  GridAxis x;
  GridAxis t1;
};

GridSpec default_grid(Interval interval, int steps = 21);
/// "t0:lo:hi:steps,x:lo:hi:steps,t1:lo:hi:steps"; omitted axes span the interval with 21 steps.
GridSpec parse_grid(std::string_view text, Interval interval);
std::string format_grid(const GridSpec& grid);

struct SweepSummary {
  std::size_t points = 0;
  std::size_t skipped = 0;
  std::size_t holds = 0;
  std::size_t equalities = 0;
  std::size_t violations = 0;
  std::size_t errors = 0;
  std::size_t companion_violations = 0;
  double min_slack = 0.0;
  std::optional<NodeTriple> argmin;
  /// |lhs|/bound in [0,0.1), ..., [0.9,1], and above 1.
  std::array<std::size_t, 11> tightness{};
};

struct SweepReport {
  std::string f_id;
  std::string u_id;
  TheoremId theorem = TheoremId::thm1;
  double p = 1.0;
  GridSpec grid;
  std::vector<BoundCertificate> certificates;
  SweepSummary summary;
};

/// Certifies every grid point of the theorem's node-ordering class in
/// lexicographic (t0, x, t1) order. Points outside the class are skipped;
/// a failing point is recorded with verdict error.
SweepReport sweep(const CatalogEntry& f, const CatalogEntry& u, TheoremId theorem, const GridSpec& grid,
                  const CertifyOptions& opts = {});

/// The extremal configurations: f = t^r against a jump at 0 (thm1, nodes
/// (1/2, 1, 1)), the indicator of {0, 1} against u = t^r (thm4, nodes
/// (0, 1/2, 1), p = 1/r), and f = t^r against a jump at 1 (thm1, nodes
/// (0, 0, 1/2)), each for every r.
std::vector<BoundCertificate> sharpness_suite(const std::vector<double>& r_values = {0.25, 0.5, 1.0},
                                              double tol = 1e-9);

nlohmann::json to_json(const BoundCertificate& cert);
nlohmann::json to_json(const SweepSummary& summary);
nlohmann::json to_json(const SweepReport& report, bool with_certificates);

/// Columns t0,x,t1,q,integral,remainder_abs,bound,slack,verdict,companion_bound with 17 significant digits.
void write_sweep_csv(const SweepReport& report, std::ostream& out);

}  // namespace rsquad
