#pragma once

// Closed-form error bounds for the two-point rule and the two integral lemmas.
//
// Every evaluator is a pure function of constants, nodes and variation or
// norm values. Exponents 1 - 1/p vanish at p = 1 and a zero base raised to a
// positive power is 0, so degenerate nodes never produce NaN.

#include <optional>
#include <string_view>
#include <vector>

#include "rsquad/catalog.hpp"
#include "rsquad/rules.hpp"
#include "rsquad/variation.hpp"

namespace rsquad {

enum class TheoremId { thm1, thm1_safe, thm2, thm3, thm4, thm4_safe, thm5, lemma1, lemma2, cor4, eq3_6, eq3_7 };

std::string_view to_string(TheoremId id);
TheoremId parse_theorem_id(std::string_view text);
const std::vector<TheoremId>& all_theorems();

enum class BoundForm { stated, proof_safe, oscillation };

std::string_view to_string(BoundForm form);

struct BoundValue {
  double value = 0.0;
  TheoremId theorem = TheoremId::thm1;
  BoundForm form = BoundForm::stated;
};

// --- lemmas -----------------------------------------------------------------

/// sup|w| · V_p(ν).
BoundValue lemma1_bound(double sup_w, const VariationEstimate& variation, bool allow_lower_bound = false);
/// sup|w| · osc(ν).
BoundValue lemma1_oscillation_bound(double sup_w, const VariationEstimate& oscillation,
                                    bool allow_lower_bound = false);
/// L (b-a)^(1-1/p) ‖w‖_p.
BoundValue lemma2_bound(double lipschitz, Interval interval, double p, double w_norm);

// --- Theorem 1 and its corollaries ----------------------------------------------

/// (x-a)/2 + |t0 - (a+x)/2| and (b-x)/2 + |t1 - (x+b)/2|.
struct Thm1Terms {
  double left = 0.0;
  double right = 0.0;
};
Thm1Terms thm1_terms(const NodeTriple& nodes);

/// H max{left, right}^r V_p(u; a, b).
BoundValue thm1_bound(const HoelderPair& f, const NodeTriple& nodes, const VariationEstimate& v_ab,
                      bool allow_lower_bound = false);
/// H left^r V_p(u; a, x) + H right^r V_p(u; x, b).
BoundValue thm1_safe_bound(const HoelderPair& f, const NodeTriple& nodes, const VariationEstimate& v_ax,
                           const VariationEstimate& v_xb, bool allow_lower_bound = false);

enum class Thm1Corollary { trapezoid, midpoint, symmetric, half_nodes };

/// Closed forms of the corollary: trapezoid(x), midpoint(t0, t1), symmetric(y), half-nodes(x).
BoundValue thm1_corollary_bound(Thm1Corollary which, Interval interval, const HoelderPair& f, double variation,
                                const std::vector<double>& params);

/// Theorem 1 with V_p replaced by ‖g‖_p for u(t) = ∫_a^t g.
BoundValue cor4_bound(const HoelderPair& f, const NodeTriple& nodes, double g_norm);

// --- Theorem 2 ---------------------------------------------------------------

BoundValue thm2_bound(const HoelderPair& f, double lipschitz_u, double p, const NodeTriple& nodes);
/// The corollary's quartile constant H L (b-a)^(1+r) / (2^(2r+1/p) (rp+1)^(1/p)).
double thm2_quartile_closed_form(const HoelderPair& f, double lipschitz_u, double p, Interval interval);

struct QuartileReport {
  double general = 0.0;      // eq 2.8 at the quartile nodes
  double closed_form = 0.0;  // corollary constant
  double ratio = 0.0;        // general / closed_form
};
QuartileReport thm2_quartile_report(const HoelderPair& f, double lipschitz_u, double p, Interval interval);

// --- Theorem 3 ---------------------------------------------------------------

/// (p sin(π/p) / (π (p-1)^(1/p)))^n; 1 at p = ∞.
double thm3_constant(double p, int n);
/// (x-a)^(1-1/p)[(x-a)/2 + |t0-(x+a)/2|]^n + (b-x)^(1-1/p)[(b-x)/2 + |t1-(x+b)/2|]^n.
double thm3_geometric_factor(double p, int n, const NodeTriple& nodes);
/// L · constant · geometric factor · ‖f^(n)‖_p. p = ∞ gives the limit form with the sup norm.
BoundValue thm3_bound(double lipschitz_u, double p, int n, const NodeTriple& nodes, double fn_norm);

// --- Theorem 4 ---------------------------------------------------------------

/// (t1-t0)/2 + |x - (t0+t1)/2|.
double thm4_middle_term(const NodeTriple& nodes);
/// H max{t0-a, middle, b-t1}^r V_p(f; a, b).
BoundValue thm4_bound(const HoelderPair& u, const NodeTriple& nodes, const VariationEstimate& v_ab,
                      bool allow_lower_bound = false);
/// H (t0-a)^r V_p(a,t0) + H middle^r V_p(t0,t1) + H (b-t1)^r V_p(t1,b).
BoundValue thm4_safe_bound(const HoelderPair& u, const NodeTriple& nodes, const VariationEstimate& v_a_t0,
                           const VariationEstimate& v_t0_t1, const VariationEstimate& v_t1_b,
                           bool allow_lower_bound = false);

// --- Theorem 5 and its corollaries ---------------------------------------------

/// M for the given branch; the caller chooses the branch, so both formulas
/// can be compared at a case boundary.
double thm5_middle_mass(NodeOrder branch, double r, double p, const NodeTriple& nodes);
/// L H [ (t0-a)^(r+1)/(rp+1)^(1/p) + (t1-t0)^(1-1/p) (M/(rp+1))^(1/p) + (b-t1)^(r+1)/(rp+1)^(1/p) ].
BoundValue thm5_bound(double lipschitz_f, const HoelderPair& u, double p, const NodeTriple& nodes);
/// Theorem 5 with u(t) = t^r, so H = 1.
BoundValue eq3_6_bound(double lipschitz_f, double r, double p, const NodeTriple& nodes);
/// Theorem 5 with r = 1 and H = K for a K-Lipschitz u.
BoundValue eq3_7_bound(double lipschitz_f, double k, double p, const NodeTriple& nodes);

// --- dispatch ----------------------------------------------------------------

/// Everything a theorem may consume. Only the fields used by the selected
/// theorem need to be present.
struct BoundInput {
  NodeTriple nodes;
  double p = 1.0;
  std::optional<HoelderPair> hoelder;  // f for thm1/2/cor4; u for thm4/5
  std::optional<double> lipschitz;     // u for thm2/3, lemma2; f for thm5/eq3.6/eq3.7
  std::optional<double> k;             // Lipschitz constant of u for eq3.7
  std::vector<VariationEstimate> variation;
  std::optional<double> g_norm;
  std::optional<double> derivative_norm;  // ‖f^(n)‖_p (or the sup norm at p = ∞)
  std::optional<int> n;
  std::optional<double> sup_w;
  std::optional<double> w_norm;
  bool allow_lower_bound = false;
};

/// Evaluates the theorem from its input. The variation vector holds V over
/// [a,b] for the stated forms, [a,x],[x,b] for thm1-safe and
/// [a,t0],[t0,t1],[t1,b] for thm4-safe. Missing fields raise InvalidArgument.
BoundValue evaluate_bound(TheoremId id, const BoundInput& input);

}  // namespace rsquad
