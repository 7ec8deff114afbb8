#pragma once

// Closed-form admissible pairs and the induction-on-scales simulator.
//
// Everything here is floating point. Values that overflow a double (ψ of the
// better pair, K deep in the tree) are carried as natural logarithms; the
// linear-scale fields are exp() of those and may be infinite.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sumprod {

struct ParamTriple {
  double N = 1;
  double delta = 1;
  double K = 1;
  // Throws kInvalidArgument unless N >= 1, 0 < delta <= 1, K >= 1.
  void validate() const;
};

// The same data as logarithms.
struct LogTriple {
  double log_N = 0;
  double log_delta = 0;
  double log_K = 0;
  static LogTriple from(const ParamTriple& t);
  double log_K_over_delta() const { return log_K - log_delta; }
};

enum class PairFormula { kTrivial, kFreiman, kBetter, kStrong };
const char* to_string(PairFormula f);

struct PairValue {
  double log_psi = 0;
  double log_phi = 0;
  PairFormula formula = PairFormula::kTrivial;
  double psi() const;
  double phi() const;
  // φ <= N·δ, which no graph of density δ can beat. Not enforced: the strong
  // pair exceeds it for small δ.
  bool respects_mass(const LogTriple& t, double tol = 1e-9) const;
};

enum class Guard { kClamp, kStrict };

// ψ = N, φ = δN.
PairValue trivial_pair(const LogTriple& t);

// ψ = min(exp((K/δ)^C), N), φ = (δ/K)^C N.
PairValue freiman_pair(const LogTriple& t, double C = 1);
inline PairValue freiman_pair(const ParamTriple& t, double C = 1) { return freiman_pair(LogTriple::from(t), C); }

// φ = (δ/K)^(C·loglog(K/δ)) N, ψ = exp(log(K/δ)^(C/γ)) N^γ. Below K/δ = e^e
// the inner log is clamped at e (kClamp) or kDomainGuard is thrown (kStrict).
PairValue better_pair(const LogTriple& t, double C = 1, double gamma = 0.25, Guard guard = Guard::kClamp);
inline PairValue better_pair(const ParamTriple& t, double C = 1, double gamma = 0.25, Guard guard = Guard::kClamp) {
  return better_pair(LogTriple::from(t), C, gamma, guard);
}

struct StrongPairConstants {
  double tau = 0.125;
  double gamma = 0.125;
  double A1 = 1, A2 = 100, A3 = 1000;
  double B1 = 1, B2 = 40, B3 = 400;
  double Nbar = 1e6;
  double better_C = 1;  // C of the better pair used below Nbar
  // Throws kInvalidArgument on τ, γ outside (0, 1/2), non-positive constants,
  // B3 <= B2 <= B1, or A2, A3 <= A1.
  void validate() const;
};

// N > e^e is required (kDomainGuard otherwise, in either guard mode when
// strict, or clamped to e^e). For N <= Nbar the better pair is returned.
PairValue strong_pair(const LogTriple& t, const StrongPairConstants& k, Guard guard = Guard::kClamp);
inline PairValue strong_pair(const ParamTriple& t, const StrongPairConstants& k, Guard guard = Guard::kClamp) {
  return strong_pair(LogTriple::from(t), k, guard);
}
// The strong formula itself, no bootstrap switch.
PairValue strong_formula(const LogTriple& t, const StrongPairConstants& k);

struct BranchComparison {
  PairValue better;
  PairValue strong;
  bool strong_phi_larger = false;
  bool strong_psi_smaller = false;
};
BranchComparison compare_branches(const LogTriple& t, const StrongPairConstants& k);

using PairEvaluator = std::function<PairValue(const LogTriple&)>;

// c, C of the induction-step constraints and the grid resolution.
struct InductionConstants {
  double C = 100;
  double c = 1e-4;
  std::size_t grid = 33;
};

// Log-space bounds of the constraint region for children of t.
struct ChildRegion {
  double log_P = 0;      // log of c δ^7 log^-22(K/δ) N, lower bound of N'N''
  double log_S = 0;      // log of C δ^-45 K^11 N^(1/2), upper bound of N' + N''
  double log_Kprod = 0;  // log of C K log^8(K) / δ^11
  double log_Dprod = 0;  // log of c log^-6(K/δ) δ
};
ChildRegion child_region(const LogTriple& t, const InductionConstants& ic);

struct InductionResult {
  PairValue pair;         // ψ* = C·max ψ'ψ'', φ* = min φ'φ''
  LogTriple psi_first, psi_second;
  LogTriple phi_first, phi_second;
  std::size_t feasible = 0;
  bool approximate = true;  // grid extremum, not a certified optimum
};

// Grid search over (N', δ', K') with the second child on the binding boundary
// K'' = Kprod/K', δ'' = Dprod/δ'. kInfeasibleRegion when no grid point fits.
InductionResult induction_step(const PairEvaluator& child, const LogTriple& t, const InductionConstants& ic = {});

// Evaluates the objective for one explicit split; nullopt when infeasible.
std::optional<double> induction_log_psi_at(const PairEvaluator& child, const LogTriple& t, const LogTriple& first,
                                           const LogTriple& second, const InductionConstants& ic = {});

enum class SplitMode { kConcentrated, kBalanced };

struct TreeNode {
  std::string index;  // bit string, "" at the root
  LogTriple data;
  std::optional<std::size_t> child0, child1;  // positions in TreeResult::nodes
  std::size_t level = 0;
};

struct LevelCheck {
  std::size_t level = 0;
  std::size_t nodes = 0;
  double max_log_ratio = 0;   // max log(K_ν/δ_ν)
  double ratio_bound = 0;     // 15^l' · log(K/δ)
  double sum_log_delta = 0;
  double delta_bound = 0;     // log of the δ product lower bound
  double sum_log_K = 0;
  double K_bound = 0;         // log of the K product upper bound
  double sum_log_N = 0;
  double N_bound = 0;         // log of the N product lower bound
  bool ratio_ok = false, delta_ok = false, K_ok = false, N_ok = false;
  bool all() const { return ratio_ok && delta_ok && K_ok && N_ok; }
};

struct TreeOptions {
  SplitMode mode = SplitMode::kConcentrated;
  InductionConstants constants;
  Guard guard = Guard::kClamp;
  double freiman_C = 1;
  double better_C = 1;
  double gamma = 0.25;
};

struct TreeResult {
  std::vector<TreeNode> nodes;  // breadth first, root at 0
  std::vector<LevelCheck> levels;
  double leaf_log_phi = 0;      // Σ log φ_Freiman over leaves
  double leaf_log_psi = 0;      // 2^l·log C + Σ log ψ_Freiman over leaves
  PairValue closed_form;        // better pair at the root
  bool phi_dominates_closed_form = false;  // leaf φ product >= closed-form φ
  bool psi_within_closed_form = false;     // leaf ψ product <= closed-form ψ
  bool bounds_ok() const;
};

// Depth-l tree with boundary splits; every node's children are checked
// against the per-node constraints when created.
TreeResult tree_simulate(const ParamTriple& t, std::size_t l, const TreeOptions& opts = {});

// Per-node constraints of the children relative to their parent.
bool children_satisfy_constraints(const LogTriple& parent, const LogTriple& c0, const LogTriple& c1,
                                  const InductionConstants& ic, double tol = 1e-9);

struct ContractionReport {
  std::size_t points = 0;
  std::size_t phi_failures = 0;  // log(u·v) < 0 on the φ side
  std::size_t psi_failures = 0;  // log(u·v) > 0 on the ψ side
  double worst_phi = 0;          // min log(u·v), φ side
  double worst_psi = 0;          // max log(u·v), ψ side
  bool pass() const { return phi_failures == 0 && psi_failures == 0; }
};

struct GridSpec {
  double N_min = 1e6, N_max = 1e30;
  double delta_min = 1e-6, delta_max = 1;
  double K_min = 1, K_max = 1e6;
  std::size_t points = 33;
};

// log u, log v of the two-child contraction for φ and ψ at one point.
struct Contraction {
  double phi_log_u = 0, phi_log_v = 0;
  double psi_log_u = 0, psi_log_v = 0;
};
Contraction strong_contraction(const LogTriple& t, const StrongPairConstants& k);
ContractionReport strong_contraction_grid(const StrongPairConstants& k, const GridSpec& grid);

struct MonotonicityReport {
  std::size_t comparisons = 0;
  std::size_t psi_ratio_violations = 0;  // ψ decreased as K/δ grew
  std::size_t phi_ratio_violations = 0;  // φ increased as K/δ grew
  std::size_t psi_N_violations = 0;      // ψ decreased as N grew
  std::size_t phi_N_violations = 0;      // φ decreased as N grew
  bool ratio_ok() const { return psi_ratio_violations == 0 && phi_ratio_violations == 0; }
  bool N_ok() const { return psi_N_violations == 0 && phi_N_violations == 0; }
};

MonotonicityReport monotonicity_grid(const PairEvaluator& eval, const GridSpec& grid, double tol = 1e-12);

struct ExponentReport {
  double Lambda = 0;           // 2·B1 + 8 + 4·A1
  double energy_exponent = 0;  // 2 + 8τ + γ
  double log_bound_factor = 0; // Λ·log K
};
ExponentReport theorem1_exponent(const StrongPairConstants& k, double K);

// τ = γ_total/16, γ = γ_total/2, so that 8τ + γ = γ_total.
StrongPairConstants split_exponent_budget(double gamma_total, StrongPairConstants base = {});

// Smallest K/δ ratio (δ = 1, scanning K upward) where the better pair's φ
// drops below the Freiman pair's φ; nullopt if none below K_max.
std::optional<double> better_freiman_crossover(double N, double C_freiman, double C_better, double gamma,
                                               double K_max = 1e12);

std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace sumprod
