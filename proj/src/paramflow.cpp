#include "sumprod/paramflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sumprod/numeric.hpp"

namespace sumprod {

namespace {

constexpr double kE = 2.718281828459045;
const double kLog2 = std::log(2.0);
const double kLog15 = std::log(15.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

// log of a logarithm whose argument was already guarded at 2.
double log_guarded(double log_x) { return std::max(log_x, kLog2); }

// log(e^a + e^b)
double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(e^a - e^b), -inf when b >= a
double log_sub(double a, double b) {
  if (b >= a) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

bool valid_node(const LogTriple& t, double tol) {
  return t.log_N >= -tol && t.log_delta <= tol && t.log_K >= -tol;
}

}  // namespace

void ParamTriple::validate() const {
  if (!(N >= 1)) throw Error(ErrorCode::kInvalidArgument, "N must be at least 1");
  if (!(delta > 0 && delta <= 1)) throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1]");
  if (!(K >= 1)) throw Error(ErrorCode::kInvalidArgument, "K must be at least 1");
}

LogTriple LogTriple::from(const ParamTriple& t) {
  t.validate();
  return {std::log(t.N), std::log(t.delta), std::log(t.K)};
}

const char* to_string(PairFormula f) {
  switch (f) {
    case PairFormula::kTrivial: return "trivial";
    case PairFormula::kFreiman: return "freiman";
    case PairFormula::kBetter: return "better";
    case PairFormula::kStrong: return "strong";
  }
  return "unknown";
}

double PairValue::psi() const { return std::exp(log_psi); }
double PairValue::phi() const { return std::exp(log_phi); }

bool PairValue::respects_mass(const LogTriple& t, double tol) const {
  return log_phi <= t.log_N + t.log_delta + tol;
}

PairValue trivial_pair(const LogTriple& t) { return {t.log_N, t.log_N + t.log_delta, PairFormula::kTrivial}; }

PairValue freiman_pair(const LogTriple& t, double C) {
  if (!(C > 0)) throw Error(ErrorCode::kInvalidArgument, "freiman_pair needs C > 0");
  const double lkd = t.log_K_over_delta();
  PairValue v;
  v.formula = PairFormula::kFreiman;
  v.log_psi = std::min(std::exp(C * lkd), t.log_N);
  v.log_phi = -C * lkd + t.log_N;
  return v;
}

PairValue better_pair(const LogTriple& t, double C, double gamma, Guard guard) {
  if (!(C > 0)) throw Error(ErrorCode::kInvalidArgument, "better_pair needs C > 0");
  if (!(gamma > 0 && gamma < 1)) throw Error(ErrorCode::kInvalidArgument, "better_pair needs 0 < gamma < 1");
  const double lkd = t.log_K_over_delta();
  if (lkd < kE) {
    if (guard == Guard::kStrict) throw Error(ErrorCode::kDomainGuard, "better_pair needs K/delta >= e^e");
  }
  const double ell = std::max(lkd, kE);
  PairValue v;
  v.formula = PairFormula::kBetter;
  v.log_phi = -C * std::log(ell) * lkd + t.log_N;
  v.log_psi = std::pow(ell, C / gamma) + gamma * t.log_N;
  return v;
}

void StrongPairConstants::validate() const {
  if (!(tau > 0 && tau < 0.5)) throw Error(ErrorCode::kInvalidArgument, "tau must lie in (0, 1/2)");
  if (!(gamma > 0 && gamma < 0.5)) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in (0, 1/2)");
  for (double x : {A1, A2, A3, B1, B2, B3, Nbar, better_C}) {
    if (!(x > 0)) throw Error(ErrorCode::kInvalidArgument, "strong-pair constants must be positive");
  }
  if (!(B3 > B2 && B2 > B1)) throw Error(ErrorCode::kInvalidArgument, "need B3 > B2 > B1");
  if (!(A2 > A1 && A3 > A1)) throw Error(ErrorCode::kInvalidArgument, "need A2, A3 > A1");
}

PairValue strong_formula(const LogTriple& t, const StrongPairConstants& k) {
  const double llN = std::log(std::max(t.log_N, kE));
  PairValue v;
  v.formula = PairFormula::kStrong;
  v.log_phi = -k.A1 * t.log_K + k.A2 * llN * t.log_delta + k.A3 * llN * llN + (1 - k.tau) * t.log_N;
  v.log_psi = k.B1 * t.log_K - k.B2 * llN * t.log_delta - k.B3 * llN * llN + k.gamma * t.log_N;
  return v;
}

PairValue strong_pair(const LogTriple& t, const StrongPairConstants& k, Guard guard) {
  k.validate();
  if (t.log_N <= kE && guard == Guard::kStrict) throw Error(ErrorCode::kDomainGuard, "strong_pair needs N > e^e");
  if (t.log_N <= std::log(k.Nbar)) return better_pair(t, k.better_C, k.gamma, guard);
  return strong_formula(t, k);
}

BranchComparison compare_branches(const LogTriple& t, const StrongPairConstants& k) {
  k.validate();
  BranchComparison r;
  r.better = better_pair(t, k.better_C, k.gamma, Guard::kClamp);
  r.strong = strong_formula(t, k);
  r.strong_phi_larger = r.strong.log_phi > r.better.log_phi;
  r.strong_psi_smaller = r.strong.log_psi < r.better.log_psi;
  return r;
}

ChildRegion child_region(const LogTriple& t, const InductionConstants& ic) {
  if (!(ic.C > 0 && ic.c > 0)) throw Error(ErrorCode::kInvalidArgument, "induction constants must be positive");
  const double ll_kd = std::log(log_guarded(t.log_K_over_delta()));
  const double ll_k = std::log(log_guarded(t.log_K));
  ChildRegion r;
  r.log_P = std::log(ic.c) + 7 * t.log_delta - 22 * ll_kd + t.log_N;
  r.log_S = std::log(ic.C) - 45 * t.log_delta + 11 * t.log_K + 0.5 * t.log_N;
  r.log_Kprod = std::log(ic.C) + t.log_K + 8 * ll_k - 11 * t.log_delta;
  r.log_Dprod = std::log(ic.c) - 6 * ll_kd + t.log_delta;
  return r;
}

std::optional<double> induction_log_psi_at(const PairEvaluator& child, const LogTriple& t, const LogTriple& first,
                                           const LogTriple& second, const InductionConstants& ic) {
  constexpr double tol = 1e-9;
  if (!children_satisfy_constraints(t, first, second, ic, tol)) return std::nullopt;
  return std::log(ic.C) + child(first).log_psi + child(second).log_psi;
}

InductionResult induction_step(const PairEvaluator& child, const LogTriple& t, const InductionConstants& ic) {
  if (ic.grid < 2) throw Error(ErrorCode::kInvalidArgument, "induction grid needs at least 2 points per axis");
  const ChildRegion reg = child_region(t, ic);
  constexpr double tol = 1e-9;
  InductionResult r;
  if (reg.log_S < 0 || reg.log_Kprod < 0 || reg.log_Dprod > 0) {
    throw Error(ErrorCode::kInfeasibleRegion, "constraint region is empty");
  }

  const auto axis = [&](double lo, double hi) {
    std::vector<double> v(ic.grid);
    for (std::size_t i = 0; i < ic.grid; ++i) v[i] = lo + (hi - lo) * double(i) / double(ic.grid - 1);
    return v;
  };
  const auto n_axis = axis(0, std::min(reg.log_S, t.log_N));
  const auto k_axis = axis(0, reg.log_Kprod);
  const auto d_axis = axis(reg.log_Dprod, 0);

  double best_psi = -kInf, best_phi = kInf;
  for (double n1 : n_axis) {
    for (double k1 : k_axis) {
      for (double d1 : d_axis) {
        const double k2 = reg.log_Kprod - k1;
        const double d2 = reg.log_Dprod - d1;
        const LogTriple first{n1, d1, k1};

        // ψ: largest N'' the constraints allow.
        const double n2_psi = std::min(t.log_N - n1, log_sub(reg.log_S, n1));
        if (n2_psi >= 0) {
          const LogTriple second{n2_psi, d2, k2};
          if (children_satisfy_constraints(t, first, second, ic, tol)) {
            ++r.feasible;
            const double v = std::log(ic.C) + child(first).log_psi + child(second).log_psi;
            if (v > best_psi) {
              best_psi = v;
              r.psi_first = first;
              r.psi_second = second;
            }
          }
        }

        // φ: smallest N'' the constraints allow.
        const double n2_phi = std::max(reg.log_P - n1, 0.0);
        const LogTriple second{n2_phi, d2, k2};
        if (children_satisfy_constraints(t, first, second, ic, tol)) {
          ++r.feasible;
          const double v = child(first).log_phi + child(second).log_phi;
          if (v < best_phi) {
            best_phi = v;
            r.phi_first = first;
            r.phi_second = second;
          }
        }
      }
    }
  }
  if (best_psi == -kInf || best_phi == kInf) throw Error(ErrorCode::kInfeasibleRegion, "no grid point is feasible");
  r.pair.log_psi = best_psi;
  r.pair.log_phi = best_phi;
  r.pair.formula = child(t).formula;
  return r;
}

bool children_satisfy_constraints(const LogTriple& parent, const LogTriple& c0, const LogTriple& c1,
                                  const InductionConstants& ic, double tol) {
  if (!valid_node(c0, tol) || !valid_node(c1, tol)) return false;
  const ChildRegion reg = child_region(parent, ic);
  const double prod_N = c0.log_N + c1.log_N;
  if (prod_N > parent.log_N + tol) return false;
  if (prod_N < reg.log_P - tol) return false;
  if (log_add(c0.log_N, c1.log_N) > reg.log_S + tol) return false;
  if (c0.log_K + c1.log_K > reg.log_Kprod + tol) return false;
  if (c0.log_delta + c1.log_delta < reg.log_Dprod - tol) return false;
  return true;
}

bool TreeResult::bounds_ok() const {
  return std::all_of(levels.begin(), levels.end(), [](const LevelCheck& c) { return c.all(); });
}

TreeResult tree_simulate(const ParamTriple& root_params, std::size_t l, const TreeOptions& opts) {
  const LogTriple root = LogTriple::from(root_params);
  if (l > 20) throw Error(ErrorCode::kCapExceeded, "tree depth above 20");
  constexpr double tol = 1e-9;
  const auto guard_node = [&](const LogTriple& x) {
    if (opts.guard == Guard::kStrict && x.log_K_over_delta() < kLog2) {
      throw Error(ErrorCode::kDomainGuard, "K/delta below 2 at a tree node");
    }
  };

  TreeResult r;
  guard_node(root);
  r.nodes.push_back({"", root, std::nullopt, std::nullopt, 0});
  std::size_t begin = 0;
  for (std::size_t level = 0; level < l; ++level) {
    const std::size_t end = r.nodes.size();
    for (std::size_t i = begin; i < end; ++i) {
      const LogTriple parent = r.nodes[i].data;
      const ChildRegion reg = child_region(parent, opts.constants);
      const double half_N = std::max(reg.log_P, 0.0) / 2;
      const double dprod = std::min(reg.log_Dprod, 0.0);
      const double kprod = std::max(reg.log_Kprod, 0.0);
      LogTriple c0, c1;
      if (opts.mode == SplitMode::kConcentrated) {
        c0 = {half_N, dprod, kprod};
        c1 = {half_N, 0, 0};
      } else {
        c0 = c1 = {half_N, dprod / 2, kprod / 2};
      }
      if (!children_satisfy_constraints(parent, c0, c1, opts.constants, tol)) {
        throw std::logic_error("tree_simulate: boundary split violates the node constraints");
      }
      guard_node(c0);
      guard_node(c1);
      const std::string idx = r.nodes[i].index;
      r.nodes[i].child0 = r.nodes.size();
      r.nodes.push_back({idx + "0", c0, std::nullopt, std::nullopt, level + 1});
      r.nodes[i].child1 = r.nodes.size();
      r.nodes.push_back({idx + "1", c1, std::nullopt, std::nullopt, level + 1});
    }
    begin = end;
  }

  const double lkd = log_guarded(root.log_K_over_delta());
  const double ll = std::log(lkd);
  for (std::size_t lp = 0; lp <= l; ++lp) {
    LevelCheck c;
    c.level = lp;
    c.max_log_ratio = -kInf;
    for (const TreeNode& n : r.nodes) {
      if (n.level != lp) continue;
      ++c.nodes;
      c.max_log_ratio = std::max(c.max_log_ratio, n.data.log_K_over_delta());
      c.sum_log_delta += n.data.log_delta;
      c.sum_log_K += n.data.log_K;
      c.sum_log_N += n.data.log_N;
    }
    const double L = double(lp);
    const double T = std::ldexp(1.0, int(lp));
    c.ratio_bound = std::pow(15.0, L) * lkd;
    c.delta_bound = -6 * L * T * kLog15 - 6 * T * ll + root.log_delta;
    c.K_bound = 50 * L * T * kLog15 + 50 * T * ll - 7 * L * root.log_delta + root.log_K;
    c.N_bound = -100 * L * T * kLog15 - 200 * T * ll + 30 * L * root.log_delta + root.log_N;
    c.ratio_ok = c.max_log_ratio <= c.ratio_bound + tol;
    c.delta_ok = c.sum_log_delta >= c.delta_bound - tol;
    c.K_ok = c.sum_log_K <= c.K_bound + tol;
    c.N_ok = c.sum_log_N >= c.N_bound - tol;
    r.levels.push_back(c);
  }

  r.leaf_log_psi = std::ldexp(1.0, int(l)) * std::log(opts.constants.C);
  for (const TreeNode& n : r.nodes) {
    if (n.level != l) continue;
    const PairValue v = freiman_pair(n.data, opts.freiman_C);
    r.leaf_log_phi += v.log_phi;
    r.leaf_log_psi += v.log_psi;
  }
  r.closed_form = better_pair(root, opts.better_C, opts.gamma, Guard::kClamp);
  r.phi_dominates_closed_form = r.leaf_log_phi >= r.closed_form.log_phi;
  r.psi_within_closed_form = r.leaf_log_psi <= r.closed_form.log_psi;
  return r;
}

Contraction strong_contraction(const LogTriple& t, const StrongPairConstants& k) {
  const double llN = std::log(std::max(t.log_N, kE));
  const double ratio = std::log(20.0 / 11.0);
  Contraction c;
  c.phi_log_u = (-10 * k.A1 - 6 * k.A2 * llN - 40) * llN + 0.9 * k.A3 * llN * llN;
  c.phi_log_v = (14 * k.A1 - ratio * k.A2 + 40) * t.log_delta;
  c.psi_log_u = (10 * k.B1 + 6 * k.B2 * llN) * llN - 0.9 * k.B3 * llN * llN;
  c.psi_log_v = (-14 * k.B1 + ratio * k.B2) * t.log_delta;
  return c;
}

ContractionReport strong_contraction_grid(const StrongPairConstants& k, const GridSpec& grid) {
  k.validate();
  ContractionReport r;
  r.worst_phi = kInf;
  r.worst_psi = -kInf;
  const auto Ns = log_grid(grid.N_min, grid.N_max, grid.points);
  const auto Ds = log_grid(grid.delta_min, grid.delta_max, grid.points);
  const auto Ks = log_grid(grid.K_min, grid.K_max, grid.points);
  for (double N : Ns) {
    for (double d : Ds) {
      for (double K : Ks) {
        const Contraction c = strong_contraction({std::log(N), std::log(d), std::log(K)}, k);
        const double phi = c.phi_log_u + c.phi_log_v;
        const double psi = c.psi_log_u + c.psi_log_v;
        ++r.points;
        if (phi < 0) ++r.phi_failures;
        if (psi > 0) ++r.psi_failures;
        r.worst_phi = std::min(r.worst_phi, phi);
        r.worst_psi = std::max(r.worst_psi, psi);
      }
    }
  }
  return r;
}

MonotonicityReport monotonicity_grid(const PairEvaluator& eval, const GridSpec& grid, double tol) {
  MonotonicityReport r;
  const auto Ns = log_grid(grid.N_min, grid.N_max, grid.points);
  const auto Ds = log_grid(grid.delta_min, grid.delta_max, grid.points);
  const auto Ks = log_grid(grid.K_min, grid.K_max, grid.points);
  const auto at = [&](std::size_t n, std::size_t d, std::size_t k) {
    return eval({std::log(Ns[n]), std::log(Ds[d]), std::log(Ks[k])});
  };
  const auto slack = [&](double x) { return tol * std::max(1.0, std::abs(x)); };
  // `next` has the larger K/δ (or N) than `prev`.
  const auto ratio_step = [&](const PairValue& prev, const PairValue& next) {
    ++r.comparisons;
    if (next.log_psi < prev.log_psi - slack(prev.log_psi)) ++r.psi_ratio_violations;
    if (next.log_phi > prev.log_phi + slack(prev.log_phi)) ++r.phi_ratio_violations;
  };
  const auto n_step = [&](const PairValue& prev, const PairValue& next) {
    ++r.comparisons;
    if (next.log_psi < prev.log_psi - slack(prev.log_psi)) ++r.psi_N_violations;
    if (next.log_phi < prev.log_phi - slack(prev.log_phi)) ++r.phi_N_violations;
  };
  const std::size_t P = grid.points;
  for (std::size_t n = 0; n < P; ++n) {
    for (std::size_t d = 0; d < P; ++d) {
      for (std::size_t k = 0; k < P; ++k) {
        const PairValue here = at(n, d, k);
        if (k + 1 < P) ratio_step(here, at(n, d, k + 1));
        if (d > 0) ratio_step(here, at(n, d - 1, k));
        if (n + 1 < P) n_step(here, at(n + 1, d, k));
      }
    }
  }
  return r;
}

ExponentReport theorem1_exponent(const StrongPairConstants& k, double K) {
  k.validate();
  if (!(K >= 1)) throw Error(ErrorCode::kInvalidArgument, "K must be at least 1");
  ExponentReport r;
  r.Lambda = 2 * k.B1 + 8 + 4 * k.A1;
  r.energy_exponent = 2 + 8 * k.tau + k.gamma;
  r.log_bound_factor = r.Lambda * std::log(K);
  return r;
}

StrongPairConstants split_exponent_budget(double gamma_total, StrongPairConstants base) {
  if (!(gamma_total > 0 && gamma_total < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "exponent budget must lie in (0, 1)");
  }
  base.tau = gamma_total / 16;
  base.gamma = gamma_total / 2;
  base.validate();
  return base;
}

std::optional<double> better_freiman_crossover(double N, double C_freiman, double C_better, double gamma,
                                               double K_max) {
  const auto gap = [&](double log_K) {
    const LogTriple t{std::log(N), 0, log_K};
    return better_pair(t, C_better, gamma).log_phi - freiman_pair(t, C_freiman).log_phi;
  };
  // Scan for the first sign change, then bisect.
  const std::size_t steps = 4096;
  const double hi_end = std::log(K_max);
  double lo = 0;
  if (gap(lo) < 0) return std::nullopt;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double x = hi_end * double(i) / double(steps);
    if (gap(x) < 0) {
      double a = lo, b = x;
      for (int it = 0; it < 200; ++it) {
        const double m = (a + b) / 2;
        (gap(m) < 0 ? b : a) = m;
      }
      return std::exp(b);
    }
    lo = x;
  }
  return std::nullopt;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0 && hi >= lo)) throw Error(ErrorCode::kInvalidArgument, "log_grid needs 0 < lo <= hi");
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * double(i) / double(n - 1));
  v.back() = hi;
  return v;
}

}  // namespace sumprod
