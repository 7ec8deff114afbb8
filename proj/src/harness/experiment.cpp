#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "sumprod/harness.hpp"
#include "sumprod/root_compare.hpp"
#include "sumprod/valuation.hpp"

namespace sumprod {

namespace {

using Cells = std::vector<std::string>;

struct RowContext {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  const Json& params;
  const ExperimentConfig& cfg;
};

struct RowOut {
  Cells cells;
  bool pass = false;
};

struct Operation {
  std::vector<std::string> columns;
  std::function<RowOut(const RowContext&)> row;
};

std::string cell(const Integer& z) { return z.get_str(); }
std::string cell(const Rational& q) { return to_string(q); }
std::string cell(double x) { return format_double(x); }
std::string cell(bool b) { return b ? "true" : "false"; }
std::string cell(std::size_t n) { return std::to_string(n); }
std::string cell(const IntSet& s) {
  std::string out;
  for (const Integer& x : s) {
    if (!out.empty()) out += ' ';
    out += x.get_str();
  }
  return out;
}

Integer big(std::size_t n) { return Integer(static_cast<unsigned long>(n)); }

template <class T>
T param(const Json& p, const char* key, T fallback) {
  return p.contains(key) ? p.at(key).get<T>() : fallback;
}

Integer pow_ui(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

SlicedParams sliced_params(const Json& p) {
  SlicedParams s;
  if (p.contains("primes")) {
    s.primes.clear();
    for (const Json& x : p["primes"]) s.primes.push_back(integer_from_json(x));
  }
  s.max_coefficients = param(p, "max_coefficients", s.max_coefficients);
  s.max_exponent = param(p, "max_exponent", s.max_exponent);
  s.max_slice = param(p, "max_slice", s.max_slice);
  s.slice_hi = param(p, "slice_hi", s.slice_hi);
  s.coefficient_hi = param(p, "coefficient_hi", s.coefficient_hi);
  return s;
}

std::string slices_cell(const SlicedFamily& f) {
  std::string out;
  for (const auto& [a, xs] : f.slices) {
    if (!out.empty()) out += " | ";
    out += a.get_str() + ": " + cell(xs);
  }
  return out;
}

RowOut energy_oracle_row(const RowContext& c) {
  Rng rng(c.seed);
  FamilySpec spec;
  spec.kind = FamilyKind::kRandomSubset;
  spec.lo = param<long>(c.params, "lo", -1000);
  spec.hi = param<long>(c.params, "hi", 1000);
  spec.size = 1 + rng.below(param<std::size_t>(c.params, "max_size", 30));
  spec.seed = rng.next();
  const IntSet a = generate(spec, c.cfg.magnitude_cap);
  const Integer conv = energy_plus(a, EnergyMethod::kConvolution).energy;
  const Integer quad = energy_plus(a, EnergyMethod::kQuadrupleOracle).energy;
  return {{cell(a.size()), cell(a), cell(conv), cell(quad)}, conv == quad};
}

RowOut energy_ap_row(const RowContext& c) {
  const std::size_t n = param<std::size_t>(c.params, "first", 1) + c.index;
  const IntSet a = IntSet::range(0, static_cast<long>(n));
  const Integer e = energy_plus(a).energy;
  const Integer N = big(n);
  const Integer closed = (2 * N * N * N + N) / 3;
  return {{cell(n), cell(e), cell(closed)}, e == closed};
}

RowOut one_prime_row(const RowContext& c) {
  Rng rng(c.seed);
  Integer p;
  const SlicedFamily fam = one_prime_family(rng, sliced_params(c.params), &p);
  const EmpiricalRatio r = empirical_ratio(fam);
  const SeparationBound six = one_prime_bound(fam.coefficients, p);
  const bool within_six = r.within(six.value);
  const bool within_trivial = r.within(trivial_bound(fam.coefficients).value);
  return {{cell(p), cell(fam.coefficients), slices_cell(fam), cell(r.union_energy), cell(r.ratio), cell(six.value),
           cell(within_six), cell(big(fam.coefficients.size())), cell(within_trivial)},
          within_six && within_trivial};
}

RowOut trivial_row(const RowContext& c) {
  Rng rng(c.seed);
  const SlicedFamily fam = unstructured_family(rng, sliced_params(c.params));
  const EmpiricalRatio r = empirical_ratio(fam);
  const Rational bound = trivial_bound(fam.coefficients).value;
  return {{cell(fam.coefficients), slices_cell(fam), cell(r.union_energy), cell(r.ratio), cell(bound)},
          r.within(bound)};
}

RowOut chang_row(const RowContext& c) {
  const std::size_t n = param<std::size_t>(c.params, "first", 2) + c.index;
  FamilySpec spec;
  spec.kind = FamilyKind::kGeometric;
  spec.ratio = param<long>(c.params, "ratio", 2);
  spec.length = n;
  const IntSet a = generate(spec, c.cfg.magnitude_cap);
  const Integer e = energy_plus(a).energy;
  const Integer N = big(n);
  const Integer expected = 2 * N * N - N;
  const Rational K = *doubling_stats(a, a).k_mult;
  Integer ceilK;
  mpz_cdiv_q(ceilK.get_mpz_t(), K.get_num_mpz_t(), K.get_den_mpz_t());
  const Integer bound = pow_ui(Integer(36), ceilK.get_ui()) * N * N;
  return {{cell(n), cell(e), cell(expected), cell(K), cell(bound)}, e == expected && e <= bound};
}

RowOut regularity_row(const RowContext& c) {
  Rng rng(c.seed);
  const std::size_t max_side = param<std::size_t>(c.params, "max_side", 200);
  const double dlo = param(c.params, "min_density", 0.05), dhi = param(c.params, "max_density", 1.0);
  const std::size_t nl = 1 + rng.below(max_side), nr = 1 + rng.below(max_side);
  const double p = dlo + (dhi - dlo) * rng.unit();
  std::vector<Integer> left, right;
  for (std::size_t i = 0; i < nl; ++i) left.push_back(big(i));
  for (std::size_t j = 0; j < nr; ++j) right.push_back(big(j));
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < nl; ++i) {
    for (std::uint32_t j = 0; j < nr; ++j) {
      if (rng.chance(p)) edges.push_back({i, j});
    }
  }
  if (edges.empty()) edges.push_back({static_cast<std::uint32_t>(rng.below(nl)), static_cast<std::uint32_t>(rng.below(nr))});
  const IntGraph g(std::move(left), std::move(right), std::move(edges));
  const auto reg = cheap_regularize(g);
  const RegularityCheck k = reg.check();
  return {{cell(nl), cell(nr), cell(g.edge_count()), cell(g.density()), cell(reg.graph.left().size()),
           cell(reg.graph.right().size()), cell(reg.graph.edge_count()), cell(reg.passes), cell(k.left_min_degree),
           cell(k.right_min_degree), cell(k.left_size), cell(k.right_size), cell(k.edge_count)},
          k.all()};
}

RowOut fibering_row(const RowContext& c) {
  const FiberingInstance inst = fibering_instance(c.index, c.seed);
  const ConstantsConfig cfg = param(c.params, "relaxed", false) ? ConstantsConfig::relaxed() : c.cfg.fibering;
  const FiberingResult res = fibering_lemma(inst.graph, inst.split, cfg);
  const FiberingDecomposition& d = res.decomposition;
  const FiberingTrace& t = res.trace;
  bool quant = true;
  double min_slack = INFINITY;
  for (const QuantCheck& q : t.checks) {
    quant = quant && q.pass;
    min_slack = std::min(min_slack, q.slack());
  }
  return {{inst.kind, cell(inst.split.dim()), cell(t.N1), cell(t.N2), cell(t.edges), cell(inst.split.base().size()),
           cell(inst.degenerate_split), cell(t.swapped), cell(d.M1), cell(d.M2), cell(d.m1), cell(d.m2),
           cell(d.delta1), cell(d.delta2), cell(d.K1.value()), cell(d.K2.value()), cell(t.conclusions.fiber_sizes),
           cell(t.conclusions.graph_fibering), cell(t.conclusions.bounded_doubling), cell(quant), cell(min_slack)},
          t.conclusions.all() && quant};
}

RowOut cover_row(const RowContext& c) {
  Rng rng(c.seed);
  const std::size_t max_size = param<std::size_t>(c.params, "max_size", 40);
  const std::size_t every = param<std::size_t>(c.params, "single_part_every", 10);
  const bool single = every > 0 && c.index % every == 0;
  CoverSystem cov;
  if (single) {
    cov = random_cover(rng, max_size, 1, 0, param<long>(c.params, "lo", -500), param<long>(c.params, "hi", 500));
    cov.parts = {cov.covered};
  } else {
    cov = random_cover(rng, max_size, param<unsigned>(c.params, "max_multiplicity", 4),
                       param<std::size_t>(c.params, "max_extra_parts", 4), param<long>(c.params, "lo", -500),
                       param<long>(c.params, "hi", 500));
  }
  const CoverBound b = energy_cover_bound(cov);
  const bool pass = b.sign <= 0 && (!single || b.sign == 0);
  return {{cell(cov.covered.size()), cell(cov.multiplicity), cell(cov.parts.size()), cell(b.actual), cell(b.bound),
           std::to_string(b.sign), cell(single)},
          pass};
}

RowOut final_assembly_row(const RowContext& c) {
  const std::size_t n = param<std::size_t>(c.params, "first", 4) + c.index;
  FamilySpec spec;
  spec.kind = FamilyKind::kGeometric;
  spec.ratio = 2;
  spec.length = n;
  const IntSet a = generate(spec, c.cfg.magnitude_cap);
  const IntSet aprime(std::vector<Integer>(a.begin(), a.begin() + static_cast<long>(n / 2)));
  const FinalAssembly r = final_assembly(a, aprime);
  return {{cell(n), cell(r.L), cell(r.M), cell(r.actual), cell(r.energy_bound), cell(r.chain_bound),
           cell(r.quotient_size), cell(r.quotient_within_plunnecke)},
          Rational(r.actual) <= r.energy_bound};
}

RowOut tree_row(const RowContext& c) {
  const ParamTriple t{param(c.params, "N", 1e20), param(c.params, "delta", 1.0), param(c.params, "K", 1e4)};
  TreeOptions opts;
  opts.constants = c.cfg.induction;
  opts.mode = param<std::string>(c.params, "mode", "concentrated") == "balanced" ? SplitMode::kBalanced
                                                                                  : SplitMode::kConcentrated;
  const std::size_t l = c.index;
  const TreeResult r = tree_simulate(t, l, opts);
  double ratio_slack = INFINITY;
  // Level 0 is the root itself and meets its bound with equality.
  for (const LevelCheck& lc : r.levels) {
    if (lc.level > 0 || r.levels.size() == 1) ratio_slack = std::min(ratio_slack, lc.ratio_bound - lc.max_log_ratio);
  }
  return {{cell(l), cell(r.nodes.size()), cell(ratio_slack), cell(r.leaf_log_phi), cell(r.closed_form.log_phi),
           cell(r.phi_dominates_closed_form), cell(r.leaf_log_psi), cell(r.closed_form.log_psi),
           cell(r.psi_within_closed_form), cell(r.bounds_ok())},
          r.bounds_ok()};
}

GridSpec grid_spec(const Json& p) {
  GridSpec g;
  g.N_min = param(p, "N_min", g.N_min);
  g.N_max = param(p, "N_max", g.N_max);
  g.delta_min = param(p, "delta_min", g.delta_min);
  g.delta_max = param(p, "delta_max", g.delta_max);
  g.K_min = param(p, "K_min", g.K_min);
  g.K_max = param(p, "K_max", g.K_max);
  g.points = param(p, "points", g.points);
  return g;
}

RowOut monotonicity_row(const RowContext& c) {
  static const char* names[] = {"freiman", "better", "strong"};
  const std::size_t which = c.index % 3;
  const StrongPairConstants k = c.cfg.strong;
  PairEvaluator eval;
  switch (which) {
    case 0: eval = [](const LogTriple& t) { return freiman_pair(t); }; break;
    case 1: eval = [](const LogTriple& t) { return better_pair(t); }; break;
    default: eval = [k](const LogTriple& t) { return strong_pair(t, k); }; break;
  }
  const MonotonicityReport r = monotonicity_grid(eval, grid_spec(c.params));
  return {{names[which], cell(r.comparisons), cell(r.psi_ratio_violations), cell(r.phi_ratio_violations),
           cell(r.psi_N_violations), cell(r.phi_N_violations)},
          r.ratio_ok()};
}

RowOut contraction_row(const RowContext& c) {
  const ContractionReport r = strong_contraction_grid(c.cfg.strong, grid_spec(c.params));
  return {{cell(r.points), cell(r.phi_failures), cell(r.psi_failures), cell(r.worst_phi), cell(r.worst_psi)},
          r.pass()};
}

const std::map<std::string, Operation>& operations() {
  static const std::map<std::string, Operation> ops = {
      {"energy_oracle", {{"size", "elements", "energy_convolution", "energy_oracle"}, energy_oracle_row}},
      {"energy_ap", {{"n", "energy", "closed_form"}, energy_ap_row}},
      {"separation_one_prime",
       {{"prime", "coefficients", "slices", "union_energy", "ratio", "bound", "within_bound", "trivial_bound",
         "within_trivial"},
        one_prime_row}},
      {"separation_trivial", {{"coefficients", "slices", "union_energy", "ratio", "bound"}, trivial_row}},
      {"chang_geometric", {{"n", "energy", "expected", "K", "bound"}, chang_row}},
      {"regularity",
       {{"left", "right", "edges", "density", "kept_left", "kept_right", "kept_edges", "passes", "left_min_degree",
         "right_min_degree", "left_size", "right_size", "edge_count"},
        regularity_row}},
      {"fibering",
       {{"kind", "dim", "N1", "N2", "edges", "base_coordinates", "degenerate_split", "swapped", "M1", "M2", "m1",
         "m2", "delta1", "delta2", "K1", "K2", "fiber_sizes", "graph_fibering", "bounded_doubling", "quant_pass",
         "min_slack"},
        fibering_row}},
      {"energy_cover",
       {{"size", "multiplicity", "parts", "energy", "bound", "sign", "single_part"}, cover_row}},
      {"final_assembly",
       {{"n", "L", "M", "energy", "energy_bound", "chain_bound", "quotient_size", "quotient_within_plunnecke"},
        final_assembly_row}},
      {"paramflow_tree",
       {{"levels", "nodes", "min_ratio_slack", "leaf_log_phi", "closed_log_phi", "phi_dominates", "leaf_log_psi",
         "closed_log_psi", "psi_within", "bounds_ok"},
        tree_row}},
      {"paramflow_monotonicity",
       {{"evaluator", "comparisons", "psi_ratio_violations", "phi_ratio_violations", "psi_N_violations",
         "phi_N_violations"},
        monotonicity_row}},
      {"paramflow_contraction",
       {{"points", "phi_failures", "psi_failures", "worst_phi", "worst_psi"}, contraction_row}},
  };
  return ops;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

std::vector<std::string> operation_names() {
  std::vector<std::string> out;
  for (const auto& [name, op] : operations()) out.push_back(name);
  return out;
}

std::vector<std::string> operation_header(const std::string& operation) {
  const auto it = operations().find(operation);
  if (it == operations().end()) throw Error(ErrorCode::kInvalidArgument, "unknown operation \"" + operation + "\"");
  std::vector<std::string> h{"index", "seed"};
  h.insert(h.end(), it->second.columns.begin(), it->second.columns.end());
  h.push_back("pass");
  h.push_back("error");
  return h;
}

ExperimentReport run_single(const ExperimentSpec& spec, const ExperimentConfig& cfg) {
  const auto it = operations().find(spec.operation);
  if (it == operations().end()) throw Error(ErrorCode::kInvalidArgument, "unknown operation \"" + spec.operation + "\"");
  const Operation& op = it->second;

  ExperimentReport rep;
  rep.name = spec.name;
  rep.operation = spec.operation;
  rep.seed = experiment_seed(cfg, spec);
  rep.table.header = operation_header(spec.operation);
  rep.table.rows.resize(spec.rows);

  const auto compute = [&](std::size_t i) {
    const std::uint64_t seed = row_seed(rep.seed, i);
    Cells row{std::to_string(i), std::to_string(seed)};
    try {
      RowOut out = op.row(RowContext{i, seed, spec.params, cfg});
      row.insert(row.end(), out.cells.begin(), out.cells.end());
      row.push_back(cell(out.pass));
      row.push_back("");
    } catch (const Error& e) {
      row.resize(rep.table.header.size() - 2);
      row.push_back("error");
      row.push_back(e.what());
    } catch (const std::exception& e) {
      row.resize(rep.table.header.size() - 2);
      row.push_back("error");
      row.push_back(std::string("internal: ") + e.what());
    }
    rep.table.rows[i] = std::move(row);
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(spec.rows, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < spec.rows; ++i) compute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < spec.rows;) compute(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  const std::size_t pass_col = rep.table.header.size() - 2;
  for (const Cells& row : rep.table.rows) {
    if (row[pass_col] == "true") {
      ++rep.passed;
    } else if (row[pass_col] == "error") {
      ++rep.errors;
    } else {
      ++rep.failed;
    }
  }
  rep.summary = {{"name", rep.name}, {"operation", rep.operation}, {"seed", rep.seed},   {"rows", spec.rows},
                 {"passed", rep.passed}, {"failed", rep.failed},   {"errors", rep.errors}};
  const auto& h = rep.table.header;
  if (const auto rc = std::find(h.begin(), h.end(), "ratio"); rc != h.end()) {
    const std::size_t col = static_cast<std::size_t>(rc - h.begin());
    double best = 0;
    for (const Cells& row : rep.table.rows) {
      if (!row[col].empty()) best = std::max(best, std::stod(row[col]));
    }
    rep.summary["max_ratio"] = best;
  }
  return rep;
}

std::vector<ExperimentReport> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  std::vector<ExperimentReport> reports;
  const std::string dir = opts.output_dir ? *opts.output_dir : resolve_output_dir(cfg);
  if (opts.write_files) std::filesystem::create_directories(dir);
  const std::string stamp = utc_timestamp();
  Json summary = Json::array();
  for (const ExperimentSpec& spec : cfg.experiments) {
    ExperimentReport rep = run_single(spec, cfg);
    if (opts.write_files) {
      rep.path = (std::filesystem::path(dir) / (spec.name + ".csv")).string();
      std::ofstream out(rep.path, std::ios::binary);
      out << render_csv(rep, stamp);
      if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + rep.path);
    }
    summary.push_back(rep.summary);
    reports.push_back(std::move(rep));
  }
  if (opts.write_files) {
    std::ofstream out(std::filesystem::path(dir) / "summary.json", std::ios::binary);
    out << summary.dump(2) << '\n';
  }
  return reports;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string csv_body(const Table& t) {
  std::string out;
  const auto line = [&](const Cells& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const Cells& row : t.rows) line(row);
  return out;
}

std::string render_csv(const ExperimentReport& r, const std::string& timestamp) {
  return "# " + r.name + " " + r.operation + " seed=" + std::to_string(r.seed) + " generated " + timestamp + "\n" +
         csv_body(r.table);
}

}  // namespace sumprod
