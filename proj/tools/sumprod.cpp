// Command-line front end: every subcommand prints JSON to standard output.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sumprod/harness.hpp"
#include "sumprod/json_io.hpp"
#include "sumprod/root_compare.hpp"
#include "sumprod/valuation.hpp"

using namespace sumprod;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

// A set from an inline literal or a file (one integer per line, or a JSON array).
IntSet load_set(const std::string& literal, const std::string& file, const char* what) {
  if (!literal.empty() && !file.empty()) throw Error(ErrorCode::kInvalidArgument, std::string("give ") + what + " once");
  if (!literal.empty()) return parse_set_literal(literal);
  if (file.empty()) throw Error(ErrorCode::kInvalidArgument, std::string("missing ") + what);
  const std::string text = slurp(file);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') return intset_from_json(Json::parse(text));
  return parse_set_lines(text);
}

std::vector<std::size_t> parse_index_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const Integer& x : parse_set_literal(s)) {
    if (x < 0 || !x.fits_ulong_p()) throw Error(ErrorCode::kInvalidArgument, "bad coordinate index");
    out.push_back(x.get_ui());
  }
  return out;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json regularity_json(const RegularizedGraph<Integer>& r) {
  const RegularityCheck c = r.check();
  return {{"graph", to_json(r.graph)},
          {"kept_left", r.kept_left},
          {"kept_right", r.kept_right},
          {"input_density", to_json(r.input_density)},
          {"passes", r.passes},
          {"checks",
           {{"left_min_degree", c.left_min_degree},
            {"right_min_degree", c.right_min_degree},
            {"left_size", c.left_size},
            {"right_size", c.right_size},
            {"edge_count", c.edge_count},
            {"pass", c.all()}}}};
}

struct ParamArgs {
  double N = 1e12, delta = 1, K = 1e3;
  double C = 1, gamma = 0.25;
  std::string config;
  std::size_t levels = 2;
  std::string mode = "concentrated";
  bool csv = false;
  bool strict = false;
  double gamma_total = 0;
  double C_freiman = 2;
};

StrongPairConstants strong_from(const ParamArgs& a, InductionConstants* ic = nullptr) {
  if (a.config.empty()) return {};
  const ExperimentConfig cfg = load_config(a.config);
  if (ic) *ic = cfg.induction;
  return cfg.strong;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sum-product toolkit"};
  app.require_subcommand(1);

  std::string set_lit, set_file, b_lit, b_file, method = "convolution";
  unsigned k_energy = 2;
  auto* energy = app.add_subcommand("energy", "additive energy of a set (or of a pair of sets)");
  energy->add_option("--set,-a", set_lit, "inline set literal, e.g. \"0,1,2\"");
  energy->add_option("--file", set_file, "set file");
  energy->add_option("--b", b_lit, "second set literal");
  energy->add_option("--b-file", b_file, "second set file");
  energy->add_option("--method", method, "convolution | oracle")->check(CLI::IsMember({"convolution", "oracle"}));
  energy->add_option("--k", k_energy, "k for the k-energy (single set only)")->check(CLI::Range(2u, 64u));

  std::string a_lit, a_file, op = "sum";
  auto* sums = app.add_subcommand("sumset", "sumset, product set or difference set");
  sums->add_option("--a", a_lit, "first set literal");
  sums->add_option("--a-file", a_file, "first set file");
  sums->add_option("--b", b_lit, "second set literal");
  sums->add_option("--b-file", b_file, "second set file");
  sums->add_option("--op", op, "sum | product | difference")->check(CLI::IsMember({"sum", "product", "difference"}));

  auto* val = app.add_subcommand("valuate", "prime valuation and multiplicative dimension");
  val->add_option("--set,-a", set_lit, "inline set literal");
  val->add_option("--file", set_file, "set file");

  std::string graph_file;
  auto* regz = app.add_subcommand("regularize", "cheap regularization of a bipartite graph");
  regz->add_option("--graph", graph_file, "graph JSON {left, right, edges}")->required();

  std::string split_list;
  long prefix = -1;
  bool relaxed = false;
  auto* fib = app.add_subcommand("fiber", "fibering decomposition of a graph between lattice sets");
  fib->add_option("--graph", graph_file, "lattice graph JSON");
  fib->add_option("--a", a_lit, "left integer set (complete graph, valuated jointly)");
  fib->add_option("--b", b_lit, "right integer set");
  fib->add_option("--split", split_list, "base coordinates, e.g. \"0,1\"");
  fib->add_option("--prefix", prefix, "base coordinates 0..t-1");
  fib->add_flag("--relaxed", relaxed, "c = 1/1000, C = 1000");

  std::string family_file;
  std::string prime;
  auto* sep = app.add_subcommand("separate", "separating constants: measured ratio or theoretical bounds");
  sep->add_option("--family", family_file, "sliced family JSON {coefficients, slices}");
  sep->add_option("--set,-a", set_lit, "coefficient set for the theoretical bounds");
  sep->add_option("--prime", prime, "prime for the one-prime bound");

  std::string cover_file, aprime_lit;
  auto* cov = app.add_subcommand("cover", "energy cover bound, or the final assembly with --aprime");
  cov->add_option("--cover", cover_file, "cover JSON {covered, parts, multiplicity}");
  cov->add_option("--a", a_lit, "set A for the final assembly");
  cov->add_option("--aprime", aprime_lit, "subset A' for the final assembly");

  ParamArgs pa;
  auto* pf = app.add_subcommand("paramflow", "admissible-pair evaluators and the tree simulator");
  pf->require_subcommand(1);
  const auto common = [&](CLI::App* s) {
    s->add_option("--N", pa.N, "N");
    s->add_option("--delta", pa.delta, "delta");
    s->add_option("--K", pa.K, "K");
    s->add_option("--config", pa.config, "experiment config holding the constants");
    s->add_flag("--strict", pa.strict, "throw instead of clamping the log guards");
  };
  auto* pf_freiman = pf->add_subcommand("freiman", "Freiman-type pair");
  common(pf_freiman);
  pf_freiman->add_option("--C", pa.C, "exponent C");
  auto* pf_better = pf->add_subcommand("better", "better pair");
  common(pf_better);
  pf_better->add_option("--C", pa.C, "exponent C");
  pf_better->add_option("--gamma", pa.gamma, "gamma");
  auto* pf_strong = pf->add_subcommand("strong", "strong pair");
  common(pf_strong);
  auto* pf_ind = pf->add_subcommand("induction", "one induction step with a Freiman-pair child");
  common(pf_ind);
  pf_ind->add_option("--C", pa.C, "child exponent C");
  auto* pf_tree = pf->add_subcommand("tree", "binary tree with boundary splits");
  common(pf_tree);
  pf_tree->add_option("--levels,-l", pa.levels, "depth");
  pf_tree->add_option("--mode", pa.mode, "concentrated | balanced")
      ->check(CLI::IsMember({"concentrated", "balanced"}));
  pf_tree->add_flag("--csv", pa.csv, "per-level CSV instead of JSON");
  auto* pf_exp = pf->add_subcommand("exponent", "final exponents of the energy bound");
  common(pf_exp);
  pf_exp->add_option("--budget", pa.gamma_total, "split an exponent budget 8*tau + gamma");
  auto* pf_cross = pf->add_subcommand("crossover", "where the better pair's phi drops below the Freiman pair's");
  common(pf_cross);
  pf_cross->add_option("--C-freiman", pa.C_freiman, "Freiman exponent");
  pf_cross->add_option("--C", pa.C, "better-pair exponent");
  pf_cross->add_option("--gamma", pa.gamma, "gamma");

  std::string config_path, out_dir;
  bool no_write = false;
  auto* exp = app.add_subcommand("experiment", "run an experiment config");
  exp->add_option("--config,-c", config_path, "config JSON")->required();
  exp->add_option("--output-dir,-o", out_dir, "output directory");
  exp->add_flag("--no-write", no_write, "do not write report files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*energy) {
      const IntSet a = load_set(set_lit, set_file, "--set");
      const EnergyMethod m = method == "oracle" ? EnergyMethod::kQuadrupleOracle : EnergyMethod::kConvolution;
      if (k_energy != 2) {
        emit({{"k", k_energy}, {"energy", to_json(energy_k(a, k_energy))}, {"size", a.size()}});
      } else {
        const bool pair = !b_lit.empty() || !b_file.empty();
        const IntSet b = pair ? load_set(b_lit, b_file, "--b") : a;
        const EnergyReport r = energy_plus(a, b, m);
        emit({{"energy", to_json(r.energy)}, {"method", to_string(r.method)}, {"size_a", r.size_a},
              {"size_b", r.size_b}});
      }
    } else if (*sums) {
      const IntSet a = load_set(a_lit, a_file, "--a");
      const IntSet b = load_set(b_lit, b_file, "--b");
      const IntSet s = op == "sum" ? sumset(a, b) : op == "product" ? productset(a, b) : difference_set(a, b);
      std::cout << to_json(s).dump() << '\n';
    } else if (*val) {
      const IntSet a = load_set(set_lit, set_file, "--set");
      const LatticeSet ls = valuate(a);
      const RankReport rank = mult_dimension(a);
      Json j = to_json(ls);
      j["multiplicative_dimension"] = rank.affine_rank;
      const FreimanReport fr = freiman_check(a);
      j["freiman"] = {{"rank", fr.rank}, {"sumset_size", fr.sumset_size}, {"lower_bound", to_json(fr.lower_bound)},
                      {"tight", fr.tight()}};
      emit(j);
    } else if (*regz) {
      emit(regularity_json(cheap_regularize(int_graph_from_json(read_json(graph_file)))));
    } else if (*fib) {
      LatticeGraph g;
      Json source;
      if (!graph_file.empty()) {
        g = lattice_graph_from_json(read_json(graph_file));
      } else {
        const IntSet a = parse_set_literal(a_lit), b = parse_set_literal(b_lit);
        const PrimeIndex idx = joint_index(a, b);
        const LatticeSet la = valuate(a, idx), lb = valuate(b, idx);
        g = LatticeGraph::complete(normalize_points(la.vectors), normalize_points(lb.vectors));
        source = {{"left", to_json(la)}, {"right", to_json(lb)}};
      }
      if (g.empty()) throw Error(ErrorCode::kEmptyGraph, "graph has no edges");
      const std::size_t dim = g.left().front().size();
      CoordSplit split;
      if (!split_list.empty()) {
        split = CoordSplit(parse_index_list(split_list), dim);
      } else if (prefix >= 0) {
        split = CoordSplit::prefix(static_cast<std::size_t>(prefix), dim);
      } else {
        split = CoordSplit::prefix(choose_split(g.left(), g.right()).t, dim);
      }
      const FiberingResult r = fibering_lemma(g, split, relaxed ? ConstantsConfig::relaxed() : ConstantsConfig{});
      Json j = {{"decomposition", to_json(r.decomposition)}, {"trace", to_json(r.trace)}};
      if (!source.is_null()) j["valuation"] = source;
      emit(j);
    } else if (*sep) {
      if (!family_file.empty()) {
        const EmpiricalRatio r = empirical_ratio(family_from_json(read_json(family_file)));
        Json e = Json::array();
        for (const Integer& x : r.slice_energies) e.push_back(to_json(x));
        emit({{"union", to_json(r.union_set)}, {"union_energy", to_json(r.union_energy)}, {"slice_energies", e},
              {"ratio", r.ratio}, {"provenance", to_string(Provenance::kEmpirical)}});
      } else {
        const IntSet a = load_set(set_lit, "", "--set or --family");
        Json j = {{"trivial", to_json(trivial_bound(a).value)}};
        if (!prime.empty()) j["one_prime"] = to_json(one_prime_bound(a, parse_integer(prime)).value);
        if (a.min() > 0) {
          const ChangReport c = chang_bound(a);
          j["chang"] = {{"bound", to_json(c.bound.value)}, {"K", to_json(c.K)}, {"rank", c.rank},
                        {"by_doubling", to_json(c.by_doubling)}, {"by_rank", to_json(c.by_rank)}};
        }
        emit(j);
      }
    } else if (*cov) {
      if (!aprime_lit.empty()) {
        const FinalAssembly r = final_assembly(parse_set_literal(a_lit), parse_set_literal(aprime_lit));
        emit({{"L", r.L}, {"M", r.M}, {"min_cover", r.min_cover}, {"energy", to_json(r.actual)},
              {"energy_bound", to_json(r.energy_bound)}, {"aprime_energy", to_json(r.aprime_energy)},
              {"quotient_size", r.quotient_size}, {"K", to_json(r.K)},
              {"ratio_within_quotient", r.ratio_within_quotient},
              {"quotient_within_plunnecke", r.quotient_within_plunnecke}, {"chain_bound", to_json(r.chain_bound)}});
      } else {
        if (cover_file.empty()) throw Error(ErrorCode::kInvalidArgument, "cover needs --cover or --a/--aprime");
        const Json j = read_json(cover_file);
        CoverSystem c;
        c.covered = intset_from_json(j.at("covered"));
        for (const Json& p : j.at("parts")) c.parts.push_back(intset_from_json(p));
        if (j.contains("multiplicity")) c.multiplicity = integer_from_json(j["multiplicity"]);
        const CoverBound b = energy_cover_bound(c);
        Json e = Json::array();
        for (const Integer& x : b.part_energies) e.push_back(to_json(x));
        Json out = {{"energy", to_json(b.actual)}, {"bound", b.bound}, {"part_energies", e}, {"sign", b.sign}};
        if (b.exact_bound) out["exact_bound"] = to_json(*b.exact_bound);
        emit(out);
      }
    } else if (*pf) {
      const ParamTriple triple{pa.N, pa.delta, pa.K};
      const LogTriple t = LogTriple::from(triple);
      const Guard guard = pa.strict ? Guard::kStrict : Guard::kClamp;
      Json input = {{"N", pa.N}, {"delta", pa.delta}, {"K", pa.K}};
      if (*pf_freiman) {
        emit({{"input", input}, {"pair", to_json(freiman_pair(t, pa.C))}});
      } else if (*pf_better) {
        emit({{"input", input}, {"pair", to_json(better_pair(t, pa.C, pa.gamma, guard))}});
      } else if (*pf_strong) {
        const StrongPairConstants k = strong_from(pa);
        Json j = {{"input", input}, {"constants", to_json(k)}, {"pair", to_json(strong_pair(t, k, guard))}};
        emit(j);
      } else if (*pf_ind) {
        InductionConstants ic;
        strong_from(pa, &ic);
        const double C = pa.C;
        const InductionResult r = induction_step([C](const LogTriple& x) { return freiman_pair(x, C); }, t, ic);
        emit({{"input", input},
              {"pair", to_json(r.pair)},
              {"psi_split", {to_json(r.psi_first), to_json(r.psi_second)}},
              {"phi_split", {to_json(r.phi_first), to_json(r.phi_second)}},
              {"feasible", r.feasible},
              {"approximate", r.approximate}});
      } else if (*pf_tree) {
        TreeOptions opts;
        strong_from(pa, &opts.constants);
        opts.guard = guard;
        opts.mode = pa.mode == "balanced" ? SplitMode::kBalanced : SplitMode::kConcentrated;
        const TreeResult r = tree_simulate(triple, pa.levels, opts);
        if (pa.csv) {
          std::cout << tree_levels_csv(r);
        } else {
          emit(to_json(r));
        }
      } else if (*pf_exp) {
        StrongPairConstants k = strong_from(pa);
        if (pa.gamma_total > 0) k = split_exponent_budget(pa.gamma_total, k);
        const ExponentReport r = theorem1_exponent(k, pa.K);
        emit({{"Lambda", r.Lambda}, {"energy_exponent", r.energy_exponent}, {"log_bound_factor", r.log_bound_factor},
              {"tau", k.tau}, {"gamma", k.gamma}});
      } else if (*pf_cross) {
        const auto x = better_freiman_crossover(pa.N, pa.C_freiman, pa.C, pa.gamma);
        emit({{"N", pa.N}, {"crossover_K_over_delta", x ? Json(*x) : Json(nullptr)}});
      }
    } else if (*exp) {
      const ExperimentConfig cfg = load_config(config_path);
      RunOptions opts;
      opts.write_files = !no_write;
      if (!out_dir.empty()) opts.output_dir = out_dir;
      const auto reports = run_experiment(cfg, opts);
      Json j = Json::array();
      bool ok = true;
      for (const ExperimentReport& r : reports) {
        Json s = r.summary;
        if (!r.path.empty()) s["path"] = r.path;
        j.push_back(s);
        ok = ok && r.all_passed();
      }
      emit(j);
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << Json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
