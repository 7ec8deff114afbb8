#pragma once

// Set-family generators, seeded experiment runner and CSV reporting.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sumprod/bigraph.hpp"
#include "sumprod/fibering.hpp"
#include "sumprod/intset.hpp"
#include "sumprod/json_io.hpp"
#include "sumprod/lattice.hpp"
#include "sumprod/paramflow.hpp"
#include "sumprod/separation.hpp"

namespace sumprod {

// ---- randomness ----

// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed of row `index` within an experiment seeded by `base`.
std::uint64_t row_seed(std::uint64_t base, std::size_t index);

// Bounded draws are done here rather than through <random> distributions,
// whose output is not specified across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n), n > 0
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);  // inclusive
  double unit();  // [0, 1)
  bool chance(double p) { return unit() < p; }
  // k distinct values of [0, n), ascending.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

// ---- generators ----

enum class FamilyKind { kArithmeticProgression, kGeometric, kExponentBox, kRandomSubset, kUnionBTimesC, kModel3dAp };
const char* to_string(FamilyKind k);
FamilyKind family_kind_from_string(const std::string& s);

struct FamilySpec {
  FamilyKind kind = FamilyKind::kArithmeticProgression;
  Integer start{0};              // arithmetic_progression, geometric (first term, default 1)
  Integer step{1};               // arithmetic_progression
  Integer ratio{2};              // geometric
  std::size_t length = 0;        // arithmetic_progression, geometric, model_3d_ap (scale n)
  std::vector<Integer> primes;   // exponent_box, model_3d_ap
  std::vector<unsigned> bounds;  // exponent_box
  double alpha = 0.25;           // model_3d_ap: bounds (n^α, n^(1-2α), n^α)
  Integer lo{0}, hi{0};          // random_subset range, inclusive
  std::size_t size = 0;          // random_subset
  std::vector<Integer> b, c;     // union_b_times_C: {b·c}
  std::uint64_t seed = 0;
};

Json to_json(const FamilySpec& s);
FamilySpec family_spec_from_json(const Json& j);

// 2^128.
Integer default_magnitude_cap();

// Deterministic for a fixed spec. Throws kCapExceeded when an element would
// exceed `cap` in absolute value, kInvalidArgument on a malformed spec.
IntSet generate(const FamilySpec& spec, const Integer& cap = default_magnitude_cap());

// {e : 0 <= e_i <= bounds_i}, lexicographic.
std::vector<LatticePoint> box_points(const std::vector<unsigned>& bounds);

// Structured inputs for the fibering pipeline; kind cycles with `index`
// through product_box, mixed_fiber, rank_one.
struct FiberingInstance {
  std::string kind;
  LatticeGraph graph;
  CoordSplit split;
  bool degenerate_split = false;
};
FiberingInstance fibering_instance(std::size_t index, std::uint64_t seed);

// One-prime sliced family: coefficients are powers of a prime drawn from
// `primes`, slices draw from [1, slice_hi] avoiding that prime.
struct SlicedParams {
  std::vector<Integer> primes{2, 3, 5};
  std::size_t max_coefficients = 8;
  unsigned max_exponent = 12;
  std::size_t max_slice = 12;
  std::int64_t slice_hi = 300;
  std::int64_t coefficient_hi = 60;  // unstructured families only
};
SlicedFamily one_prime_family(Rng& rng, const SlicedParams& p, Integer* prime_out = nullptr);
// Arbitrary coefficients in [1, coefficient_hi]; slice elements coprime to all of them.
SlicedFamily unstructured_family(Rng& rng, const SlicedParams& p);

// Random cover of a random set: every element lies in at least M parts.
CoverSystem random_cover(Rng& rng, std::size_t max_size, unsigned max_multiplicity, std::size_t max_extra,
                         std::int64_t lo, std::int64_t hi);

// ---- experiments ----

struct ExperimentSpec {
  std::string name;
  std::string operation;
  std::size_t rows = 0;
  Json params = Json::object();
  std::optional<std::uint64_t> seed;  // derived from the config seed and name when absent
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "reports";
  Integer magnitude_cap = default_magnitude_cap();
  unsigned threads = 0;  // 0: hardware concurrency
  ConstantsConfig fibering;
  StrongPairConstants strong;
  InductionConstants induction;
  std::vector<ExperimentSpec> experiments;
};

ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);
Json to_json(const ExperimentConfig& c);

// SUMPROD_OUTPUT_DIR when set, else cfg.output_dir.
std::string resolve_output_dir(const ExperimentConfig& cfg);

std::uint64_t experiment_seed(const ExperimentConfig& cfg, const ExperimentSpec& spec);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentReport {
  std::string name;
  std::string operation;
  std::uint64_t seed = 0;
  Table table;
  std::size_t passed = 0, failed = 0, errors = 0;
  Json summary;
  std::string path;  // CSV written, empty when not written
  bool all_passed() const { return failed == 0 && errors == 0; }
};

std::vector<std::string> operation_names();
// Full header of an operation's CSV: index, seed, operation columns, pass, error.
std::vector<std::string> operation_header(const std::string& operation);

ExperimentReport run_single(const ExperimentSpec& spec, const ExperimentConfig& cfg);

struct RunOptions {
  bool write_files = true;
  std::optional<std::string> output_dir;  // overrides resolve_output_dir
};
// Runs every experiment in order; each writes <output_dir>/<name>.csv plus a
// summary.json of all reports.
std::vector<ExperimentReport> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Header row and data rows, no comment line.
std::string csv_body(const Table& t);
// "# <name> <operation> seed=<seed> generated <timestamp>" followed by the body.
std::string render_csv(const ExperimentReport& r, const std::string& timestamp);
std::string csv_escape(const std::string& cell);

}  // namespace sumprod
