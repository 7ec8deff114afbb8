#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "sumprod/harness.hpp"
#include "sumprod/json_io.hpp"

using namespace sumprod;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.seed = 12345;
  cfg.threads = 2;
  cfg.experiments = {{"oracle", "energy_oracle", 20, Json::object(), std::nullopt},
                     {"ap", "energy_ap", 10, Json::object(), std::nullopt},
                     {"cover", "energy_cover", 10, Json::object(), std::nullopt}};
  return cfg;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("sumprod_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Rng, DeterministicAndBounded) {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    const auto u = r.uniform(-3, 3);
    EXPECT_GE(u, -3);
    EXPECT_LE(u, 3);
    const double x = r.unit();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  const auto s = r.sample(50, 10);
  ASSERT_EQ(s.size(), 10u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  EXPECT_NE(row_seed(1, 0), row_seed(1, 1));
  EXPECT_EQ(row_seed(1, 3), row_seed(1, 3));
}

TEST(Generate, Examples) {
  FamilySpec g;
  g.kind = FamilyKind::kGeometric;
  g.start = 1;
  g.ratio = 2;
  g.length = 4;
  EXPECT_EQ(generate(g), IntSet({1, 2, 4, 8}));
  FamilySpec box;
  box.kind = FamilyKind::kExponentBox;
  box.primes = {2, 3};
  box.bounds = {1, 1};
  EXPECT_EQ(generate(box), IntSet({1, 2, 3, 6}));
  FamilySpec ap;
  ap.length = 3;
  EXPECT_EQ(generate(ap), IntSet({0, 1, 2}));
  FamilySpec u;
  u.kind = FamilyKind::kUnionBTimesC;
  u.b = {1, 2};
  u.c = {3, 5};
  EXPECT_EQ(generate(u), IntSet({3, 5, 6, 10}));
  FamilySpec m;
  m.kind = FamilyKind::kModel3dAp;
  m.length = 16;
  m.alpha = 0.25;
  const IntSet model = generate(m);
  // Bounds (2, 4, 2) over 2, 3, 5: 3 * 5 * 3 points.
  EXPECT_EQ(model.size(), 45u);
}

TEST(Generate, RandomSubsetIsDeterministic) {
  FamilySpec r;
  r.kind = FamilyKind::kRandomSubset;
  r.lo = -10;
  r.hi = 10;
  r.size = 7;
  r.seed = 3;
  const IntSet a = generate(r);
  EXPECT_EQ(a.size(), 7u);
  EXPECT_EQ(a, generate(r));
  EXPECT_GE(a.min(), -10);
  EXPECT_LE(a.max(), 10);
  r.seed = 4;
  EXPECT_NE(a, generate(r));
}

TEST(Generate, CapAndErrors) {
  FamilySpec g;
  g.kind = FamilyKind::kGeometric;
  g.start = 1;
  g.length = 200;
  try {
    generate(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapExceeded);
  }
  g.length = 11;
  EXPECT_THROW(generate(g, Integer(1000)), Error);
  EXPECT_NO_THROW(generate(g, Integer(1024)));
  FamilySpec bad;
  bad.kind = FamilyKind::kRandomSubset;
  bad.lo = 0;
  bad.hi = 3;
  bad.size = 10;
  EXPECT_THROW(generate(bad), Error);
  EXPECT_THROW(family_kind_from_string("nope"), Error);
}

TEST(Generate, SpecJsonRoundTrip) {
  FamilySpec s;
  s.kind = FamilyKind::kExponentBox;
  s.primes = {2, 7};
  s.bounds = {3, 1};
  const FamilySpec back = family_spec_from_json(to_json(s));
  EXPECT_EQ(generate(back), generate(s));
  EXPECT_EQ(to_json(back), to_json(s));
}

TEST(Generate, SlicedFamiliesAreValid) {
  Rng rng(71);
  for (int i = 0; i < 50; ++i) {
    Integer p;
    const SlicedFamily f = one_prime_family(rng, SlicedParams{}, &p);
    EXPECT_NO_THROW(f.validate());
    EXPECT_NO_THROW(one_prime_bound(f.coefficients, p));
    EXPECT_NO_THROW(unstructured_family(rng, SlicedParams{}).validate());
  }
}

TEST(Config, DefaultConfigLoads) {
  const ExperimentConfig cfg = load_config(std::string(SUMPROD_SOURCE_DIR) + "/configs/default.json");
  EXPECT_EQ(cfg.experiments.size(), 12u);
  const ExperimentConfig again = config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(again), to_json(cfg));
  Json bad = to_json(cfg);
  bad["experiments"][0]["operation"] = "bogus";
  EXPECT_THROW(config_from_json(bad), Error);
}

TEST(Config, OutputDirOverride) {
  ExperimentConfig cfg;
  cfg.output_dir = "from_config";
  ::unsetenv("SUMPROD_OUTPUT_DIR");
  EXPECT_EQ(resolve_output_dir(cfg), "from_config");
  ::setenv("SUMPROD_OUTPUT_DIR", "from_env", 1);
  EXPECT_EQ(resolve_output_dir(cfg), "from_env");
  ::unsetenv("SUMPROD_OUTPUT_DIR");
}

TEST(Experiment, RowsAreDeterministicAndReplayable) {
  const ExperimentConfig cfg = small_config();
  const auto a = run_experiment(cfg, {false, std::nullopt});
  ExperimentConfig serial = cfg;
  serial.threads = 1;
  const auto b = run_experiment(serial, {false, std::nullopt});
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(csv_body(a[i].table), csv_body(b[i].table));
    EXPECT_TRUE(a[i].all_passed()) << a[i].name;
  }
  // Recompute row 7 of the oracle experiment from its recorded seed alone.
  const auto& row = a[0].table.rows[7];
  const std::uint64_t seed = std::stoull(row[1]);
  EXPECT_EQ(seed, row_seed(experiment_seed(cfg, cfg.experiments[0]), 7));
  Rng rng(seed);
  FamilySpec spec;
  spec.kind = FamilyKind::kRandomSubset;
  spec.lo = -1000;
  spec.hi = 1000;
  spec.size = 1 + rng.below(30);
  spec.seed = rng.next();
  const IntSet s = generate(spec);
  oracle::Vec v;
  for (const auto& x : s) v.push_back(x.get_si());
  EXPECT_EQ(row[2], std::to_string(s.size()));
  EXPECT_EQ(row[5], std::to_string(oracle::energy4(v, v)));
}

TEST(Experiment, ExplicitSeedOverridesDerivation) {
  ExperimentConfig cfg = small_config();
  cfg.experiments[0].seed = 77;
  EXPECT_EQ(experiment_seed(cfg, cfg.experiments[0]), 77u);
  EXPECT_NE(experiment_seed(cfg, cfg.experiments[1]), experiment_seed(cfg, cfg.experiments[2]));
}

TEST(Experiment, EmptyListAndZeroRows) {
  ExperimentConfig cfg;
  const auto dir = temp_dir("empty");
  EXPECT_TRUE(run_experiment(cfg, {true, dir.string()}).empty());
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
  cfg.experiments = {{"none", "energy_ap", 0, Json::object(), std::nullopt}};
  const auto r = run_experiment(cfg, {true, dir.string()});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].table.rows.empty());
  const std::string csv = read_file(dir / "none.csv");
  EXPECT_EQ(csv.substr(0, 2), "# ");
  EXPECT_NE(csv.find("index,seed,n,energy,closed_form,pass,error"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, RowErrorsAreRecorded) {
  ExperimentConfig cfg;
  cfg.magnitude_cap = 1000;
  cfg.experiments = {{"capped", "chang_geometric", 15, Json{{"first", 2}}, std::nullopt}};
  const auto r = run_experiment(cfg, {false, std::nullopt});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].errors, 6u);  // n = 11..16 reach 2^10 > 1000
  EXPECT_EQ(r[0].passed, 9u);
  EXPECT_FALSE(r[0].all_passed());
  const auto& last = r[0].table.rows.back();
  EXPECT_EQ(last[last.size() - 2], "error");
  EXPECT_NE(last.back().find("cap_exceeded"), std::string::npos);
  EXPECT_EQ(last.size(), r[0].table.header.size());
}

TEST(Experiment, UnknownOperation) {
  EXPECT_THROW(operation_header("bogus"), Error);
  EXPECT_EQ(operation_names().size(), 12u);
}

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
  Table t{{"x", "y"}, {{"1", "a,b"}}};
  EXPECT_EQ(csv_body(t), "x,y\n1,\"a,b\"\n");
  ExperimentReport r;
  r.name = "n";
  r.operation = "op";
  r.seed = 3;
  r.table = t;
  EXPECT_EQ(render_csv(r, "T"), "# n op seed=3 generated T\nx,y\n1,\"a,b\"\n");
}

TEST(Json, ValueRoundTrips) {
  const Integer big("123456789012345678901234567890");
  EXPECT_EQ(integer_from_json(to_json(big)), big);
  EXPECT_EQ(integer_from_json(to_json(Integer(-5))), -5);
  EXPECT_EQ(rational_from_json(to_json(Rational(3, 7))), Rational(3, 7));
  EXPECT_EQ(intset_from_json(to_json(IntSet{3, 1, 2})), IntSet({1, 2, 3}));
  const IntGraph g = IntGraph::from_pairs({1, 2}, {3}, {{Integer(2), Integer(3)}});
  EXPECT_EQ(int_graph_from_json(to_json(g)), g);
  SlicedFamily f;
  f.coefficients = IntSet{1, 2};
  f.slices[1] = IntSet{1};
  f.slices[2] = IntSet{3, 5};
  const SlicedFamily back = family_from_json(to_json(f));
  EXPECT_EQ(back.coefficients, f.coefficients);
  EXPECT_EQ(back.slices, f.slices);
  EXPECT_THROW(integer_from_json(Json("x1")), Error);
}
