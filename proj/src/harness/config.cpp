#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sumprod/harness.hpp"

namespace sumprod {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config must be a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("caps") && j["caps"].contains("magnitude_bits")) {
      const unsigned long bits = j["caps"]["magnitude_bits"].get<unsigned long>();
      mpz_ui_pow_ui(c.magnitude_cap.get_mpz_t(), 2, bits);
    }
    if (j.contains("constants")) {
      const Json& k = j["constants"];
      if (k.contains("fibering")) c.fibering = constants_from_json(k["fibering"]);
      if (k.contains("strong")) c.strong = strong_constants_from_json(k["strong"]);
      if (k.contains("induction")) c.induction = induction_constants_from_json(k["induction"]);
    }
    if (j.contains("experiments")) {
      for (const Json& e : j["experiments"]) {
        ExperimentSpec s;
        s.operation = e.at("operation").get<std::string>();
        s.name = e.value("name", s.operation);
        s.rows = e.value("rows", std::size_t{0});
        if (e.contains("params")) s.params = e["params"];
        if (e.contains("seed")) s.seed = e["seed"].get<std::uint64_t>();
        c.experiments.push_back(std::move(s));
      }
    }
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("config: ") + ex.what());
  }
  const auto ops = operation_names();
  for (const ExperimentSpec& s : c.experiments) {
    if (std::find(ops.begin(), ops.end(), s.operation) == ops.end()) {
      throw Error(ErrorCode::kParse, "config: unknown operation \"" + s.operation + "\"");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::kParse, path + ": " + ex.what());
  }
  return config_from_json(j);
}

Json to_json(const ExperimentConfig& c) {
  Json exps = Json::array();
  for (const ExperimentSpec& s : c.experiments) {
    Json e = {{"name", s.name}, {"operation", s.operation}, {"rows", s.rows}, {"params", s.params}};
    if (s.seed) e["seed"] = *s.seed;
    exps.push_back(e);
  }
  return {{"seed", c.seed},
          {"output_dir", c.output_dir},
          {"threads", c.threads},
          {"caps", {{"magnitude_bits", mpz_sizeinbase(c.magnitude_cap.get_mpz_t(), 2) - 1}}},
          {"constants",
           {{"fibering", to_json(c.fibering)}, {"strong", to_json(c.strong)}, {"induction", to_json(c.induction)}}},
          {"experiments", exps}};
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("SUMPROD_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

std::uint64_t experiment_seed(const ExperimentConfig& cfg, const ExperimentSpec& spec) {
  if (spec.seed) return *spec.seed;
  std::uint64_t state = cfg.seed ^ fnv1a(spec.name);
  return splitmix64(state);
}

}  // namespace sumprod
