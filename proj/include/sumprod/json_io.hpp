#pragma once

// JSON and CSV renderings of library values.
//
// Integers are JSON numbers when they fit in 64 bits and decimal strings
// otherwise; rationals are always "p/q" strings (or "p" when integral).

#include <string>

#include "json.hpp"
#include "sumprod/bigraph.hpp"
#include "sumprod/fibering.hpp"
#include "sumprod/intset.hpp"
#include "sumprod/numeric.hpp"
#include "sumprod/paramflow.hpp"
#include "sumprod/separation.hpp"
#include "sumprod/valuation.hpp"

namespace sumprod {

using Json = nlohmann::json;

Json to_json(const Integer& z);
Json to_json(const Rational& q);
Json to_json(const RootRatio& r);
// Accepts a number (integral), or a decimal string. kParse otherwise.
Integer integer_from_json(const Json& j);
// Accepts a number, "p/q", or a decimal string.
Rational rational_from_json(const Json& j);

Json to_json(const IntSet& s);
IntSet intset_from_json(const Json& j);

Json to_json(const LatticePoint& p);
LatticePoint point_from_json(const Json& j);

// {"left": [...], "right": [...], "edges": [[i, j], ...]}
Json to_json(const IntGraph& g);
IntGraph int_graph_from_json(const Json& j);
Json to_json(const LatticeGraph& g);
LatticeGraph lattice_graph_from_json(const Json& j);

// {"primes": [...], "vectors": [[...], ...], "source": [...]}
Json to_json(const LatticeSet& s);

// {"coefficients": [...], "slices": {"a": [...], ...}}
Json to_json(const SlicedFamily& f);
SlicedFamily family_from_json(const Json& j);

Json to_json(const ConclusionTable& t);
Json to_json(const FiberingDecomposition& d);
Json to_json(const FiberingTrace& t);

Json to_json(const PairValue& v);
Json to_json(const LogTriple& t);
Json to_json(const TreeResult& t);
// One row per level: level, nodes, each product with its bound and slack.
std::string tree_levels_csv(const TreeResult& t);

Json to_json(const ConstantsConfig& c);
ConstantsConfig constants_from_json(const Json& j);
Json to_json(const StrongPairConstants& k);
StrongPairConstants strong_constants_from_json(const Json& j);
Json to_json(const InductionConstants& k);
InductionConstants induction_constants_from_json(const Json& j);

// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

}  // namespace sumprod
