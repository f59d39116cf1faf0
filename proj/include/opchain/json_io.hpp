#pragma once

#include <string>

#include <json.hpp>

#include "opchain/classify.hpp"
#include "opchain/factorize.hpp"
#include "opchain/piecewise.hpp"

namespace opchain {

using Json = nlohmann::ordered_json;

// Scalars render as canonical strings ("p/q" or "p"; "-inf"/"+inf").
Json to_json(const ExtPoint& x);
Json to_json(const ConvexSet& s);
Json to_json(const ChainModel& m);
Json to_json(const MapAtom& a);
Json to_json(const PiecewiseMap& f);
Json to_json(const ResolvedParams& p);
Json to_json(const FactorizationWitness& w);
Json to_json(const LemmaReport& r);
Json to_json(const VerifyReport& r);
// Classification summary for one map.
Json classification_json(const PiecewiseMap& f);

Rational rat_from_json(const Json& j);
ExtPoint ext_from_json(const Json& j);
ConvexSet set_from_json(const Json& j);
ChainModel model_from_json(const Json& j);
MapAtom atom_from_json(const Json& j);
PiecewiseMap map_from_json(const Json& j);
ResolvedParams params_from_json(const Json& j);
FactorizationWitness witness_from_json(const Json& j);

// Two-space indent plus trailing newline: the byte-stable file form.
std::string dump_json(const Json& j);
Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace opchain
