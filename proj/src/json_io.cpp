#include "opchain/json_io.hpp"

#include <fstream>
#include <sstream>

#include "opchain/error.hpp"

namespace opchain {

namespace {

const Json& field(const Json& j, const char* key) {
  require(j.is_object(), Errc::parse_error, "expected a JSON object");
  auto it = j.find(key);
  require(it != j.end(), Errc::parse_error,
          std::string("missing field '") + key + "'");
  return *it;
}

std::string str_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  require(v.is_string(), Errc::parse_error,
          std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

bool bool_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  require(v.is_boolean(), Errc::parse_error,
          std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace

Json to_json(const ExtPoint& x) { return ext_to_string(x); }

Json to_json(const ConvexSet& s) {
  return Json{{"lo", ext_to_string(s.lo)},
              {"lo_closed", s.lo_closed},
              {"hi", ext_to_string(s.hi)},
              {"hi_closed", s.hi_closed}};
}

Json to_json(const ChainModel& m) {
  Json j;
  switch (m.kind) {
    case ChainModel::Kind::min_max:
      j["kind"] = "min_max";
      j["a"] = rat_to_string(m.a);
      j["b"] = rat_to_string(m.b);
      break;
    case ChainModel::Kind::min_only:
      j["kind"] = "min_only";
      j["a"] = rat_to_string(m.a);
      break;
    case ChainModel::Kind::max_only:
      j["kind"] = "max_only";
      j["b"] = rat_to_string(m.b);
      break;
  }
  Json cuts = Json::array();
  for (const Rational& q : m.cuts) cuts.push_back(rat_to_string(q));
  j["cuts"] = std::move(cuts);
  return j;
}

Json to_json(const MapAtom& a) {
  if (a.kind == MapAtom::Kind::constant)
    return Json{{"kind", "const"}, {"value", rat_to_string(a.value)}};
  return Json{{"kind", "frac"},       {"p", rat_to_string(a.p)},
              {"q", rat_to_string(a.q)}, {"r", rat_to_string(a.r)},
              {"s", rat_to_string(a.s)}, {"src", to_json(a.src)},
              {"dst", to_json(a.dst)}};
}

Json to_json(const PiecewiseMap& f) {
  Json pieces = Json::array();
  for (const Piece& p : f.pieces())
    pieces.push_back(Json{{"domain", to_json(p.domain)},
                          {"atom", to_json(p.atom)}});
  return Json{{"model", to_json(f.model())}, {"pieces", std::move(pieces)}};
}

Json to_json(const ResolvedParams& p) {
  Json j{{"c", rat_to_string(p.c)},
         {"d", rat_to_string(p.d)},
         {"c_prime", rat_to_string(p.c_prime)}};
  if (p.rest) j["rest"] = rat_to_string(*p.rest);
  return j;
}

Json to_json(const FactorizationWitness& w) {
  Json factors = Json::array();
  for (const Factor& f : w.factors)
    factors.push_back(
        Json{{"tag", f.tag == FactorTag::generator ? "G" : "O"},
             {"map", to_json(f.map)}});
  return Json{{"input", to_json(w.input)},
              {"factors", std::move(factors)},
              {"params", to_json(w.params)},
              {"path", w.path},
              {"verified", w.verified}};
}

Json to_json(const LemmaReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"name", e.name},
                           {"applicable", e.applicable},
                           {"pass", e.pass},
                           {"detail", e.detail}});
  return Json{{"entries", std::move(entries)}, {"all_pass", r.all_pass()}};
}

Json to_json(const VerifyReport& r) {
  return Json{{"composition_matches", r.composition_matches},
              {"order_factors_order_preserving",
               r.order_factors_order_preserving},
              {"generator_factors_match", r.generator_factors_match},
              {"generator_present_when_needed",
               r.generator_present_when_needed},
              {"ok", r.ok()},
              {"detail", r.detail}};
}

Json classification_json(const PiecewiseMap& f) {
  FindIdealResult dec = find_ideal(f);
  Json j;
  j["orientation_preserving"] = dec.is_orientation_preserving();
  j["order_preserving"] = is_order_preserving(f);
  j["constant"] = is_constant(f);
  switch (dec.kind) {
    case FindIdealResult::Kind::proper:
      j["decomposition"] = "proper";
      j["x1"] = to_json(dec.x1);
      j["x2"] = to_json(dec.x2);
      break;
    case FindIdealResult::Kind::whole:
      j["decomposition"] = "whole";
      break;
    case FindIdealResult::Kind::constant_map:
      j["decomposition"] = "constant";
      break;
    case FindIdealResult::Kind::not_op:
      j["decomposition"] = "none";
      break;
  }
  if (dec.kind == FindIdealResult::Kind::proper)
    j["lemma_report"] = to_json(check_lemma_predicates(f));
  return j;
}

Rational rat_from_json(const Json& j) {
  require(j.is_string(), Errc::parse_error, "rational must be a string");
  return rat_parse(j.get<std::string>());
}

ExtPoint ext_from_json(const Json& j) {
  require(j.is_string(), Errc::parse_error,
          "extended point must be a string");
  return ext_parse(j.get<std::string>());
}

ConvexSet set_from_json(const Json& j) {
  return ConvexSet::make(ext_parse(str_field(j, "lo")),
                         bool_field(j, "lo_closed"),
                         ext_parse(str_field(j, "hi")),
                         bool_field(j, "hi_closed"));
}

ChainModel model_from_json(const Json& j) {
  std::string kind = str_field(j, "kind");
  std::vector<Rational> cuts;
  if (j.contains("cuts")) {
    const Json& arr = field(j, "cuts");
    require(arr.is_array(), Errc::parse_error, "'cuts' must be an array");
    for (const Json& q : arr) cuts.push_back(rat_from_json(q));
  }
  if (kind == "min_max")
    return ChainModel::min_max(rat_parse(str_field(j, "a")),
                               rat_parse(str_field(j, "b")), std::move(cuts));
  if (kind == "min_only")
    return ChainModel::min_only(rat_parse(str_field(j, "a")),
                                std::move(cuts));
  if (kind == "max_only")
    return ChainModel::max_only(rat_parse(str_field(j, "b")),
                                std::move(cuts));
  fail(Errc::parse_error, "unknown model kind '" + kind + "'");
}

MapAtom atom_from_json(const Json& j) {
  std::string kind = str_field(j, "kind");
  if (kind == "const")
    return MapAtom::constant(rat_parse(str_field(j, "value")));
  if (kind == "frac") {
    MapAtom a = MapAtom::frac(
        rat_parse(str_field(j, "p")), rat_parse(str_field(j, "q")),
        rat_parse(str_field(j, "r")), rat_parse(str_field(j, "s")),
        set_from_json(field(j, "src")));
    if (j.contains("dst"))
      require(a.dst == set_from_json(field(j, "dst")), Errc::parse_error,
              "recorded image does not match the rule");
    return a;
  }
  fail(Errc::parse_error, "unknown atom kind '" + kind + "'");
}

PiecewiseMap map_from_json(const Json& j) {
  ChainModel model = model_from_json(field(j, "model"));
  const Json& arr = field(j, "pieces");
  require(arr.is_array(), Errc::parse_error, "'pieces' must be an array");
  std::vector<Piece> pieces;
  for (const Json& pj : arr)
    pieces.push_back(
        {set_from_json(field(pj, "domain")), atom_from_json(field(pj, "atom"))});
  return PiecewiseMap(std::move(model), std::move(pieces));
}

ResolvedParams params_from_json(const Json& j) {
  ResolvedParams p;
  p.c = rat_parse(str_field(j, "c"));
  p.d = rat_parse(str_field(j, "d"));
  p.c_prime = rat_parse(str_field(j, "c_prime"));
  if (j.contains("rest")) p.rest = rat_parse(str_field(j, "rest"));
  return p;
}

FactorizationWitness witness_from_json(const Json& j) {
  FactorizationWitness w;
  w.input = map_from_json(field(j, "input"));
  const Json& arr = field(j, "factors");
  require(arr.is_array(), Errc::parse_error, "'factors' must be an array");
  for (const Json& fj : arr) {
    std::string tag = str_field(fj, "tag");
    require(tag == "O" || tag == "G", Errc::parse_error,
            "factor tag must be 'O' or 'G'");
    w.factors.push_back(
        {tag == "G" ? FactorTag::generator : FactorTag::order_preserving,
         map_from_json(field(fj, "map"))});
  }
  w.params = params_from_json(field(j, "params"));
  if (j.contains("path")) w.path = str_field(j, "path");
  w.verified = bool_field(j, "verified");
  return w;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  require(!j.is_discarded(), Errc::parse_error, "malformed JSON");
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::parse_error, "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::parse_error, "cannot open file for write: " + path);
  out << dump_json(j);
  require(out.good(), Errc::parse_error, "write failed: " + path);
}

}  // namespace opchain
