#include <doctest.h>

#include <cstdio>
#include <string>

#include "opchain/error.hpp"
#include "opchain/factorize.hpp"
#include "opchain/json_io.hpp"
#include "opchain/random_maps.hpp"

using namespace opchain;

namespace {

PiecewiseMap block_swap() {
  ChainModel m = ChainModel::min_max(0, 1);
  return make_generator(m, resolve_params(m, GeneratorParams{}));
}

}  // namespace

TEST_CASE("extended points and sets survive the string form") {
  for (const char* s : {"-inf", "+inf", "0", "5/3", "-7/2"}) {
    CHECK(to_json(ext_parse(s)).get<std::string>() == s);
  }
  ConvexSet set = ConvexSet::open_closed(Rational(1) / 3, 2);
  CHECK(set_from_json(to_json(set)) == set);
  ConvexSet ray = ConvexSet::make(ExtPoint::at(0), true, ExtPoint::pos_inf(), false);
  CHECK(set_from_json(to_json(ray)) == ray);
  Json bad = to_json(set);
  bad["hi_closed"] = "yes";
  CHECK_THROWS_AS(set_from_json(bad), Error);
}

TEST_CASE("models round-trip with their removed points") {
  for (const ChainModel& m :
       {ChainModel::min_max(-2, 7, {Rational(1) / 2, 3}),
        ChainModel::min_only(0, {5}), ChainModel::max_only(10),
        ChainModel::min_max(0, 1)}) {
    CHECK(model_from_json(to_json(m)) == m);
  }
  Json j = to_json(ChainModel::min_max(0, 1));
  j["kind"] = "circle";
  CHECK_THROWS_AS(model_from_json(j), Error);
  j.erase("kind");
  CHECK_THROWS_AS(model_from_json(j), Error);
}

TEST_CASE("atoms round-trip and the recorded image is cross-checked") {
  MapAtom c = MapAtom::constant(Rational(4) / 7);
  CHECK(atom_from_json(to_json(c)) == c);

  ConvexSet src = ConvexSet::closed_open(0, 1);
  MapAtom a = MapAtom::frac(2, 1, 0, 1, src);  // x -> 2x + 1
  Json j = to_json(a);
  CHECK(atom_from_json(j) == a);
  j["dst"]["hi"] = "17";  // forged image
  CHECK_THROWS_AS(atom_from_json(j), Error);
  Json no_kind = Json{{"p", "1"}};
  CHECK_THROWS_AS(atom_from_json(no_kind), Error);
}

TEST_CASE("maps round-trip through JSON including punctured carriers") {
  PiecewiseMap g = block_swap();
  CHECK(map_from_json(to_json(g)) == g);

  ChainModel mq = ChainModel::min_max(0, 1, {Rational(2) / 5});
  RandomMapOptions opts;
  opts.shape = IdealShape::gap;
  for (std::uint64_t seed : {1, 4, 9}) {
    PiecewiseMap f = random_op_map(mq, seed, opts);
    CHECK(map_from_json(to_json(f)) == f);
  }

  ChainModel mo = ChainModel::min_only(0);
  PiecewiseMap gs = make_generator(mo, resolve_params(mo, GeneratorParams{}));
  CHECK(map_from_json(to_json(gs)) == gs);

  // a structurally invalid map must not deserialize
  Json j = to_json(g);
  j["pieces"].erase(0);  // hole at the bottom of the carrier
  CHECK_THROWS_AS(map_from_json(j), Error);
}

TEST_CASE("witnesses round-trip with tags, params, and path intact") {
  PiecewiseMap g = block_swap();
  FactorizationWitness w = factor(g, GeneratorParams{});
  w.verified = true;
  FactorizationWitness back = witness_from_json(to_json(w));
  CHECK(back.input == w.input);
  CHECK(back.factors.size() == w.factors.size());
  for (size_t i = 0; i < w.factors.size(); ++i) {
    CHECK(back.factors[i].tag == w.factors[i].tag);
    CHECK(back.factors[i].map == w.factors[i].map);
  }
  CHECK(back.params.c == w.params.c);
  CHECK(back.params.rest == w.params.rest);
  CHECK(back.path == w.path);
  CHECK(back.verified);
  CHECK(verify_witness(back, 200, 11).ok());

  Json j = to_json(w);
  j["factors"][0]["tag"] = "Q";
  CHECK_THROWS_AS(witness_from_json(j), Error);
}

TEST_CASE("rest parameter appears only when set") {
  ResolvedParams p{1, 2, Rational(1) / 2, {}};
  Json j = to_json(p);
  CHECK_FALSE(j.contains("rest"));
  p.rest = Rational(9) / 4;
  Json j2 = to_json(p);
  CHECK(j2["rest"] == "9/4");
  ResolvedParams q = params_from_json(j2);
  CHECK(q.rest == Rational(9) / 4);
}

TEST_CASE("serialized text is byte-stable and parse errors are typed") {
  PiecewiseMap g = block_swap();
  std::string once = dump_json(to_json(g));
  std::string twice = dump_json(to_json(map_from_json(parse_json_text(once))));
  CHECK(once == twice);
  CHECK(once.back() == '\n');

  try {
    parse_json_text("{not json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}

TEST_CASE("classification summaries carry the decomposition") {
  Json j = classification_json(block_swap());
  CHECK(j["orientation_preserving"] == true);
  CHECK(j["order_preserving"] == false);
  CHECK(j["decomposition"] == "proper");
  CHECK(j["x1"]["lo"] == "0");
  CHECK(j["x1"]["hi"] == "1/3");
  CHECK(j["x1"]["hi_closed"] == false);
  CHECK(j["lemma_report"]["all_pass"] == true);

  ChainModel m = ChainModel::min_max(0, 1);
  Json ji = classification_json(identity_map(m));
  CHECK(ji["decomposition"] == "whole");
  CHECK_FALSE(ji.contains("lemma_report"));
  Json jc = classification_json(constant_map(m, Rational(1) / 2));
  CHECK(jc["decomposition"] == "constant");
  CHECK(jc["constant"] == true);
}

TEST_CASE("files round-trip on disk and missing files are reported") {
  std::string path = "json_io_test_tmp.json";
  PiecewiseMap g = block_swap();
  save_json_file(path, to_json(g));
  Json j = load_json_file(path);
  CHECK(map_from_json(j) == g);
  std::remove(path.c_str());

  try {
    load_json_file("does_not_exist_anywhere.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}
