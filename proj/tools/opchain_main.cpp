// Command-line front end: classify piecewise maps on dense chains, produce
// and check factorization witnesses, generate seeded random maps, and run the
// finite cross-check suite.
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "opchain/classify.hpp"
#include "opchain/error.hpp"
#include "opchain/factorize.hpp"
#include "opchain/finite_oracle.hpp"
#include "opchain/json_io.hpp"
#include "opchain/piecewise.hpp"
#include "opchain/random_maps.hpp"

namespace {

using namespace opchain;

// Exit-code contract: 0 success, 2 bad input (parse/params/too-large/
// unsupported), 3 input not orientation-preserving, 4 verification failure.
int exit_code_for(Errc code) {
  switch (code) {
    case Errc::not_orientation_preserving:
      return 3;
    case Errc::verification_failed:
      return 4;
    default:
      return 2;
  }
}

Rational rat_flag(const std::string& text, const char* flag) {
  try {
    return rat_parse(text);
  } catch (const Error&) {
    fail(Errc::parse_error,
         std::string(flag) + ": not a rational number: '" + text + "'");
  }
}

struct ClassifyOpts {
  std::string in;
  std::string out;  // optional JSON report
};

int run_classify(const ClassifyOpts& o) {
  PiecewiseMap f = map_from_json(load_json_file(o.in));
  FindIdealResult dec = find_ideal(f);
  switch (dec.kind) {
    case FindIdealResult::Kind::whole:
      std::cout << "O; ideal = X\n";
      break;
    case FindIdealResult::Kind::constant_map:
      std::cout << "O; constant map (every nonempty ideal is admissible)\n";
      break;
    case FindIdealResult::Kind::not_op:
      std::cout << "neither; no admissible two-block decomposition\n";
      break;
    case FindIdealResult::Kind::proper: {
      std::cout << "OP, not O; ideal " << set_to_string(dec.x1) << "\n";
      std::cout << "complement " << set_to_string(dec.x2) << "\n";
      LemmaReport rep = check_lemma_predicates(f);
      for (const auto& e : rep.entries) {
        if (!e.applicable)
          std::cout << "  n/a   " << e.name << "\n";
        else
          std::cout << (e.pass ? "  pass  " : "  FAIL  ") << e.name << ": "
                    << e.detail << "\n";
      }
      std::cout << (rep.all_pass() ? "lemma predicates: all pass\n"
                                   : "lemma predicates: FAILURES\n");
      break;
    }
  }
  if (!o.out.empty()) {
    save_json_file(o.out, classification_json(f));
    std::cout << "wrote report " << o.out << "\n";
  }
  return 0;
}

struct FactorizeOpts {
  std::string in;
  std::string out;
  std::string c, d, c_prime, rest;  // optional rational overrides
  int samples = 10000;
  std::uint64_t seed = 0;
};

GeneratorParams params_from(const FactorizeOpts& o) {
  GeneratorParams gp;
  if (!o.c.empty()) gp.c = rat_flag(o.c, "--c");
  if (!o.d.empty()) gp.d = rat_flag(o.d, "--d");
  if (!o.c_prime.empty()) gp.c_prime = rat_flag(o.c_prime, "--c-prime");
  if (!o.rest.empty()) gp.rest = rat_flag(o.rest, "--rest");
  return gp;
}

int run_factorize(const FactorizeOpts& o) {
  PiecewiseMap f = map_from_json(load_json_file(o.in));
  FactorizationWitness w = factor(f, params_from(o));
  VerifyReport rep = verify_witness(w, o.samples, o.seed);
  if (!rep.ok()) {
    std::cerr << "internal verification failed: " << rep.detail << "\n";
    return 4;
  }
  w.verified = true;
  save_json_file(o.out, to_json(w));
  std::cout << "verified witness: " << w.factors.size() << " factors via "
            << w.path << " -> " << o.out << "\n";
  return 0;
}

struct VerifyOpts {
  std::string in;
  int samples = 10000;
  std::uint64_t seed = 0;
};

int run_verify(const VerifyOpts& o) {
  FactorizationWitness w = witness_from_json(load_json_file(o.in));
  VerifyReport rep = verify_witness(w, o.samples, o.seed);
  auto line = [](const char* name, bool ok) {
    std::cout << (ok ? "  pass  " : "  FAIL  ") << name << "\n";
  };
  line("composition equals input", rep.composition_matches);
  line("order-preserving tags hold", rep.order_factors_order_preserving);
  line("generator tags match canonical generator",
       rep.generator_factors_match);
  line("generator present exactly when needed",
       rep.generator_present_when_needed);
  if (!rep.ok()) {
    std::cerr << "verification failed: " << rep.detail << "\n";
    return 4;
  }
  std::cout << "witness verified\n";
  return 0;
}

struct RandomOpts {
  std::string model = "min_max";
  std::string a = "0";
  std::string b = "1";
  std::string cut;
  std::string shape = "half_open";
  bool unbounded_low_image = false;
  std::uint64_t seed = 1;
  std::string out;
};

int run_random(const RandomOpts& o) {
  ChainModel model = ChainModel::min_max(0, 1);
  if (o.model == "min_max") {
    Rational a = rat_flag(o.a, "--a"), b = rat_flag(o.b, "--b");
    require(a < b, Errc::bad_params, "--a must be less than --b");
    model = ChainModel::min_max(a, b);
  } else if (o.model == "min_only") {
    model = ChainModel::min_only(rat_flag(o.a, "--a"));
  } else if (o.model == "max_only") {
    model = ChainModel::max_only(rat_flag(o.b, "--b"));
  } else {
    fail(Errc::parse_error,
         "--model must be min_max, min_only or max_only, got '" + o.model +
             "'");
  }

  RandomMapOptions opts;
  if (o.shape == "whole")
    opts.shape = IdealShape::whole;
  else if (o.shape == "half_open")
    opts.shape = IdealShape::half_open;
  else if (o.shape == "closed")
    opts.shape = IdealShape::closed;
  else if (o.shape == "gap")
    opts.shape = IdealShape::gap;
  else
    fail(Errc::parse_error,
         "--shape must be whole, half_open, closed or gap, got '" + o.shape +
             "'");
  opts.unbounded_low_image = o.unbounded_low_image;

  if (!o.cut.empty()) {
    require(model.kind == ChainModel::Kind::min_max, Errc::bad_params,
            "--cut needs a min_max model");
    Rational q = rat_flag(o.cut, "--cut");
    require(model.a < q && q < model.b, Errc::bad_params,
            "--cut must lie strictly between --a and --b");
    model.cuts.push_back(q);
  }
  require((opts.shape == IdealShape::gap) == !o.cut.empty(), Errc::bad_params,
          "--shape gap and --cut must be used together");

  PiecewiseMap f = random_op_map(model, o.seed, opts);
  save_json_file(o.out, to_json(f));
  std::cout << "wrote map (" << f.size() << " pieces) -> " << o.out << "\n";
  return 0;
}

struct GeneratorOpts {
  std::string model = "min_max";
  std::string a = "0";
  std::string b = "1";
  std::string c, d, c_prime;
  std::string out;
};

int run_generator(const GeneratorOpts& o) {
  ChainModel model = ChainModel::min_max(0, 1);
  if (o.model == "min_max") {
    Rational a = rat_flag(o.a, "--a"), b = rat_flag(o.b, "--b");
    require(a < b, Errc::bad_params, "--a must be less than --b");
    model = ChainModel::min_max(a, b);
  } else if (o.model == "min_only") {
    model = ChainModel::min_only(rat_flag(o.a, "--a"));
  } else if (o.model == "max_only") {
    model = ChainModel::max_only(rat_flag(o.b, "--b"));
  } else {
    fail(Errc::parse_error,
         "--model must be min_max, min_only or max_only, got '" + o.model +
             "'");
  }
  GeneratorParams gp;
  if (!o.c.empty()) gp.c = rat_flag(o.c, "--c");
  if (!o.d.empty()) gp.d = rat_flag(o.d, "--d");
  if (!o.c_prime.empty()) gp.c_prime = rat_flag(o.c_prime, "--c-prime");
  PiecewiseMap g = make_generator(model, resolve_params(model, gp));
  save_json_file(o.out, to_json(g));
  std::cout << "wrote generator (" << g.size() << " pieces) -> " << o.out
            << "\n";
  return 0;
}

struct OracleOpts {
  int n_max = 0;
  std::string out;  // CSV path; stdout when empty
};

std::string image_digits(const finite::FiniteMap& m) {
  std::string s;
  for (std::uint8_t v : m.img) s += static_cast<char>('0' + v);
  return s;
}

int run_oracle(const OracleOpts& o) {
  require(o.n_max >= 1 && o.n_max <= 7, Errc::too_large,
          "--n-max must be between 1 and 7");
  std::ostringstream csv;
  csv << "n,order_preserving_count,orientation_preserving_count,"
         "closure_of_o_is_o,o_is_proper_subset,"
         "single_extra_generator_suffices,witness_generator\n";
  for (int n = 1; n <= o.n_max; ++n) {
    finite::RankCheck rc = finite::relative_rank_check(n);
    csv << rc.n << ',' << rc.order_preserving_count << ','
        << rc.orientation_preserving_count << ','
        << (rc.closure_of_o_is_o ? "true" : "false") << ','
        << (rc.o_is_proper_subset ? "true" : "false") << ','
        << (rc.single_extra_generator_suffices ? "true" : "false") << ','
        << (rc.single_extra_generator_suffices ? image_digits(rc.witness_generator)
                                               : std::string())
        << '\n';
  }
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    require(f.good(), Errc::parse_error, "cannot open file for write: " + o.out);
    f << csv.str();
    require(f.good(), Errc::parse_error, "write failed: " + o.out);
    std::cout << "wrote oracle report -> " << o.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact toolkit for orientation-preserving piecewise maps on dense "
      "chains"};
  app.require_subcommand(1);

  ClassifyOpts co;
  CLI::App* classify = app.add_subcommand(
      "classify", "decide O/OP membership and report the ideal");
  classify->add_option("--in", co.in, "piecewise map JSON file")->required();
  classify->add_option("--out", co.out, "write a JSON report here");

  FactorizeOpts fo;
  CLI::App* factorize = app.add_subcommand(
      "factorize",
      "decompose an orientation-preserving map and write a verified witness");
  factorize->add_option("--in", fo.in, "piecewise map JSON file")->required();
  factorize->add_option("--out", fo.out, "witness JSON output path")
      ->required();
  factorize->add_option("--c", fo.c, "generator block boundary c");
  factorize->add_option("--d", fo.d, "generator image boundary d");
  factorize->add_option("--c-prime", fo.c_prime,
                        "auxiliary squeeze target c'");
  factorize->add_option("--rest", fo.rest,
                        "resting value for the bounded-image collapse");
  factorize->add_option("--samples", fo.samples,
                        "verification samples per gap budget");
  factorize->add_option("--seed", fo.seed, "verification sampling seed");

  VerifyOpts vo;
  CLI::App* verify = app.add_subcommand(
      "verify", "re-check a factorization witness file");
  verify->add_option("--in", vo.in, "witness JSON file")->required();
  verify->add_option("--samples", vo.samples, "samples per gap budget");
  verify->add_option("--seed", vo.seed, "sampling seed");

  RandomOpts ro;
  CLI::App* random = app.add_subcommand(
      "random", "generate a seeded random orientation-preserving map");
  random->add_option("--model", ro.model, "min_max | min_only | max_only");
  random->add_option("--a", ro.a, "left endpoint (min_max, min_only)");
  random->add_option("--b", ro.b, "right endpoint (min_max, max_only)");
  random->add_option("--cut", ro.cut,
                     "remove this interior point from a min_max carrier");
  random->add_option("--shape", ro.shape,
                     "ideal shape: whole | half_open | closed | gap");
  random->add_flag("--unbounded-low-image", ro.unbounded_low_image,
                   "min_only: let the low block's values be unbounded");
  random->add_option("--seed", ro.seed, "generation seed");
  random->add_option("--out", ro.out, "map JSON output path")->required();

  GeneratorOpts go;
  CLI::App* generator = app.add_subcommand(
      "generator", "write the distinguished block-swap map for a model");
  generator->add_option("--model", go.model, "min_max | min_only | max_only");
  generator->add_option("--a", go.a, "left endpoint (min_max, min_only)");
  generator->add_option("--b", go.b, "right endpoint (min_max, max_only)");
  generator->add_option("--c", go.c, "block boundary c");
  generator->add_option("--d", go.d, "image boundary d (min_max)");
  generator->add_option("--c-prime", go.c_prime, "auxiliary squeeze target");
  generator->add_option("--out", go.out, "map JSON output path")->required();

  OracleOpts oo;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "finite-chain enumeration and rank cross-check (CSV)");
  oracle->add_option("--n-max", oo.n_max, "largest chain size, at most 7")
      ->required();
  oracle->add_option("--out", oo.out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) return run_classify(co);
    if (factorize->parsed()) return run_factorize(fo);
    if (verify->parsed()) return run_verify(vo);
    if (random->parsed()) return run_random(ro);
    if (generator->parsed()) return run_generator(go);
    if (oracle->parsed()) return run_oracle(oo);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
