#include <fstream>
#include <sstream>

#include "autofile.hpp"
#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "polyaut/random.hpp"

using namespace polyaut;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  Run r = run(std::move(args));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return json::parse(r.out);
}

Scalar random_coef(const FieldSpec& f, Rng& rng) {
  if (f.kind() != FieldKind::Cyclotomic8) return random_scalar(f, rng, -1000, 1000);
  // a0 + a1 z + a2 z^2 + a3 z^3 with rational a_i
  Scalar s = Scalar::zero(f), zk = Scalar::one(f);
  for (int k = 0; k < 4; ++k, zk = zk * Scalar::zeta(f))
    s = s + zk * random_scalar(f, rng, -9, 9) / random_nonzero_scalar(f, rng, 1, 7);
  return s;
}

Endo random_endo(const FieldSpec& f, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
  std::vector<MPoly> comps;
  for (std::size_t i = 0; i < n; ++i) {
    MPoly p = random_poly(f, n, static_cast<int>(rng.uniform(0, 5)), static_cast<int>(rng.uniform(0, 6)), rng);
    // rescale coefficients so fractions and large values show up
    std::vector<MPoly::Term> terms;
    for (const auto& [m, c] : p.terms()) terms.emplace_back(m, c * random_coef(f, rng));
    comps.push_back(MPoly::from_terms(f, n, std::move(terms)));
  }
  return Endo(std::move(comps));
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = "cli_test_" + name + ".json";
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("AutoFile round trip") {
  Rng rng(77);
  const std::vector<FieldSpec> fields{FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(7919),
                                      FieldSpec::cyclotomic8()};
  for (int i = 0; i < 500; ++i) {
    const FieldSpec& f = fields[i % fields.size()];
    Endo e = random_endo(f, rng);
    std::string text = cli::serialize_autofile(e);
    Endo back = cli::parse_autofile(text);
    CHECK(back == e);
    CHECK(back.field() == f);
    CHECK(cli::serialize_autofile(back) == text);
  }
}

TEST_CASE("AutoFile schema errors") {
  auto reason = [](const std::string& text) {
    try {
      cli::parse_autofile(text);
    } catch (const Error& e) {
      return e.reason();
    }
    return Reason::PropertyViolation;
  };
  CHECK(reason("{") == Reason::ParseError);
  CHECK(reason(R"({"schema_version":2,"field":"q","n":1,"components":[[]]})") == Reason::ParseError);
  CHECK(reason(R"({"schema_version":1,"field":"q","n":2,"components":[[]]})") == Reason::ParseError);
  CHECK(reason(R"({"schema_version":1,"field":"q","n":1,"components":[[{"coef":1,"exp":[1]}]]})") ==
        Reason::ParseError);
  CHECK(reason(R"({"schema_version":1,"field":"q","n":1,"components":[[{"coef":"1","exp":[1,0]}]]})") ==
        Reason::ParseError);
  // duplicate monomials are summed and a zero sum disappears
  Endo e = cli::parse_autofile(
      R"({"schema_version":1,"field":"q","n":1,"components":[[{"coef":"1","exp":[1]},{"coef":"-1","exp":[1]}]]})");
  CHECK(e[0].is_zero());
}

TEST_CASE("certify and invert") {
  json j = run_json({"certify", "-e", "x + y^2; y"});
  CHECK(j["automorphism"] == true);
  CHECK(cli::autofile_from_json(j["inverse"]) == Endo::parse(FieldSpec::rationals(), 2, {"x - y^2", "y"}));

  Run r = run({"certify", "-e", "x^2; y"});
  CHECK(r.code == cli::kExitRejected);
  CHECK(json::parse(r.out)["reason"] == "JacobianNotConstant");

  Run p = run({"--pretty", "invert", "-e", "x + y^2; y"});
  CHECK(p.code == 0);
  CHECK(p.out == "(-y^2 + x, y)\n");

  // file input and composition with the inverse
  std::string a = write_temp("a", cli::serialize_autofile(Endo::parse(FieldSpec::prime(5), 3, {"x + y*z", "y + z^3", "z"})));
  std::string inv = write_temp("inv", run({"invert", a}).out);
  CHECK(cli::parse_autofile(run({"compose", a, inv}).out).is_identity());
}

TEST_CASE("obstruction file has affine length 5") {
  Run ob = run({"obstruct", "--poly", "y^5 + y^4"});
  REQUIRE(ob.code == 0);
  std::string path = write_temp("f", ob.out);
  json len = run_json({"length", path});
  CHECK(len["affine_length"] == 5);
  CHECK(run_json({"mdeg", path})["multidegree"] == json::array({5, 5, 5, 5}));
  // f is an involution, hence elliptic
  CHECK(run_json({"classify", path})["kind"] == "TriangularizableElliptic");
  CHECK(run_json({"not-member", path, "--poly", "y^5 + y^4"})["verdict"] == "Unknown");

  Run bad = run({"obstruct", "--poly", "y^2"});
  CHECK(bad.code == cli::kExitRejected);
  CHECK(json::parse(bad.out)["error"]["reason"] == "NotWeaklyGeneral");
}

TEST_CASE("nagata") {
  Endo f = cli::parse_autofile(run({"nagata", "--t", "1"}).out);
  Endo expected = Endo::parse(FieldSpec::rationals(), 3,
                              {"x - 2*y*(x*z + y^2) - z*(x*z + y^2)^2", "y + z*(x*z + y^2)", "z"});
  CHECK(f == expected);
  Endo g = cli::parse_autofile(run({"nagata", "--t", "1/3"}).out);
  CHECK(g == Endo::parse(FieldSpec::rationals(), 3,
                         {"x - 2/3*y*(x*z + y^2) - 1/9*z*(x*z + y^2)^2", "y + 1/3*z*(x*z + y^2)", "z"}));
}

TEST_CASE("seeded commands are reproducible") {
  const std::vector<std::vector<std::string>> cmds{
      {"--seed", "9", "--trials", "40", "sample", "--poly", "y^5 + y^4"},
      {"--seed", "9", "--trials", "40", "--threads", "3", "sample", "--poly", "y^5 + y^4"},
      {"--seed", "9", "--trials", "30", "--field", "fp:5", "tri-identities", "--n", "3"},
  };
  for (const auto& c : cmds) {
    Run a = run(c), b = run(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  // thread count does not change the sample
  CHECK(run(cmds[0]).out == run(cmds[1]).out);
  CHECK(run({"--seed", "10", "--trials", "40", "sample", "--poly", "y^5 + y^4"}).out != run(cmds[0]).out);
  // global options may also follow the subcommand
  CHECK(run({"sample", "--poly", "y^5 + y^4", "--seed", "9", "--trials", "40"}).out == run(cmds[0]).out);
}

TEST_CASE("group commands") {
  json d = run_json({"derived-series", "--group", "2O"});
  CHECK(d["orders"] == json::array({48, 24, 8, 2, 1}));
  CHECK(d["length"] == 4);
  CHECK(run_json({"affine-ext", "--group", "2O"})["derived_length"] == 5);
  CHECK(run_json({"affine-ext", "--group", "trivial"})["derived_length"] == 1);

  std::string g = write_temp(
      "g", R"({"schema_version":1,"field":"fp:5","dim":2,"generators":[[["2","0"],["0","3"]],[["0","1"],["4","0"]]]})");
  CHECK(run_json({"derived-series", "--group", g})["orders"] == json::array({8, 2, 1}));
}

TEST_CASE("plane commands") {
  CHECK(run_json({"in-mr", "-e", "y; x + y^3", "--r", "3"})["in_Mr"] == true);
  json nf = run_json({"normal-form", "-e", "x + y^2; y + (x + y^2)^2"});
  CHECK(nf["affine_length"] == 2);
  json fac = run_json({"factor", "-e", "y; -x + y^2"});
  CHECK(fac["affine_length"] == 1);

  Endo mv = cli::parse_autofile(run({"move", "--sources", "0,0;1,0", "--targets", "1,1;2,3"}).out);
  auto q = [](long long v) { return Scalar::from_int(FieldSpec::rationals(), v); };
  CHECK(mv.evaluate(std::vector{q(0), q(0)}) == std::vector{q(1), q(1)});
  CHECK(mv.evaluate(std::vector{q(1), q(0)}) == std::vector{q(2), q(3)});

  Endo sl = cli::parse_autofile(run({"scaling-limit", "-e", "2*x + y^2; x + y + x*y", "--weights", "1,1"}).out);
  CHECK(sl == Endo::parse(FieldSpec::rationals(), 2, {"2*x", "x + y"}));

  json wg = run_json({"--field", "fp:3", "wg-check", "--poly", "y^3"});
  CHECK(wg["method"] == "exhaustive");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({"certify", "-e", "x +* y; y"}).code == cli::kExitUsage);
  CHECK(run({"certify", "no_such_file.json"}).code == cli::kExitUsage);
  CHECK(run({"--field", "fp:4", "certify", "-e", "x; y"}).code == cli::kExitUsage);
  CHECK(run({"compose", "-e", "x; y"}).code == cli::kExitUsage);
  CHECK(run({"length", "-e", "x; y; z"}).code == cli::kExitUsage);
  CHECK(run({"derived-series", "--group", "nope"}).code == cli::kExitUsage);
  CHECK(run({"certify", "-e", "x^2; y"}).code == cli::kExitRejected);
  CHECK(run({"wg-check", "--poly", "y"}).code == cli::kExitRejected);
}
