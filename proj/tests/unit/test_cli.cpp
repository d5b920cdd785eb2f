#include <random>

#include "doctest.h"
#include "elldiff/cli.hpp"
#include "elldiff/json_io.hpp"
#include "gen.hpp"

using namespace elldiff;
using namespace elldiff::io;

namespace {
CurveRef curve40() { return make_curve(Scalar(4), Scalar(0)); }

Node root(const json& j) { return {j, ""}; }

json request(const std::string& command, json payload) { return {{"command", command}, {"payload", std::move(payload)}}; }

PointC random_pointc(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-7, 7), den(1, 6), coin(0, 3);
  auto q = [&] {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
  };
  if (coin(rng) == 0) return PointC("g1", q() + 1, q(), q());
  return PointC(q(), q());
}
}  // namespace

TEST_CASE("scalar and series round trips") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    Scalar s = testgen::rand_scalar(rng, 9, true);
    CHECK(decode_scalar(root(encode(s))) == s);
    std::vector<Scalar> cs;
    for (int k = 0; k < 6; ++k) cs.push_back(testgen::rand_scalar(rng, 5, true));
    LaurentSeries f(-2, 4 + trial % 3, cs);
    CHECK(decode_series(root(encode(f))) == f);
  }
  LaurentSeries exact = LaurentSeries::monomial(Scalar(3), -1);
  CHECK(decode_series(root(encode(exact))) == exact);
  CHECK(decode_series(root(encode(LaurentSeries()))) == LaurentSeries());
  CHECK(decode_series(root(encode(LaurentSeries::zero(7)))) == LaurentSeries::zero(7));
  CHECK(decode_scalar(root(json("3/6"))) == Scalar(Rational(1, 2)));
}

TEST_CASE("function field and matrix round trips") {
  std::mt19937 rng(4);
  CurveRef c = curve40();
  for (int trial = 0; trial < 30; ++trial) {
    EllFn f = testgen::rand_ellfn(rng, c, 3, true);
    CHECK(decode_ellfn(root(encode(f)), c) == f);
  }
  EMat m(2, 2);
  m << EllFn::x(c), EllFn(Scalar(2), c), EllFn(Scalar(0), c), EllFn::y(c);
  DiffSystem s = DiffSystem::make(m, 3);
  DiffSystem back = decode_system(root(encode(s)), c);
  CHECK(back.scale == 3);
  CHECK(mat_equal<EllFn>(back.A, s.A));
  PointXY p(c, Scalar(0), Scalar(0));
  CHECK(decode_pointxy(root(encode(p)), c) == p);
  CHECK(decode_pointxy(root(encode(PointXY::infinity(c))), c).is_infinity());
}

TEST_CASE("divisor round trips") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    PointC p = random_pointc(rng);
    CHECK(decode_pointc(root(encode(p))) == p);
    PeriodicFn f(ScaleLattice(Rational(1 + trial % 3)));
    for (int k = 0; k < 4; ++k) f.add(random_pointc(rng), Rational(k - 2));
    PeriodicFn g = decode_periodic(root(encode(f)));
    CHECK(g.lattice() == f.lattice());
    CHECK(g.reps() == f.reps());
  }
}

TEST_CASE("schema errors carry JSON pointers") {
  auto code_and_ptr = [](const json& req) {
    cli::Outcome o = cli::dispatch(req);
    std::string ptr = o.response["result"].contains("pointer") ? o.response["result"]["pointer"].get<std::string>() : "";
    return std::make_pair(o.exit_code, ptr);
  };
  CHECK(code_and_ptr(json{{"command", "nope"}, {"payload", json::object()}}) == std::make_pair(2, std::string("/command")));
  CHECK(code_and_ptr(json{{"command", "gq"}}).second == "/");
  CHECK(code_and_ptr(request("gq", {{"g2", "4"}, {"g3", "0"}, {"q", "2"}})) == std::make_pair(2, std::string("/payload/q")));
  CHECK(code_and_ptr(request("gq", {{"g2", "4/0"}, {"g3", "0"}, {"q", 2}})) == std::make_pair(2, std::string("/payload/g2")));
  CHECK(code_and_ptr(request("gq", {{"g2", "4"}, {"g3", "0"}, {"q", 2}, {"extra", 1}})).second == "/payload");
  json bad_rep = request("descent", {{"q", 2}, {"alpha", {{"reps", json::array({{{"point", {{"v", json::array({"1/2"})}}}, {"val", "1"}}})}}}});
  CHECK(code_and_ptr(bad_rep) == std::make_pair(2, std::string("/payload/alpha/reps/0/point/v")));
  CHECK(cli::run_text("{not json").exit_code == 2);
}

TEST_CASE("domain errors exit with 1") {
  cli::Outcome o = cli::dispatch(request("gq", {{"g2", "3"}, {"g3", "1"}, {"q", 2}}));
  CHECK(o.exit_code == 1);
  CHECK(o.response["status"] == "error");
  o = cli::dispatch(request("numeval", {{"op", "eval"}, {"kind", "wp"}, {"w1", 1.0}, {"w2", {{"im", 1.0}}}, {"z", 0.0}}));
  CHECK(o.exit_code == 1);
}

TEST_CASE("command examples") {
  cli::Outcome pv = cli::dispatch(request("verify-pv-example", {{"g2", "4"}, {"g3", "0"}, {"q", 2}, {"p", 3}, {"order", 40}}));
  REQUIRE(pv.exit_code == 0);
  CHECK(pv.response["result"]["residual_zero"] == true);
  CHECK(pv.response["result"]["compatible"] == true);
  CHECK(pv.response["result"]["h"]["constant"] == true);

  json alpha{{"r", "1"}, {"reps", json::array({{{"point", {{"v", json::array({"0", "0"})}}}, {"val", "-2"}}})}};
  cli::Outcome d = cli::dispatch(request("descent", {{"alpha", alpha}, {"q", 2}}));
  CHECK(d.response["result"]["verdict"] == "psi_transcendental");
  CHECK(d.response["result"]["reason"] == "ord0");

  cli::Outcome s = cli::dispatch(request("series", {{"kind", "zeta"}, {"g2", "4"}, {"g3", "0"}, {"order", 10}}));
  LaurentSeries z = decode_series(root(s.response["result"]["series"]));
  CHECK(z.coeff(-1) == Scalar(1));
  CHECK(z.coeff(3) == Scalar(Rational(-1, 15)));

  cli::Options opts;
  opts.order = 12;
  cli::Outcome s12 = cli::dispatch(request("series", {{"kind", "wp"}, {"g2", "4"}, {"g3", "0"}}), opts);
  CHECK(s12.response["result"]["series"]["trunc"] == 12);

  cli::Outcome m = cli::dispatch(request("s-membership", {{"kind", "zeta"}, {"g2", "4"}, {"g3", "0"}}));
  CHECK(m.response["result"]["member"] == true);

  cli::Outcome n = cli::dispatch(request("numeval", {{"op", "eta"}, {"w1", 1.0}, {"w2", {{"re", 0.0}, {"im", 2.0}}}}));
  REQUIRE(n.exit_code == 0);
  CHECK(n.response["result"].contains("eta1"));
}

TEST_CASE("responses are deterministic") {
  json req = request("gq", {{"g2", "1"}, {"g3", "1"}, {"q", 3}});
  CHECK(cli::render(cli::dispatch(req).response) == cli::render(cli::dispatch(req).response));
}
