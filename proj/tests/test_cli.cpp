#include <doctest.h>

#include <unistd.h>

#include "cli_support.hpp"
#include "support.hpp"

using namespace twodevp;
using testing::Workdir;

namespace {

std::string pair_args(const Workdir& w, const std::pair<CMatrix, CMatrix>& pc, const std::string& tag) {
  return "--a \"" + w.write_matrix(tag + "_a.json", pc.first) + "\" --c \"" +
         w.write_matrix(tag + "_c.json", pc.second) + "\"";
}

bool has_triple(const Json& report, double mu, double lambda, double tol) {
  for (const auto& t : report.at("triples")) {
    if (std::abs(t.at("mu").get<double>() - mu) <= tol && std::abs(t.at("lambda").get<double>() - lambda) <= tol) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("version and usage") {
  Workdir w("cli_version");
  const auto v = w.run("--version");
  CHECK(v.exit_code == 0);
  CHECK(v.out.find(TWODEVP_VERSION) != std::string::npos);
  CHECK(w.run("").exit_code == 2);
  CHECK(w.run("solve").exit_code == 2);
}

TEST_CASE("solve on the touching example") {
  Workdir w("cli_touch");
  const auto r = w.run("solve " + pair_args(w, testing::touching_pair(), "t"));
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  CHECK(has_triple(j, 1.0, 0.0, 1e-8));
  CHECK(j.at("tool_version") == TWODEVP_VERSION);
  CHECK(j.at("options_echo").at("grid_points") == 2000);
}

TEST_CASE("solve reports the line family") {
  Workdir w("cli_line");
  const auto r = w.run("solve " + pair_args(w, testing::line_family_pair(), "l") + " --out \"" + w.path("r.json") + "\"");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  const Json j = Json::parse(w.read("r.json"));
  CHECK(j.at("regularity").at("regular") == false);
  CHECK(j.at("regularity").at("witness_sigma").get<double>() == doctest::Approx(-1.0).epsilon(1e-10));
  REQUIRE(j.at("line_families").size() == 1);
  CHECK(j.at("line_families")[0].get<double>() == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("solve and solve2x2 agree") {
  Workdir w("cli_2x2");
  const std::string args = pair_args(w, testing::two_by_two(0.2), "s");
  const auto full = w.run("solve " + args);
  const auto closed = w.run("solve2x2 " + args);
  REQUIRE(full.exit_code == 0);
  REQUIRE(closed.exit_code == 0);
  const Json jf = Json::parse(full.out);
  const Json jc = Json::parse(closed.out);
  CHECK(jc.at("case") == "offdiag");
  for (const auto& t : jc.at("triples")) {
    CHECK(has_triple(jf, t.at("mu").get<double>(), t.at("lambda").get<double>(), 1e-8));
  }
  CHECK(jf.at("triples").size() == 2);
}

TEST_CASE("curves CSV") {
  Workdir w("cli_curves");
  const std::string args = pair_args(w, testing::two_by_two(0.2), "c");
  const auto r = w.run("curves " + args + " --from -3 --to 3 --points 601");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  const auto samples = read_curves_csv(in);
  REQUIRE(samples.size() == 601);
  double top_min = 1e300;
  for (const auto& s : samples) top_min = std::min(top_min, s.lambdas(0));
  CHECK(top_min == doctest::Approx(testing::kTwoByTwoTop).epsilon(1e-4));

  const auto two = w.run("curves " + args + " --from 0 --to 1 --points 2");
  CHECK(std::count(two.out.begin(), two.out.end(), '\n') == 3);
  CHECK(w.run("curves " + args + " --from 1 --to 0").exit_code == 2);
  CHECK(w.run("curves " + args + " --from 0 --to 1 --points 1").exit_code == 2);

  const auto line = w.run("curves " + pair_args(w, testing::line_family_pair(), "l") + " --from -2 --to 2 --points 5");
  std::istringstream lin(line.out);
  const auto ls = read_curves_csv(lin);
  bool constant = false;
  for (Index i = 0; i < 3; ++i) {
    bool all = true;
    for (const auto& s : ls) all = all && std::abs(s.lambdas(i) + 1.0) < 1e-12;
    constant = constant || all;
  }
  CHECK(constant);
}

TEST_CASE("exit codes") {
  Workdir w("cli_exit");
  const CMatrix a = testing::real_matrix({{1, 0}, {0, 2}});
  const CMatrix definite = testing::real_matrix({{1, 0}, {0, 2}});
  const auto r = w.run("solve " + pair_args(w, {a, definite}, "d"));
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("NotIndefinite") != std::string::npos);
  CHECK(r.out.empty());

  w.write("bad.json", "{\"rows\": [[1, 2], [3]]}");
  CHECK(w.run("solve --a \"" + w.path("bad.json") + "\" --c \"" + w.path("bad.json") + "\"").exit_code == 2);
  const CMatrix nonherm = testing::real_matrix({{1, 5}, {0, 1}});
  CHECK(w.run("solve " + pair_args(w, {nonherm, testing::real_matrix({{1, 0}, {0, -1}})}, "n")).exit_code == 2);
  CHECK(w.run("solve --a /nonexistent --c /nonexistent").exit_code == 2);
  CHECK(w.run("solve2x2 " + pair_args(w, testing::touching_pair(), "t")).exit_code == 2);

  const CMatrix unstable = testing::real_matrix({{1, 0}, {0, -1}});
  const auto u = w.run("dist2inst --ahat \"" + w.write_matrix("u.json", unstable) + "\"");
  CHECK(u.exit_code == 3);
  CHECK(u.err.find("NotStable") != std::string::npos);
}

TEST_CASE("bounds, regularity, verify, qcqp and dist2inst") {
  Workdir w("cli_misc");
  const std::string args = pair_args(w, testing::two_by_two(0.2), "b");
  const auto b = w.run("bounds " + args);
  REQUIRE(b.exit_code == 0);
  const Json jb = Json::parse(b.out);
  CHECK(jb.at("lambda_bounds").at("upper").get<double>() == doctest::Approx(testing::kTwoByTwoTop).epsilon(1e-10));
  CHECK(jb.at("mu_bound").at("source") == "closed_form");

  const auto g = w.run("regularity " + pair_args(w, testing::line_family_pair(), "r"));
  REQUIRE(g.exit_code == 0);
  CHECK(Json::parse(g.out).at("regular") == false);

  CVector e3 = CVector::Zero(3);
  e3(2) = 1.0;
  const std::string triple = w.write("triple.json", Json{{"mu", 1.0}, {"lambda", 0.0}, {"x", vector_to_json(e3)}}.dump());
  const auto v = w.run("verify " + pair_args(w, testing::touching_pair(), "v") + " --triple \"" + triple + "\"");
  REQUIRE(v.exit_code == 0);
  CHECK(Json::parse(v.out).at("certified") == true);

  const std::string d = w.write_matrix("diag.json", testing::real_matrix({{1, 0}, {0, 2}}));
  const auto q = w.run("qcqp --a \"" + d + "\" --b \"" + d + "\"");
  REQUIRE(q.exit_code == 0);
  const Json jq = Json::parse(q.out);
  CHECK(jq.at("case") == "caseA");
  CHECK(jq.at("value").get<double>() == doctest::Approx(1.0));

  const std::string eye = w.write_matrix("eye.json", CMatrix::Identity(2, 2));
  const auto qt = w.run("qcqp --t \"" + eye + "\" --p1 \"" + d + "\" --p2 \"" + d + "\"");
  REQUIRE(qt.exit_code == 0);
  CHECK(Json::parse(qt.out).at("value").get<double>() == doctest::Approx(1.0));

  const auto s = w.run("dist2inst --ahat \"" + w.write_matrix("neg.json", -CMatrix::Identity(2, 2)) + "\"");
  REQUIRE(s.exit_code == 0);
  CHECK(Json::parse(s.out).at("beta").get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Matrix Market input and the general-symmetry warning") {
  Workdir w("cli_mm");
  const std::string a = w.write("a.mtx",
                                "%%MatrixMarket matrix coordinate real general\n2 2 4\n"
                                "1 1 1\n1 2 0.2\n2 1 0.2\n2 2 1\n");
  const std::string c = w.write("c.mtx", "%%MatrixMarket matrix array real symmetric\n2 2\n0.2\n0\n-0.5\n");
  const auto r = w.run("solve2x2 --a \"" + a + "\" --c \"" + c + "\"");
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(Json::parse(r.out).at("triples").size() == 2);
}

TEST_CASE("identical inputs give identical bytes") {
  Workdir w("cli_det");
  testing::Rng rng(71);
  const CMatrix a = testing::random_hermitian(rng, 5);
  const CMatrix c = testing::random_indefinite(rng, 5);
  const std::string args = "solve " + pair_args(w, {a, c}, "x") + " --seed 99";
  const auto r1 = w.run(args);
  const auto r2 = w.run(args);
  const auto r3 = w.run(args, "TWODEVP_THREADS=3");
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out == r3.out);
  CHECK(w.run(args, "TWODEVP_THREADS=x").exit_code == 2);
}
