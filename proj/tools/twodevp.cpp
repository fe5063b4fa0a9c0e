// twodevp: command-line front end for the two-parameter Hermitian eigenproblem
//   (A - mu C) x = lambda x,  x^H C x = 0,  x^H x = 1.
//
// Exit status: 0 success, 2 input error, 3 domain error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twodevp/apps.hpp"
#include "twodevp/eigencurve.hpp"
#include "twodevp/hermpair.hpp"
#include "twodevp/io.hpp"
#include "twodevp/solver.hpp"
#include "twodevp/solver2x2.hpp"

using namespace twodevp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::parse_error:
    case Errc::dimension_mismatch:
    case Errc::not_hermitian:
    case Errc::non_finite_parameter:
    case Errc::wrong_dimension:
    case Errc::invalid_options:
    case Errc::invalid_tolerances:
    case Errc::invalid_grid:
    case Errc::empty_grid:
    case Errc::zero_vector:
      return kExitInput;
    default:
      return kExitDomain;
  }
}

int env_threads() {
  const char* v = std::getenv("TWODEVP_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw Error(Errc::invalid_options, "TWODEVP_THREADS must be a non-negative integer");
  return static_cast<int>(n);
}

struct Emitter {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::parse_error, "cannot write " + path);
    out << text;
    if (!out) throw Error(Errc::parse_error, "failed writing " + path);
  }

  void json(const Json& j) const { write(j.dump(2) + "\n"); }
};

struct Common {
  std::string a_path;
  std::string c_path;
  std::string out;
  Tolerances tol;
  std::vector<std::string> warnings;

  HermitianPair load_pair() {
    const MatrixFile a = read_matrix_file(a_path);
    const MatrixFile c = read_matrix_file(c_path);
    return validate_pair(hermitian_input(a, warnings, "A"), hermitian_input(c, warnings, "C"), tol);
  }

  HermitianMatrix load_hermitian(const std::string& path, const std::string& label) {
    return HermitianMatrix::from(hermitian_input(read_matrix_file(path), warnings, label), tol);
  }

  void flush_warnings() {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    warnings.clear();
  }
};

void add_pair_options(CLI::App* cmd, Common& common) {
  cmd->add_option("--a", common.a_path, "Hermitian matrix A (JSON or Matrix Market)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--c", common.c_path, "Hermitian indefinite matrix C")->required()->check(CLI::ExistingFile);
}

void add_tolerance_options(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--cert-tol", tol.cert_tol, "certification threshold for all residuals");
  cmd->add_option("--cluster-tol", tol.cluster_tol, "eigenvalue gap rule for clusters (times 1+||A||)");
  cmd->add_option("--zero-tol", tol.zero_tol, "vanishing slope threshold (times max(1,||C||))");
}

Json tolerances_json(const Tolerances& t) {
  return Json{{"herm_tol", t.herm_tol}, {"indef_tol", t.indef_tol}, {"eig_tol", t.eig_tol},
              {"cert_tol", t.cert_tol}, {"cluster_tol", t.cluster_tol}, {"zero_tol", t.zero_tol}};
}

Json solve_options_json(const SolveOptions& o) {
  Json j{{"grid_points", o.grid_points},
         {"refine_tol", o.refine_tol},
         {"max_bisect", o.max_bisect},
         {"seed", o.seed},
         {"mu_box", nullptr}};
  if (o.mu_box) j["mu_box"] = Json::array({o.mu_box->first, o.mu_box->second});
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-parameter Hermitian eigenvalue problems: eigencurves, 2D-eigentriples, bounds, "
               "distance to instability and minimax Rayleigh quotients."};
  app.set_version_flag("--version", std::string("twodevp ") + TWODEVP_VERSION);
  app.require_subcommand(1);

  Common common;
  SolveOptions sopts;
  std::vector<double> box;

  // curves
  double from = -1.0, to = 1.0;
  int points = 201;
  auto* curves = app.add_subcommand("curves", "sample the sorted eigencurves to CSV");
  add_pair_options(curves, common);
  curves->add_option("--from", from, "first mu")->required();
  curves->add_option("--to", to, "last mu")->required();
  curves->add_option("--points", points, "number of grid points (>= 2)")->default_val(201);
  curves->add_option("--out", common.out, "CSV output (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "find 2D-eigentriples, bounds and regularity");
  add_pair_options(solve, common);
  add_tolerance_options(solve, common.tol);
  solve->add_option("--grid", sopts.grid_points, "interior scan grid points")->default_val(2000);
  solve->add_option("--tol", sopts.refine_tol, "mu resolution of the refinements")->default_val(1e-12);
  solve->add_option("--seed", sopts.seed, "seed for the regularity probe");
  solve->add_option("--mu-box", box, "search interval override LO HI")->expected(2);
  solve->add_option("--out", common.out, "JSON report (default stdout)");

  auto* s2 = app.add_subcommand("solve2x2", "closed-form solution of a 2x2 problem");
  add_pair_options(s2, common);
  s2->add_option("--out", common.out, "JSON output (default stdout)");

  auto* bounds = app.add_subcommand("bounds", "mu bound and lambda interval of all 2D-eigenvalues");
  add_pair_options(bounds, common);
  add_tolerance_options(bounds, common.tol);
  bounds->add_option("--out", common.out, "JSON output (default stdout)");

  auto* regularity = app.add_subcommand("regularity", "finiteness test and horizontal-line levels");
  add_pair_options(regularity, common);
  add_tolerance_options(regularity, common.tol);
  regularity->add_option("--seed", sopts.seed, "seed for the probe");
  regularity->add_option("--out", common.out, "JSON output (default stdout)");

  AppOptions aopts;
  std::string ahat_path;
  auto* dist = app.add_subcommand("dist2inst", "distance to instability of a stable matrix");
  dist->add_option("--ahat", ahat_path, "square complex matrix")->required()->check(CLI::ExistingFile);
  dist->add_option("--grid", aopts.grid_points, "coarse sweep points")->default_val(4001);
  dist->add_option("--out", common.out, "JSON output (default stdout)");

  std::string b_path, t_path, p1_path, p2_path;
  auto* qcqp = app.add_subcommand("qcqp", "min over x of max{rho_A(x), rho_B(x)}");
  auto* qa = qcqp->add_option("--a", common.a_path, "Hermitian A")->check(CLI::ExistingFile);
  auto* qb = qcqp->add_option("--b", b_path, "Hermitian B")->check(CLI::ExistingFile);
  auto* qt = qcqp->add_option("--t", t_path, "positive definite T")->check(CLI::ExistingFile);
  auto* qp1 = qcqp->add_option("--p1", p1_path, "Hermitian P1")->check(CLI::ExistingFile);
  auto* qp2 = qcqp->add_option("--p2", p2_path, "Hermitian P2")->check(CLI::ExistingFile);
  qa->needs(qb);
  qb->needs(qa);
  qt->needs(qp1)->needs(qp2);
  qa->excludes(qt);
  qcqp->add_option("--out", common.out, "JSON output (default stdout)");

  std::string triple_path;
  auto* verify = app.add_subcommand("verify", "certify a given (mu, lambda, x)");
  add_pair_options(verify, common);
  add_tolerance_options(verify, common.tol);
  verify->add_option("--triple", triple_path, "JSON object with mu, lambda, x")->required()->check(CLI::ExistingFile);
  verify->add_option("--out", common.out, "JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const int threads = env_threads();
    sopts.threads = threads;
    aopts.threads = threads;
    const Emitter emit{common.out};

    if (curves->parsed()) {
      if (!(from < to)) throw Error(Errc::invalid_grid, "--from must be smaller than --to");
      if (points < 2) throw Error(Errc::invalid_grid, "--points must be at least 2");
      const HermitianPair pair = common.load_pair();
      common.flush_warnings();
      std::vector<double> grid(static_cast<std::size_t>(points));
      for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = from + (to - from) * k / (points - 1);
      grid.back() = to;
      std::ostringstream csv;
      write_curves_csv(csv, sample_curves(pair, grid, threads));
      emit.write(csv.str());
      return kExitOk;
    }

    if (solve->parsed()) {
      if (!box.empty()) sopts.mu_box = std::pair{box[0], box[1]};
      common.tol.validate();
      const HermitianPair pair = common.load_pair();
      common.flush_warnings();
      const SolveReport report = find_all(pair, sopts);
      Json j = to_json(report);
      j["tool_version"] = TWODEVP_VERSION;
      j["options_echo"] = solve_options_json(sopts);
      j["options_echo"]["tolerances"] = tolerances_json(common.tol);
      emit.json(j);
      if (report.triples.empty() && report.line_families.empty()) {
        std::cerr << "error: no certified 2D-eigentriple found\n";
        return kExitDomain;
      }
      return kExitOk;
    }

    if (s2->parsed()) {
      const HermitianPair pair = common.load_pair();
      common.flush_warnings();
      Json j = to_json(solve_2x2(pair));
      j["tool_version"] = TWODEVP_VERSION;
      emit.json(j);
      return kExitOk;
    }

    if (bounds->parsed()) {
      common.tol.validate();
      const HermitianPair pair = common.load_pair();
      common.flush_warnings();
      Json j{{"mu_bound", to_json(mu_bound(pair, sopts))},
             {"lambda_bounds", to_json(lambda_bounds(pair, sopts))},
             {"tool_version", TWODEVP_VERSION}};
      emit.json(j);
      return kExitOk;
    }

    if (regularity->parsed()) {
      common.tol.validate();
      const HermitianPair pair = common.load_pair();
      common.flush_warnings();
      Json j = to_json(regularity_probe(pair, sopts));
      j["tool_version"] = TWODEVP_VERSION;
      emit.json(j);
      return kExitOk;
    }

    if (dist->parsed()) {
      const MatrixFile ahat = read_matrix_file(ahat_path);
      Json j = to_json(distance_to_instability(ahat.matrix, aopts));
      j["tool_version"] = TWODEVP_VERSION;
      emit.json(j);
      return kExitOk;
    }

    if (qcqp->parsed()) {
      HermitianMatrix a, b;
      if (!t_path.empty()) {
        const HermitianMatrix t = common.load_hermitian(t_path, "T");
        const HermitianMatrix p1 = common.load_hermitian(p1_path, "P1");
        const HermitianMatrix p2 = common.load_hermitian(p2_path, "P2");
        std::tie(a, b) = qcqp_from_constraints(t, p1, p2, common.tol);
      } else if (!common.a_path.empty()) {
        a = common.load_hermitian(common.a_path, "A");
        b = common.load_hermitian(b_path, "B");
      } else {
        throw Error(Errc::invalid_options, "qcqp needs --a/--b or --t/--p1/--p2");
      }
      common.flush_warnings();
      Json j = to_json(qcqp_minimax(a, b, aopts));
      j["tool_version"] = TWODEVP_VERSION;
      emit.json(j);
      return kExitOk;
    }

    if (verify->parsed()) {
      common.tol.validate();
      const HermitianPair pair = common.load_pair();
      common.flush_warnings();
      std::ifstream in(triple_path);
      Json tj;
      try {
        tj = Json::parse(in);
      } catch (const Json::exception& e) {
        throw Error(Errc::parse_error, triple_path + ": invalid JSON: " + e.what());
      }
      const TwoDEigentriple given = triple_from_json(tj);
      if (given.x.size() != pair.dim()) throw Error(Errc::dimension_mismatch, "x has the wrong length");
      Json j = to_json(certify(pair, given.mu, given.lambda, given.x));
      j["tool_version"] = TWODEVP_VERSION;
      emit.json(j);
      return kExitOk;
    }
  } catch (const Error& e) {
    common.flush_warnings();
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitInput;
}
