// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "vgrass/analytic.hpp"
#include "vgrass/fred.hpp"
#include "vgrass/stab.hpp"
#include "vgrass/suites.hpp"

using namespace vgrass;

namespace {

enum class Level { Quiet, Info, Debug };

Level log_level() {
  const char* v = std::getenv("GRASS_LOG");
  std::string s = v ? v : "info";
  if (s == "quiet" || s == "0" || s == "error") return Level::Quiet;
  if (s == "debug" || s == "2") return Level::Debug;
  return Level::Info;
}

void log(Level at, const std::string& msg) {
  if (log_level() >= at) std::cerr << msg << "\n";
}

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Matrix convert(const Matrix& m, const std::string& ring) {
  if (ring.empty()) return m;
  Ring r = ring_from_name(ring);
  if (r == m.ring()) return m;
  if (r.kind() == RingKind::FloatTol) return to_float(m, r.tolerance());
  if (m.ring().kind() != RingKind::Integers && m.ring().kind() != RingKind::Rationals)
    throw Usage("--ring can only lift integer or rational input");
  return lift_matrix(m, r);
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int cases) {
  SuiteReport rep;
  try {
    rep = run_suite(suite, seed, cases);
  } catch (const std::invalid_argument& e) {
    throw Usage(e.what());
  }
  for (const FamilyReport& f : rep.families) {
    log(Level::Info, f.name + ": " + std::to_string(f.checks) + " checks, " + std::to_string(f.failures.size()) +
                         " failures, " + std::to_string(f.seconds) + " s");
    for (const CaseFailure& c : f.failures)
      log(Level::Debug, "  seed " + std::to_string(c.seed) + " " + c.construction + ": " + c.detail);
  }
  std::cout << report_to_json(rep).dump(2) << "\n";
  return rep.passed() ? 0 : 1;
}

int cmd_index(const std::string& psi_path, const std::string& phi_path, const std::string& psi2_path,
              const std::string& phi2_path, const std::string& variant, const std::string& ring) {
  if (variant != "raw" && variant != "reduced") throw Usage("--variant must be raw or reduced");
  FredholmPair fp = FredholmPair::make(convert(matrix_from_json(read_json_file(psi_path)), ring),
                                       convert(matrix_from_json(read_json_file(phi_path)), ring));
  Json out;
  if (!psi2_path.empty() || !phi2_path.empty()) {
    if (psi2_path.empty() || phi2_path.empty()) throw Usage("--psi2 and --phi2 go together");
    FredholmPair fp2 = FredholmPair::make(convert(matrix_from_json(read_json_file(psi2_path)), ring),
                                          convert(matrix_from_json(read_json_file(phi2_path)), ring));
    fp = fred_tensor_left(fp, fp2, variant == "raw" ? TensorVariant::Raw : TensorVariant::Reduced);
    out["tensor"] = variant;
  }
  Matrix f = fredholm_F(fp);
  Matrix one0 = Matrix::identity(fp.omega0(), fp.ring()), one1 = Matrix::identity(fp.omega1(), fp.ring());
  IdempotentPair ind = index_F(fp);
  out["chi"] = scalar_to_json(chi(ind));
  out["involution_check"] = equal(f * f, Matrix::identity(f.rows(), f.ring()));
  out["residual_support"] = {{"one_minus_phi_psi", (one0 - fp.phi * fp.psi).fin().size()},
                             {"one_minus_psi_phi", (one1 - fp.psi * fp.phi).fin().size()}};
  log(Level::Info, "chi(Ind_F) = " + chi(ind).to_string());
  if (log_level() >= Level::Debug) out["index"] = pair_to_json(ind);
  std::cout << out.dump(2) << "\n";
  return out["involution_check"].get<bool>() ? 0 : 1;
}

int cmd_regularize(const std::string& input, const std::string& ring) {
  Json j = read_json_file(input);
  Matrix b = convert(matrix_from_json(j.at("b")), ring), a = convert(matrix_from_json(j.at("a")), ring);
  IndexSet space = shape_from_json(j.at("space"));
  IdempotentPair p(b.with_shape(space, space), a.with_shape(space, space));
  IdempotentPair r = regularize_pair(p);
  log(Level::Info, "regularized on " + r.space.to_string());
  std::cout << pair_to_json(r).dump(2) << "\n";
  return 0;
}

int cmd_reduce(const std::string& input, double eps) {
  Json j = read_json_file(input);
  Matrix p = to_float(matrix_from_json(j.at("b"))), pattern = to_float(matrix_from_json(j.at("a")));
  Reduction red = finite_reduce(p, pattern, eps);
  Json out = {{"p_eps", matrix_to_json(red.p_eps)},
              {"connector", morphism_to_json(red.conj)},
              {"dropped", red.dropped},
              {"support_radius", red.support_radius},
              {"bound", red.bound},
              {"residual", red.residual}};
  log(Level::Info, "dropped " + std::to_string(red.dropped) + " entries, residual " + std::to_string(red.residual));
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_demo(const std::string& name) {
  if (name != "qu1") throw Usage("unknown demo \"" + name + "\" (available: qu1)");
  Qu1Demo d = demo_qu1();
  std::cout << d.text << "\n";
  return d.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual Grassmannian toolkit: identity suites, indices, regularization, reduction"};
  app.require_subcommand(1);

  std::string suite = "all", input, psi, phi, psi2, phi2, variant = "raw", ring, demo;
  std::uint64_t seed = 1;
  int cases = 25;
  double eps = 1e-3;

  auto* verify = app.add_subcommand("verify", "run identity suites");
  verify->add_option("--suite", suite, "all | grassmann | regular | stab | analytic | fredholm");
  verify->add_option("--seed", seed, "base seed; case i uses seed ^ i");
  verify->add_option("--cases", cases, "cases per family")->check(CLI::PositiveNumber);

  auto* index = app.add_subcommand("index", "index of a Fredholm pair");
  index->add_option("--psi", psi, "operator matrix (JSON)")->required();
  index->add_option("--phi", phi, "parametrix matrix (JSON)")->required();
  index->add_option("--psi2", psi2, "second factor for a left tensor product");
  index->add_option("--phi2", phi2, "parametrix of the second factor");
  index->add_option("--variant", variant, "tensor form: raw | reduced");
  index->add_option("--ring", ring, "lift inputs into Z, Q, trig or float[:tol]");

  auto* regularize = app.add_subcommand("regularize", "regularize an idempotent pair");
  regularize->add_option("--input", input, "pair (JSON)")->required();
  regularize->add_option("--ring", ring, "lift inputs into Z, Q, trig or float[:tol]");

  auto* reduce = app.add_subcommand("reduce", "finite reduction of <P, pattern>");
  reduce->add_option("--input", input, "pair with b = P and a = pattern (JSON)")->required();
  reduce->add_option("--eps", eps, "entries of P - pattern below this are dropped");

  auto* demo_cmd = app.add_subcommand("demo", "worked examples");
  demo_cmd->add_option("name", demo, "qu1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(suite, seed, cases);
    if (*index) return cmd_index(psi, phi, psi2, phi2, variant, ring);
    if (*regularize) return cmd_regularize(input, ring);
    if (*reduce) return cmd_reduce(input, eps);
    if (*demo_cmd) return cmd_demo(demo);
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
