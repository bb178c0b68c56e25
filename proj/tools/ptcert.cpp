// Copyright 2026 The ptcert authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "ptcert/certifier.hpp"
#include "ptcert/oracle.hpp"
#include "ptcert/sos.hpp"
#include "ptcert/version.hpp"
#include "ptcert/zuk.hpp"

namespace {

using namespace ptcert;

struct CommonOptions {
  std::string group_path;
  std::string mu_spec = "uniform";
  long radius = 2;
  std::string kappa = "max";
  double tol = 1e-9;
  std::string denom_cap = "1000000";
  std::string out_path = "certificate.json";
  long ball_cap = 20000;
  long threads = 1;
  long group_cap = 512;
  std::string lambda_hat;
  std::string cert_path;
  std::string width = "1/128";
};

Measure load_measure(const GroupPtr& group, const std::string& mu_spec) {
  if (mu_spec == "uniform") return Measure::uniform(group);
  std::ifstream in(mu_spec);
  if (!in) throw MalformedError("cannot open measure file '" + mu_spec + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw MalformedError(std::string("measure parse error: ") + e.what());
  }
  return Measure::from_json(group, j);
}

nlohmann::json config_echo(const std::string& subcommand, const CommonOptions& opt,
                           const std::string& digest) {
  return nlohmann::json{{"subcommand", subcommand}, {"group", opt.group_path},
                        {"mu", opt.mu_spec},        {"radius", opt.radius},
                        {"kappa", opt.kappa},       {"tol", opt.tol},
                        {"denom_cap", opt.denom_cap}, {"out", opt.out_path},
                        {"ball_cap", opt.ball_cap}, {"threads", opt.threads},
                        {"spec_digest", digest},
                        {"tool", std::string("ptcert ") + kPtcertVersion}};
}

int run_ball(const CommonOptions& opt) {
  const GroupPtr group = Group::load(opt.group_path);
  const Measure mu = load_measure(group, opt.mu_spec);
  std::cout << config_echo("ball", opt, group->digest()).dump() << "\n";
  const Ball ball = enumerate_ball(*group, mu.support(), opt.radius,
                                   {.max_elements = opt.ball_cap,
                                    .build_pair_table = false});
  std::cout << "ball radius " << ball.radius << ": " << ball.size() << " elements"
            << (ball.saturated ? " (saturated)" : "") << "\n";
  std::cout << "ordering digest: " << ball_ordering_digest(*group, ball) << "\n";
  for (long i = 0; i < ball.size(); ++i) {
    std::cout << i << "\t" << ball.lengths[i] << "\t"
              << group->element_string(ball.elements[i]) << "\n";
  }
  return 0;
}

int run_certify(const CommonOptions& opt) {
  const GroupPtr group = Group::load(opt.group_path);
  const Measure mu = load_measure(group, opt.mu_spec);
  const nlohmann::json echo = config_echo("certify", opt, group->digest());
  std::cout << echo.dump() << "\n";

  const Ball ball = enumerate_ball(*group, mu.support(), opt.radius,
                                   {.max_elements = opt.ball_cap});
  auto geometry = build_geometry(group, ball);
  SolveOptions solve_options;
  solve_options.tol = opt.tol;

  Rational kappa_input;
  Eigen::MatrixXd gram;
  SolveStats stats;
  if (opt.kappa == "max") {
    MaximizeOptions mopt;
    mopt.solve = solve_options;
    const MaximizeResult best =
        maximize_kappa(geometry, mu, mopt,
                       [](const std::string& line) { std::cout << line << "\n"; });
    std::cout << "kappa_best = " << rational_to_string(best.kappa_best) << " ("
              << rational_to_double(best.kappa_best) << ")\n";
    kappa_input = best.kappa_best;
    gram = best.gram;
    stats = best.stats;
  } else {
    kappa_input = parse_rational(opt.kappa);
    const SolveResult result =
        solve_feasibility(build_problem(geometry, mu, kappa_input), solve_options);
    if (!result.feasible) {
      std::cout << "no certificate found at radius " << opt.radius
                << " for kappa = " << opt.kappa << " (" << result.stats.stop_reason
                << "; affine residual " << result.stats.affine_residual << ")\n";
      std::cout << "this is not a refutation; try a larger radius\n";
      return 1;
    }
    gram = result.gram;
    stats = result.stats;
  }

  nlohmann::json meta{{"config", echo},
                      {"solver_iterations", stats.iterations},
                      {"solver_affine_residual", stats.affine_residual},
                      {"solver_min_eigenvalue", stats.min_eigenvalue},
                      {"solver_stop", stats.stop_reason}};
  CertifyOptions copt;
  copt.denom_cap = Int(opt.denom_cap);
  copt.ball_cap = opt.ball_cap;
  const CertifyOutcome outcome =
      certify(group, mu, ball, kappa_input, gram, meta, copt);

  std::cout << "solver: iterations=" << stats.iterations
            << " affine_residual=" << stats.affine_residual
            << " min_eigenvalue=" << stats.min_eigenvalue << "\n";
  std::cout << "kappa_input = " << rational_to_string(kappa_input) << "\n";
  std::cout << "residual_bound B = " << rational_to_string(outcome.residual_bound_value)
            << "\n";
  std::cout << "kappa_certified = " << rational_to_string(outcome.kappa_certified)
            << " (" << rational_to_double(outcome.kappa_certified) << ")\n";
  if (!outcome.accepted) {
    std::cout << outcome.message << "\n";
    return 1;
  }
  outcome.certificate.save_file(opt.out_path);
  std::cout << "certificate written to " << opt.out_path << "\n";
  return 0;
}

int run_zuk(const CommonOptions& opt) {
  const GroupPtr group = Group::load(opt.group_path);
  std::cout << config_echo("zuk", opt, group->digest()).dump() << "\n";
  const LinkGraph link = build_link(group, group->generators());
  std::cout << "link: " << link.vertices.size() << " vertices, " << link.edge_count
            << " ordered edges, " << (link.connected ? "connected" : "DISCONNECTED")
            << "\n";
  for (std::size_t i = 0; i < link.vertices.size(); ++i) {
    std::cout << "  " << group->element_string(link.vertices[i])
              << "  degree " << link.degree[i];
    if (link.mu) {
      std::cout << "  mu " << rational_to_string(link.mu->weight(link.vertices[i]));
    }
    std::cout << "\n";
  }
  for (const auto& [i, j] : link.edges) {
    std::cout << "  edge (" << group->element_string(link.vertices[i]) << ", "
              << group->element_string(link.vertices[j]) << ")\n";
  }

  std::optional<Rational> lambda_hat;
  if (!opt.lambda_hat.empty()) lambda_hat = parse_rational(opt.lambda_hat);
  CertifyOptions copt;
  copt.denom_cap = Int(opt.denom_cap);
  copt.ball_cap = opt.ball_cap;
  const ZukOutcome outcome = zuk_certificate(link, lambda_hat, copt);
  std::cout << "lambda_hat = " << rational_to_string(outcome.lambda_hat)
            << " (PSD check passed)\n";
  std::cout << "kappa_certified = " << rational_to_string(outcome.certified.kappa_certified)
            << "\n";
  outcome.certified.certificate.save_file(opt.out_path);
  std::cout << "certificate written to " << opt.out_path << "\n";
  return 0;
}

int run_verify(const CommonOptions& opt) {
  const GroupSpec spec = GroupSpec::load_file(opt.group_path);
  const Certificate cert = Certificate::load_file(opt.cert_path);
  const VerifyReport report = verify(cert, spec, {.ball_cap = opt.ball_cap});
  for (const auto& check : report.passed) std::cout << "ok: " << check << "\n";
  if (report.accepted) {
    std::cout << "ACCEPT kappa_certified = " << rational_to_string(cert.kappa_certified)
              << "\n";
  } else {
    std::cout << "REJECT: " << report.failure << "\n";
  }
  return report.exit_code;
}

int run_oracle_gap(const CommonOptions& opt) {
  const GroupPtr group = Group::load(opt.group_path);
  const Measure mu = load_measure(group, opt.mu_spec);
  std::cout << config_echo("oracle-gap", opt, group->digest()).dump() << "\n";
  const GapBracket bracket =
      spectral_gap_exact(group, mu, opt.group_cap, parse_rational(opt.width));
  std::cout << "gap in [" << rational_to_string(bracket.lower) << ", "
            << rational_to_string(bracket.upper) << "], float estimate "
            << bracket.estimate << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("ptcert ") + kPtcertVersion +
               " - exact spectral-gap certificates in group algebras"};
  app.require_subcommand(1);
  CommonOptions opt;

  auto add_common = [&](CLI::App* cmd, bool needs_mu = true) {
    cmd->add_option("--group", opt.group_path, "group spec file")->required();
    if (needs_mu) cmd->add_option("--mu", opt.mu_spec, "'uniform' or a measure file");
    cmd->add_option("--ball-cap", opt.ball_cap, "ball size cap");
    cmd->add_option("--threads", opt.threads, "thread count recorded in run metadata");
  };

  CLI::App* ball = app.add_subcommand("ball", "enumerate a Cayley ball");
  add_common(ball);
  ball->add_option("--radius", opt.radius, "ball radius");

  CLI::App* certify = app.add_subcommand("certify", "search for and emit a certificate");
  add_common(certify);
  certify->add_option("--radius", opt.radius, "witness support radius");
  certify->add_option("--kappa", opt.kappa, "rational p/q or 'max'");
  certify->add_option("--tol", opt.tol, "solver tolerance");
  certify->add_option("--denom-cap", opt.denom_cap, "rounding denominator cap");
  certify->add_option("--out", opt.out_path, "certificate output path");

  CLI::App* zuk = app.add_subcommand("zuk", "link-graph certificate");
  add_common(zuk, false);
  zuk->add_option("--lambda-hat", opt.lambda_hat, "rational spectral-gap lower bound");
  zuk->add_option("--denom-cap", opt.denom_cap, "denominator cap for lambda_hat search");
  zuk->add_option("--out", opt.out_path, "certificate output path");

  CLI::App* verify = app.add_subcommand("verify", "verify a certificate file");
  add_common(verify, false);
  verify->add_option("--cert", opt.cert_path, "certificate file")->required();

  CLI::App* oracle = app.add_subcommand("oracle-gap", "exact spectral gap (finite groups)");
  add_common(oracle);
  oracle->add_option("--group-cap", opt.group_cap, "finite group order cap");
  oracle->add_option("--width", opt.width, "bracket width (rational)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(ball)) return run_ball(opt);
    if (app.got_subcommand(certify)) return run_certify(opt);
    if (app.got_subcommand(zuk)) return run_zuk(opt);
    if (app.got_subcommand(verify)) return run_verify(opt);
    if (app.got_subcommand(oracle)) return run_oracle_gap(opt);
  } catch (const InfeasibleError& e) {
    std::cerr << "no certificate: " << e.what() << "\n";
    return 1;
  } catch (const MalformedError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
