// Command-line front end: solve, verify and bench.

#include "mlfg/bench.hpp"
#include "mlfg/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kNotConverged = 1, kNotCertified = 2, kInputError = 3 };

// Any failure that maps to exit code 3.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GameSource {
  std::string data;
  int dataset = 0;

  void add_to(CLI::App* cmd) {
    auto* data_opt = cmd->add_option("--data", data, "game JSON file");
    auto* set_opt = cmd->add_option("--dataset", dataset, "bundled data set")
                        ->check(CLI::IsMember({1, 2}));
    data_opt->excludes(set_opt);
  }

  mlfg::Game load() const {
    if (data.empty() && dataset == 0) throw InputError("one of --data or --dataset is required");
    return mlfg::Game(data.empty() ? mlfg::builtin_dataset(dataset) : mlfg::load_game(data));
  }
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

void print_certificate(const mlfg::Certificate& cert) {
  const mlfg::NashCheck& nash = cert.nash;
  for (std::size_t nu = 0; nu < nash.gaps.size(); ++nu) {
    std::printf("leader %zu nash gap %.3e\n", nu, nash.gaps[nu]);
  }
  std::printf("nash: max gap %.3e, tol %.1e, %s\n", nash.max_gap, nash.tol,
              nash.certified ? "certified" : "FAILED");
  const mlfg::SStationarityCertificate& s = cert.s_stationarity;
  const mlfg::SStationarityResiduals& r = s.residuals;
  std::printf("s-stationarity residuals: stat %.2e feas %.2e sign %.2e slack %.2e "
              "compl %.2e g1 %.2e g2 %.2e biactive %.2e\n",
              r.stationarity, r.feasibility, r.multiplier_sign, r.complementary_slack,
              r.complementarity, r.gamma1_slack, r.gamma2_slack, r.biactive_sign);
  std::printf("s-stationarity: max %.3e, tol %.1e, %s\n", r.max(), s.tol,
              s.certified ? "certified" : "FAILED");
}

// solve ---------------------------------------------------------------------

struct SolveArgs {
  GameSource source;
  std::string method = "newton";
  double eps0 = 1.6;
  double gamma = 0.5;
  double eps_min = 1e-6;
  double tol = 1e-10;
  std::string taylor = "on";
  int p = 2;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string log;
};

int cmd_solve(const SolveArgs& args) {
  const mlfg::Game game = args.source.load();
  mlfg::HomotopyConfig cfg;
  cfg.method = mlfg::parse_inner_method(args.method);
  cfg.eps0 = args.eps0;
  cfg.gamma = args.gamma;
  cfg.eps_min = args.eps_min;
  cfg.taylor = args.taylor == "on";
  cfg.p = args.p;
  cfg.newton.tol = args.tol;
  cfg.subgradient.tol = args.tol;
  cfg.check();

  const mlfg::PrimalDualPoint z0 =
      args.seed ? mlfg::random_initial_point(game, *args.seed)
                : mlfg::PrimalDualPoint{mlfg::Vector::Zero(game.n()), mlfg::Vector::Zero(game.m_bar())};
  const mlfg::HomotopyTrace trace = mlfg::homotopy_solve(game, z0, cfg);

  std::printf("%5s %12s %6s %12s %12s\n", "stage", "eps", "iters", "merit", "wall_ms");
  for (const mlfg::StageRecord& s : trace.stages) {
    std::printf("%5d %12.5e %6d %12.4e %12.4f\n", s.index, s.eps, s.inner.iterations,
                s.inner.merit, s.wall_ms);
  }

  std::optional<mlfg::Certificate> cert;
  std::optional<mlfg::CertificationTolerance> tol;
  if (trace.completed) {
    tol = mlfg::certification_tolerance(game, trace.final_point(), trace.final_eps(), args.tol,
                                          1e-5, 1e-6, cfg.p);
    cert = mlfg::certify(game, trace.final_point(), trace.final_eps(), *tol, cfg.p);
  }

  if (!args.out.empty()) {
    const json report = mlfg::solve_report(game, cfg, z0, trace, cert ? &*cert : nullptr,
                                           tol ? &*tol : nullptr);
    open_output(args.out) << report.dump(2) << '\n';
  }
  if (!args.log.empty()) {
    std::ofstream log = open_output(args.log);
    log << mlfg::kIterationCsvHeader << '\n';
    mlfg::write_iteration_rows(log, trace, cfg);
  }

  if (!trace.completed) {
    std::fprintf(stderr, "error: %s\n", trace.message.c_str());
    return kNotConverged;
  }
  std::printf("x* =");
  for (Eigen::Index i = 0; i < trace.final_point().x.size(); ++i) {
    std::printf(" %.10g", trace.final_point().x(i));
  }
  std::printf("\n");
  print_certificate(*cert);
  return cert->certified() ? kOk : kNotCertified;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  GameSource source;
  std::string x_path;
  double tol = 1e-5;
  double sstat_tol = 1e-6;
  std::optional<double> eps;
  std::optional<double> inner_tol;
  int p = 2;
};

struct Candidate {
  mlfg::Vector x;
  std::optional<mlfg::Vector> lambda;
  std::optional<double> eps_final;
  std::optional<double> inner_tol;
};

Candidate read_candidate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read candidate file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Candidate c;
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_array()) {
    c.x = mlfg::vector_from_json(doc);
  } else if (doc.is_object()) {
    if (!doc.contains("x")) throw InputError("candidate object has no \"x\" field");
    c.x = mlfg::vector_from_json(doc.at("x"));
    if (doc.contains("lambda")) c.lambda = mlfg::vector_from_json(doc.at("lambda"));
    if (doc.contains("eps_final")) c.eps_final = doc.at("eps_final").get<double>();
    if (doc.contains("config")) {
      const mlfg::HomotopyConfig cfg = mlfg::homotopy_config_from_json(doc.at("config"));
      c.inner_tol = cfg.method == mlfg::InnerMethod::Newton ? cfg.newton.tol : cfg.subgradient.tol;
    }
  } else {
    // Plain list of numbers separated by whitespace or commas.
    std::string cleaned = text;
    for (char& ch : cleaned) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream nums(cleaned);
    std::vector<double> values;
    std::string token;
    while (nums >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw InputError("candidate file is not JSON and has non-numeric token '" + token + "'");
      }
    }
    c.x = Eigen::Map<const mlfg::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  }
  return c;
}

int cmd_verify(const VerifyArgs& args) {
  const mlfg::Game game = args.source.load();
  const Candidate c = read_candidate(args.x_path);
  if (c.x.size() != game.n()) {
    throw InputError("candidate has " + std::to_string(c.x.size()) + " entries, game has n = " +
                     std::to_string(game.n()));
  }
  if (c.lambda && c.lambda->size() != game.m_bar()) {
    throw InputError("candidate lambda has wrong length");
  }
  const double eps = args.eps.value_or(c.eps_final.value_or(1e-6));
  const double inner_tol = args.inner_tol.value_or(c.inner_tol.value_or(1e-10));
  mlfg::Smoothing{eps, args.p}.check();

  const mlfg::PrimalDualPoint z{c.x, c.lambda ? *c.lambda : mlfg::estimate_multipliers(game, c.x, eps, args.p)};
  const mlfg::CertificationTolerance tol =
      mlfg::certification_tolerance(game, z, eps, inner_tol, args.tol, args.sstat_tol, args.p);
  const mlfg::Certificate cert = mlfg::certify(game, z, eps, tol, args.p);
  print_certificate(cert);
  return cert.certified() ? kOk : kNotCertified;
}

// bench ---------------------------------------------------------------------

struct BenchArgs {
  GameSource source;
  int repeats = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int cmd_bench(const BenchArgs& args) {
  const mlfg::Game game = args.source.load();
  if (args.repeats < 1) throw InputError("--repeats must be >= 1");
  mlfg::BenchConfig cfg;
  cfg.repeats = args.repeats;
  cfg.seed = args.seed;
  const mlfg::BenchResult result = mlfg::run_bench(game, cfg);

  const fs::path dir(args.out_dir);
  {
    std::ofstream out = open_output(dir / "bench.csv");
    out << mlfg::kBenchCsvHeader << '\n';
    for (const mlfg::BenchRun& run : result.runs) mlfg::write_bench_rows(out, run.trace, run.cfg);
  }
  {
    std::ofstream out = open_output(dir / "iterations.csv");
    out << mlfg::kIterationCsvHeader << '\n';
    for (const mlfg::BenchRun& run : result.runs) {
      if (run.repeat == 0) mlfg::write_iteration_rows(out, run.trace, run.cfg);
    }
  }
  {
    // Error decay and Taylor update of the first leader variable (Newton, predictor on).
    std::ofstream out = open_output(dir / "error.csv");
    out << "stage,eps,error,x1_star,x1_warm_start\n";
    const mlfg::HomotopyTrace& trace = result.runs.front().trace;
    if (trace.completed) {
      for (const mlfg::StageRecord& s : trace.stages) {
        out << s.index << ',' << mlfg::format_double(s.eps) << ','
            << mlfg::format_double((s.z_star.x - trace.final_point().x).norm()) << ','
            << mlfg::format_double(s.z_star.x(0)) << ',' << mlfg::format_double(s.warm_start.x(0))
            << '\n';
      }
    }
  }
  {
    std::ofstream out = open_output(dir / "multistart.csv");
    out << "start,inner_iter,merit\n";
    const mlfg::MultistartResult& ms = result.multistart;
    for (std::size_t k = 0; k < ms.runs.size(); ++k) {
      out << k << ",0," << mlfg::format_double(ms.runs[k].initial_merit) << '\n';
      for (std::size_t i = 0; i < ms.runs[k].history.size(); ++i) {
        out << k << ',' << i + 1 << ',' << mlfg::format_double(ms.runs[k].history[i].merit) << '\n';
      }
    }
  }

  std::printf("%-12s %-6s %7s %12s %10s\n", "method", "taylor", "repeat", "mean_iters", "wall_ms");
  for (const mlfg::BenchRun& run : result.runs) {
    int iters = 0;
    double ms = 0.0;
    for (const mlfg::StageRecord& s : run.trace.stages) {
      iters += s.inner.iterations;
      ms += s.wall_ms;
    }
    const double mean = run.trace.stages.empty() ? 0.0 : double(iters) / run.trace.stages.size();
    std::printf("%-12s %-6s %7d %12.3f %10.3f%s\n", mlfg::to_string(run.cfg.method).c_str(),
                run.cfg.taylor ? "on" : "off", run.repeat, mean, ms,
                run.trace.completed ? "" : "  (did not complete)");
  }
  std::printf("multistart at eps=%g: %zu starts, max pairwise distance %.3e\n",
              result.multistart.eps, result.multistart.runs.size(),
              result.multistart.max_pairwise_distance);
  std::printf("wrote bench.csv, iterations.csv, error.csv, multistart.csv to %s\n",
              dir.string().c_str());
  return result.ok ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for quadratic multi-leader-follower games"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "homotopy solve with certification");
  solve.source.add_to(solve_cmd);
  solve_cmd->add_option("--method", solve.method)->check(CLI::IsMember({"newton", "subgradient"}));
  solve_cmd->add_option("--eps0", solve.eps0);
  solve_cmd->add_option("--gamma", solve.gamma);
  solve_cmd->add_option("--eps-min", solve.eps_min);
  solve_cmd->add_option("--tol", solve.tol, "inner merit tolerance");
  solve_cmd->add_option("--taylor", solve.taylor)->check(CLI::IsMember({"on", "off"}));
  solve_cmd->add_option("--p", solve.p, "smoothing exponent (even)");
  solve_cmd->add_option("--seed", solve.seed, "random start in [-1, 1] instead of zero");
  solve_cmd->add_option("--out", solve.out, "report JSON");
  solve_cmd->add_option("--log", solve.log, "iteration CSV");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "certify a candidate equilibrium");
  verify.source.add_to(verify_cmd);
  verify_cmd->add_option("--x", verify.x_path, "JSON array, solve report, or plain numbers")
      ->required();
  verify_cmd->add_option("--tol", verify.tol, "Nash gap tolerance");
  verify_cmd->add_option("--sstat-tol", verify.sstat_tol, "S-stationarity tolerance");
  verify_cmd->add_option("--eps", verify.eps, "smoothing level the candidate came from");
  verify_cmd->add_option("--inner-tol", verify.inner_tol, "merit tolerance the candidate met");
  verify_cmd->add_option("--p", verify.p);

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Newton vs subgradient, Taylor on/off");
  bench.source.add_to(bench_cmd);
  bench_cmd->add_option("--repeats", bench.repeats);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--out-dir", bench.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve);
    if (*verify_cmd) return cmd_verify(verify);
    return cmd_bench(bench);
  } catch (const mlfg::GameError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return kInputError;
}
