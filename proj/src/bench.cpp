#include "mlfg/bench.hpp"

#include <algorithm>

namespace mlfg {

MultistartResult multistart(const Game& game, double eps, int count, std::uint64_t seed,
                            const NewtonConfig& cfg, int p) {
  MultistartResult out;
  out.eps = eps;
  out.all_converged = true;
  const Smoothing s{eps, p};
  for (int k = 0; k < count; ++k) {
    out.starts.push_back(random_initial_point(game, seed + static_cast<std::uint64_t>(k)));
    out.runs.push_back(newton_solve(game, out.starts.back(), s, cfg));
    out.all_converged = out.all_converged && out.runs.back().converged;
  }
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    for (std::size_t j = i + 1; j < out.runs.size(); ++j) {
      const double dist = (out.runs[i].z.x - out.runs[j].z.x).norm();
      out.max_pairwise_distance = std::max(out.max_pairwise_distance, dist);
    }
  }
  return out;
}

BenchResult run_bench(const Game& game, const BenchConfig& cfg) {
  BenchResult result;
  result.ok = true;
  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
    const PrimalDualPoint z0 = random_initial_point(game, seed);
    for (InnerMethod method : {InnerMethod::Newton, InnerMethod::Subgradient}) {
      for (bool taylor : {true, false}) {
        BenchRun run;
        run.repeat = r;
        run.seed = seed;
        run.cfg = cfg.base;
        run.cfg.method = method;
        run.cfg.taylor = taylor;
        run.z0 = z0;
        run.trace = homotopy_solve(game, z0, run.cfg);
        result.ok = result.ok && run.trace.completed;
        result.runs.push_back(std::move(run));
      }
    }
  }
  NewtonConfig polished = cfg.base.newton;
  polished.tol = cfg.multistart_tol;
  result.multistart =
      multistart(game, cfg.multistart_eps, cfg.multistart, cfg.seed, polished, cfg.base.p);
  result.ok = result.ok && result.multistart.all_converged;
  return result;
}

}  // namespace mlfg
