#pragma once

#include "mlfg/homotopy.hpp"

#include <cstdint>
#include <vector>

namespace mlfg {

struct BenchConfig {
  int repeats = 1;
  std::uint64_t seed = 0;     // repeat r starts from random_initial_point(seed + r)
  int multistart = 20;        // random starts for the fixed-eps uniqueness run
  double multistart_eps = 0.5;
  double multistart_tol = 1e-20;  // merit tolerance, far below the agreement being measured
  HomotopyConfig base;        // method and taylor are overridden per run
};

struct BenchRun {
  int repeat = 0;
  std::uint64_t seed = 0;
  HomotopyConfig cfg;
  PrimalDualPoint z0;
  HomotopyTrace trace;
};

struct MultistartResult {
  double eps = 0.0;
  std::vector<PrimalDualPoint> starts;
  std::vector<InnerResult> runs;
  double max_pairwise_distance = 0.0;  // over the x parts of the solutions
  bool all_converged = false;
};

/// Newton from `count` random starts (seeds seed, seed + 1, ...) at fixed eps.
/// The distance between solutions is only meaningful down to the solver
/// error, roughly sqrt(2 cfg.tol) / mu.
MultistartResult multistart(const Game& game, double eps, int count, std::uint64_t seed,
                            const NewtonConfig& cfg = {}, int p = 2);

struct BenchResult {
  std::vector<BenchRun> runs;  // per repeat: newton on/off, then subgradient on/off
  MultistartResult multistart;
  bool ok = false;             // every homotopy completed and every multistart run converged
};

BenchResult run_bench(const Game& game, const BenchConfig& cfg);

}  // namespace mlfg
