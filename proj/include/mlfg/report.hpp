#pragma once

#include "mlfg/homotopy.hpp"
#include "mlfg/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace mlfg {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

nlohmann::json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

/// 64-bit FNV-1a of the canonical game JSON, as 16 hex digits.
std::string game_hash(const GameSpec& spec);
nlohmann::json game_fingerprint(const Game& game);

nlohmann::json to_json(const HomotopyConfig& cfg);
/// Inverse of to_json; missing keys keep their defaults.
HomotopyConfig homotopy_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Certificate& cert);

/// Everything needed to rerun and audit a solve: fingerprint, config echo,
/// start point, per-stage trace, final (x, lambda, y*) and the certificate.
nlohmann::json solve_report(const Game& game, const HomotopyConfig& cfg, const PrimalDualPoint& z0,
                            const HomotopyTrace& trace, const Certificate* cert,
                            const CertificationTolerance* tol);

inline constexpr const char* kIterationCsvHeader =
    "stage,eps,method,taylor,inner_iter,merit,step_norm,predictor_norm,wall_ms";

/// One row per inner iteration; inner_iter 0 is the warm start of the stage.
void write_iteration_rows(std::ostream& out, const HomotopyTrace& trace, const HomotopyConfig& cfg);

inline constexpr const char* kBenchCsvHeader = "method,taylor,eps,inner_iters,final_merit,wall_ms";

/// One row per homotopy stage.
void write_bench_rows(std::ostream& out, const HomotopyTrace& trace, const HomotopyConfig& cfg);

}  // namespace mlfg
