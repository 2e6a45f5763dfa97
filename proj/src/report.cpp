#include "mlfg/report.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ostream>

namespace mlfg {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument("expected a JSON array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::string game_hash(const GameSpec& spec) {
  const std::string text = game_to_json(spec);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json game_fingerprint(const Game& game) {
  json leaders = json::array();
  for (const LeaderSpec& l : game.spec().leaders) {
    leaders.push_back({{"n", l.num_vars()}, {"m", l.num_constraints()}});
  }
  return {{"n", game.n()},
          {"m", game.m()},
          {"m_bar", game.m_bar()},
          {"leaders", leaders},
          {"hash", game_hash(game.spec())}};
}

json to_json(const HomotopyConfig& cfg) {
  return {{"method", to_string(cfg.method)},
          {"eps0", cfg.eps0},
          {"gamma", cfg.gamma},
          {"eps_min", cfg.eps_min},
          {"taylor", cfg.taylor},
          {"p", cfg.p},
          {"newton",
           {{"beta", cfg.newton.beta},
            {"sigma", cfg.newton.sigma},
            {"tol", cfg.newton.tol},
            {"max_iter", cfg.newton.max_iter},
            {"pivot_tol", cfg.newton.pivot_tol}}},
          {"subgradient",
           {{"delta0", cfg.subgradient.delta0},
            {"gamma", cfg.subgradient.gamma},
            {"c1", cfg.subgradient.c1},
            {"c2", cfg.subgradient.c2},
            {"max_outer", cfg.subgradient.max_outer},
            {"max_inner", cfg.subgradient.max_inner},
            {"tol", cfg.subgradient.tol}}}};
}

HomotopyConfig homotopy_config_from_json(const json& j) {
  HomotopyConfig cfg;
  if (j.contains("method")) cfg.method = parse_inner_method(j.at("method").get<std::string>());
  cfg.eps0 = j.value("eps0", cfg.eps0);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.eps_min = j.value("eps_min", cfg.eps_min);
  cfg.taylor = j.value("taylor", cfg.taylor);
  cfg.p = j.value("p", cfg.p);
  if (j.contains("newton")) {
    const json& n = j.at("newton");
    cfg.newton.beta = n.value("beta", cfg.newton.beta);
    cfg.newton.sigma = n.value("sigma", cfg.newton.sigma);
    cfg.newton.tol = n.value("tol", cfg.newton.tol);
    cfg.newton.max_iter = n.value("max_iter", cfg.newton.max_iter);
    cfg.newton.pivot_tol = n.value("pivot_tol", cfg.newton.pivot_tol);
  }
  if (j.contains("subgradient")) {
    const json& s = j.at("subgradient");
    cfg.subgradient.delta0 = s.value("delta0", cfg.subgradient.delta0);
    cfg.subgradient.gamma = s.value("gamma", cfg.subgradient.gamma);
    cfg.subgradient.c1 = s.value("c1", cfg.subgradient.c1);
    cfg.subgradient.c2 = s.value("c2", cfg.subgradient.c2);
    cfg.subgradient.max_outer = s.value("max_outer", cfg.subgradient.max_outer);
    cfg.subgradient.max_inner = s.value("max_inner", cfg.subgradient.max_inner);
    cfg.subgradient.tol = s.value("tol", cfg.subgradient.tol);
  }
  return cfg;
}

json to_json(const Certificate& cert) {
  const NashCheck& nash = cert.nash;
  json responses = json::array();
  for (const OracleResult& r : nash.responses) {
    responses.push_back({{"feasible", r.feasible},
                         {"x", to_json(r.x_nu)},
                         {"objective", r.objective},
                         {"candidates", r.candidates}});
  }
  const SStationarityCertificate& s = cert.s_stationarity;
  const SStationarityResiduals& r = s.residuals;
  json biactive = json::array();
  for (bool b : s.biactive) biactive.push_back(b);
  return {{"certified", cert.certified()},
          {"nash",
           {{"certified", nash.certified},
            {"tol", nash.tol},
            {"max_gap", nash.max_gap},
            {"gaps", nash.gaps},
            {"best_responses", responses}}},
          {"s_stationarity",
           {{"certified", s.certified},
            {"tol", s.tol},
            {"xi_bar", to_json(s.xi_bar)},
            {"gamma1", to_json(s.gamma1)},
            {"gamma2", to_json(s.gamma2)},
            {"biactive", biactive},
            {"residuals",
             {{"stationarity", r.stationarity},
              {"feasibility", r.feasibility},
              {"multiplier_sign", r.multiplier_sign},
              {"complementary_slack", r.complementary_slack},
              {"complementarity", r.complementarity},
              {"gamma1_slack", r.gamma1_slack},
              {"gamma2_slack", r.gamma2_slack},
              {"biactive_sign", r.biactive_sign},
              {"max", r.max()}}}}}};
}

json solve_report(const Game& game, const HomotopyConfig& cfg, const PrimalDualPoint& z0,
                  const HomotopyTrace& trace, const Certificate* cert,
                  const CertificationTolerance* tol) {
  json report;
  report["game"] = game_fingerprint(game);
  report["config"] = to_json(cfg);
  report["initial_point"] = {{"x", to_json(z0.x)}, {"lambda", to_json(z0.lambda)}};
  report["completed"] = trace.completed;
  if (!trace.message.empty()) report["message"] = trace.message;

  json stages = json::array();
  for (const StageRecord& s : trace.stages) {
    json stage = {{"index", s.index},
                  {"eps", s.eps},
                  {"status", to_string(s.inner.status)},
                  {"converged", s.inner.converged},
                  {"inner_iterations", s.inner.iterations},
                  {"fallback_steps", s.inner.fallback_steps},
                  {"merit", s.inner.merit},
                  {"warm_start_merit", s.warm_start_merit},
                  {"plain_start_merit", s.plain_start_merit},
                  {"predictor_norm", s.predictor_norm},
                  {"wall_ms", s.wall_ms},
                  {"x", to_json(s.z_star.x)},
                  {"lambda", to_json(s.z_star.lambda)}};
    if (trace.completed) stage["error_to_final"] = (s.z_star.x - trace.final_point().x).norm();
    stages.push_back(std::move(stage));
  }
  report["stages"] = std::move(stages);

  if (!trace.stages.empty()) {
    const PrimalDualPoint& z = trace.final_point();
    report["eps_final"] = trace.final_eps();
    report["x"] = to_json(z.x);
    report["lambda"] = to_json(z.lambda);
    report["y"] = to_json(best_response_exact(game, z.x));
  }
  if (cert != nullptr) report["certificate"] = to_json(*cert);
  if (tol != nullptr) {
    report["certification_tolerance"] = {{"nash", tol->nash}, {"s_stationarity", tol->s_stationarity}};
  }
  return report;
}

void write_iteration_rows(std::ostream& out, const HomotopyTrace& trace, const HomotopyConfig& cfg) {
  const std::string method = to_string(cfg.method);
  const char* taylor = cfg.taylor ? "on" : "off";
  for (const StageRecord& s : trace.stages) {
    const std::string prefix = std::to_string(s.index) + ',' + format_double(s.eps) + ',' + method +
                               ',' + taylor + ',';
    const std::string predictor = format_double(s.predictor_norm);
    out << prefix << 0 << ',' << format_double(s.warm_start_merit) << ",0," << predictor << ",0\n";
    for (std::size_t k = 0; k < s.inner.history.size(); ++k) {
      const IterationRecord& it = s.inner.history[k];
      out << prefix << k + 1 << ',' << format_double(it.merit) << ',' << format_double(it.step_norm)
          << ',' << predictor << ',' << format_double(it.wall_ms) << '\n';
    }
  }
}

void write_bench_rows(std::ostream& out, const HomotopyTrace& trace, const HomotopyConfig& cfg) {
  const std::string method = to_string(cfg.method);
  const char* taylor = cfg.taylor ? "on" : "off";
  for (const StageRecord& s : trace.stages) {
    out << method << ',' << taylor << ',' << format_double(s.eps) << ',' << s.inner.iterations << ','
        << format_double(s.inner.merit) << ',' << format_double(s.wall_ms) << '\n';
  }
}

}  // namespace mlfg
