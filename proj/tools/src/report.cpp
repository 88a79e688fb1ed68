#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "fracnls/rearrange.hpp"
#include "fracnls_app/app.hpp"

namespace fracnls::app {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_change(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

GroundStateOutcome run_ground_state(const Problem& prob, const SolverConfig& solver, bool refine) {
  GroundStateOutcome out{ground_state(prob, solver), kNaN, kNaN};
  if (!refine) return out;

  SolverConfig re = solver;
  re.compute_c_infinity = false;
  const Grid& g = prob.grid();

  const Grid fine(g.half_length(), 2 * g.size());
  re.start = CustomStart{resample(out.report.u, fine)};
  out.refinement_drift = relative_change(ground_state(prob.with_grid(fine), re).c, out.report.c);

  // Doubling L at fixed dx isolates the truncation error.
  const Grid wide(2.0 * g.half_length(), 2 * g.size());
  re.start = CustomStart{resample(out.report.u, wide)};
  out.truncation_err = relative_change(ground_state(prob.with_grid(wide), re).c, out.report.c);
  return out;
}

nlohmann::ordered_json report_json(const RunConfig& cfg, const GroundStateOutcome& out) {
  const GroundStateReport& r = out.report;
  nlohmann::ordered_json j;
  j["tag"] = cfg.tag;
  j["alpha"] = cfg.alpha;
  j["L"] = cfg.L;
  j["N"] = cfg.N;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["c"] = r.c;
  j["c_infinity"] = r.c_infinity;  // NaN serializes as null
  j["residual"] = r.residual;
  j["nonneg_violation"] = r.nonneg_violation;
  j["symmetry_defect"] = r.symmetry_defect;
  j["truncation_err"] = out.truncation_err;
  j["refinement_drift"] = out.refinement_drift;
  j["energy"] = {{"kinetic", r.energy.kinetic},
                 {"potential", r.energy.potential_term},
                 {"nonlinear", r.energy.nonlinear},
                 {"total", r.energy.total}};
  j["u_max"] = sup_norm(r.u);
  j["level_history_length"] = r.level_history.size();
  j["seed"] = cfg.solver.seed;
  return j;
}

std::string profile_csv(const Field& u) {
  const Field us = symmetric_decreasing(u);
  std::string s = "x,u,u_star\n";
  char buf[96];
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", u.grid().x(i), u[i], us[i]);
    s += buf;
  }
  return s;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string config_digest(const RunConfig& cfg) { return sha256_hex(cfg.source.dump()); }

}  // namespace fracnls::app
