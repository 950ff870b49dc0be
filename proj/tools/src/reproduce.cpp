#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "kerrcat/errors.hpp"
#include "kerrcat/fock_state.hpp"
#include "kerrcat/kitten.hpp"
#include "kerrcat/phase_space.hpp"
#include "kerrcat_cli/commands.hpp"

namespace kerrcat::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kTargetNames[] = {"table1", "table2", "fig1_negativities", "fig7_negativities", "kitten_times"};

// Tolerance for the table values: both absolute 0.01 and relative 1% must hold.
double table_tol(double ref) { return std::min(0.01, 0.01 * std::abs(ref)); }

ReproLine within(std::string label, double computed, double ref, double tol, const RunConfig& cfg) {
  ReproLine l;
  l.label = std::move(label);
  l.computed = computed;
  l.reference = ref;
  l.tolerance = tol;
  l.pass = std::abs(computed - ref) <= tol;
  l.config_hash = cfg.hash();
  return l;
}

ReproLine below(std::string label, double computed, double bound, const RunConfig& cfg) {
  ReproLine l;
  l.label = std::move(label);
  l.computed = computed;
  l.reference = bound;
  l.relation = "below";
  l.pass = computed < bound;
  l.config_hash = cfg.hash();
  return l;
}

RunConfig base_config(const ReproOptions& opt) {
  RunConfig cfg;
  cfg.params.alpha = 2.0;
  cfg.params.r = 0.5;
  cfg.params.c = 1.0;
  cfg.params.kappa = 1;
  cfg.params.omega = 1.0;
  cfg.params.lambda_kerr = 1.0;
  cfg.grid_points = opt.grid_points;
  cfg.threads = opt.threads;
  return cfg;
}

RunConfig phase_asymptote_config(const ReproOptions& opt, double r, int kappa) {
  RunConfig cfg = base_config(opt);
  cfg.params.r = r;
  cfg.params.kappa = kappa;
  cfg.damping = DampingParams{0.5, DampingKind::phase};
  cfg.times = {kInf};
  return cfg;
}

double wehrl_of(const RunConfig& cfg, double lt) {
  const auto rho = state_at(cfg, lt);
  const auto qf = evaluate_decayed(QuasiDistribution::husimi(rho), default_grid(cfg.params, cfg.grid_points), cfg.threads);
  return wehrl_entropy(qf).value;
}

double negativity_of(const RunConfig& cfg, double lt) {
  const auto rho = state_at(cfg, lt);
  const auto wf = evaluate_decayed(QuasiDistribution::wigner(rho), default_grid(cfg.params, cfg.grid_points), cfg.threads);
  return negativity_w(wf).value;
}

std::string num(double v, int prec = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

void asymptote_rows(std::vector<ReproLine>& out, const ReproOptions& opt, double r, int kappa, double sq,
                    double dw) {
  const auto cfg = phase_asymptote_config(opt, r, kappa);
  const std::string tag = "r=" + num(r, 2) + " kappa=" + std::to_string(kappa);
  out.push_back(within("S_Q(inf) " + tag, wehrl_of(cfg, kInf), sq, table_tol(sq), cfg));
  out.push_back(within("delta_W(inf) " + tag, negativity_of(cfg, kInf), dw, table_tol(dw), cfg));
}

}  // namespace

ReproTarget parse_target(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (name == kTargetNames[i]) return static_cast<ReproTarget>(i);
  throw InvalidArgument("unknown reproduce target '" + name + "'");
}

std::string target_name(ReproTarget t) { return kTargetNames[static_cast<int>(t)]; }

std::vector<ReproLine> reproduce(ReproTarget t, const ReproOptions& opt) {
  std::vector<ReproLine> out;
  switch (t) {
    case ReproTarget::table1: {
      const double r[] = {0.1, 0.3, 0.5};
      const double sq[] = {3.832996, 4.133899, 4.461696};
      const double dw[] = {0.243214, 0.156939, 0.102281};
      for (int i = 0; i < 3; ++i) asymptote_rows(out, opt, r[i], 1, sq[i], dw[i]);
      break;
    }
    case ReproTarget::table2: {
      const double sq[] = {4.367690, 4.461696, 4.533932, 4.593092};
      const double dw[] = {0.093517, 0.102281, 0.105443, 0.107013};
      for (int k = 0; k < 4; ++k) asymptote_rows(out, opt, 0.5, k, sq[k], dw[k]);
      break;
    }
    case ReproTarget::fig1_negativities: {
      constexpr double tol = 0.02;
      const double times[] = {kPi / 8, kPi / 12, kPi / 16};
      const char* names[] = {"pi/8", "pi/12", "pi/16"};
      const double c_series[] = {1.9224, 2.6665, 2.8487};
      const double d_series[] = {2.8336, 3.1297, 3.1981};
      RunConfig c = base_config(opt);
      for (int i = 0; i < 3; ++i)
        out.push_back(within(std::string("delta_W alpha=2 r=0.5 lt=") + names[i], negativity_of(c, times[i]),
                             c_series[i], tol, c));
      RunConfig d = base_config(opt);
      d.params.alpha = 0.0;
      d.params.r = 1.5;
      out.push_back(within("delta_W alpha=0 r=1.5 lt=0", negativity_of(d, 0.0), 0.4209, tol, d));
      for (int i = 0; i < 3; ++i)
        out.push_back(within(std::string("delta_W alpha=0 r=1.5 lt=") + names[i], negativity_of(d, times[i]),
                             d_series[i], tol, d));
      break;
    }
    case ReproTarget::fig7_negativities: {
      constexpr double tol = 0.005;
      const auto a = phase_asymptote_config(opt, 0.05, 1);
      out.push_back(within("delta_W(inf) r=0.05", negativity_of(a, kInf), 0.270258, tol, a));
      const auto b = phase_asymptote_config(opt, 0.7, 1);
      out.push_back(within("delta_W(inf) r=0.70", negativity_of(b, kInf), 0.067378, tol, b));
      break;
    }
    case ReproTarget::kitten_times: {
      constexpr double bound = 1e-3;
      const double cases[][2] = {{0.0, 1.5}, {2.0, 0.5}, {4.0, 0.5}};
      double width[3] = {};
      for (int i = 0; i < 3; ++i) {
        RunConfig c = base_config(opt);
        c.params.alpha = cases[i][0];
        c.params.r = cases[i][1];
        c.kitten_p = 4;
        const auto ref = fiducial_state(kitten_selection(4, c.params));
        const auto psi = evolve_lambda_t(build_state(c.params), c.params, kitten_time(4));
        const std::string tag = "alpha=" + num(cases[i][0], 0) + " r=" + num(cases[i][1], 1);
        out.push_back(below("d_HS p=4 lt=pi/8 " + tag, hs_distance(psi, ref), bound, c));
        width[i] = collapse_width(c.params, ref, kitten_time(4));
      }
      RunConfig c = base_config(opt);
      out.push_back(below("collapse width ratio alpha=4 / alpha=2", width[2] / width[1], 1.0, c));
      for (int p : {2, 6}) {
        c.kitten_p = p;
        const auto ref = fiducial_state(kitten_selection(p, c.params));
        const auto psi = evolve_lambda_t(build_state(c.params), c.params, kitten_time(p));
        out.push_back(below("d_HS p=" + std::to_string(p) + " lt=pi/" + std::to_string(2 * p) + " alpha=2 r=0.5",
                            hs_distance(psi, ref), bound, c));
      }
      break;
    }
  }
  return out;
}

std::string format_report(ReproTarget t, const std::vector<ReproLine>& lines) {
  std::string s = "# reproduce " + target_name(t) + "\n";
  int fails = 0;
  char buf[320];
  for (const auto& l : lines) {
    if (l.relation == "below") {
      std::snprintf(buf, sizeof buf, "%-44s computed=%.6g  bound=<%.3g  %s  config=%s\n", l.label.c_str(), l.computed,
                    l.reference, l.pass ? "PASS" : "FAIL", l.config_hash.c_str());
    } else {
      const double dev = std::abs(l.computed - l.reference);
      const double rel = l.reference != 0.0 ? dev / std::abs(l.reference) : 0.0;
      std::snprintf(buf, sizeof buf,
                    "%-44s computed=%.6f  ref=%.6f  abs_dev=%.2e  rel_dev=%.2e  tol=%.3g  %s  config=%s\n",
                    l.label.c_str(), l.computed, l.reference, dev, rel, l.tolerance, l.pass ? "PASS" : "FAIL",
                    l.config_hash.c_str());
    }
    s += buf;
    fails += !l.pass;
  }
  s += fails == 0 ? "ALL PASS\n" : std::to_string(fails) + " FAIL\n";
  return s;
}

}  // namespace kerrcat::cli
