// Acceptance gate for the library and tool. Each criterion prints exactly
// one line, "C<n> PASS ..." or "C<n> FAIL ...", and the process exits
// nonzero when any requested criterion fails. Run a single criterion with
// an argument c1..c10, or everything with "all".
//
// Expected values marked "frozen" were produced by the independent oracles
// in tests/support and by the parameter scans recorded in the project
// notes, then pinned here so regressions are loud.

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "annulus/continuation.hpp"
#include "annulus/dynamics.hpp"
#include "annulus/normal_form.hpp"
#include "annulus/pde_stability.hpp"
#include "annulus/symmetry.hpp"
#include "oracles.hpp"
#include "scenario_sets.hpp"

namespace {

using annulus::symmetry::act;
using annulus::symmetry::Amplitudes;
using annulus::symmetry::compose;
using annulus::symmetry::GroupElement;
using annulus::symmetry::invariants;
using annulus::symmetry::IsotropyClass;
using annulus::symmetry::ModePair;
using Coefficients = annulus::normal_form::Coefficients;
using Complexd = std::complex<double>;

// Failure collector: criteria append one message per broken check and the
// first message becomes the printed detail.
struct Checks {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool passed() const { return failures.empty(); }
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return std::string(buf);
}

double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Amplitudes random_state(std::mt19937& rng) {
  return {Complexd(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)),
          Complexd(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0))};
}

GroupElement random_element(std::mt19937& rng) {
  const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  if (uniform(rng, 0.0, 1.0) < 0.5) return GroupElement::rotation(angle);
  return GroupElement::reflection_then_rotation(angle);
}

Coefficients random_coefficients(std::mt19937& rng) {
  Coefficients c;
  c.mu = uniform(rng, -1.0, 1.0);
  c.split = uniform(rng, 0.0, 0.5);
  c.a11 = uniform(rng, -2.0, 2.0);
  c.a12 = uniform(rng, -2.0, 2.0);
  c.a21 = uniform(rng, -2.0, 2.0);
  c.a22 = uniform(rng, -2.0, 2.0);
  c.e1 = uniform(rng, -2.0, 2.0);
  c.e2 = uniform(rng, -2.0, 2.0);
  c.q10 = uniform(rng, -2.0, 2.0);
  c.q20 = uniform(rng, -2.0, 2.0);
  return c;
}

double state_distance(const Amplitudes& a, const Amplitudes& b) {
  return std::max(std::abs(a.z1 - b.z1), std::abs(a.z2 - b.z2));
}

// --- C1: group action, invariants, and vector-field equivariance ---------

void c1_equivariance(Checks& ck) {
  std::mt19937 rng(20260822u);
  double worst_rhs = 0.0, worst_inv = 0.0, worst_comp = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const ModePair modes(2 + static_cast<int>(rng() % 4u));
    const Amplitudes z = random_state(rng);
    const GroupElement g = random_element(rng);
    const Coefficients c = random_coefficients(rng);
    const Amplitudes lhs = annulus::normal_form::rhs(act(g, z, modes), c, modes);
    const Amplitudes rhs = act(g, annulus::normal_form::rhs(z, c, modes), modes);
    worst_rhs = std::max(worst_rhs, state_distance(lhs, rhs));
  }
  for (int k = 0; k < 1000; ++k) {
    const ModePair modes(2 + static_cast<int>(rng() % 4u));
    const Amplitudes z = random_state(rng);
    const GroupElement g = random_element(rng);
    const auto before = invariants(z, modes);
    const auto after = invariants(act(g, z, modes), modes);
    const double err = std::max({std::fabs(before.u - after.u),
                                 std::fabs(before.v - after.v),
                                 std::fabs(before.w - after.w)});
    worst_inv = std::max(worst_inv, err);
  }
  for (int k = 0; k < 1000; ++k) {
    const ModePair modes(2 + static_cast<int>(rng() % 4u));
    const Amplitudes z = random_state(rng);
    const GroupElement g1 = random_element(rng);
    const GroupElement g2 = random_element(rng);
    const Amplitudes two_step = act(g1, act(g2, z, modes), modes);
    const Amplitudes one_step = act(compose(g1, g2), z, modes);
    worst_comp = std::max(worst_comp, state_distance(two_step, one_step));
  }
  ck.require(worst_rhs <= 1e-12,
             fmt("vector-field equivariance error %.3e > 1e-12", worst_rhs));
  ck.require(worst_inv <= 1e-12,
             fmt("invariant drift under the action %.3e > 1e-12", worst_inv));
  ck.require(worst_comp <= 1e-12,
             fmt("action composition error %.3e > 1e-12", worst_comp));
}

// --- C2: closed-form pure-mode amplitudes against Newton -----------------

void c2_closed_forms(Checks& ck) {
  std::vector<std::pair<Coefficients, int>> sets;
  {
    Coefficients c;
    c.split = 0.1;
    sets.emplace_back(c, 2);
  }
  {
    Coefficients c;
    c.split = 0.05;
    c.a11 = -2.0;
    c.a22 = -0.5;
    c.a12 = 1.0;
    c.a21 = 0.7;
    c.e1 = 0.3;
    c.e2 = -0.2;
    c.q10 = 0.1;
    c.q20 = 0.2;
    sets.emplace_back(c, 3);
  }
  {
    Coefficients c;
    c.split = 0.25;
    c.a11 = -0.7;
    c.a22 = -1.3;
    c.a12 = -1.0;
    c.a21 = -2.0;
    sets.emplace_back(c, 2);
  }
  double worst = 0.0;
  for (const auto& [base, m] : sets) {
    const ModePair modes(m);
    const auto branches = annulus::normal_form::primary_branches(base, modes);
    for (int k = 0; k < 50; ++k) {
      const double mu = 0.01 + k * (0.5 - 0.01) / 49.0;
      const auto xamp = branches.lower.amplitude(mu);
      ck.require(xamp.has_value(), "lower branch missing on its own side");
      if (xamp) {
        const Coefficients at = base.with_mu(mu);
        const auto refined =
            annulus::normal_form::newton_refine(*xamp * 1.000001, 0.0, at, modes);
        ck.require(refined.has_value(), "Newton failed near the lower branch");
        if (refined) worst = std::max(worst, std::fabs((*refined)[0] - *xamp));
      }
      const double mu_upper = mu - base.split;
      const auto yamp = branches.upper.amplitude(mu_upper);
      ck.require(yamp.has_value(), "upper branch missing on its own side");
      if (yamp) {
        const Coefficients at = base.with_mu(mu_upper);
        const auto refined =
            annulus::normal_form::newton_refine(0.0, *yamp * 1.000001, at, modes);
        ck.require(refined.has_value(), "Newton failed near the upper branch");
        if (refined) worst = std::max(worst, std::fabs((*refined)[1] - *yamp));
      }
    }
  }
  ck.require(worst <= 1e-12,
             fmt("closed form vs Newton deviation %.3e > 1e-12", worst));
}

// --- C3: planar steady-state enumeration against the brute-force oracle --

struct PlanarCase {
  const char* name;
  Coefficients c;
  int m;
};

std::vector<PlanarCase> planar_cases() {
  std::vector<PlanarCase> cases;
  {
    Coefficients c;
    c.split = 0.1;
    cases.push_back({"decoupled", c.with_mu(0.3), 2});
  }
  cases.push_back({"strong-coupling", scenario::hysteresis().with_mu(0.075), 2});
  {
    Coefficients c = scenario::smooth();
    c.e1 = 0.2;
    c.e2 = -0.1;
    cases.push_back({"phase-through-w", c.with_mu(0.15), 3});
  }
  cases.push_back({"oscillatory", scenario::oscillatory().with_mu(0.2), 2});
  cases.push_back({"drifting", scenario::drifting().with_mu(0.16), 2});
  return cases;
}

void c3_enumeration(Checks& ck) {
  const annulus::normal_form::Box box;
  std::string counts;
  for (const auto& pc : planar_cases()) {
    const ModePair modes(pc.m);
    const auto lib = annulus::normal_form::steady_states_fix_z2(pc.c, modes, box, 64);
    std::vector<oracles::PlanarPoint> found;
    for (const auto& s : lib.states)
      found.push_back({s.z.z1.real(), s.z.z2.real()});
    const auto reference = oracles::enumerate_planar_states(pc.c, pc.m, box, 2048);
    const double dist = oracles::planar_match_distance(found, reference, pc.m);
    ck.require(dist <= 1e-6,
               fmt("%s: enumeration mismatch %.3e (library %zu states, "
                   "reference %zu)",
                   pc.name, dist, found.size(), reference.size()));
    counts += fmt(" %s=%zu", pc.name, lib.states.size());
  }
  ck.require(counts.find("decoupled=9") != std::string::npos,
             "decoupled case should yield 9 states");
}

// --- C4: analytic Jacobian against finite differences and the forced
//         neutral direction at steady states ------------------------------

void c4_jacobian(Checks& ck) {
  std::mt19937 rng(7u);
  double worst_rel = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ModePair modes(k % 2 == 0 ? 2 : (k % 4 == 1 ? 3 : 5));
    const Amplitudes z = random_state(rng);
    const Coefficients c = random_coefficients(rng);
    const Eigen::Matrix4d a = annulus::normal_form::jacobian(z, c, modes);
    const Eigen::Matrix4d f = oracles::fd_jacobian(z, c, modes, 1e-6);
    const double rel = (a - f).cwiseAbs().maxCoeff() /
                       std::max(1.0, a.cwiseAbs().maxCoeff());
    worst_rel = std::max(worst_rel, rel);
  }
  ck.require(worst_rel <= 1e-6,
             fmt("finite-difference mismatch %.3e > 1e-6", worst_rel));

  const annulus::normal_form::Box box;
  int tested = 0;
  double worst_null = 0.0;
  for (const auto& pc : planar_cases()) {
    const ModePair modes(pc.m);
    const auto lib = annulus::normal_form::steady_states_fix_z2(pc.c, modes, box, 64);
    for (const auto& s : lib.states) {
      if (tested >= 20) break;
      if (std::abs(s.z.z1) + std::abs(s.z.z2) <= 1e-6) continue;
      const GroupElement g = random_element(rng);
      const Amplitudes moved = act(g, s.z, modes);
      const auto eigs =
          annulus::normal_form::eigenvalues4(annulus::normal_form::jacobian(moved, pc.c, modes));
      double smallest = std::abs(eigs[0]);
      for (const auto& lam : eigs) smallest = std::min(smallest, std::abs(lam));
      worst_null = std::max(worst_null, smallest);
      ++tested;
    }
  }
  ck.require(tested >= 20, fmt("only %d nontrivial steady states collected", tested));
  ck.require(worst_null <= 1e-8,
             fmt("smallest eigenvalue magnitude %.3e > 1e-8 at a steady state",
                 worst_null));
}

// --- C5: scenario classification confirmed by hysteresis sweeps ----------

struct SweepRecord {
  std::vector<double> mu;
  std::vector<std::array<double, 2>> uv;
};

SweepRecord settle_sweep(const Coefficients& base, const ModePair& modes,
                         Amplitudes z, double mu_from, double mu_to,
                         double step) {
  SweepRecord rec;
  annulus::dynamics::SimSettings s;
  s.t_end = 600.0;
  s.dt_sample = 600.0;
  const int n = static_cast<int>(std::lround((mu_to - mu_from) / step));
  for (int k = 0; k <= n; ++k) {
    const double mu = mu_from + k * step;
    z.z1 += 1e-3;  // transverse nudge so exchanged stability can express
    z.z2 += 1e-3;
    const auto traj =
        annulus::dynamics::integrate(base.with_mu(mu), modes, z, s);
    z = traj.samples.back().z;
    const auto inv = invariants(z, modes);
    rec.mu.push_back(mu);
    rec.uv.push_back({inv.u, inv.v});
  }
  return rec;
}

// Largest single-step motion of (u, v) and the parameter where it happens.
std::pair<double, double> largest_jump(const SweepRecord& rec) {
  double best = 0.0, at = rec.mu.front();
  for (size_t k = 1; k < rec.uv.size(); ++k) {
    const double d = std::max(std::fabs(rec.uv[k][0] - rec.uv[k - 1][0]),
                              std::fabs(rec.uv[k][1] - rec.uv[k - 1][1]));
    if (d > best) {
      best = d;
      at = rec.mu[k];
    }
  }
  return {best, at};
}

double disagreement_at(const SweepRecord& fwd, const SweepRecord& bwd,
                       double mu) {
  double fu = 0.0, fv = 0.0, bu = 0.0, bv = 0.0;
  for (size_t k = 0; k < fwd.mu.size(); ++k)
    if (std::fabs(fwd.mu[k] - mu) < 1e-9) {
      fu = fwd.uv[k][0];
      fv = fwd.uv[k][1];
    }
  for (size_t k = 0; k < bwd.mu.size(); ++k)
    if (std::fabs(bwd.mu[k] - mu) < 1e-9) {
      bu = bwd.uv[k][0];
      bv = bwd.uv[k][1];
    }
  return std::max(std::fabs(fu - bu), std::fabs(fv - bv));
}

void c5_scenarios(Checks& ck) {
  const ModePair modes(5);
  annulus::continuation::Settings settings;
  settings.mu_min = -0.3;
  settings.mu_max = 0.4;

  const auto jumpy =
      annulus::continuation::assemble_diagram(scenario::hysteresis(), modes, settings);
  ck.require(jumpy.scenario == annulus::continuation::Scenario::ExchangeHysteresis,
             fmt("strong-coupling set classified as %s", to_string(jumpy.scenario)));
  const auto gentle =
      annulus::continuation::assemble_diagram(scenario::smooth(), modes, settings);
  ck.require(gentle.scenario == annulus::continuation::Scenario::SmoothTransition,
             fmt("moderate-coupling set classified as %s", to_string(gentle.scenario)));

  // Sweep confirmation. Upward from the long-wave state, downward from the
  // short-wave state; the strong-coupling set must jump at two different
  // parameters and disagree in between, the moderate set must stay smooth.
  const Amplitudes low_start{Complexd(1e-3, 0.0), Complexd(std::sqrt(0.11), 0.0)};
  const Amplitudes high_start{Complexd(std::sqrt(0.2), 0.0), Complexd(1e-3, 0.0)};

  const auto fwd_a =
      settle_sweep(scenario::hysteresis(), modes, low_start, 0.01, 0.2, 0.005);
  const auto bwd_a =
      settle_sweep(scenario::hysteresis(), modes, high_start, 0.2, 0.01, -0.005);
  const auto [fj, fj_mu] = largest_jump(fwd_a);
  const auto [bj, bj_mu] = largest_jump(bwd_a);
  ck.require(fj >= 0.05, fmt("no upward jump found (largest step %.3f)", fj));
  ck.require(bj >= 0.05, fmt("no downward jump found (largest step %.3f)", bj));
  ck.require(fj_mu >= 0.10 && fj_mu <= 0.17,
             fmt("upward jump at mu=%.3f outside [0.10, 0.17]", fj_mu));
  ck.require(bj_mu >= 0.02 && bj_mu <= 0.055,
             fmt("downward jump at mu=%.3f outside [0.02, 0.055]", bj_mu));
  ck.require(fj_mu > bj_mu + 0.02, "jump locations do not straddle a window");
  const double gap = disagreement_at(fwd_a, bwd_a, 0.075);
  ck.require(gap >= 0.05,
             fmt("sweeps agree inside the bistable window (gap %.3f)", gap));

  const auto fwd_b =
      settle_sweep(scenario::smooth(), modes, low_start, 0.01, 0.2, 0.005);
  const auto bwd_b =
      settle_sweep(scenario::smooth(), modes, high_start, 0.2, 0.01, -0.005);
  ck.require(largest_jump(fwd_b).first <= 0.03,
             fmt("moderate set jumped upward by %.3f", largest_jump(fwd_b).first));
  ck.require(largest_jump(bwd_b).first <= 0.03,
             fmt("moderate set jumped downward by %.3f", largest_jump(bwd_b).first));
  double worst_gap = 0.0;
  for (double mu = 0.01; mu <= 0.2 + 1e-9; mu += 0.005)
    worst_gap = std::max(worst_gap, disagreement_at(fwd_b, bwd_b, mu));
  ck.require(worst_gap <= 0.03,
             fmt("moderate set sweep disagreement %.3f > 0.03", worst_gap));
}

// --- C6: oscillatory onset on the mixed branch and wave classification ---

void c6_waves(Checks& ck) {
  const ModePair modes(2);
  annulus::continuation::Settings settings;
  settings.mu_min = -0.3;
  settings.mu_max = 0.05;
  const auto diagram =
      annulus::continuation::assemble_diagram(scenario::oscillatory(), modes, settings);

  std::optional<annulus::continuation::Event> hopf;
  for (const auto& b : diagram.branches) {
    if (b.label != IsotropyClass::Z2) continue;
    for (const auto& ev : b.events)
      if (ev.kind == annulus::continuation::EventKind::Hopf) hopf = ev;
  }
  ck.require(hopf.has_value(), "no oscillatory onset found on the mixed branch");
  if (!hopf) return;
  ck.require(std::fabs(hopf->mu - (-0.117821)) <= 5e-4,
             fmt("onset at mu=%.6f, expected -0.117821", hopf->mu));
  ck.require(std::fabs(hopf->omega - 0.160629) <= 5e-4,
             fmt("onset frequency %.6f, expected 0.160629", hopf->omega));
  const double predicted_period = 2.0 * std::numbers::pi / hopf->omega;

  // Probe just past onset; frozen initial state sits beside the mixed
  // equilibrium so the small oscillation is captured quickly.
  annulus::dynamics::SimSettings sim;
  sim.t_end = 5000.0;
  sim.dt_sample = 0.05;
  const Amplitudes z0{Complexd(0.387, 0.0003), Complexd(0.3398, -0.0003)};
  const auto traj = annulus::dynamics::integrate(
      scenario::oscillatory().with_mu(-0.11832), modes, z0, sim);
  const auto cls = annulus::dynamics::classify(traj, modes);
  ck.require(cls.kind == annulus::dynamics::AttractorKind::StandingWave,
             fmt("probe classified as %s", to_string(cls.kind)));
  ck.require(std::fabs(cls.period - predicted_period) <= 0.05 * predicted_period,
             fmt("measured period %.4f vs predicted %.4f (%.1f%% off)",
                 cls.period, predicted_period,
                 100.0 * std::fabs(cls.period - predicted_period) / predicted_period));

  // Constructed drifting input with a known rate; the classifier must
  // recover the rotation speed of the frame, not the phase speed of a
  // single amplitude.
  const double omega = 0.0137;
  annulus::dynamics::Trajectory synthetic;
  const Complexd c1(0.31, 0.12), c2(-0.22, 0.05);
  for (int k = 0; k <= 4000; ++k) {
    const double t = 0.05 * k;
    annulus::dynamics::Sample s;
    s.t = t;
    s.z.z1 = c1 * std::exp(Complexd(0.0, modes.lower() * omega * t));
    s.z.z2 = c2 * std::exp(Complexd(0.0, modes.upper() * omega * t));
    synthetic.samples.push_back(s);
  }
  const auto rw = annulus::dynamics::classify(synthetic, modes);
  ck.require(rw.kind == annulus::dynamics::AttractorKind::RotatingWave,
             fmt("synthetic drift classified as %s", to_string(rw.kind)));
  ck.require(std::fabs(rw.drift_rate - omega) <= 1e-6,
             fmt("synthetic drift rate %.8f, expected %.8f", rw.drift_rate, omega));
}

// --- C7: thin-gap critical point against the plane-layer oracle ----------

void c7_thin_gap(Checks& ck) {
  const auto plane = oracles::plane_layer_critical(32);
  // Frozen digits from the oracle itself, converged across resolutions.
  ck.require(std::fabs(plane.rayleigh - 1707.761777) <= 1e-2,
             fmt("plane-layer oracle drifted: Ra=%.6f", plane.rayleigh));
  ck.require(std::fabs(plane.wavenumber - 3.116323) <= 1e-4,
             fmt("plane-layer oracle drifted: k=%.6f", plane.wavenumber));

  annulus::pde::StabilityConfig cfg;
  cfg.eta = 0.95;
  cfg.resolution = 48;
  const auto best = annulus::pde::critical_mode(cfg, 45, 75, 4);
  const double ra_err = std::fabs(best.rayleigh - plane.rayleigh) / plane.rayleigh;
  const double r_mean = 0.5 * (cfg.r_inner() + cfg.r_outer());
  const double k_err =
      std::fabs(best.m / r_mean - plane.wavenumber) / plane.wavenumber;
  ck.require(best.converged, "critical point did not converge");
  ck.require(ra_err <= 0.01,
             fmt("critical Ra %.4f is %.2f%% from the oracle", best.rayleigh,
                 100.0 * ra_err));
  ck.require(k_err <= 0.02,
             fmt("implied wavenumber %.4f is %.2f%% from the oracle",
                 best.m / r_mean, 100.0 * k_err));
}

// --- C8: temperature sub-block against the Bessel oracle -----------------

void c8_bessel(Checks& ck) {
  for (const double eta : {0.3, 0.6, 0.9}) {
    annulus::pde::StabilityConfig cfg;
    cfg.eta = eta;
    cfg.resolution = 48;
    const auto pencil = annulus::pde::assemble_pencil(cfg, 3, 0.0);
    const int n1 = pencil.grid.size();
    const auto lam = oracles::pencil_eigenvalues(
        pencil.a.block(n1, n1, n1, n1), pencil.b.block(n1, n1, n1, n1));
    const auto roots =
        oracles::bessel_cross_product_roots(3, cfg.r_inner(), cfg.r_outer(), 5);
    ck.require(lam.size() >= 5, fmt("eta=%.1f: too few sub-block eigenvalues", eta));
    for (int i = 0; i < 5 && i < static_cast<int>(lam.size()); ++i) {
      const double expected = -roots[i] * roots[i];
      const double rel = std::fabs(lam[i].real() - expected) / std::fabs(expected);
      ck.require(rel <= 1e-6,
                 fmt("eta=%.1f eigenvalue %d: %.9f vs %.9f (rel %.2e)", eta, i,
                     lam[i].real(), expected, rel));
      ck.require(std::fabs(lam[i].imag()) <= 1e-8,
                 fmt("eta=%.1f eigenvalue %d has imaginary part", eta, i));
    }
  }

  // Resolution doubling must leave the leading sub-block eigenvalue alone.
  double leading[2] = {0.0, 0.0};
  int slot = 0;
  for (const int n : {24, 48}) {
    annulus::pde::StabilityConfig cfg;
    cfg.eta = 0.6;
    cfg.resolution = n;
    const auto pencil = annulus::pde::assemble_pencil(cfg, 3, 0.0);
    const int n1 = pencil.grid.size();
    const auto lam = oracles::pencil_eigenvalues(
        pencil.a.block(n1, n1, n1, n1), pencil.b.block(n1, n1, n1, n1));
    leading[slot++] = lam.front().real();
  }
  const double drift =
      std::fabs(leading[0] - leading[1]) / std::max(1.0, std::fabs(leading[1]));
  ck.require(drift <= 1e-8, fmt("leading eigenvalue drift %.2e under doubling", drift));
}

// --- C9: mode-competition points for both models -------------------------

void c9_codim2(Checks& ck, std::string& note) {
  struct Case {
    const char* name;
    annulus::pde::StabilityConfig cfg;
    int m;
    double lo, hi;
  };
  std::vector<Case> cases;
  cases.push_back({"charge m=2/3", scenario::charge_reference(), 2, 0.15, 0.30});
  cases.push_back({"charge m=3/4", scenario::charge_reference(), 3, 0.30, 0.42});
  {
    annulus::pde::StabilityConfig gfd;
    gfd.resolution = 32;
    cases.push_back({"buoyancy m=12/13", gfd, 12, 0.72, 0.84});
  }
  double previous_eta = -1.0;
  for (auto& cs : cases) {
    const auto result = annulus::pde::codim2_point(cs.cfg, cs.m, cs.lo, cs.hi);
    ck.require(result.eta_star > cs.lo && result.eta_star < cs.hi,
               fmt("%s: eta*=%.4f escaped its window", cs.name, result.eta_star));
    // Independent restatement of the defining equation at the returned point.
    annulus::pde::StabilityConfig at = cs.cfg;
    at.eta = result.eta_star;
    const double ra_lower = annulus::pde::neutral_rayleigh(at, cs.m).rayleigh;
    const double ra_upper = annulus::pde::neutral_rayleigh(at, cs.m + 1).rayleigh;
    const double gap = std::fabs(ra_lower - ra_upper);
    ck.require(gap <= 1e-6 * result.ra_star,
               fmt("%s: neutral gap %.3e exceeds 1e-6 of Ra*=%.2f", cs.name, gap,
                   result.ra_star));
    ck.require(result.dlambda_dra[0] > 0.0 && result.dlambda_dra[1] > 0.0,
               fmt("%s: growth should increase with the driving parameter", cs.name));
    if (cs.m == 3)
      ck.require(result.eta_star > previous_eta,
                 "crossing radius ratio should grow with the mode pair");
    previous_eta = result.eta_star;
    note += fmt(" %s eta*=%.4f Ra*=%.2f", cs.name, result.eta_star, result.ra_star);
  }
}

// --- C10: command-line determinism and golden outputs --------------------

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

std::vector<std::string> file_names(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

int run_cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd =
      std::string(ANNULUS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  if (raw == -1) return -1;
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void c10_determinism(Checks& ck) {
  struct Job {
    const char* config;
    const char* verb;
    const char* extra;
  };
  const std::vector<Job> jobs = {
      {"regress_neutral", "neutral", "--threads 2"},
      {"regress_codim2", "codim2", ""},
      {"regress_diagram", "diagram", ""},
      {"regress_simulate", "simulate", ""},
      {"regress_render", "render", ""},
  };
  const std::filesystem::path work =
      std::filesystem::temp_directory_path() / "annulus_acceptance_c10";
  std::error_code scratch;
  std::filesystem::remove_all(work, scratch);

  for (const auto& job : jobs) {
    const std::filesystem::path config =
        std::filesystem::path(ANNULUS_CONFIG_DIR) / (std::string(job.config) + ".ini");
    const std::filesystem::path golden =
        std::filesystem::path(ANNULUS_CONFIG_DIR) / "golden" / job.config;
    std::array<std::filesystem::path, 2> runs = {work / "a" / job.config,
                                                 work / "b" / job.config};
    bool both_ran = true;
    for (const auto& dir : runs) {
      std::filesystem::create_directories(dir);
      std::string args = std::string(job.verb) + " --config " + config.string() +
                         " --out " + dir.string();
      if (job.extra[0] != '\0') args += std::string(" ") + job.extra;
      const int code = run_cli(args, dir / "run.log");
      if (code != 0) {
        ck.require(false, fmt("%s: exit code %d", job.config, code));
        both_ran = false;
      }
    }
    if (!both_ran) continue;

    const auto names = file_names(runs[0]);
    ck.require(file_names(runs[1]) == names,
               fmt("%s: reruns produced different file sets", job.config));
    ck.require(std::filesystem::is_directory(golden),
               fmt("%s: golden directory missing", job.config));
    if (!std::filesystem::is_directory(golden)) continue;
    auto golden_names = file_names(golden);
    for (const auto& name : names) {
      if (name == "run.log") continue;
      const auto a = read_file(runs[0] / name);
      const auto b = read_file(runs[1] / name);
      ck.require(a && b && *a == *b,
                 fmt("%s/%s: rerun differs", job.config, name.c_str()));
      const auto g = read_file(golden / name);
      ck.require(g.has_value(), fmt("%s/%s: missing from golden", job.config, name.c_str()));
      ck.require(g && a && *g == *a,
                 fmt("%s/%s: differs from golden", job.config, name.c_str()));
    }
    golden_names.erase(
        std::remove_if(golden_names.begin(), golden_names.end(),
                       [&](const std::string& n) {
                         return std::find(names.begin(), names.end(), n) != names.end();
                       }),
        golden_names.end());
    ck.require(golden_names.empty(),
               fmt("%s: golden holds files the run no longer writes", job.config));
  }
}

// --- Driver --------------------------------------------------------------

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;  // 0 means unbudgeted
  void (*run)(Checks&, std::string&);
};

void wrap_c1(Checks& ck, std::string&) { c1_equivariance(ck); }
void wrap_c2(Checks& ck, std::string&) { c2_closed_forms(ck); }
void wrap_c3(Checks& ck, std::string&) { c3_enumeration(ck); }
void wrap_c4(Checks& ck, std::string&) { c4_jacobian(ck); }
void wrap_c5(Checks& ck, std::string&) { c5_scenarios(ck); }
void wrap_c6(Checks& ck, std::string&) { c6_waves(ck); }
void wrap_c7(Checks& ck, std::string&) { c7_thin_gap(ck); }
void wrap_c8(Checks& ck, std::string&) { c8_bessel(ck); }
void wrap_c10(Checks& ck, std::string&) { c10_determinism(ck); }

const Criterion kCriteria[] = {
    {"c1", "group action and equivariance sweep", 5.0, wrap_c1},
    {"c2", "pure-mode closed forms vs Newton", 1.0, wrap_c2},
    {"c3", "planar enumeration vs brute force", 60.0, wrap_c3},
    {"c4", "Jacobian vs finite differences", 5.0, wrap_c4},
    {"c5", "hysteresis and smooth-transition sweeps", 120.0, wrap_c5},
    {"c6", "oscillatory onset and wave classification", 120.0, wrap_c6},
    {"c7", "thin-gap critical point vs plane layer", 120.0, wrap_c7},
    {"c8", "temperature block vs Bessel spectrum", 60.0, wrap_c8},
    {"c9", "mode-competition points, both models", 300.0, c9_codim2},
    {"c10", "command-line determinism and goldens", 0.0, wrap_c10},
};

bool run_one(const Criterion& cr) {
  Checks ck;
  std::string note;
  const auto start = std::chrono::steady_clock::now();
  try {
    cr.run(ck, note);
  } catch (const std::exception& e) {
    ck.require(false, fmt("unexpected exception: %s", e.what()));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (cr.budget_seconds > 0.0 && elapsed > cr.budget_seconds)
    ck.require(false, fmt("time budget %.0fs exceeded", cr.budget_seconds));
  std::string id(cr.id);
  for (auto& ch : id)
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (ck.passed()) {
    std::printf("%s PASS %s%s (%.2f s)\n", id.c_str(), cr.title, note.c_str(), elapsed);
    return true;
  }
  std::printf("%s FAIL %s: %s (%.2f s)\n", id.c_str(), cr.title,
              ck.failures.front().c_str(), elapsed);
  for (size_t k = 1; k < ck.failures.size(); ++k)
    std::printf("%s      also: %s\n", id.c_str(), ck.failures[k].c_str());
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  bool matched = false, all_ok = true;
  for (const auto& cr : kCriteria) {
    if (which != "all" && which != cr.id) continue;
    matched = true;
    all_ok = run_one(cr) && all_ok;
  }
  if (!matched) {
    std::printf("unknown criterion '%s' (use c1..c10 or all)\n", which.c_str());
    return 2;
  }
  return all_ok ? 0 : 1;
}
