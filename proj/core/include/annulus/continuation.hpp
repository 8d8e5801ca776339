#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "annulus/normal_form.hpp"

namespace annulus::continuation {

using normal_form::Coefficients;
using symmetry::Complex;
using symmetry::IsotropyClass;
using symmetry::ModePair;

/// Pseudo-arclength continuation of steady states of the restricted system
///   f1(x, y; mu) = 0,  f2(x, y; mu) = 0
/// in the extended space X = (x, y, mu).

struct Settings {
  double ds_init = 1e-3;
  double ds_min = 1e-6;
  double ds_max = 0.05;
  int max_points = 4000;
  int max_corrector_iters = 8;
  double corrector_tol = 1e-12;  // absolute residual, max-norm
  double mu_min = -1.0;
  double mu_max = 1.0;
  /// Predictor amplitude used when stepping onto a bifurcating branch.
  double switch_amplitude = 1e-4;
};

struct BranchPoint {
  double mu = 0.0;
  double x = 0.0;
  double y = 0.0;
  double arclength = 0.0;             // cumulative along the branch
  std::array<Complex, 4> eigenvalues{};  // of the full 4D Jacobian
};

enum class StopReason {
  ParameterBound,  // mu reached the sweep boundary
  StepCollapse,    // corrector kept failing at the minimum step
  MaxPoints,
  SeedFailure,   // the initial corrector never converged
  ClosedLoop,    // the curve returned to its starting point
};

const char* to_string(StopReason r);

enum class EventKind { Pitchfork, Transcritical, SaddleNode, Hopf, DriftRW };

const char* to_string(EventKind k);

struct Event {
  EventKind kind{};
  double mu = 0.0;
  double x = 0.0;
  double y = 0.0;
  double arclength = 0.0;
  /// |Im| of the crossing pair for Hopf events; 0 otherwise.
  double omega = 0.0;
};

struct Branch {
  Coefficients coeffs;  // mu field is ignored; each point carries its own mu
  int mode_m = 2;
  std::vector<BranchPoint> points;
  std::vector<Event> events;  // populated by detect_events, sorted by arclength
  StopReason stop_begin = StopReason::ParameterBound;
  StopReason stop_end = StopReason::ParameterBound;
  IsotropyClass label = IsotropyClass::Trivial;
  /// Size of the conjugacy orbit of an interior representative point under
  /// the symmetries of the restricted system (4 on mixed modes of the
  /// truncated field, 2 when only one parity survives, 1 when fixed).
  int multiplicity = 1;

  ModePair modes() const { return ModePair(mode_m); }
};

struct Seed {
  double x = 0.0;
  double y = 0.0;
  double mu = 0.0;
  /// Direction hint in (x, y, mu); need not be tangent, must be nonzero.
  Eigen::Vector3d tangent_hint{0.0, 0.0, 1.0};
};

/// Continue from `seed` in the hinted direction and in the opposite one,
/// merging the two half-branches. Eigenvalues of the 4D Jacobian are
/// recorded at every accepted point. The branch stops at parameter bounds,
/// on step collapse, or after max_points per direction.
Branch continue_branch(const Coefficients& base, const ModePair& modes,
                       const Seed& seed, const Settings& settings);

/// Locate all events on `branch` by monitoring, between consecutive points:
/// a sign change of det of the restricted Jacobian (steady-state events;
/// SaddleNode when mu has a local extremum at the crossing, otherwise
/// Pitchfork or Transcritical depending on whether the residual parity
/// protects the crossing), a sign change of the real part of its complex
/// eigenvalue pair (Hopf), and a sign change of the out-of-plane eigenvalue
/// (DriftRW). Crossings are refined by bisection to parameter tolerance
/// 1e-10 and stored on the branch sorted by arclength.
std::vector<Event> detect_events(Branch& branch);

/// Seeds for the two half-branches bifurcating at a Pitchfork/Transcritical
/// event: the event point displaced by switch_amplitude along the kernel of
/// the restricted Jacobian.
std::array<Seed, 2> branch_switch(const Branch& branch, const Event& ev,
                                  const Settings& settings);

enum class Scenario {
  ExchangeHysteresis,  // both primaries supercritical, unstable connector
  SmoothTransition,    // stable mixed connector between the primaries
  SubcriticalSWRW,     // one primary subcritical; Hopf and/or drift events
  Other,
};

const char* to_string(Scenario s);

struct Diagram {
  std::vector<Branch> branches;
  Scenario scenario = Scenario::Other;
};

/// Linear stability of one recorded point: no eigenvalue of the full 4D
/// Jacobian has real part above +1e-9. The band keeps group-forced neutral
/// directions (phase rotation, and the drift family of the truncated field)
/// from counting as unstable.
bool point_is_stable(const BranchPoint& p);

/// Fraction of branch arclength whose endpoints are both stable in the
/// sense of point_is_stable. A branch counts as stable when this fraction
/// is >= 0.9.
double stable_fraction(const Branch& branch);

bool is_stable_branch(const Branch& branch);

/// Continue the trivial branch across [mu_min, mu_max], switch onto every
/// branch spawned at Pitchfork/Transcritical events (recursively, with
/// duplicate suppression), detect events on all branches, and classify the
/// scenario.
Diagram assemble_diagram(const Coefficients& c, const ModePair& modes,
                         const Settings& settings);

}  // namespace annulus::continuation
