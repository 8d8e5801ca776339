#pragma once

#include <vector>

#include "annulus/errors.hpp"
#include "annulus/normal_form.hpp"

namespace annulus::dynamics {

using normal_form::Coefficients;
using symmetry::Amplitudes;
using symmetry::ModePair;

struct SimSettings {
  double t_end = 100.0;
  double dt_sample = 0.01;  // uniform spacing of the recorded samples
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double blowup_norm = 1e6;
};

struct Sample {
  double t = 0.0;
  Amplitudes z;
};

struct Trajectory {
  std::vector<Sample> samples;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

/// Thrown when the state norm exceeds the blow-up guard; carries everything
/// sampled up to that moment.
struct BlowupError : NumericalError {
  Trajectory partial;
  BlowupError(const std::string& what, Trajectory traj)
      : NumericalError(what), partial(std::move(traj)) {}
};

/// Thrown when error control drives the step below dt_min.
struct StepSizeUnderflow : NumericalError {
  Trajectory partial;
  StepSizeUnderflow(const std::string& what, Trajectory traj)
      : NumericalError(what), partial(std::move(traj)) {}
};

/// Adaptive fifth-order integration (embedded fourth-order error estimate)
/// of the amplitude equations, with steps clipped to land exactly on the
/// sample times.
Trajectory integrate(const Coefficients& c, const ModePair& modes,
                     const Amplitudes& z0, const SimSettings& settings);

enum class AttractorKind { Equilibrium, RotatingWave, StandingWave, Unclassified };

const char* to_string(AttractorKind k);

struct Classification {
  AttractorKind kind = AttractorKind::Unclassified;
  double drift_rate = 0.0;  // pattern rotation speed of a rotating wave
  double period = 0.0;      // oscillation period of a standing wave
  Amplitudes final_state;
};

/// Inspects the trailing part of a trajectory. Checks run in order: settled
/// state, rigidly rotating state (constant invariants, drifting phase),
/// periodic standing oscillation (phase difference pinned, amplitudes
/// periodic), anything else is Unclassified.
Classification classify(const Trajectory& traj, const ModePair& modes,
                        double tail_fraction = 0.5, double tol = 1e-6);

}  // namespace annulus::dynamics
