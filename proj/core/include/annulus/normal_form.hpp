#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "annulus/symmetry.hpp"

namespace annulus::normal_form {

using symmetry::Amplitudes;
using symmetry::Complex;
using symmetry::InvariantTriple;
using symmetry::IsotropyClass;
using symmetry::ModePair;

/// Coefficients of the truncated equivariant vector field
///   dz1/dt = p1 * z1 + q1 * conj(z1)^m * z2^m
///   dz2/dt = p2 * z2 + q2 * z1^(m+1) * conj(z2)^(m-1)
/// with
///   p1 = mu         + a11*u + a12*v + e1*w
///   p2 = (mu+split) + a21*u + a22*v + e2*w
///   q1 = q10,  q2 = q20  (constants at this truncation order).
/// `split` is the detuning between the two mode onsets; callers normally
/// keep it >= 0 so the upper mode destabilizes first as mu increases.
struct Coefficients {
  double mu = 0.0;
  double split = 0.0;
  double a11 = -1.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = -1.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double q10 = 0.0;
  double q20 = 0.0;

  Coefficients with_mu(double mu_new) const {
    Coefficients c = *this;
    c.mu = mu_new;
    return c;
  }
};

/// Values of the invariant coefficient functions at one point.
struct PQValues {
  double p1 = 0.0;
  double p2 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

PQValues pq_values(const Coefficients& c, const InvariantTriple& inv);

/// Nondegeneracy advisories: a11 != 0, a22 != 0, a11*a22 - a12*a21 != 0.
/// Returned as human-readable strings; empty means no concerns.
std::vector<std::string> degeneracy_warnings(const Coefficients& c);

/// Copy of `c` with the higher-order symmetry-breaking terms removed
/// (e1 = e2 = q10 = q20 = 0). The truncated field has an extra phase
/// symmetry in each mode, so real steady states come in (+-x, +-y)
/// quadruples.
Coefficients z2z2_truncation(const Coefficients& c);

/// Full vector field on C^2.
Amplitudes rhs(const Amplitudes& z, const Coefficients& c, const ModePair& modes);

/// Same field in real coordinates (Re z1, Im z1, Re z2, Im z2).
Eigen::Vector4d rhs_real4(const Eigen::Vector4d& x, const Coefficients& c,
                          const ModePair& modes);

/// Analytic Jacobian of rhs_real4.
Eigen::Matrix4d jacobian(const Amplitudes& z, const Coefficients& c,
                         const ModePair& modes);

/// Eigenvalues of a real 4x4 matrix, sorted by descending real part
/// (ties by descending imaginary part).
std::array<Complex, 4> eigenvalues4(const Eigen::Matrix4d& J);

/// --- Restricted system on the reflection-invariant plane {z1, z2 real} ---
///
/// With z1 = x, z2 = y real the field is tangent to the plane and reads
///   f1 = p1*x + q10*x^m*y^m
///   f2 = p2*y + q20*x^(m+1)*y^(m-1)
/// evaluated at u = x^2, v = y^2, w = 2*x^(m+1)*y^m.

Eigen::Vector2d rhs_fix_z2(double x, double y, const Coefficients& c,
                           const ModePair& modes);

Eigen::Matrix2d jacobian_fix_z2(double x, double y, const Coefficients& c,
                                const ModePair& modes);

/// The 2x2 block of the 4D Jacobian acting on the imaginary (out-of-plane)
/// directions at a real point. At a nontrivial real steady state its
/// determinant vanishes (group orbit direction), so its trace is the single
/// meaningful out-of-plane eigenvalue; a sign change of that trace along a
/// branch signals the onset of drifting (rotating-wave) solutions.
Eigen::Matrix2d transverse_block(double x, double y, const Coefficients& c,
                                 const ModePair& modes);

/// Residual discrete symmetry of the restricted system:
/// (x, y) -> (-x, y) for odd m, (x, y) -> (x, -y) for even m.
/// Verifies the equivariance identity at `n_samples` random points; returns
/// the largest violation found (exact zero up to roundoff when correct).
double parity_symmetry_residual(const Coefficients& c, const ModePair& modes,
                                int n_samples, unsigned seed);

/// A located steady state of the full 4D field with its linearization data.
struct SteadyState {
  Amplitudes z;
  double mu = 0.0;
  IsotropyClass isotropy = IsotropyClass::Trivial;
  std::array<Complex, 4> eigenvalues{};
  bool stable = false;
};

/// Build the linearization record for a steady state at real (x, y).
/// `stable` means every eigenvalue except the group-forced zero (present
/// whenever z != 0) has negative real part.
SteadyState make_steady_state(double x, double y, const Coefficients& c,
                              const ModePair& modes);

/// --- Primary pure-mode branches ---

enum class PrimaryMode {
  LowerPure,  // (x, 0), isotropy Dm, bifurcates at mu = 0
  UpperPure,  // (0, y), isotropy D(m+1), bifurcates at mu = -split
};

/// One pure-mode branch with its closed-form amplitude:
///   LowerPure: x^2 = -mu / a11
///   UpperPure: y^2 = -(mu + split) / a22
/// The symmetry-breaking terms vanish identically on pure modes, so the
/// closed forms are exact for the full field.
class PrimaryBranch {
 public:
  PrimaryBranch(const Coefficients& c, const ModePair& modes, PrimaryMode which);

  PrimaryMode which() const { return which_; }
  /// mu at which the branch meets the trivial state.
  double onset_mu() const;
  /// True when the branch exists on the side where the trivial state is
  /// already unstable to its mode.
  bool supercritical() const;
  /// Nonnegative amplitude at mu, or nullopt where the branch does not exist.
  std::optional<double> amplitude(double mu) const;
  /// Full steady-state record at mu (positive-amplitude representative).
  std::optional<SteadyState> state(double mu) const;

 private:
  Coefficients c_;
  ModePair modes_;
  PrimaryMode which_;
};

struct PrimaryBranches {
  PrimaryBranch lower;
  PrimaryBranch upper;
};

/// Throws DegenerateCoefficient when a11 or a22 vanishes.
PrimaryBranches primary_branches(const Coefficients& c, const ModePair& modes);

/// --- Steady-state enumeration on the invariant plane ---

struct Box {
  double xmin = -2.0;
  double xmax = 2.0;
  double ymin = -2.0;
  double ymax = 2.0;
};

struct EnumerationResult {
  std::vector<SteadyState> states;  // sorted by (x, y), deduplicated
  /// Seeds whose Newton iteration failed to converge; informational.
  std::vector<std::array<double, 2>> newton_failures;
};

/// Locate all steady states of the restricted system inside `box` by
/// sign-change bracketing on a grid_n x grid_n cell grid followed by damped
/// Newton. Roots closer than 1e-8 are merged.
EnumerationResult steady_states_fix_z2(const Coefficients& c,
                                       const ModePair& modes, const Box& box,
                                       int grid_n);

/// Damped Newton on the restricted system from (x0, y0); nullopt on failure.
/// Convergence: residual max-norm <= 1e-12 within 50 iterations.
std::optional<std::array<double, 2>> newton_refine(double x0, double y0,
                                                   const Coefficients& c,
                                                   const ModePair& modes);

}  // namespace annulus::normal_form
