#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "annulus/chebyshev.hpp"

namespace annulus::pde {

using Complex = std::complex<double>;

/// Linearized annulus models sharing the streamfunction formulation:
/// Gfd couples vorticity to a conducted temperature profile, Ehd couples it
/// to a charge density with its induced potential.
enum class Model { Gfd, Ehd };

const char* to_string(Model m);

struct StabilityConfig {
  Model model = Model::Gfd;
  double eta = 0.5;      // radius ratio inner/outer, in (0, 1)
  double prandtl = 1.0;  // momentum / scalar diffusivity ratio
  double delta = 0.0;    // charge diffusion coefficient (Ehd)
  int resolution = 48;   // collocation degree, >= 16
  /// Orientation switches for the destabilizing couplings. With +1 a
  /// positive Rayleigh number destabilizes: buoyancy pushes warm fluid
  /// outward (Gfd), injected charge relaxes without decay reversal (Ehd).
  int gravity_sign = +1;
  int charge_sign = +1;
  /// Base charge profile samples (radius, density), interpolated by a cubic
  /// spline. Ehd requires one unless allow_zero_charge substitutes zero.
  std::vector<std::array<double, 2>> charge_profile;
  bool allow_zero_charge = false;

  double r_inner() const { return eta / (1.0 - eta); }
  double r_outer() const { return 1.0 / (1.0 - eta); }
};

/// Hard validation errors throw (ConfigError subtypes); soft issues come
/// back as warning strings.
std::vector<std::string> validate(const StabilityConfig& cfg);

/// Generalized eigenpencil A v = lambda B v for azimuthal wavenumber m at a
/// given Rayleigh number, with wall rows bordered into A.
struct Pencil {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  chebyshev::Grid grid;
  int fields = 0;  // state blocks of grid.size() rows each
};

Pencil assemble_pencil(const StabilityConfig& cfg, int m, double rayleigh);

struct Spectrum {
  std::vector<Complex> eigenvalues;  // descending real part
  Complex leading{0.0, 0.0};
};

/// Shift-and-invert solve of the pencil; spurious infinite modes from the
/// bordered rows are filtered out. Throws EigensolveFailure when repeated
/// shifts fail to factor.
Spectrum spectrum(const StabilityConfig& cfg, int m, double rayleigh);

double growth_rate(const StabilityConfig& cfg, int m, double rayleigh);

/// Radial profile of the leading eigenmode (streamfunction block).
struct ModeProfile {
  chebyshev::Grid grid;
  Eigen::VectorXcd streamfunction;
  Complex eigenvalue{0.0, 0.0};
};

ModeProfile leading_mode(const StabilityConfig& cfg, int m, double rayleigh);

struct NeutralPoint {
  int m = 0;
  double rayleigh = 0.0;
  bool converged = false;
  int evaluations = 0;
};

/// Rayleigh number where the leading growth rate changes sign, located by
/// geometric bracketing from the guess followed by a secant/bisection
/// hybrid. Throws NoNeutralPoint when no sign change exists in range.
NeutralPoint neutral_rayleigh(const StabilityConfig& cfg, int m,
                              double ra_guess = 0.0);

/// Neutral values for every m in [m_lo, m_hi], computed on a thread pool and
/// merged in index order. A mode whose search fails is marked unconverged
/// rather than aborting the sweep.
std::vector<NeutralPoint> neutral_curve(const StabilityConfig& cfg, int m_lo,
                                        int m_hi, int threads = 1);

/// Minimizer of the neutral curve over [m_lo, m_hi].
NeutralPoint critical_mode(const StabilityConfig& cfg, int m_lo, int m_hi,
                           int threads = 1);

struct Codim2Result {
  int m = 0;             // lower competing wavenumber; the upper is m + 1
  double eta_star = 0.0;
  double ra_star = 0.0;
  /// d(Re lambda)/dRa at the codimension-two point for modes m and m + 1.
  std::array<double, 2> dlambda_dra{0.0, 0.0};
  /// Scan interval that bracketed the crossing before bisection.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  /// |Ra_n(m) - Ra_n(m+1)| at (eta_star, ra_star).
  double residual = 0.0;
};

/// Radius ratio where modes m and m + 1 attain the same neutral Rayleigh
/// number: sign-change scan of the neutral-value difference over
/// [eta_lo, eta_hi], then bisection. Throws NoCrossing when the difference
/// never changes sign.
Codim2Result codim2_point(const StabilityConfig& cfg, int m, double eta_lo,
                          double eta_hi);

}  // namespace annulus::pde
