#pragma once

#include <Eigen/Dense>

#include "annulus/chebyshev.hpp"
#include "annulus/symmetry.hpp"

namespace annulus::pattern {

using symmetry::Amplitudes;
using symmetry::ModePair;

/// Streamfunction field of a two-mode state on a uniform polar raster:
/// row j is the radius r_inner + j * gap / (n_r - 1) (row 0 = inner wall),
/// column i is the angle 2*pi*i / n_theta. Radial profiles default to a
/// half-sine vanishing at both walls.
Eigen::MatrixXd synthesize(const Amplitudes& z, const ModePair& modes,
                           double r_inner, double r_outer, int n_r,
                           int n_theta);

/// Same raster, but with radial profiles sampled on a collocation grid
/// (for instance a computed eigenmode), evaluated by barycentric
/// interpolation.
Eigen::MatrixXd synthesize(const Amplitudes& z, const ModePair& modes,
                           const chebyshev::Grid& grid,
                           const Eigen::VectorXcd& profile1,
                           const Eigen::VectorXcd& profile2, int n_theta);

/// Number of counter-rotating cell pairs crossed along one ring of the
/// field (half the cyclic sign changes, entries below the noise floor
/// skipped). Row -1 means the middle ring. Throws DegenerateField when the
/// ring has no signal above the floor.
int count_vortex_pairs(const Eigen::MatrixXd& field, int row = -1);

/// Circular shift of the angular axis by `shift` columns (positive shifts
/// move content toward higher column indices).
Eigen::MatrixXd rotate_columns(const Eigen::MatrixXd& field, int shift);

/// Gray levels for encode_pgm: 128 at zero, scaled by the field's absolute
/// maximum (a uniformly zero field maps to flat 128).
Eigen::MatrixXd to_gray(const Eigen::MatrixXd& field);

}  // namespace annulus::pattern
