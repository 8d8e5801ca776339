#pragma once

#include <Eigen/Dense>

namespace annulus::chebyshev {

/// Gauss–Lobatto collocation grid on a radial interval, with nodal
/// differentiation matrices. Node 0 sits at the outer wall and node n at the
/// inner wall (the nodes descend with the cosine ordering).
struct Grid {
  int n = 0;  // polynomial degree; the grid has n + 1 nodes
  double r_inner = 0.0;
  double r_outer = 0.0;
  Eigen::VectorXd x;   // canonical nodes on [-1, 1], x[0] = 1
  Eigen::VectorXd r;   // mapped radii, r[0] = r_outer
  Eigen::MatrixXd d;   // d/dr on the nodes
  Eigen::MatrixXd d2;  // d^2/dr^2 on the nodes

  int size() const { return n + 1; }
};

/// Spectral differentiation matrix on Chebyshev–Gauss–Lobatto nodes (either
/// ordering), built from the closed-form barycentric weights with the
/// row-sum identity fixing the diagonal.
Eigen::MatrixXd differentiation_matrix(const Eigen::VectorXd& x);

/// Throws std::invalid_argument for n < 2 or a degenerate interval.
Grid make_grid(int n, double r_inner, double r_outer);

/// Barycentric evaluation of the interpolant through (r_j, values_j) at a
/// point inside the interval.
double interpolate_at(const Grid& g, const Eigen::VectorXd& values, double r);

Eigen::VectorXd interpolate(const Grid& g, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& r_eval);

}  // namespace annulus::chebyshev
