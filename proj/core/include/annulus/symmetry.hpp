#pragma once

#include <array>
#include <complex>
#include <vector>

namespace annulus::symmetry {

using Complex = std::complex<double>;

/// Pair of interacting azimuthal mode numbers (m, m+1). Only the lower one
/// is stored; the upper is derived. m >= 2 is required: the m = 1 interaction
/// has a different equivariant structure and is out of scope.
struct ModePair {
  int m;

  explicit ModePair(int m_);

  int lower() const { return m; }
  int upper() const { return m + 1; }
};

/// Complex amplitudes (z1, z2) of the two interacting modes.
struct Amplitudes {
  Complex z1{0.0, 0.0};
  Complex z2{0.0, 0.0};

  bool finite() const;
  double norm() const;  // Euclidean norm of (z1, z2) in C^2 ~ R^4
};

/// Element of O(2) in reflection-then-rotation normal form:
///   g = R(angle) * K^reflection
/// where K is the reflection (complex conjugation on both amplitudes) and
/// R(angle) rotates the annulus by `angle`. The reflection, when present,
/// acts first. `angle` is kept in [0, 2*pi).
struct GroupElement {
  bool reflection = false;
  double angle = 0.0;

  static GroupElement identity() { return {false, 0.0}; }
  static GroupElement rotation(double theta);
  static GroupElement reflection_then_rotation(double theta);
};

/// g1 * g2: the element acting as "apply g2, then g1".
GroupElement compose(const GroupElement& g1, const GroupElement& g2);

GroupElement inverse(const GroupElement& g);

/// Group action on amplitudes: rotation by theta multiplies z1 by
/// exp(i*m*theta) and z2 by exp(i*(m+1)*theta); reflection conjugates both.
Amplitudes act(const GroupElement& g, const Amplitudes& z, const ModePair& modes);

/// The Hilbert-basis invariants of the action:
///   u = |z1|^2, v = |z2|^2,
///   w = z1^(m+1) * conj(z2)^m + conj(z1)^(m+1) * z2^m.
/// All three are real; |w| <= 2 * u^((m+1)/2) * v^(m/2).
struct InvariantTriple {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

InvariantTriple invariants(const Amplitudes& z, const ModePair& modes);

/// The four generators of the module of equivariant maps, evaluated at z,
/// in the fixed order:
///   (z1, 0), (0, z2), (conj(z1)^m * z2^m, 0), (0, z1^(m+1) * conj(z2)^(m-1)).
/// Every smooth equivariant vector field is an invariant-coefficient
/// combination of these.
std::array<Amplitudes, 4> equivariant_generators(const Amplitudes& z,
                                                 const ModePair& modes);

/// Conjugacy classes of isotropy subgroups of the action, ordered from the
/// full group down to the trivial subgroup.
enum class IsotropyClass {
  FullO2,   // z = 0
  Dm,       // pure lower mode  (x, 0)
  Dl,       // pure upper mode  (0, y)
  Z2,       // mixed mode on a reflection axis
  Trivial,  // generic point
};

const char* to_string(IsotropyClass c);

/// Classify the isotropy of z. Moduli are compared against `tol`; the Z2
/// test checks (m+1)*arg(z1) - m*arg(z2) = 0 (mod pi) within `tol`.
IsotropyClass isotropy_label(const Amplitudes& z, const ModePair& modes,
                             double tol);

/// Overload with tol = 1e-9 * max(1, |z|).
IsotropyClass isotropy_label(const Amplitudes& z, const ModePair& modes);

/// Orthogonal projection of z onto the canonical fixed-point subspace of the
/// class: FullO2 -> 0; Dm -> (Re z1, 0); Dl -> (0, Re z2);
/// Z2 -> (Re z1, Re z2); Trivial -> z.
Amplitudes fix_subspace_projection(IsotropyClass c, const Amplitudes& z);

/// z^n for small non-negative integer n by repeated multiplication.
Complex ipow(Complex z, int n);

}  // namespace annulus::symmetry
