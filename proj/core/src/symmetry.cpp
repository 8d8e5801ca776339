#include "annulus/symmetry.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace annulus::symmetry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2*pi). Values within one ulp of 2*pi collapse to 0.
double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Distance from x to the nearest integer multiple of pi.
double dist_mod_pi(double x) {
  const double pi = std::numbers::pi;
  double d = std::fabs(x - pi * std::round(x / pi));
  return d;
}

}  // namespace

ModePair::ModePair(int m_) : m(m_) {
  if (m_ < 2) {
    throw std::invalid_argument("ModePair: mode number must be >= 2, got " +
                                std::to_string(m_));
  }
}

bool Amplitudes::finite() const {
  return std::isfinite(z1.real()) && std::isfinite(z1.imag()) &&
         std::isfinite(z2.real()) && std::isfinite(z2.imag());
}

double Amplitudes::norm() const {
  return std::sqrt(std::norm(z1) + std::norm(z2));
}

GroupElement GroupElement::rotation(double theta) {
  return {false, wrap_angle(theta)};
}

GroupElement GroupElement::reflection_then_rotation(double theta) {
  return {true, wrap_angle(theta)};
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  // R(a1) K^e1 R(a2) K^e2 = R(a1 + s*a2) K^(e1 xor e2), s = -1 iff e1.
  double a2 = g1.reflection ? -g2.angle : g2.angle;
  GroupElement out;
  out.reflection = g1.reflection != g2.reflection;
  out.angle = wrap_angle(g1.angle + a2);
  return out;
}

GroupElement inverse(const GroupElement& g) {
  // Rotations invert the angle; reflection-then-rotation elements are
  // involutions.
  if (g.reflection) return g;
  return {false, wrap_angle(-g.angle)};
}

Amplitudes act(const GroupElement& g, const Amplitudes& z,
               const ModePair& modes) {
  assert(z.finite());
  Amplitudes r = z;
  if (g.reflection) {
    r.z1 = std::conj(r.z1);
    r.z2 = std::conj(r.z2);
  }
  const Complex c1 = std::polar(1.0, modes.lower() * g.angle);
  const Complex c2 = std::polar(1.0, modes.upper() * g.angle);
  r.z1 *= c1;
  r.z2 *= c2;
  return r;
}

Complex ipow(Complex z, int n) {
  assert(n >= 0);
  Complex r{1.0, 0.0};
  while (n-- > 0) r *= z;
  return r;
}

InvariantTriple invariants(const Amplitudes& z, const ModePair& modes) {
  assert(z.finite());
  InvariantTriple t;
  t.u = std::norm(z.z1);
  t.v = std::norm(z.z2);
  const Complex cross = ipow(z.z1, modes.upper()) * ipow(std::conj(z.z2), modes.lower());
  t.w = 2.0 * cross.real();
  return t;
}

std::array<Amplitudes, 4> equivariant_generators(const Amplitudes& z,
                                                 const ModePair& modes) {
  const int m = modes.lower();
  std::array<Amplitudes, 4> g;
  g[0] = {z.z1, {0.0, 0.0}};
  g[1] = {{0.0, 0.0}, z.z2};
  g[2] = {ipow(std::conj(z.z1), m) * ipow(z.z2, m), {0.0, 0.0}};
  g[3] = {{0.0, 0.0}, ipow(z.z1, m + 1) * ipow(std::conj(z.z2), m - 1)};
  return g;
}

const char* to_string(IsotropyClass c) {
  switch (c) {
    case IsotropyClass::FullO2:
      return "FullO2";
    case IsotropyClass::Dm:
      return "Dm";
    case IsotropyClass::Dl:
      return "Dl";
    case IsotropyClass::Z2:
      return "Z2";
    case IsotropyClass::Trivial:
      return "Trivial";
  }
  return "?";
}

IsotropyClass isotropy_label(const Amplitudes& z, const ModePair& modes,
                             double tol) {
  const double a1 = std::abs(z.z1);
  const double a2 = std::abs(z.z2);
  if (z.norm() <= tol) return IsotropyClass::FullO2;
  if (a2 <= tol) return IsotropyClass::Dm;
  if (a1 <= tol) return IsotropyClass::Dl;
  const double chi =
      modes.upper() * std::arg(z.z1) - modes.lower() * std::arg(z.z2);
  if (dist_mod_pi(chi) <= tol) return IsotropyClass::Z2;
  return IsotropyClass::Trivial;
}

IsotropyClass isotropy_label(const Amplitudes& z, const ModePair& modes) {
  return isotropy_label(z, modes, 1e-9 * std::max(1.0, z.norm()));
}

Amplitudes fix_subspace_projection(IsotropyClass c, const Amplitudes& z) {
  switch (c) {
    case IsotropyClass::FullO2:
      return {{0.0, 0.0}, {0.0, 0.0}};
    case IsotropyClass::Dm:
      return {{z.z1.real(), 0.0}, {0.0, 0.0}};
    case IsotropyClass::Dl:
      return {{0.0, 0.0}, {z.z2.real(), 0.0}};
    case IsotropyClass::Z2:
      return {{z.z1.real(), 0.0}, {z.z2.real(), 0.0}};
    case IsotropyClass::Trivial:
      return z;
  }
  return z;
}

}  // namespace annulus::symmetry
