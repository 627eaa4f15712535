#pragma once

// Reference computations used only by tests. They are written from first
// principles and share no code with the library paths they check.

#include <array>
#include <cstddef>
#include <vector>

#include "vib2move/contact_mechanics.hpp"
#include "vib2move/sim_env.hpp"
#include "vib2move/slide_integrator.hpp"

namespace vib2move::testing {

/// Quasi-uniform points on the unit sphere (golden-angle spiral).
std::vector<std::array<double, 3>> fibonacci_sphere(std::size_t n);

/// Typical angular spacing of n quasi-uniform points on the unit sphere.
double sphere_resolution(std::size_t n);

/// Samples the limit surface w^T A w = 1 through w = (a1 u1, a2 u2, a3 u3)
/// with u on the unit sphere and returns the sample with the largest
/// dissipation w . twist.
Wrench2D max_dissipation_oracle(const LimitSurface& ls, const TwistSE2& twist,
                                std::size_t n_samples);

/// Angle between two wrenches after mapping both to the unit sphere used for
/// sampling (u = w / (a1, a2, a3), normalized).
double sphere_angle(const LimitSurface& ls, const Wrench2D& a, const Wrench2D& b);

/// Hand evaluation of w^T A w for the gravity-balancing wrench.
double balanced_quadratic_form(double mass, double gravity, double x_c, double a3);

/// Random object, patch and world poses with the pressure center well inside
/// the footprint and vibration switched on.
struct RandomContact {
  ObjectModel object;
  ContactState state;
};
RandomContact random_contact(Rng& rng);

/// World height of the object's CoM.
double com_height(const ContactState& s, const ObjectModel& obj);

}  // namespace vib2move::testing
