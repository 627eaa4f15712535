#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace vib2move::testing {

std::vector<std::array<double, 3>> fibonacci_sphere(std::size_t n) {
  std::vector<std::array<double, 3>> pts;
  pts.reserve(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return pts;
}

double sphere_resolution(std::size_t n) { return std::sqrt(4.0 * kPi / static_cast<double>(n)); }

Wrench2D max_dissipation_oracle(const LimitSurface& ls, const TwistSE2& twist,
                                std::size_t n_samples) {
  Wrench2D best;
  double best_power = -1e300;
  for (const auto& u : fibonacci_sphere(n_samples)) {
    const Wrench2D w{ls.a1 * u[0], ls.a2 * u[1], ls.a3 * u[2]};
    const double power = w.fx * twist.vx + w.fy * twist.vy + w.tau * twist.omega;
    if (power > best_power) {
      best_power = power;
      best = w;
    }
  }
  return best;
}

double sphere_angle(const LimitSurface& ls, const Wrench2D& a, const Wrench2D& b) {
  const std::array<double, 3> ua{a.fx / ls.a1, a.fy / ls.a2, a.tau / ls.a3};
  const std::array<double, 3> ub{b.fx / ls.a1, b.fy / ls.a2, b.tau / ls.a3};
  const double dot = ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2];
  const double na = std::sqrt(ua[0] * ua[0] + ua[1] * ua[1] + ua[2] * ua[2]);
  const double nb = std::sqrt(ub[0] * ub[0] + ub[1] * ub[1] + ub[2] * ub[2]);
  return std::acos(std::clamp(dot / (na * nb), -1.0, 1.0));
}

double balanced_quadratic_form(double mass, double gravity, double x_c, double a3) {
  const double weight = mass * gravity;
  const double torque = weight * x_c;
  return weight * weight + (torque / a3) * (torque / a3);
}

RandomContact random_contact(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  RandomContact rc;
  rc.object.mass = in(0.03, 0.15);
  rc.object.extents = {in(0.05, 0.10), in(0.10, 0.18)};
  rc.object.com_offset = {in(-0.005, 0.005), in(-0.005, 0.005)};

  ContactPatch patch;
  patch.r0 = in(0.010, 0.020);
  patch.c = in(0.4, 0.8);
  const double off_r = 0.5 * patch.r0 * std::sqrt(u(rng));
  const double off_a = in(-kPi, kPi);
  patch.pressure_center_offset = {off_r * std::cos(off_a), off_r * std::sin(off_a)};

  // Keep the whole patch on the footprint with some room to slide.
  const double mx = 0.5 * rc.object.extents.x - patch.r0 - 0.005;
  const double my = 0.5 * rc.object.extents.y - patch.r0 - 0.005;
  const PoseSE2 relative{in(-mx, mx), in(-my, my), in(-kPi, kPi)};
  const PoseSE2 finger{in(-0.1, 0.1), in(-0.1, 0.1), in(-kPi, kPi)};
  rc.state.finger_w = finger;
  rc.state.object_w = compose(finger, inverse(relative));
  rc.state.patch = patch;
  rc.state.vibration_on = true;
  return rc;
}

double com_height(const ContactState& s, const ObjectModel& obj) {
  return com_world(s.object_w, obj).y;
}

}  // namespace vib2move::testing
