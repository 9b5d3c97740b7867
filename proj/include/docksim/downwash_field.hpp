#pragma once

#include "docksim/common.hpp"
#include "docksim/rng.hpp"
#include "docksim/vehicle.hpp"

namespace docksim {

// Synthetic ground-truth downwash: a momentum-theory jet below the leader
// (core speed decaying with distance, Gaussian radial profile) mapped to a
// specific force on the follower. Acts only below the leader. This is the
// simulator's stand-in for real airflow; the learner only ever sees its
// effect on flight data, never these parameters.
struct FieldParams {
  double w0 = 8.0;            // jet core speed at the rotor plane, m/s
  double z_c = 0.2;           // core length, m
  double sigma0 = 0.15;       // base jet radius, m
  double k_spread = 0.15;     // radial spread per meter of descent
  double c_a = 0.74;          // w^2 -> acceleration coefficient
  double lambda_r = 0.3;      // radial push as a fraction of axial
  double turb_std_frac = 0.15; // turbulence std as fraction of |mean|
  double turb_tau = 0.2;      // OU time constant, s
  bool enabled = true;

  void validate() const;
};

// Ornstein-Uhlenbeck turbulence state; deterministic given its stream.
struct TurbulenceState {
  Vec3 ou = Vec3::Zero(); // m/s^2
  Prng rng;

  explicit TurbulenceState(uint64_t seed) : rng(seed) {}
};

// Mean (turbulence-free) downwash acceleration on the follower.
Vec3 mean_force(const VehicleState& leader, const VehicleState& follower,
                const FieldParams& params);

// One OU update around the given mean; stationary vector std is
// turb_std_frac * |mean| (split evenly across the three axes).
Vec3 sample_force(const Vec3& mean, TurbulenceState& turb,
                  const FieldParams& params, double dt);

} // namespace docksim
