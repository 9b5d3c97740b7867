#include "doctest.h"

#include "docksim/downwash_field.hpp"
#include "docksim/rng.hpp"

using namespace docksim;

namespace {
VehicleState at(const Vec3& p) {
  VehicleState s;
  s.p = p;
  return s;
}
} // namespace

TEST_CASE("mean force is zero at or above the leader") {
  const FieldParams fp;
  CHECK(mean_force(at({0, 0, 0}), at({0, 0, -0.5}), fp) == Vec3::Zero());
  CHECK(mean_force(at({0, 0, 0}), at({0.2, 0.1, 0.0}), fp) == Vec3::Zero());
}

TEST_CASE("mean force decays to nothing far off axis") {
  const FieldParams fp;
  const Vec3 f = mean_force(at({0, 0, 0}), at({10.0, 0, 0.36}), fp);
  CHECK(f.norm() < 1e-6);
}

TEST_CASE("mean force matches the closed form at the calibration point") {
  const FieldParams fp; // defaults: w0=8, z_c=0.2, sigma0=0.15, k_spread=0.15, c_a=0.74
  const Vec3 f = mean_force(at({0, 0, -2.5}), at({0, 0, -2.5 + 0.36}), fp);
  // Independent evaluation of the jet model at r=0, dz=0.36.
  const double w = 8.0 * 0.2 / (0.2 + 0.36);
  const double expected = 0.74 * w * w;
  CHECK(f.x() == 0.0);
  CHECK(f.y() == 0.0);
  CHECK(f.z() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(f.z() == doctest::Approx(6.04).epsilon(1e-3)); // near the strongest case studied
}

TEST_CASE("mean force is continuous at the dz->0+ boundary") {
  const FieldParams fp;
  const Vec3 f = mean_force(at({0, 0, 0}), at({0, 0, 1e-12}), fp);
  CHECK(f.z() == doctest::Approx(fp.c_a * fp.w0 * fp.w0).epsilon(1e-9));
}

TEST_CASE("radial component points away from the jet axis and respects rotation") {
  const FieldParams fp;
  const Vec3 f = mean_force(at({0, 0, 0}), at({0.1, 0, 0.4}), fp);
  CHECK(f.x() > 0.0);
  CHECK(f.y() == 0.0);
  CHECK(f.z() > 0.0);

  // Rotational symmetry: rotating the offset rotates the radial part and
  // preserves the axial part exactly.
  Prng rng(7);
  for (int i = 0; i < 100; ++i) {
    const double r = rng.uniform(0.0, 1.0);
    const double dz = rng.uniform(0.05, 1.5);
    const double th = rng.uniform(-kPi, kPi);
    const Vec3 base = mean_force(at({0, 0, 0}), at({r, 0, dz}), fp);
    Mat3 R;
    R << std::cos(th), -std::sin(th), 0, std::sin(th), std::cos(th), 0, 0, 0, 1;
    const Vec3 rot = mean_force(at({0, 0, 0}), at(R * Vec3(r, 0, dz)), fp);
    CHECK((rot - R * base).norm() < 1e-12);
  }
}

TEST_CASE("axial magnitude is monotone non-increasing in r and dz") {
  const FieldParams fp;
  double prev = 1e9;
  for (double r = 0.0; r <= 1.5; r += 0.05) {
    const double f = mean_force(at({0, 0, 0}), at({r, 0, 0.4}), fp).z();
    CHECK(f <= prev + 1e-12);
    prev = f;
  }
  prev = 1e9;
  for (double dz = 0.05; dz <= 2.0; dz += 0.05) {
    const double f = mean_force(at({0, 0, 0}), at({0, 0, dz}), fp).z();
    CHECK(f <= prev + 1e-12);
    prev = f;
  }
}

TEST_CASE("turbulence off returns the mean exactly") {
  FieldParams fp;
  fp.turb_std_frac = 0.0;
  TurbulenceState turb(1);
  const Vec3 mean(0.5, -0.2, 3.0);
  const Vec3 out = sample_force(mean, turb, fp, 0.002);
  CHECK(out == mean);
}

TEST_CASE("OU stationary statistics match the configured fraction") {
  FieldParams fp; // turb_std_frac = 0.15, turb_tau = 0.2
  TurbulenceState turb(42);
  const Vec3 mean(0, 0, 6.0);
  const long n = 100000;
  const long burn = 2000;
  double acc = 0;
  for (long i = 0; i < n + burn; ++i) {
    const Vec3 s = sample_force(mean, turb, fp, 0.002);
    if (i >= burn) acc += (s - mean).squaredNorm();
  }
  const double vector_std = std::sqrt(acc / n);
  const double target = fp.turb_std_frac * mean.norm();
  CHECK(vector_std == doctest::Approx(target).epsilon(0.10));
}

TEST_CASE("turbulence is deterministic given the seed") {
  FieldParams fp;
  TurbulenceState t1(99), t2(99);
  const Vec3 mean(0, 0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Vec3 a = sample_force(mean, t1, fp, 0.002);
    const Vec3 b = sample_force(mean, t2, fp, 0.002);
    CHECK(a == b);
  }
}

TEST_CASE("field params validation") {
  FieldParams fp;
  fp.lambda_r = 1.0;
  CHECK_THROWS_AS(fp.validate(), InvalidParameter);
  fp = FieldParams{};
  fp.w0 = 0;
  CHECK_THROWS_AS(fp.validate(), InvalidParameter);
}
