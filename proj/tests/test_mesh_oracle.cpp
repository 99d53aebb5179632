#include <anharmonic/mesh_oracle.hpp>
#include <anharmonic/reference_table.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace anharmonic;

TEST_CASE("Hermite zeros") {
  const auto r2 = hermite_roots<double>(2);
  CHECK(r2[0] == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r2[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));

  // H_3 = 8x^3 - 12x: zeros 0, +-sqrt(3/2).
  const auto r3 = hermite_roots<double>(3);
  CHECK(r3[1] == 0.0);
  CHECK(r3[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));

  // sum x_i^2 = trace J^2 = N(N-1)/2
  for (int N : {10, 41, 75}) {
    const auto r = hermite_roots<double>(N);
    double s = 0;
    for (double x : r) s += x * x;
    CHECK(s == doctest::Approx(N * (N - 1) / 2.0).epsilon(1e-13));
    for (int i = 0; i < N; ++i) CHECK(r[i] == -r[N - 1 - i]);
  }
  CHECK_THROWS_AS(hermite_roots<double>(1), ValidationError);
}

TEST_CASE("kinetic matrix: symmetric, harmonic spectrum exact") {
  const int N = 40;
  const auto mesh = hermite_mesh<double>(N);
  CHECK((mesh.kinetic - mesh.kinetic.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const auto levels = hermite_spectrum<double>(mesh, 1.0, 0.0, 1.0);
  for (int k = 0; k < N; ++k) CHECK(levels[k] == doctest::Approx(2 * k + 1).epsilon(1e-11));
}

TEST_CASE("one-dimensional entries of the reference table") {
  for (const auto& ref : kReferenceTable) {
    if (ref.D != 1) continue;
    MeshConfig cfg;
    cfg.g2 = ref.g2;
    const auto r = mesh_energy(cfg, 0);
    CHECK(std::abs(r.energy() - ref.value()) <= ref.last_digit());
    CHECK(r.convergence_delta <= 1e-12 * r.energy());
  }
}

TEST_CASE("radial entries of the reference table") {
  for (const auto& ref : kReferenceTable) {
    const auto r = radial_mesh_energy(ref.D, 0, ref.g2);
    CAPTURE(ref.D);
    CAPTURE(ref.g2);
    CHECK(std::abs(r.energy() - ref.value()) <= ref.last_digit());
  }
}

TEST_CASE("radial D = 1 reproduces both one-dimensional parities") {
  for (double g2 : {0.1, 1.0, 20.0}) {
    MeshConfig cfg;
    cfg.g2 = g2;
    const auto oned = mesh_energy(cfg, 0);
    CHECK(radial_mesh_energy(1, 0, g2).energy() == doctest::Approx(oned.eigenvalues[0]).epsilon(1e-11));
    CHECK(radial_mesh_energy(1, 1, g2).energy() == doctest::Approx(oned.eigenvalues[1]).epsilon(1e-11));
    CHECK(radial_mesh_energy(1, 0, g2, 75, 1).energy() == doctest::Approx(oned.eigenvalues[2]).epsilon(1e-11));
  }
}

TEST_CASE("D + 2 with ell equals D with ell + 1") {
  // Lambda = ell + (D-3)/2 is all the radial equation sees.
  CHECK(radial_mesh_energy(5, 0, 1.0).energy() == doctest::Approx(radial_mesh_energy(3, 1, 1.0).energy()).epsilon(1e-12));
}

TEST_CASE("ground energy increases with D") {
  for (double g2 : {0.1, 1.0, 10.0}) {
    double prev = 0;
    for (int D : {1, 2, 3, 6}) {
      const double e = radial_mesh_energy(D, 0, g2).energy();
      CHECK(e > prev);
      prev = e;
    }
  }
}

TEST_CASE("scale tuning lands on the convergence plateau") {
  MeshConfig cfg;
  cfg.g2 = 1.0;
  const double h = tune_hermite_scale(cfg, 0);
  const auto mesh = hermite_mesh<double>(75);
  const auto low = hermite_mesh<double>(65);
  const double e = hermite_spectrum<double>(mesh, h, 1.0, 1.0)[0];
  CHECK(std::abs(e - hermite_spectrum<double>(low, h, 1.0, 1.0)[0]) < 1e-13);
  // Perturbing the scale by 10 % stays on the plateau.
  CHECK(hermite_spectrum<double>(mesh, 1.1 * h, 1.0, 1.0)[0] == doctest::Approx(e).epsilon(1e-13));
}

TEST_CASE("pure quartic ground state and strong coupling") {
  const auto q = pure_quartic_ground();
  CHECK(q.energy() == doctest::Approx(1.0603620904841829).epsilon(1e-12));
  CHECK(q.convergence_delta < 1e-12);
  MeshConfig cfg;
  cfg.g2 = 1e6;
  const double scaled = mesh_energy(cfg, 0).energy() / std::cbrt(1e6);
  CHECK(std::abs(scaled - q.energy()) < 1e-4);
}

TEST_CASE("extended precision mesh agrees and tightens the delta") {
  using F50 = boost::multiprecision::cpp_bin_float_50;
  MeshConfig cfg;
  cfg.g2 = 1.0;
  const auto d = mesh_energy(cfg, 0);
  const auto [e, delta] = mesh_energy_extended<F50>(cfg, 0, d.scale_used);
  CHECK(static_cast<double>(e) == doctest::Approx(d.energy()).epsilon(1e-13));
  CHECK(static_cast<double>(delta) < 1e-18);
}

TEST_CASE("validation and convergence errors") {
  MeshConfig cfg;
  cfg.points = 15;
  CHECK_THROWS_AS(mesh_energy(cfg, 0), ValidationError);
  cfg.points = 75;
  CHECK_THROWS_AS(mesh_energy(cfg, 40), ValidationError);
  cfg.g2 = 0;
  cfg.c2 = 0;
  CHECK_THROWS_AS(mesh_energy(cfg, 0), ValidationError);
  CHECK_THROWS_AS(radial_mesh_energy(0, 0, 1.0), ValidationError);
  CHECK_THROWS_AS(radial_mesh_energy(1, 2, 1.0), InvalidAngular);
  CHECK_THROWS_AS(radial_mesh_energy(3, -1, 1.0), ValidationError);

  MeshConfig tight;
  tight.points = 20;
  tight.g2 = 100.0;
  tight.scale = 1.0;
  CHECK_THROWS_AS(mesh_energy(tight, 0), NotConverged);
}

TEST_CASE("mesh result JSON") {
  MeshConfig cfg;
  const nlohmann::json j = mesh_energy(cfg, 1);
  CHECK(j.at("k") == 1);
  CHECK(j.at("E").get<double>() == doctest::Approx(4.64881270421205).epsilon(1e-12));
}
