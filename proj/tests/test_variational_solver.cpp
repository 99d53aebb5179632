#include <anharmonic/mesh_oracle.hpp>
#include <anharmonic/variational_solver.hpp>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace anharmonic;

namespace {

double mesh(double g2, int k) {
  MeshConfig cfg;
  cfg.g2 = g2;
  return mesh_energy(cfg, k).energy();
}

// log psi(x) - log psi(0) of the exact even eigenfunction: RK4 on
// psi'' = (x^2 + g2 x^4 - E) psi from psi(0) = 1, psi'(0) = 0.
long double exact_log_psi(double g2, long double E, long double x, int steps = 20000) {
  auto acc = [&](long double t, long double u) { return (t * t + g2 * t * t * t * t - E) * u; };
  const long double h = x / steps;
  long double u = 1, v = 0, t = 0;
  for (int i = 0; i < steps; ++i) {
    const long double k1u = v, k1v = acc(t, u);
    const long double k2u = v + h / 2 * k1v, k2v = acc(t + h / 2, u + h / 2 * k1u);
    const long double k3u = v + h / 2 * k2v, k3v = acc(t + h / 2, u + h / 2 * k2u);
    const long double k4u = v + h * k3v, k4v = acc(t + h, u + h * k3u);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    t += h;
  }
  return std::log(u);
}

}  // namespace

TEST_CASE("harmonic limit: energy 1 and the excited ladder 2N+1") {
  for (int n = 0; n <= 2; ++n)
    for (int p = 0; p <= 1; ++p) {
      const auto prm = harmonic_limit_params(n, p, 1e-8);
      const auto r = expectation_energy(prm);
      CHECK(r.E == doctest::Approx(2 * (2 * n + p) + 1).epsilon(1e-6));
      CHECK(r.E_effective == doctest::Approx(r.E).epsilon(1e-12));
    }
}

TEST_CASE("both energy forms agree away from the optimum") {
  ApproximantParams prm;
  prm.g2 = 3.0;
  prm.A = 0.4;
  prm.B = 1.7;
  const auto r = expectation_energy(prm);
  CHECK(std::abs(r.E - r.E_effective) <= 1e-13 * r.E);
  CHECK(r.doubling_delta <= 1e-13 * r.E);

  prm.n = 1;
  prm.p = 1;
  prm.nodes = {0.9};
  const auto r1 = expectation_energy(prm);
  CHECK(std::abs(r1.E - r1.E_effective) <= 1e-13 * r1.E);
}

TEST_CASE("E0 matches the effective-potential constant") {
  ApproximantParams prm;
  prm.g2 = 2.0;
  prm.A = -0.5;
  prm.B = 2.1;
  CHECK(expectation_energy(prm).E0 == doctest::Approx(effective_potential(prm, 0.0).e0).epsilon(1e-15));
}

TEST_CASE("variational bound holds for every probed (A, B)") {
  for (double g2 : {0.1, 1.0, 10.0}) {
    const double e_mesh = mesh(g2, 0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), ub(0.5, 6.0);
    ApproximantParams prm;
    prm.g2 = g2;
    for (int i = 0; i < 40; ++i) {
      prm.A = ua(rng);
      prm.B = ub(rng);
      CHECK(expectation_energy(prm).E >= e_mesh - 1e-12);
    }
  }
}

TEST_CASE("invalid inputs") {
  ApproximantParams prm;
  prm.B = -1.0;
  CHECK_THROWS_AS(expectation_energy(prm), ValidationError);
  prm.B = 1.0;
  QuadratureSpec q;
  q.points = 10;
  CHECK_THROWS_AS(expectation_energy(prm, q), ValidationError);
  CHECK_THROWS_AS(optimize(1, 0, 1.0, {}), ValidationError);
  CHECK_THROWS_AS(optimize(0, 2, 1.0, {}), ValidationError);
  CHECK_THROWS_AS(optimize(0, 0, -1.0, {}), ValidationError);
  CHECK_THROWS_AS(parse_precision("quad"), ValidationError);
}

TEST_CASE("too few points fail the doubling check") {
  ApproximantParams prm;
  prm.g2 = 1.0;
  prm.A = -0.62;
  prm.B = 2.37;
  QuadratureSpec q;
  q.points = 63;
  CHECK_THROWS_AS(expectation_energy(prm, q), QuadratureNotConverged);
}

TEST_CASE("orthogonalize") {
  ApproximantParams target = harmonic_limit_params(1, 0, 1e-8);
  SUBCASE("no constraints for n = 0") {
    ApproximantParams g = harmonic_limit_params(0, 0, 1.0);
    CHECK(orthogonalize(g, {}).nodes.empty());
  }
  SUBCASE("harmonic limit reproduces the Laguerre coefficient") {
    const auto lower = harmonic_limit_params(0, 0, 1e-8);
    const auto o = orthogonalize(target, {lower});
    REQUIRE(o.nodes.size() == 1);
    CHECK(o.nodes[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(o.residuals[0]) < 1e-12);
  }
  SUBCASE("two constraints, odd parity") {
    auto t2 = harmonic_limit_params(2, 1, 1e-8);
    const auto o = orthogonalize(t2, {harmonic_limit_params(0, 1, 1e-8), harmonic_limit_params(1, 1, 1e-8)});
    const auto expect = harmonic_node_coeffs(2, 1);
    CHECK(o.nodes[0] == doctest::Approx(to_real<double>(expect[0])).epsilon(1e-6));
    CHECK(o.nodes[1] == doctest::Approx(to_real<double>(expect[1])).epsilon(1e-6));
  }
  SUBCASE("parity mismatch is rejected") {
    CHECK_THROWS_AS(orthogonalize(target, {harmonic_limit_params(0, 1, 1e-8)}), ValidationError);
  }
}

TEST_CASE("optimized ground state reproduces the reference energies") {
  struct Row {
    double g2;
    double E;
    double ulp;  // one unit in the last printed digit
  };
  for (const Row& row : {Row{0.1, 1.06528550954, 1e-11}, Row{1.0, 1.392351642, 1e-9}, Row{10.0, 2.44917407, 1e-8}}) {
    const auto r = optimize(0, 0, row.g2, {});
    CHECK(std::abs(r.E_var - row.E) <= row.ulp);
    CHECK(std::abs(r.E_var - mesh(row.g2, 0)) <= 1e-8 * r.E_var);
  }
}

TEST_CASE("optimized parameters follow the coupling trend") {
  const auto lo = optimize(0, 0, 0.1, {});
  const auto mid = optimize(0, 0, 1.0, {});
  const auto hi = optimize(0, 0, 10.0, {});
  CHECK(lo.params.A > 0);
  CHECK(hi.params.A < 0);
  CHECK(lo.params.A > mid.params.A);
  CHECK(mid.params.A > hi.params.A);
  CHECK(lo.params.B < mid.params.B);
  CHECK(mid.params.B < hi.params.B);
}

TEST_CASE("excited chain: accuracy, orthogonality, node trend") {
  std::vector<double> first_node;
  for (double g2 : {0.1, 1.0, 10.0}) {
    for (int p = 0; p <= 1; ++p) {
      const auto chain = solve_chain(g2, p, 2);
      for (const auto& r : chain) {
        const double em = mesh(g2, 2 * r.params.n + p);
        CHECK(std::abs(r.E_var - em) <= 1e-8 * em);
        for (double o : r.ortho_residuals) CHECK(std::abs(o) <= 1e-10);
        CHECK(positive_nodes(r.params).size() == static_cast<std::size_t>(r.params.n));
        CHECK(r.E2 <= 0);
      }
      if (p == 0) first_node.push_back(positive_nodes(chain[1].params).at(0));
    }
  }
  CHECK(first_node[0] > first_node[1]);
  CHECK(first_node[1] > first_node[2]);
}

TEST_CASE("second-excited states pick the deeper valley at intermediate coupling") {
  // Near g^2 = 0.5 a shallower minimum sits right next to the interpolated
  // guess; it is off by 2e-8 (p = 0) and 5e-8 (p = 1).
  for (int p = 0; p <= 1; ++p) {
    const auto chain = solve_chain(0.5, p, 2);
    const auto& r = chain.back();
    const double em = mesh(0.5, 4 + p);
    CAPTURE(p);
    CHECK(std::abs(r.E_var - em) <= 1e-9 * em);
    CHECK(r.params.A < -3.0);
  }
}

TEST_CASE("optimizer is deterministic") {
  const auto a = solve_chain(20.0, 1, 1);
  const auto b = solve_chain(20.0, 1, 1);
  for (int i = 0; i < 2; ++i) {
    CHECK(a[i].params.A == b[i].params.A);
    CHECK(a[i].params.B == b[i].params.B);
    CHECK(a[i].params.nodes == b[i].params.nodes);
    CHECK(a[i].E_var == b[i].E_var);
    CHECK(a[i].E2 == b[i].E2);
  }
}

TEST_CASE("worker pool returns the sequential results") {
  const std::vector<ChainRequest> jobs{{1.0, 0, 1}, {1.0, 1, 1}, {10.0, 0, 0}};
  const auto par = solve_chains(jobs, {}, 2);
  REQUIRE(par.size() == jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto seq = solve_chain(jobs[j].g2, jobs[j].p, jobs[j].n_max);
    REQUIRE(par[j].size() == seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) CHECK(par[j][i].E_var == seq[i].E_var);
  }
}

TEST_CASE("extended precision agrees with double") {
  SolverOptions ext;
  ext.precision = Precision::Extended;
  const auto d = optimize(0, 0, 1.0, {});
  const auto e = optimize(0, 0, 1.0, {}, ext);
  CHECK(e.E_var == doctest::Approx(d.E_var).epsilon(1e-12));
  CHECK(e.E2 == doctest::Approx(d.E2).epsilon(1e-4));
}

TEST_CASE("nonlinearization of an exact eigenfunction vanishes") {
  const auto prm = harmonic_limit_params(0, 0, 1e-10);
  const auto nl = nonlinearization(prm);
  CHECK(std::abs(nl.E2) < 1e-12);
  CHECK(std::abs(nl.E3) < 1e-12);
  CHECK(nl.phi1_sup < 1e-6);
  const auto ex = nonlinearization(harmonic_limit_params(2, 1, 1e-10));
  CHECK(std::abs(ex.E2) < 1e-12);
  CHECK(ex.phi1_sup < 1e-6);
}

TEST_CASE("ground state nonlinearization: both forms, sign, improvement") {
  const auto r = optimize(0, 0, 1.0, {});
  const auto& nl = r.nonlinear;
  CHECK(nl.E2 <= 0);
  CHECK(nl.E2 == doctest::Approx(nl.E2_riccati).epsilon(1e-6));
  CHECK(nl.E3 == doctest::Approx(nl.E3_riccati).epsilon(1e-3));
  CHECK(nl.E1 == doctest::Approx(r.E_var).epsilon(1e-13));
  const double em = mesh(1.0, 0);
  CHECK(std::abs(r.E_var + r.E2 + r.E3 - em) < std::abs(r.E_var - em));
  // y1 is a small correction inside the classically allowed region.
  CHECK(nl.phi1_sup_allowed < 2e-5);
}

TEST_CASE("phi1 matches the exact eigenfunction") {
  const double g2 = 1.0;
  const auto r = optimize(0, 0, g2, {});
  const long double E = mesh(g2, 0);
  const auto& nl = r.nonlinear;
  const double l0 = log_psi(r.params, 0.0).v;
  for (double target : {0.6, 1.5, 2.5}) {
    std::size_t i = 0;
    while (nl.x[i] < target) ++i;
    const double x = nl.x[i];
    const double exact = -static_cast<double>(exact_log_psi(g2, E, x) - (log_psi(r.params, x).v - l0));
    CHECK(nl.phi1[i] == doctest::Approx(exact).epsilon(1e-3).scale(1e-7));
  }
}

TEST_CASE("node residues of excited states stay small") {
  const auto chain = solve_chain(1.0, 0, 2);
  for (const auto& r : chain)
    for (double g : r.nonlinear.node_residue) CHECK(std::abs(g) <= 1e-8);
  const auto& nl = chain[2].nonlinear;
  CHECK(nl.node_shift.size() == 2);
  CHECK(std::isnan(nl.E2_riccati));
}

TEST_CASE("result JSON carries the persisted fields") {
  const auto r = optimize(0, 1, 1.0, {});
  const nlohmann::json j = r;
  for (const char* key : {"params", "E_var", "E2", "E3", "phi1_sup", "ortho_residuals", "quadrature"})
    CHECK(j.contains(key));
  CHECK(params_from_json(j["params"]).B == r.params.B);
}
