#include <anharmonic/series_engine.hpp>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace anharmonic;

namespace {

// Linear perturbation recursion for psi = exp(-v^2/2) sum lambda^{2n} P_n(v)
// with P_n(0) = delta_{n0}:  P_n'' - 2v P_n' = v^4 P_{n-1} - sum_{k=1}^{n} eps_k P_{n-k}.
// Shares nothing with the Riccati route beyond the Hamiltonian.
std::vector<Rational> linear_route_energies(int order) {
  std::vector<RationalPoly> P{{Rational(1)}};
  std::vector<Rational> eps{Rational(1)};
  for (int n = 1; n <= order; ++n) {
    // rhs without the eps_n term
    RationalPoly rhs = poly_shift(P[n - 1], 4);
    for (int k = 1; k < n; ++k) rhs = poly_sub(rhs, poly_scale(P[n - k], eps[k]));
    rhs.resize(4 * n + 1);
    // (j+2)(j+1) c_{j+2} - 2 j c_j = rhs_j - eps_n delta_{j0};
    // solve from the top (c_j for j > 4n vanish).
    RationalPoly c(4 * n + 3);
    for (int j = 4 * n; j >= 1; --j) c[j] = ((j + 2) * (j + 1) * c[j + 2] - rhs[j]) / (2 * j);
    // j = 0 with c_0 = 0 fixes eps_n.
    eps.push_back(rhs[0] - 2 * c[2]);
    trim(c);
    P.push_back(c);
  }
  return eps;
}

// Truncated power series in lambda used to run small_v_series symbolically.
struct Trunc {
  static constexpr int kLen = 13;
  std::vector<Rational> c = std::vector<Rational>(kLen);
  Trunc() = default;
  Trunc(int v) { c[0] = v; }
  friend Trunc operator+(Trunc a, const Trunc& b) {
    for (int i = 0; i < kLen; ++i) a.c[i] += b.c[i];
    return a;
  }
  Trunc& operator+=(const Trunc& b) { return *this = *this + b; }
  friend Trunc operator*(const Trunc& a, const Trunc& b) {
    Trunc r;
    for (int i = 0; i < kLen; ++i)
      for (int j = 0; i + j < kLen; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  Trunc operator-() const {
    Trunc r = *this;
    for (auto& x : r.c) x = -x;
    return r;
  }
  friend Trunc operator/(Trunc a, const Trunc& b) {
    for (auto& x : a.c) x /= b.c[0];
    return a;
  }
};

}  // namespace

TEST_CASE("low orders match hand values") {
  const auto s = rb_coefficients(2);
  CHECK(s.eps == std::vector<Rational>{1, Rational(3, 4), Rational(-21, 16)});
  CHECK(s.y_terms[0].coeffs == std::vector<Rational>{1});
  CHECK(s.y_terms[1].coeffs == std::vector<Rational>{Rational(3, 4), Rational(1, 2)});
  CHECK(s.y_terms[2].coeffs == std::vector<Rational>{Rational(-21, 16), Rational(-11, 16), Rational(-1, 8)});
  CHECK(rb_coefficients(0).eps == std::vector<Rational>{1});
}

TEST_CASE("energies agree with the linear recursion") {
  const int N = 20;
  const auto s = rb_coefficients(N);
  const auto ref = linear_route_energies(N);
  for (int n = 0; n <= N; ++n) CHECK(s.eps[n] == ref[n]);
}

TEST_CASE("frozen coefficients through order eight") {
  const std::vector<Rational> frozen{1,
                                     Rational(3, 4),
                                     Rational(-21, 16),
                                     Rational(333, 64),
                                     Rational(-30885, 1024),
                                     Rational(916731, 4096),
                                     Rational(-65518401, 32768),
                                     Rational(2723294673, 131072),
                                     Rational(BigInt("-1030495099053"), BigInt(4194304))};
  const auto s = rb_coefficients(8);
  for (int n = 0; n <= 8; ++n) CHECK(s.eps[n] == frozen[n]);
}

TEST_CASE("each order solves its equation exactly") {
  const auto s = rb_coefficients(20);
  for (int n = 0; n <= 20; ++n) CHECK(rb_residual(s, n).empty());
}

TEST_CASE("degree law and alternating signs") {
  const auto s = rb_coefficients(20);
  for (int n = 1; n <= 20; ++n) {
    CHECK(s.y_terms[n].degree() == 2 * n + 1);
    CHECK((n % 2 == 1 ? s.eps[n] > 0 : s.eps[n] < 0));
  }
  for (int n = 1; n <= 10; ++n)
    for (const auto& c : s.y_terms[n].coeffs) CHECK(c != 0);
}

TEST_CASE("truncated evaluation") {
  const auto s1 = rb_coefficients(1);
  auto r = rb_eval(s1, 0.0, 2.0);
  CHECK(r.eps == 1.0);
  CHECK(r.y == 2.0);
  r = rb_eval(s1, 1.0, 1.0);
  CHECK(r.eps == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(r.y == doctest::Approx(2.25).epsilon(1e-15));
  const auto s2 = rb_coefficients(2);
  CHECK(rb_eval(s2, 0.1, 0.0).eps == doctest::Approx(1 + 0.0075 - 21.0 / 16 * 1e-4).epsilon(1e-15));
  CHECK(rb_energy_exact(s2, Rational(1, 10)) == 1 + Rational(3, 400) - Rational(21, 160000));
}

TEST_CASE("small-v Taylor coefficients") {
  auto c = small_v_series(1.0, 0.0, 2);
  CHECK(c == std::vector<double>{1.0, 0.0});
  c = small_v_series(2.0, 0.0, 2);
  CHECK(c == std::vector<double>{2.0, 1.0});
}

TEST_CASE("small-v series reproduces the perturbative Y order by order") {
  // Run the recursion over truncated power series in lambda; every Taylor
  // coefficient in v must equal the matching coefficient of sum lambda^{2n} Y_n.
  const int N = (Trunc::kLen - 1) / 2;
  const auto s = rb_coefficients(N);
  Trunc eps, lambda;
  for (int n = 0; n <= N; ++n) eps.c[2 * n] = s.eps[n];
  lambda.c[1] = 1;
  const int order = 6;
  const auto c = small_v_series(eps, lambda, order);
  for (int m = 0; m < order; ++m)
    for (int n = 0; n <= N; ++n) {
      const auto& yn = s.y_terms[n].coeffs;
      const Rational expect = m < static_cast<int>(yn.size()) ? yn[m] : Rational(0);
      CHECK(c[m].c[2 * n] == expect);
      if (2 * n + 1 < Trunc::kLen) CHECK(c[m].c[2 * n + 1] == 0);
    }
  const auto num = small_v_series(1.75, 1.0, 3);
  CHECK(num[2] == doctest::Approx((2 * 1.75 * (1.75 * 1.75 - 1) / 3 - 1.0) / 5).epsilon(1e-15));
}

TEST_CASE("json round trip") {
  const auto s = rb_coefficients(5);
  nlohmann::json j = s;
  CHECK(j["eps"][2] == "-21/16");
  CHECK(j["y"][1][1] == "1/2");
  const auto back = series_from_json(j);
  CHECK(back.eps == s.eps);
  CHECK(back.y_terms == s.y_terms);
}
