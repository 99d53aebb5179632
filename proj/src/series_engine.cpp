#include <anharmonic/errors.hpp>
#include <anharmonic/series_engine.hpp>

#include <nlohmann/json.hpp>

namespace anharmonic {

namespace {

// Coefficients of v^(2m) in the product of two odd polynomials.
std::vector<Rational> odd_product(const OddPolynomial& a, const OddPolynomial& b) {
  std::vector<Rational> r(a.coeffs.size() + b.coeffs.size() + 1);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r[i + j + 1] += a.coeffs[i] * b.coeffs[j];
  return r;
}

// Even-power right-hand side of the order-n equation without eps_n.
std::vector<Rational> order_rhs(const std::vector<OddPolynomial>& y, int n) {
  std::vector<Rational> rhs(static_cast<std::size_t>(n) + 2);
  if (n == 1) rhs[2] -= 1;
  for (int k = 1; k < n; ++k) {
    const auto prod = odd_product(y[k], y[n - k]);
    for (std::size_t m = 0; m < prod.size() && m < rhs.size(); ++m) rhs[m] += prod[m];
  }
  return rhs;
}

}  // namespace

PtSeries rb_coefficients(int order) {
  if (order < 0) throw ValidationError("series order must be >= 0");
  PtSeries s;
  s.order = order;
  s.eps.push_back(1);
  s.y_terms.push_back(OddPolynomial{{Rational(1)}});
  for (int n = 1; n <= order; ++n) {
    const auto rhs = order_rhs(s.y_terms, n);
    // Y_n' - 2v Y_n at v^(2m): (2m+1) c_m - 2 c_{m-1}. The top power fixes
    // c_n, back substitution gives the rest and the v^0 balance gives eps_n.
    std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
    c[n] = -rhs[n + 1] / 2;
    for (int m = n; m >= 1; --m) c[m - 1] = (Rational(2 * m + 1) * c[m] - rhs[m]) / 2;
    s.eps.push_back(c[0] - rhs[0]);
    s.y_terms.push_back(OddPolynomial{std::move(c)});
  }
  return s;
}

RationalPoly rb_residual(const PtSeries& series, int n) {
  if (n < 0 || n > series.order) throw ValidationError("residual order outside the series");
  const auto& yn = series.y_terms[n].coeffs;
  // LHS - RHS collected by power of v.
  RationalPoly r(2 * yn.size() + 2 * static_cast<std::size_t>(n) + 4);
  for (std::size_t k = 0; k < yn.size(); ++k) {
    r[2 * k] += yn[k] * static_cast<int>(2 * k + 1);  // derivative
    r[2 * k + 2] -= 2 * yn[k];                         // -2 Y_0 Y_n with Y_0 = v
  }
  r[0] -= series.eps[n];
  if (n == 0) {
    r[2] += 1;  // order zero: Y_0' - Y_0^2 = eps_0 - v^2
    for (std::size_t k = 0; k < yn.size(); ++k) r[2 * k + 2] += yn[k];  // undo the doubled square
  }
  if (n == 1) r[4] += 1;
  for (int k = 1; k < n; ++k) {
    const auto prod = odd_product(series.y_terms[k], series.y_terms[n - k]);
    for (std::size_t m = 0; m < prod.size(); ++m) r[2 * m] -= prod[m];
  }
  trim(r);
  return r;
}

Rational rb_energy_exact(const PtSeries& series, const Rational& lambda) {
  const Rational l2 = lambda * lambda;
  Rational acc = 0;
  for (int n = series.order; n >= 0; --n) acc = acc * l2 + series.eps[n];
  return acc;
}

void to_json(nlohmann::json& j, const PtSeries& series) {
  j = nlohmann::json::object();
  j["order"] = series.order;
  auto eps = nlohmann::json::array();
  for (const auto& e : series.eps) eps.push_back(to_string(e));
  auto ys = nlohmann::json::array();
  for (const auto& y : series.y_terms) {
    auto row = nlohmann::json::array();
    for (const auto& c : y.coeffs) row.push_back(to_string(c));
    ys.push_back(std::move(row));
  }
  j["eps"] = std::move(eps);
  j["y"] = std::move(ys);
}

PtSeries series_from_json(const nlohmann::json& j) {
  PtSeries s;
  s.order = j.at("order").get<int>();
  for (const auto& e : j.at("eps")) s.eps.push_back(parse_rational(e.get<std::string>()));
  for (const auto& row : j.at("y")) {
    OddPolynomial y;
    for (const auto& c : row) y.coeffs.push_back(parse_rational(c.get<std::string>()));
    s.y_terms.push_back(std::move(y));
  }
  if (s.eps.size() != static_cast<std::size_t>(s.order) + 1 || s.y_terms.size() != s.eps.size())
    throw ValidationError("series JSON: eps/y length does not match order");
  return s;
}

}  // namespace anharmonic
