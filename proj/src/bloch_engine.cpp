#include <anharmonic/bloch_engine.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace anharmonic {

namespace {

const RationalPoly kOnePlusU2{Rational(1), Rational(0), Rational(1)};

const Rational& coeff(const RationalPoly& a, std::size_t i) {
  static const Rational zero(0);
  return i < a.size() ? a[i] : zero;
}

// Exact division by 1 + u^2; empty optional when there is a remainder.
std::optional<RationalPoly> divide_one_plus_u2(const RationalPoly& a) {
  if (a.empty()) return RationalPoly{};
  if (a.size() < 3) return std::nullopt;
  RationalPoly rem(a);
  RationalPoly quot(a.size() - 2);
  for (std::size_t k = a.size() - 1; k >= 2; --k) {
    const Rational c = rem[k];
    quot[k - 2] = c;
    rem[k] -= c;
    rem[k - 2] -= c;
  }
  if (rem[0] != 0 || rem[1] != 0) return std::nullopt;
  trim(quot);
  return quot;
}

// (p + w q) * w = (1 + u^2) q + w p.
std::pair<RationalPoly, RationalPoly> times_w(const RationalPoly& p, const RationalPoly& q) {
  return {poly_mul(kOnePlusU2, q), p};
}

// Maclaurin coefficients of (1 + u^2)^e through u^max_power.
std::vector<Rational> binomial_series(const Rational& e, int max_power) {
  std::vector<Rational> s(static_cast<std::size_t>(std::max(max_power, 0)) + 1);
  Rational c = 1;
  for (int k = 0; 2 * k <= max_power; ++k) {
    s[2 * k] = c;
    c = c * (e - k) / (k + 1);
  }
  return s;
}

std::vector<Rational> series_mul(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                 std::size_t n) {
  std::vector<Rational> r(n);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// Series of the numerator p + w q through u^max_power.
std::vector<Rational> numerator_series(const RationalPoly& p, const RationalPoly& q, int max_power) {
  const std::size_t n = static_cast<std::size_t>(max_power) + 1;
  auto s = series_mul(binomial_series(Rational(1, 2), max_power), q, n);
  for (std::size_t i = 0; i < p.size() && i < n; ++i) s[i] += p[i];
  return s;
}

// Solve A x = b over the rationals; free variables are set to zero.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a,
                                                 std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

}  // namespace

BlochTerm::BlochTerm(RationalPoly p, RationalPoly q, int u_pole, int w_pole)
    : p_(std::move(p)), q_(std::move(q)), u_pole_(u_pole), w_pole_(w_pole) {
  if (u_pole_ < 0 || w_pole_ < 0) throw ValidationError("pole orders must be non-negative");
  normalize();
}

BlochTerm BlochTerm::constant(const Rational& c) { return BlochTerm({c}, {}); }

BlochTerm BlochTerm::u_power(int k) {
  if (k < 0) return BlochTerm({Rational(1)}, {}, -k, 0);
  return BlochTerm(poly_shift({Rational(1)}, k), {});
}

BlochTerm BlochTerm::w() { return BlochTerm({}, {Rational(1)}); }

void BlochTerm::normalize() {
  trim(p_);
  trim(q_);
  if (is_zero()) {
    u_pole_ = 0;
    w_pole_ = 0;
    return;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    while (u_pole_ > 0 && coeff(p_, 0) == 0 && coeff(q_, 0) == 0) {
      if (!p_.empty()) p_.erase(p_.begin());
      if (!q_.empty()) q_.erase(q_.begin());
      --u_pole_;
      changed = true;
    }
    while (w_pole_ > 0) {
      auto reduced = divide_one_plus_u2(p_);
      if (!reduced) break;
      p_ = std::move(q_);
      q_ = std::move(*reduced);
      --w_pole_;
      changed = true;
    }
  }
}

std::pair<RationalPoly, RationalPoly> BlochTerm::numerator_over(int a, int b) const {
  if (a < u_pole_ || b < w_pole_) throw ValidationError("target denominator too small");
  RationalPoly p = poly_shift(p_, a - u_pole_);
  RationalPoly q = poly_shift(q_, a - u_pole_);
  for (int i = w_pole_; i < b; ++i) std::tie(p, q) = times_w(p, q);
  return {p, q};
}

BlochTerm BlochTerm::operator+(const BlochTerm& o) const {
  const int a = std::max(u_pole_, o.u_pole_);
  const int b = std::max(w_pole_, o.w_pole_);
  auto [p1, q1] = numerator_over(a, b);
  auto [p2, q2] = o.numerator_over(a, b);
  return BlochTerm(poly_add(p1, p2), poly_add(q1, q2), a, b);
}

BlochTerm BlochTerm::operator-(const BlochTerm& o) const { return *this + o * Rational(-1); }

BlochTerm BlochTerm::operator*(const BlochTerm& o) const {
  RationalPoly p = poly_add(poly_mul(p_, o.p_), poly_mul(kOnePlusU2, poly_mul(q_, o.q_)));
  RationalPoly q = poly_add(poly_mul(p_, o.q_), poly_mul(q_, o.p_));
  return BlochTerm(std::move(p), std::move(q), u_pole_ + o.u_pole_, w_pole_ + o.w_pole_);
}

BlochTerm BlochTerm::operator*(const Rational& s) const {
  return BlochTerm(poly_scale(p_, s), poly_scale(q_, s), u_pole_, w_pole_);
}

BlochTerm BlochTerm::derivative() const {
  // d/du [N / (u^a w^b)] = [u w^2 N' - N (a w^2 + b u^2)] / (u^{a+1} w^{b+2}),
  // with N' = p' + w q' + (u / w) q.
  const RationalPoly u_w2{Rational(0), Rational(1), Rational(0), Rational(1)};
  const RationalPoly u2{Rational(0), Rational(0), Rational(1)};
  const RationalPoly weight = poly_add(poly_scale(kOnePlusU2, Rational(u_pole_)), poly_scale(u2, Rational(w_pole_)));
  RationalPoly p = poly_sub(poly_mul(u_w2, poly_derivative(p_)), poly_mul(weight, p_));
  RationalPoly q = poly_add(poly_mul(u_w2, poly_derivative(q_)), poly_mul(u2, q_));
  q = poly_sub(q, poly_mul(weight, q_));
  return BlochTerm(std::move(p), std::move(q), u_pole_ + 1, w_pole_ + 2);
}

BlochTerm BlochTerm::divide_by_monomial(int i, int j) const {
  if (is_zero()) return *this;
  return BlochTerm(p_, q_, u_pole_ + i, w_pole_ + j);
}

std::vector<Rational> BlochTerm::taylor(int max_power) const {
  if (max_power < 0) return {};
  const int top = max_power + u_pole_;
  const std::size_t n = static_cast<std::size_t>(top) + 1;
  auto num = numerator_series(p_, q_, top);
  num = series_mul(num, binomial_series(Rational(-w_pole_, 2), top), n);
  for (int i = 0; i < u_pole_; ++i)
    if (num[i] != 0) throw DegenerateInput("Bloch term has a pole at u = 0");
  return std::vector<Rational>(num.begin() + u_pole_, num.end());
}

int BlochTerm::order_at_origin() const {
  if (is_zero()) throw DegenerateInput("order of the zero element is undefined");
  const int deg = static_cast<int>(std::max(p_.size(), q_.size()));
  for (int top = deg + 4;; top *= 2) {
    const auto num = numerator_series(p_, q_, top);
    for (int i = 0; i <= top; ++i)
      if (num[i] != 0) return i - u_pole_;
  }
}

bool BlochTerm::operator==(const BlochTerm& o) const {
  return u_pole_ == o.u_pole_ && w_pole_ == o.w_pole_ && p_ == o.p_ && q_ == o.q_;
}

std::vector<BlochTerm> gb_terms(int order) { return gb_terms(order, rb_coefficients(std::max(order - 1, 0))); }

std::vector<BlochTerm> gb_terms(int order, const PtSeries& series) {
  if (order < 0) throw ValidationError("Bloch order must be >= 0");
  if (order > 0 && series.order < order - 1) throw ValidationError("energy series too short for requested Bloch order");
  std::vector<BlochTerm> z;
  z.push_back(BlochTerm({}, {Rational(0), Rational(1)}));  // u w
  for (int n = 1; n <= order; ++n) {
    BlochTerm rhs = z[n - 1].derivative() - BlochTerm::constant(series.eps[n - 1]);
    for (int k = 1; k < n; ++k) rhs = rhs - z[k] * z[n - k];
    z.push_back((rhs * Rational(1, 2)).divide_by_monomial(1, 1));
  }
  return z;
}

BlochTerm gb_residual(const std::vector<BlochTerm>& terms, const PtSeries& series, int n) {
  if (n < 0 || n >= static_cast<int>(terms.size())) throw ValidationError("residual order outside the hierarchy");
  BlochTerm r;
  if (n == 0) {
    r = BlochTerm({Rational(0), Rational(0), Rational(1), Rational(0), Rational(1)}, {});
  } else {
    r = terms[n - 1].derivative() - BlochTerm::constant(series.eps.at(n - 1));
  }
  for (int k = 0; k <= n; ++k) r = r - terms[k] * terms[n - k];
  return r;
}

std::optional<BlochTerm> ring_antiderivative(const BlochTerm& term, int extra_degree) {
  if (term.is_zero()) return BlochTerm();
  const int a = std::max(term.u_pole(), 1) - 1;
  const int b = std::max(term.w_pole(), 2) - 2;
  auto [tp, tq] = term.numerator_over(a + 1, b + 2);
  const int deg = static_cast<int>(std::max(tp.size(), tq.size())) + extra_degree;
  const int unknowns = 2 * (deg + 1);
  // Columns: derivative of each basis monomial u^k / den and w u^k / den.
  std::vector<BlochTerm> basis;
  for (int k = 0; k <= deg; ++k) {
    const RationalPoly mono = poly_shift({Rational(1)}, k);
    basis.emplace_back(mono, RationalPoly{}, a, b);
    basis.emplace_back(RationalPoly{}, mono, a, b);
  }
  const int rows_per = deg + 4;
  std::vector<std::vector<Rational>> mat(2 * rows_per, std::vector<Rational>(unknowns));
  for (int c = 0; c < unknowns; ++c) {
    auto [dp, dq] = basis[c].derivative().numerator_over(a + 1, b + 2);
    for (std::size_t i = 0; i < dp.size(); ++i) {
      if (static_cast<int>(i) >= rows_per) return std::nullopt;
      mat[i][c] = dp[i];
    }
    for (std::size_t i = 0; i < dq.size(); ++i) {
      if (static_cast<int>(i) >= rows_per) return std::nullopt;
      mat[rows_per + i][c] = dq[i];
    }
  }
  std::vector<Rational> rhs(2 * rows_per);
  for (std::size_t i = 0; i < tp.size(); ++i) rhs[i] = tp[i];
  for (std::size_t i = 0; i < tq.size(); ++i) rhs[rows_per + i] = tq[i];
  const auto sol = solve_exact(std::move(mat), std::move(rhs));
  if (!sol) return std::nullopt;
  RationalPoly fp(deg + 1), fq(deg + 1);
  for (int k = 0; k <= deg; ++k) {
    fp[k] = (*sol)[2 * k];
    fq[k] = (*sol)[2 * k + 1];
  }
  BlochTerm f(std::move(fp), std::move(fq), a, b);
  if (!(f.derivative() - term).is_zero()) return std::nullopt;
  return f;
}

double phase_leading(double x, double g, int n, int p) {
  if (!(g > 0)) throw ValidationError("g must be positive");
  const double s2 = 1.0 + g * g * x * x;
  const double s = std::sqrt(s2);
  return s2 * s / (3.0 * g * g) + 0.25 * std::log(s2) + (2.0 * n + p + 0.5) * std::log1p(s);
}

double large_x_asymptote(double x, double g, int n, int p) {
  if (x == 0) throw ValidationError("large-x asymptote needs |x| > 0");
  const double ax = std::abs(x);
  return g * x * x * ax / 3.0 + ax / (2.0 * g) + (n + 0.5 * p + 0.5) * std::log(x * x);
}

PhaseExpansion PhaseExpansion::build(int n, int p, double g, int max_order) {
  if (!(g > 0)) throw ValidationError("g must be positive");
  PhaseExpansion ph{n, p, g, {}};
  const auto z = gb_terms(max_order);
  for (int k = 2; k <= max_order; ++k) {
    auto f = ring_antiderivative(z[k]);
    if (!f) throw Error("semiclassical term " + std::to_string(k) + " has no algebraic antiderivative");
    ph.higher.push_back(std::move(*f));
  }
  return ph;
}

double PhaseExpansion::operator()(double x) const {
  double phi = phase_leading(x, g, n, p);
  const double u = std::abs(g * x);
  double g2k = 1.0;  // g^{2k-2}
  for (std::size_t i = 0; i < higher.size(); ++i) {
    g2k *= g * g;
    const auto& f = higher[i];
    double value;
    if (u < 0.25) {
      // The closed forms cancel badly near the origin; the Maclaurin
      // series converges for |u| < 1.
      auto c = f.taylor(40);
      c[0] = 0;
      value = eval_poly(c, u);
    } else {
      value = f.eval(u) - eval_poly(f.taylor(0), 0.0);
    }
    phi += g2k * value;
  }
  return phi;
}

void to_json(nlohmann::json& j, const BlochTerm& term) {
  auto num = nlohmann::json::array();
  for (std::size_t i = 0; i < term.p().size(); ++i)
    if (term.p()[i] != 0) num.push_back({to_string(term.p()[i]), static_cast<int>(i), 0});
  for (std::size_t i = 0; i < term.q().size(); ++i)
    if (term.q()[i] != 0) num.push_back({to_string(term.q()[i]), static_cast<int>(i), 1});
  j = nlohmann::json{{"num", num}, {"u_pole", term.u_pole()}, {"w_pole", term.w_pole()}};
}

BlochTerm bloch_term_from_json(const nlohmann::json& j) {
  RationalPoly p, q;
  for (const auto& mono : j.at("num")) {
    const Rational c = parse_rational(mono.at(0).get<std::string>());
    const int du = mono.at(1).get<int>();
    int dw = mono.at(2).get<int>();
    if (du < 0 || dw < 0) throw ValidationError("negative exponent in Bloch term JSON");
    // Reduce w^dw with w^2 = 1 + u^2.
    RationalPoly factor = poly_shift({c}, du);
    for (; dw >= 2; dw -= 2) factor = poly_mul(factor, kOnePlusU2);
    auto& target = dw == 0 ? p : q;
    target = poly_add(target, factor);
  }
  return BlochTerm(std::move(p), std::move(q), j.at("u_pole").get<int>(), j.at("w_pole").get<int>());
}

}  // namespace anharmonic
