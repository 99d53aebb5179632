// anharmonic: command-line front end.
//
// Exit codes: 0 ok, 2 invalid input, 3 numerical non-convergence,
// 4 acceptance failure (verify).

#include <anharmonic/acceptance.hpp>
#include <anharmonic/approximant.hpp>
#include <anharmonic/bloch_engine.hpp>
#include <anharmonic/mesh_oracle.hpp>
#include <anharmonic/radial_extension.hpp>
#include <anharmonic/reference_table.hpp>
#include <anharmonic/series_engine.hpp>
#include <anharmonic/variational_solver.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace anharmonic;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAcceptance = 4;

struct Options {
  double g2 = 1.0;
  std::string state = "0,0";
  int order = 2;
  int mesh_points = defaults::kMeshPoints;
  double tol = 0.0;  // 0: the command's default tolerance
  unsigned long long seed = defaults::kSeed;
  std::string precision = "double";
  std::string out;
  std::string format = "text";
  int dim = 3;
  int ell = 0;
  int grid_points = 41;
  std::vector<double> xs;
  std::vector<int> criteria;
};

std::string num(double v, int digits = 15) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::pair<int, int> parse_state(const std::string& s) {
  int n = -1, p = -1;
  char comma = 0, extra = 0;
  std::istringstream in(s);
  if (!(in >> n >> comma >> p) || comma != ',' || (in >> extra))
    throw ValidationError("--state expects n,p (for example 1,0), got '" + s + "'");
  if (n < 0) throw ValidationError("--state: n must be >= 0");
  if (p != 0 && p != 1) throw ValidationError("--state: parity p must be 0 or 1");
  return {n, p};
}

void require_positive_g2(double g2) {
  if (!(g2 > 0) || !std::isfinite(g2)) throw ValidationError("--g2 must be finite and > 0");
}

SolverOptions solver_options(const Options& o) {
  SolverOptions s;
  s.precision = parse_precision(o.precision);
  s.simplex.seed = o.seed;
  if (o.tol > 0) s.quad.rel_tol = o.tol;
  return s;
}

MeshConfig mesh_config(const Options& o, double g2) {
  MeshConfig cfg;
  cfg.g2 = g2;
  cfg.points = o.mesh_points;
  if (o.tol > 0) cfg.tol = o.tol;
  return cfg;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open --out file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Options& o, json j, const std::string& schema) {
  j["schema"] = schema;
  Output out(o.out);
  out.stream() << j.dump(2) << "\n";
}

std::string poly_string(const RationalPoly& c, const char* var) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    const bool neg = c[i] < 0;
    std::string term = to_string(neg ? Rational(-c[i]) : c[i]);
    if (i > 0) term = (term == "1" ? std::string() : term + " ") + var + (i > 1 ? "^" + std::to_string(i) : "");
    if (s.empty())
      s = (neg ? "-" : "") + term;
    else
      s += (neg ? " - " : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

int cmd_pt(const Options& o) {
  if (o.order < 0) throw ValidationError("order must be >= 0");
  const auto s = rb_coefficients(o.order);
  if (o.format == "json") {
    json j = s;
    std::vector<double> dec;
    for (const auto& e : s.eps) dec.push_back(to_real<double>(e));
    j["eps_decimal"] = dec;
    emit_json(o, j, "anharmonic.pt/1");
    return 0;
  }
  Output out(o.out);
  auto& os = out.stream();
  os << "eps: ";
  for (std::size_t i = 0; i < s.eps.size(); ++i) os << (i ? ", " : "") << to_string(s.eps[i]);
  os << "\ndecimal: ";
  for (std::size_t i = 0; i < s.eps.size(); ++i) os << (i ? ", " : "") << num(to_real<double>(s.eps[i]), 17);
  os << "\n";
  for (std::size_t n = 0; n < s.y_terms.size(); ++n) {
    RationalPoly full(2 * s.y_terms[n].coeffs.size(), Rational(0));
    for (std::size_t k = 0; k < s.y_terms[n].coeffs.size(); ++k) full[2 * k + 1] = s.y_terms[n].coeffs[k];
    os << "Y" << n << "(v) = " << poly_string(full, "v") << "\n";
  }
  return 0;
}

int cmd_semiclassical(const Options& o, bool with_phase) {
  if (o.order < 0) throw ValidationError("order must be >= 0");
  const auto z = gb_terms(o.order);
  json phase = json::array();
  if (with_phase) {
    require_positive_g2(o.g2);
    const auto [n, p] = parse_state(o.state);
    const double g = std::sqrt(o.g2);
    const auto ph = PhaseExpansion::build(n, p, g, o.order);
    for (double x : o.xs)
      phase.push_back({{"x", x},
                       {"leading", phase_leading(x, g, n, p)},
                       {"expansion", ph(x)},
                       {"large_x", x != 0 ? json(large_x_asymptote(x, g, n, p)) : json(nullptr)}});
  }
  if (o.format == "json") {
    emit_json(o, {{"order", o.order}, {"terms", z}, {"phase", phase}}, "anharmonic.semiclassical/1");
    return 0;
  }
  Output out(o.out);
  auto& os = out.stream();
  os << "w = sqrt(1 + u^2)\n";
  for (std::size_t k = 0; k < z.size(); ++k) {
    os << "Z" << k << " = [" << poly_string(z[k].p(), "u") << "] + w [" << poly_string(z[k].q(), "u") << "]";
    if (z[k].u_pole() || z[k].w_pole()) os << "  / (u^" << z[k].u_pole() << " w^" << z[k].w_pole() << ")";
    os << "\n";
  }
  if (with_phase) {
    os << "x, leading phase, phase with corrections, large-x asymptote\n";
    for (const auto& row : phase)
      os << num(row["x"]) << ", " << num(row["leading"]) << ", " << num(row["expansion"]) << ", "
         << (row["large_x"].is_null() ? std::string("-") : num(row["large_x"])) << "\n";
  }
  return 0;
}

int cmd_solve(const Options& o) {
  require_positive_g2(o.g2);
  const auto [n, p] = parse_state(o.state);
  const auto opt = solver_options(o);
  const auto chain = solve_chain(o.g2, p, n, opt);
  const auto& r = chain.back();
  const double em = mesh_energy(mesh_config(o, o.g2), 2 * n + p).energy();
  const double rel = std::abs(r.E_var - em) / em;
  if (o.format == "json") {
    emit_json(o, {{"result", r}, {"E_mesh", em}, {"relative_deviation", rel}, {"seed", o.seed},
                  {"precision", to_string(opt.precision)}},
              "anharmonic.solve/1");
    return 0;
  }
  Output out(o.out);
  auto& os = out.stream();
  os << "state       (" << n << "," << p << ")  g2 = " << num(o.g2) << "\n"
     << "E_var       " << num(r.E_var, 10) << "\n"
     << "A           " << num(r.params.A, 12) << "\n"
     << "B           " << num(r.params.B, 12) << "\n";
  if (!r.params.nodes.empty()) {
    os << "nodes a2k  ";
    for (double a : r.params.nodes) os << " " << num(a, 12);
    os << "\n";
  }
  os << "E2          " << num(r.E2, 6) << "\n"
     << "E3          " << num(r.E3, 6) << "\n"
     << "E_var+E2+E3 " << num(r.E_var + r.E2 + r.E3, 14) << "\n"
     << "phi1_sup    " << num(r.phi1_sup, 4) << "\n"
     << "E_mesh      " << num(em, 14) << "\n"
     << "rel_dev     " << num(rel, 3) << "\n";
  return 0;
}

int cmd_mesh(const Options& o) {
  require_positive_g2(o.g2);
  const auto [n, p] = parse_state(o.state);
  const auto r = mesh_energy(mesh_config(o, o.g2), 2 * n + p);
  if (o.format == "json") {
    emit_json(o, {{"g2", o.g2}, {"n", n}, {"p", p}, {"mesh", r}}, "anharmonic.mesh/1");
    return 0;
  }
  Output out(o.out);
  out.stream() << "E      " << num(r.energy(), 14) << "\n"
               << "N      " << r.N_used << "\n"
               << "delta  " << num(r.convergence_delta, 3) << "  (against N - " << defaults::kMeshDeltaStep << ")\n"
               << "scale  " << num(r.scale_used, 6) << "\n";
  return 0;
}

int cmd_radial(const Options& o) {
  require_positive_g2(o.g2);
  QuadratureSpec quad;
  if (o.tol > 0) quad.rel_tol = o.tol;
  SimplexOptions simplex;
  simplex.seed = o.seed;
  const auto r = optimize_radial(o.dim, 0, o.ell, o.g2, quad, simplex);
  const double em = radial_mesh_energy(o.dim, o.ell, o.g2, o.mesh_points).energy();
  const double rel = std::abs(r.E_var - em) / em;
  if (o.format == "json") {
    emit_json(o, {{"result", r}, {"E_mesh", em}, {"relative_deviation", rel}, {"seed", o.seed}},
              "anharmonic.radial/1");
    return 0;
  }
  Output out(o.out);
  out.stream() << "D = " << o.dim << "  ell = " << o.ell << "  g2 = " << num(o.g2) << "\n"
               << "E_var    " << num(r.E_var, 10) << "\n"
               << "A        " << num(r.params.A, 12) << "\n"
               << "B        " << num(r.params.B, 12) << "\n"
               << "E_mesh   " << num(em, 14) << "\n"
               << "rel_dev  " << num(rel, 3) << "\n";
  return 0;
}

int cmd_table1(const Options& o) {
  const auto opt = solver_options(o);
  std::vector<ChainRequest> jobs;
  for (const auto& ref : kReferenceTable)
    if (ref.D == 1) jobs.push_back({ref.g2, 0, 0});
  const auto chains = solve_chains(jobs, opt);
  json rows = json::array();
  std::size_t next_1d = 0;
  for (const auto& ref : kReferenceTable) {
    double mesh, var;
    if (ref.D == 1) {
      mesh = mesh_energy(mesh_config(o, ref.g2), 0).energy();
      var = chains[next_1d++].front().E_var;
    } else {
      mesh = radial_mesh_energy(ref.D, 0, ref.g2, o.mesh_points).energy();
      var = optimize_radial(ref.D, 0, 0, ref.g2, opt.quad, opt.simplex).E_var;
    }
    const double printed = ref.value(), unit = ref.last_digit();
    rows.push_back({{"D", ref.D},
                    {"g2", ref.g2},
                    {"printed", ref.digits},
                    {"mesh", mesh},
                    {"mesh_minus_printed", mesh - printed},
                    {"mesh_within_last_digit", std::abs(mesh - printed) <= unit},
                    {"variational", var},
                    {"variational_rel_dev_mesh", std::abs(var - mesh) / mesh},
                    {"variational_minus_printed", var - printed},
                    {"variational_within_last_digit", std::abs(var - printed) <= unit}});
  }
  if (o.format == "json") {
    emit_json(o, {{"rows", rows}}, "anharmonic.table1/1");
    return 0;
  }
  Output out(o.out);
  auto& os = out.stream();
  os << "D,g2,printed,mesh,mesh_minus_printed,mesh_within_last_digit,variational,variational_rel_dev_mesh,"
        "variational_minus_printed,variational_within_last_digit\n";
  for (const auto& r : rows)
    os << r["D"].get<int>() << "," << num(r["g2"]) << "," << r["printed"].get<std::string>() << "," << num(r["mesh"])
       << "," << num(r["mesh_minus_printed"], 3) << "," << (r["mesh_within_last_digit"].get<bool>() ? 1 : 0) << ","
       << num(r["variational"]) << "," << num(r["variational_rel_dev_mesh"], 3) << ","
       << num(r["variational_minus_printed"], 3) << "," << (r["variational_within_last_digit"].get<bool>() ? 1 : 0)
       << "\n";
  return 0;
}

int cmd_figures(const Options& o) {
  if (o.grid_points < 2) throw ValidationError("--points must be >= 2");
  const std::filesystem::path dir = o.out.empty() ? "figures" : o.out;
  std::filesystem::create_directories(dir);
  const auto opt = solver_options(o);
  std::vector<ChainRequest> jobs;
  for (int i = 0; i < o.grid_points; ++i) {
    const double g2 = std::pow(10.0, -2.0 + 4.0 * i / (o.grid_points - 1));
    for (int p = 0; p <= 1; ++p) jobs.push_back({g2, p, 2});
  }
  const auto chains = solve_chains(jobs, opt);
  std::ofstream ab(dir / "ab.csv"), nodes(dir / "nodes.csv");
  if (!ab || !nodes) throw ValidationError("cannot write into '" + dir.string() + "'");
  ab << "g2,n,p,A,B,E_var,minus_A_over_g23,B_over_g23\n";
  nodes << "g2,n,p,k,x_k\n";
  for (std::size_t j = 0; j < jobs.size(); ++j)
    for (const auto& r : chains[j]) {
      const double g2 = jobs[j].g2, g23 = std::cbrt(g2);
      const int n = r.params.n, p = r.params.p;
      ab << num(g2) << "," << n << "," << p << "," << num(r.params.A) << "," << num(r.params.B) << ","
         << num(r.E_var) << "," << num(-r.params.A / g23) << "," << num(r.params.B / g23) << "\n";
      const auto x = positive_nodes(r.params);
      for (std::size_t k = 0; k < x.size(); ++k)
        nodes << num(g2) << "," << n << "," << p << "," << k + 1 << "," << num(x[k]) << "\n";
    }
  std::cout << "wrote " << (dir / "ab.csv").string() << " and " << (dir / "nodes.csv").string() << "\n";
  return 0;
}

int cmd_verify(const Options& o) {
  AcceptanceOptions acc;
  acc.solver = solver_options(o);
  acc.mesh_points = o.mesh_points;
  const auto results = run_acceptance(acc, o.criteria);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  if (o.format == "json") {
    emit_json(o, {{"criteria", results}, {"all_pass", all}}, "anharmonic.verify/1");
  } else {
    Output out(o.out);
    print_report(out.stream(), results, true);
  }
  return all ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quartic anharmonic oscillator: perturbation series, semiclassical terms, variational approximant, "
               "Lagrange-mesh reference energies"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool json_ok = true) {
    sub->add_option("--out", o.out, "Write the output to this file instead of stdout");
    if (json_ok)
      sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto numeric = [&](CLI::App* sub) {
    sub->add_option("--mesh-points", o.mesh_points, "Lagrange mesh size N")->check(CLI::Range(12, 400));
    sub->add_option("--tol", o.tol,
                    "Quadrature doubling tolerance (solve, radial, table1, figures, verify) or mesh convergence "
                    "tolerance (mesh)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed of the optimizer restarts");
    sub->add_option("--precision", o.precision, "Quadrature arithmetic")->check(CLI::IsMember({"double", "extended"}));
  };

  auto* pt = app.add_subcommand("pt", "Exact perturbative energies eps_0..eps_N and Y_n(v)");
  pt->add_option("order,--order", o.order, "Highest order N");
  common(pt);

  auto* sc = app.add_subcommand("semiclassical", "Semiclassical terms Z_0..Z_N and, with --g2, the phase");
  sc->add_option("order,--order", o.order, "Highest order N");
  auto* sc_g2 = sc->add_option("--g2", o.g2, "Coupling g^2 for phase evaluation");
  sc->add_option("--state", o.state, "State n,p");
  sc->add_option("--x", o.xs, "Points where the phase is evaluated")->delimiter(',');
  common(sc);

  auto* solve = app.add_subcommand("solve", "Optimize the approximant for one state and compare with the mesh");
  solve->add_option("--g2", o.g2, "Coupling g^2")->required();
  solve->add_option("--state", o.state, "State n,p");
  common(solve);
  numeric(solve);

  auto* mesh = app.add_subcommand("mesh", "Lagrange-mesh reference energy for one state");
  mesh->add_option("--g2", o.g2, "Coupling g^2")->required();
  mesh->add_option("--state", o.state, "State n,p");
  common(mesh);
  numeric(mesh);

  auto* radial = app.add_subcommand("radial", "Radial ground state in D dimensions, variational and mesh");
  radial->add_option("--g2", o.g2, "Coupling g^2")->required();
  radial->add_option("--dim", o.dim, "Dimension D")->check(CLI::PositiveNumber);
  radial->add_option("--ell", o.ell, "Angular momentum ell");
  common(radial);
  numeric(radial);

  auto* table1 = app.add_subcommand("table1", "Ground energies for D = 1, 2, 3, 6 against the reference table (CSV)");
  common(table1);
  numeric(table1);

  auto* figures = app.add_subcommand("figures", "CSV data for A(g2), B(g2) and node positions");
  figures->add_option("--out", o.out, "Output directory (default ./figures)");
  figures->add_option("--points", o.grid_points, "Number of log-spaced couplings in [1e-2, 1e2]");
  numeric(figures);

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--criteria", o.criteria, "Only these criterion ids")->delimiter(',');
  common(verify);
  numeric(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*pt) return cmd_pt(o);
    if (*sc) return cmd_semiclassical(o, sc_g2->count() > 0);
    if (*solve) return cmd_solve(o);
    if (*mesh) return cmd_mesh(o);
    if (*radial) return cmd_radial(o);
    if (*table1) return cmd_table1(o);
    if (*figures) return cmd_figures(o);
    if (*verify) return cmd_verify(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
