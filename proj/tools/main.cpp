#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bures/curves.hpp"
#include "bures/fidelity.hpp"
#include "bures/geodesics.hpp"
#include "bures/matrix_json.hpp"
#include "bures/operator_core.hpp"
#include "bures/strata.hpp"
#include "bures/tangent_metric.hpp"
#include "gen.hpp"

namespace {

using bures::DensityMatrix;
using bures::Matrix;
using nlohmann::json;

// Input-stage failures exit with 2, numeric failures during computation
// with 1; both print one machine-readable error object on stderr.
struct ValidationFailure {
  std::string code;
  std::string message;
};

struct Options {
  std::string out;
  std::string format = "json";
  int grid = 65;
  double tol_rank = bures::tol::rank_rel;
  double fd_step = 1e-5;
  std::uint64_t seed = 0;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationFailure{"BadInput", "cannot open " + path};
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationFailure{"BadJson", path + ": " + e.what()};
  }
}

Matrix load_matrix(const std::string& path) {
  try {
    return bures::matrix_from_json(load_json_file(path));
  } catch (const bures::Error& e) {
    throw ValidationFailure{e.code(), path + ": " + e.what()};
  }
}

DensityMatrix load_density(const std::string& path, double tol_rank) {
  try {
    return bures::validate_density(bures::matrix_from_json(load_json_file(path)),
                                   tol_rank);
  } catch (const bures::Error& e) {
    throw ValidationFailure{e.code(), path + ": " + e.what()};
  }
}

void require_matching_dims(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationFailure{"DimMismatch",
                            "inputs have different dimensions"};
  }
}

void write_output(const Options& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(opts.out);
  if (!out) {
    throw ValidationFailure{"BadOutput", "cannot write " + opts.out};
  }
  out << text << "\n";
}

void emit_result(const Options& opts, json result, json diagnostics = {}) {
  json payload{{"result", std::move(result)}};
  if (!diagnostics.is_null()) payload["diagnostics"] = std::move(diagnostics);
  payload["tolerances_used"] = {{"tol_rank", opts.tol_rank},
                                {"fd_step", opts.fd_step}};
  write_output(opts, payload.dump(2));
}

int thread_cap(int jobs) {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("BURES_GEOM_THREADS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) cap = std::min(cap, requested);
  }
  return std::min(cap, jobs);
}

// Index-ordered parallel map; results land in caller-owned slots, so output
// ordering matches input ordering regardless of scheduling.
void parallel_for(int jobs, const std::function<void(int)>& body) {
  const int workers = thread_cap(jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string csv_matrix_header(const std::string& prefix, int n) {
  std::ostringstream os;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      os << "," << prefix << "_" << r << "_" << c << "_re"
         << "," << prefix << "_" << r << "_" << c << "_im";
    }
  }
  return os.str();
}

void csv_matrix_row(std::ostringstream& os, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << "," << m(r, c).real() << "," << m(r, c).imag();
    }
  }
}

bures::CurveProvider curve_from_spec(const json& spec, const Options& opts,
                                     double* window0, double* window1) {
  if (!spec.is_object() || !spec.contains("type")) {
    throw ValidationFailure{"BadCurveSpec", "curve spec needs a type field"};
  }
  const std::string type = spec.at("type").get<std::string>();
  try {
    if (type == "geodesic") {
      const DensityMatrix nu = bures::validate_density(
          bures::matrix_from_json(spec.at("nu")), opts.tol_rank);
      const DensityMatrix rho = bures::validate_density(
          bures::matrix_from_json(spec.at("rho")), opts.tol_rank);
      *window0 = spec.value("t0", 0.0);
      *window1 = spec.value("t1", 1.0);
      return bures::geodesic_curve(bures::geodesic_arc(nu, rho));
    }
    if (type == "hamiltonian") {
      const DensityMatrix rho0 = bures::validate_density(
          bures::matrix_from_json(spec.at("rho0")), opts.tol_rank);
      const Matrix h = bures::matrix_from_json(spec.at("h"));
      *window0 = spec.value("t0", 0.0);
      *window1 = spec.value("t1", 1.0);
      return bures::hamiltonian_curve(rho0, h, *window0, *window1);
    }
    if (type == "samples") {
      const auto ts = spec.at("ts").get<std::vector<double>>();
      if (spec.contains("implementations")) {
        std::vector<Matrix> impls;
        for (const auto& m : spec.at("implementations")) {
          impls.push_back(bures::matrix_from_json(m));
        }
        *window0 = ts.front();
        *window1 = ts.back();
        return bures::sampled_implementation_curve(ts, impls);
      }
      std::vector<DensityMatrix> states;
      for (const auto& m : spec.at("states")) {
        states.push_back(bures::validate_density(bures::matrix_from_json(m),
                                                 opts.tol_rank));
      }
      *window0 = ts.front();
      *window1 = ts.back();
      return bures::sampled_state_curve(ts, states);
    }
  } catch (const ValidationFailure&) {
    throw;
  } catch (const json::exception& e) {
    throw ValidationFailure{"BadCurveSpec", e.what()};
  } catch (const bures::Error& e) {
    throw ValidationFailure{e.code(), e.what()};
  }
  throw ValidationFailure{"BadCurveSpec", "unknown curve type: " + type};
}

// --- subcommand bodies ------------------------------------------------------

void run_fidelity(const Options& opts, const std::string& a,
                  const std::string& b) {
  const DensityMatrix nu = load_density(a, opts.tol_rank);
  const DensityMatrix rho = load_density(b, opts.tol_rank);
  require_matching_dims(nu.matrix, rho.matrix);
  const double f = bures::fidelity(nu, rho);
  const double f_alt = bures::fidelity_sqrt_route(nu, rho);
  emit_result(opts, f,
              json{{"sqrt_route", f_alt},
                   {"route_spread", std::abs(f - f_alt)},
                   {"bures_distance", bures::bures_distance(nu, rho)},
                   {"geodesic_distance", bures::geodesic_distance(nu, rho)},
                   {"residual_rho_nu", bures::residual_form(rho, nu).weight},
                   {"residual_nu_rho", bures::residual_form(nu, rho).weight},
                   {"arc_unique", bures::arc_unique(nu, rho)}});
}

void run_distance(const Options& opts, const std::string& a,
                  const std::string& b, const std::string& kind) {
  if (kind != "bures" && kind != "geodesic") {
    throw ValidationFailure{"BadUsage", "unknown distance kind: " + kind};
  }
  const DensityMatrix nu = load_density(a, opts.tol_rank);
  const DensityMatrix rho = load_density(b, opts.tol_rank);
  require_matching_dims(nu.matrix, rho.matrix);
  const double value = kind == "bures" ? bures::bures_distance(nu, rho)
                                       : bures::geodesic_distance(nu, rho);
  emit_result(opts, value, json{{"kind", kind}});
}

void run_geodesic(const Options& opts, const std::string& a,
                  const std::string& b) {
  const DensityMatrix nu = load_density(a, opts.tol_rank);
  const DensityMatrix rho = load_density(b, opts.tol_rank);
  require_matching_dims(nu.matrix, rho.matrix);
  const bures::GeodesicArc arc = bures::geodesic_arc(nu, rho);
  const int n = opts.grid;
  struct Row {
    double theta, t, dil, cum;
    Matrix state;
  };
  std::vector<Row> rows(n);
  parallel_for(n, [&](int j) {
    const double theta = n > 1 ? arc.theta0 * j / (n - 1) : 0.0;
    const double t = std::sin(theta) / std::sin(arc.theta0);
    rows[j] = Row{theta, t, bures::dilation_at(arc, t), theta,
                  bures::eval_theta(arc, theta).matrix};
  });
  if (opts.format == "csv") {
    std::ostringstream os;
    os << "theta,t,dilation,cum_length" << csv_matrix_header("state", nu.dim());
    for (const Row& row : rows) {
      os << "\n" << row.theta << "," << row.t << "," << row.dil << ","
         << row.cum;
      csv_matrix_row(os, row.state);
    }
    write_output(opts, os.str());
    return;
  }
  json samples = json::array();
  for (const Row& row : rows) {
    samples.push_back(json{{"theta", row.theta},
                           {"t", row.t},
                           {"dilation", row.dil},
                           {"cum_length", row.cum},
                           {"state", bures::matrix_to_json(row.state)}});
  }
  json payload{{"result",
                json{{"fidelity", arc.F},
                     {"theta0", arc.theta0},
                     {"arc_unique", bures::arc_unique(nu, rho)}}},
               {"samples", std::move(samples)},
               {"tolerances_used", json{{"tol_rank", opts.tol_rank}}}};
  write_output(opts, payload.dump(2));
}

void run_tangent_norm(const Options& opts, const std::string& rho_path,
                      const std::string& t_path) {
  const DensityMatrix rho = load_density(rho_path, opts.tol_rank);
  const Matrix t_raw = load_matrix(t_path);
  require_matching_dims(rho.matrix, t_raw);
  const bures::TangentForm form = bures::validate_tangent_form(rho, t_raw);
  const bures::TangentNormRoutes routes = bures::tangent_norm_routes(rho, form);
  json diag{{"huebner", routes.huebner},
            {"psi0_norm", routes.psi0_norm},
            {"spread", routes.spread()}};
  if (routes.has_ds_leaf) diag["ds_leaf"] = routes.ds_leaf;
  emit_result(opts, bures::tangent_norm(rho, form), diag);
}

void run_curve_length(const Options& opts, const std::string& path) {
  double w0 = 0.0, w1 = 1.0;
  bures::CurveProvider curve =
      curve_from_spec(load_json_file(path), opts, &w0, &w1);
  curve.t0 = w0;  // measure the requested window
  curve.t1 = w1;
  const bures::LengthEstimates lengths = bures::bures_length(curve);
  emit_result(opts,
              json{{"quadrature", lengths.quadrature},
                   {"partition_sum", lengths.partition_sum}});
}

void run_pythagoras(const Options& opts, const std::string& path) {
  double w0 = 0.0, w1 = 1.0;
  const bures::CurveProvider curve =
      curve_from_spec(load_json_file(path), opts, &w0, &w1);
  bures::FiniteDifferenceOptions fd;
  fd.step = opts.fd_step;
  const int n = opts.grid;
  std::vector<bures::CurveDiagnostics> rows(n);
  parallel_for(n, [&](int j) {
    const double t = w0 + (w1 - w0) * (j + 0.5) / n;
    rows[j] = bures::pythagoras(curve, t, {}, fd);
  });
  if (opts.format == "csv") {
    std::ostringstream os;
    os << "t,dil,dil_error,tangent_norm,invariant,pyth_residual,finslerian";
    for (const auto& d : rows) {
      os << "\n" << d.t << "," << d.dil << "," << d.dil_error << ","
         << d.tangent_norm_val << "," << d.invariant << ","
         << d.pyth_residual << "," << (d.finslerian ? 1 : 0);
    }
    write_output(opts, os.str());
    return;
  }
  json samples = json::array();
  for (const auto& d : rows) {
    samples.push_back(json{{"t", d.t},
                           {"dil", d.dil},
                           {"dil_error", d.dil_error},
                           {"tangent_norm", d.tangent_norm_val},
                           {"invariant", d.invariant},
                           {"pyth_residual", d.pyth_residual},
                           {"finslerian", d.finslerian}});
  }
  json payload{{"result", std::move(samples)},
               {"tolerances_used",
                json{{"tol_rank", opts.tol_rank}, {"fd_step", opts.fd_step}}}};
  write_output(opts, payload.dump(2));
}

void run_leaf(const Options& opts, const std::string& mu_path,
              const std::string& rho_path, const std::string& nu_path) {
  const DensityMatrix mu = load_density(mu_path, opts.tol_rank);
  const DensityMatrix rho = load_density(rho_path, opts.tol_rank);
  if (nu_path.empty()) {
    emit_result(opts, bures::leaf_membership(rho, mu));
    return;
  }
  const DensityMatrix nu = load_density(nu_path, opts.tol_rank);
  const bures::LeafConvexityReport report =
      bures::leaf_convexity_check(rho, nu, mu, opts.grid);
  emit_result(opts, report.pass,
              json{{"max_commutator", report.max_commutator},
                   {"min_eigenvalue", report.min_eigenvalue},
                   {"arc_unique", report.arc_is_unique}});
}

void run_mindec(const Options& opts, const std::string& rho_path,
                const std::string& basis_path) {
  const DensityMatrix rho = load_density(rho_path, opts.tol_rank);
  std::vector<bures::Vector> basis;
  if (basis_path.empty()) {
    for (int k = 0; k < rho.dim(); ++k) {
      bures::Vector e = bures::Vector::Zero(rho.dim());
      e(k) = 1.0;
      basis.push_back(e);
    }
  } else {
    const Matrix columns = load_matrix(basis_path);
    for (Eigen::Index k = 0; k < columns.cols(); ++k) {
      basis.push_back(columns.col(k));
    }
  }
  const bures::MinimalDecomposition dec =
      bures::minimal_decomposition(rho, basis);
  json vectors = json::array();
  for (const auto& v : dec.vectors) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      entries.push_back({v(i).real(), v(i).imag()});
    }
    vectors.push_back(std::move(entries));
  }
  emit_result(opts,
              json{{"weights", dec.weights}, {"vectors", std::move(vectors)}});
}

void run_maxsub(const Options& opts, const std::string& lambda_path,
                const std::string& psi_path) {
  const Matrix lambda_op = load_matrix(lambda_path);
  const Matrix psi_col = load_matrix(psi_path);
  if (psi_col.cols() != 1) {
    throw ValidationFailure{"BadInput", "psi must be a column (n x 1) matrix"};
  }
  emit_result(opts, bures::max_subtraction(lambda_op, psi_col.col(0)));
}

void run_gen(const Options& opts, const std::string& kind, int dim, int rank,
             const std::string& base_path) {
  if (dim < 1) {
    throw ValidationFailure{"BadUsage", "gen needs --dim >= 1"};
  }
  json out;
  if (kind == "full-rank") {
    out = bures::density_to_json(buresgen::full_rank_state(dim, opts.seed));
  } else if (kind == "rank") {
    if (rank < 1 || rank > dim) {
      throw ValidationFailure{"BadUsage", "gen --kind rank needs 1 <= --rank <= dim"};
    }
    out = bures::density_to_json(buresgen::rank_r_state(dim, rank, opts.seed));
  } else if (kind == "pure") {
    out = bures::density_to_json(buresgen::pure_state(dim, opts.seed));
  } else if (kind == "tangent") {
    if (base_path.empty()) {
      throw ValidationFailure{"BadUsage", "gen --kind tangent needs --base"};
    }
    const DensityMatrix base = load_density(base_path, opts.tol_rank);
    out = bures::matrix_to_json(buresgen::tangent_at(base, opts.seed).matrix);
  } else if (kind == "hamiltonian") {
    out = bures::matrix_to_json(buresgen::hamiltonian(dim, opts.seed));
  } else if (kind == "curve-hamiltonian") {
    out = json{{"type", "hamiltonian"},
               {"rho0", bures::density_to_json(
                            buresgen::full_rank_state(dim, opts.seed))},
               {"h", bures::matrix_to_json(
                         buresgen::hamiltonian(dim, opts.seed + 1))},
               {"t0", 0.0},
               {"t1", 1.0}};
  } else {
    throw ValidationFailure{"BadUsage", "unknown gen kind: " + kind};
  }
  write_output(opts, out.dump(2));
}

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures geometry of density matrices"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  Options opts;
  app.add_option("--out", opts.out, "output path (default stdout)");
  app.add_option("--format", opts.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--grid", opts.grid, "sample count for tables")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-rank", opts.tol_rank, "relative rank threshold");
  app.add_option("--fd-step", opts.fd_step, "finite-difference step");
  app.add_option("--seed", opts.seed, "generator seed");

  std::string in_a, in_b, in_c, kind = "bures";
  int dim = 0, rank = 0;
  std::string base_path, basis_path;

  auto* fid = app.add_subcommand("fidelity", "fidelity tr|sqrt(nu)sqrt(rho)|");
  fid->add_option("nu", in_a)->required();
  fid->add_option("rho", in_b)->required();

  auto* dist = app.add_subcommand("distance", "Bures or geodesic distance");
  dist->add_option("nu", in_a)->required();
  dist->add_option("rho", in_b)->required();
  dist->add_option("--kind", kind, "bures|geodesic");

  auto* geo = app.add_subcommand("geodesic", "sample the geodesic arc");
  geo->add_option("nu", in_a)->required();
  geo->add_option("rho", in_b)->required();

  auto* tn = app.add_subcommand("tangent-norm", "three-route tangent norm");
  tn->add_option("rho", in_a)->required();
  tn->add_option("tangent", in_b)->required();

  auto* cl = app.add_subcommand("curve-length", "Bures length estimators");
  cl->add_option("curve", in_a)->required();

  auto* py = app.add_subcommand("pythagoras", "per-point curve diagnostics");
  py->add_option("curve", in_a)->required();

  auto* leaf = app.add_subcommand("leaf", "leaf membership / convexity");
  leaf->add_option("mu", in_a)->required();
  leaf->add_option("rho", in_b)->required();
  leaf->add_option("nu", in_c);

  auto* mindec = app.add_subcommand("mindec", "minimal rank-one decomposition");
  mindec->add_option("rho", in_a)->required();
  mindec->add_option("--basis", basis_path, "matrix whose columns are the basis");

  auto* maxsub = app.add_subcommand("maxsub", "maximal rank-one subtraction");
  maxsub->add_option("lambda", in_a)->required();
  maxsub->add_option("psi", in_b)->required();

  auto* gen = app.add_subcommand("gen", "seeded instance generation");
  gen->add_option("--dim", dim)->required();
  gen->add_option("--kind", kind)->required();
  gen->add_option("--rank", rank);
  gen->add_option("--base", base_path, "base state for tangent generation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    print_error("BadUsage", e.what());
    return 2;
  }

  try {
    if (fid->parsed()) run_fidelity(opts, in_a, in_b);
    else if (dist->parsed()) run_distance(opts, in_a, in_b, kind);
    else if (geo->parsed()) run_geodesic(opts, in_a, in_b);
    else if (tn->parsed()) run_tangent_norm(opts, in_a, in_b);
    else if (cl->parsed()) run_curve_length(opts, in_a);
    else if (py->parsed()) run_pythagoras(opts, in_a);
    else if (leaf->parsed()) run_leaf(opts, in_a, in_b, in_c);
    else if (mindec->parsed()) run_mindec(opts, in_a, basis_path);
    else if (maxsub->parsed()) run_maxsub(opts, in_a, in_b);
    else if (gen->parsed()) run_gen(opts, kind, dim, rank, base_path);
  } catch (const ValidationFailure& e) {
    print_error(e.code, e.message);
    return 2;
  } catch (const bures::Error& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return 1;
  }
  return 0;
}
