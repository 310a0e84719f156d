#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "krein/extension_core.hpp"
#include "krein/layer_ops.hpp"

namespace krein::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Check make_check(std::string name, double measured, const std::string& relation, double bound) {
  bool pass = false;
  if (relation == "<=") pass = measured <= bound;
  else if (relation == "<") pass = measured < bound;
  else if (relation == ">") pass = measured > bound;
  return {std::move(name), measured, relation, bound, pass};
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double hermitian_defect(const CMat& m) {
  const double scale = max_abs(m);
  return scale > 0.0 ? max_abs(m - m.adjoint()) / scale : 0.0;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", values[i]);
      out_ << (i ? "," : "") << buf;
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json check_json(const Check& c) {
  return {{"name", c.name}, {"measured", c.measured}, {"relation", c.relation},
          {"bound", c.bound}, {"pass", c.pass}};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<Point> box_grid(const Box& box, int n) {
  std::vector<Point> pts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      pts.emplace_back(box.x0 + (box.x1 - box.x0) * i / (n - 1), box.y0 + (box.y1 - box.y0) * j / (n - 1));
    }
  return pts;
}

}  // namespace

std::vector<Check> extension_algebra_checks(int n_models, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(2, 12);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.5, 2.0), coin(0.0, 1.0);
  auto random_z = [&] { return cplx(re(rng), (coin(rng) < 0.5 ? -1.0 : 1.0) * im(rng)); };

  double resolvent_identity = 0, adjoint = 0, f1 = 0, f2 = 0, range = 0, compression = 0;
  for (int m = 0; m < n_models; ++m) {
    const int dH = dim(rng);
    const int dh = std::uniform_int_distribution<int>(1, dH)(rng);
    const int rank = std::uniform_int_distribution<int>(0, dh)(rng);
    const AbstractModel model = AbstractModel::random(dH, dh, rng);
    const ExtensionParams params = ExtensionParams::random(model, rank, rng);
    const cplx z = random_z(), w = random_z();

    const CMat rz = krein_resolvent_matrix(model, params, z);
    const CMat rw = krein_resolvent_matrix(model, params, w);
    resolvent_identity = std::max(resolvent_identity, max_abs(rz - rw - (w - z) * rz * rw));
    adjoint = std::max(adjoint, max_abs(krein_resolvent_matrix(model, params, std::conj(z)) - rz.adjoint()));

    const CMat gz = gamma_field(model, z), gw = gamma_field(model, w);
    f1 = std::max(f1, max_abs((z - w) * free_resolvent(model, w) * gz - (gw - gz)));
    f2 = std::max(f2, max_abs(model.A * (gz - gw) - (z * gz - w * gw)));

    const CVec f = random_complex(dH, 1, rng);
    const CVec u = rz * f;
    const CVec phi = krein_density(model, params, z, f);
    const CVec u_circ = u - gamma_field(model, model.lambda0) * phi;
    range = std::max(range, (params.Pi * (model.tau * u_circ - params.Theta * phi)).cwiseAbs().maxCoeff());

    const CMat theta_tilde = random_hermitian(dh, rng);
    const CMat q = range_basis(params.Pi);
    const CMat compressed = compress_form(theta_tilde, params.Pi);
    for (int trial = 0; trial < 4 && q.cols() > 0; ++trial) {
      const CVec c = random_complex(q.cols(), 1, rng);
      const CVec x = q * c;
      compression = std::max(compression, std::abs(c.dot(compressed * c) - x.dot(theta_tilde * x)));
    }
  }
  return {make_check("resolvent identity", resolvent_identity, "<=", 1e-11),
          make_check("resolvent adjoint symmetry", adjoint, "<=", 1e-11),
          make_check("gamma field shift identity", f1, "<=", 1e-12),
          make_check("gamma field eigen-relation", f2, "<=", 1e-12),
          make_check("range condition", range, "<=", 1e-10),
          make_check("form compression", compression, "<=", 1e-13)};
}

std::vector<Check> layer_operator_checks(const RunConfig& cfg) {
  const BoundaryGrid g = discretize_curve(cfg.curve, cfg.n_gamma);
  const KernelConfig kc = reference_config(cfg.extension);
  const int n = g.size();
  const CMat id = CMat::Identity(n, n);

  const CMat S = assemble_g0SL(g, kc).entries;
  const CMat T = assemble_g1DL(g, kc).entries;
  const CMat K = assemble_K(g, kc).entries;
  const CMat Kp = assemble_Kprime(g, kc).entries;
  const double sl_jump = max_abs(assemble_g1SL(g, kc, Side::Plus).entries -
                                 assemble_g1SL(g, kc, Side::Minus).entries + id);
  const double dl_jump = max_abs(assemble_g0DL(g, kc, Side::Plus).entries -
                                 assemble_g0DL(g, kc, Side::Minus).entries - id);

  // Traces of point-source fields: one source outside, one inside the curve.
  double extent = 0.0;
  for (int j = 0; j < n; ++j) extent = std::max(extent, g.node(j).norm());
  const Point outside(1.5 * extent + 0.5, 0.3);
  Point inside(0.0, 0.0);
  if (!inside_curve(cfg.curve, inside)) inside = g.x.rowwise().mean();
  auto traces = [&](const Point& src, CVec& u0, CVec& u1) {
    u0.resize(n);
    u1.resize(n);
    for (int j = 0; j < n; ++j) {
      u0(j) = fundamental_solution(kc, g.node(j), src);
      u1(j) = conormal_gradient_x(kc, g.node(j), src, g.nu(j));
    }
  };
  CVec a0, a1, b0, b1;
  traces(outside, a0, a1);  // solves the equation inside
  traces(inside, b0, b1);   // solves the equation outside
  auto rel = [](const CVec& r, const CVec& ref) { return r.norm() / ref.norm(); };
  const double rep_dirichlet = rel((0.5 * id + K) * a0 - S * a1, S * a1);
  const double rep_neumann = rel((0.5 * id - Kp) * a1 + T * a0, T * a0);
  const double rep_exterior = rel((0.5 * id - K) * b0 + S * b1, S * b1);

  const CMat s_sym = weighted_symmetrization(S, g.weight);
  const CMat t_sym = weighted_symmetrization(T, g.weight);
  const Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (s_sym + s_sym.adjoint()), Eigen::EigenvaluesOnly);
  const Eigen::SelfAdjointEigenSolver<CMat> et(0.5 * (t_sym + t_sym.adjoint()), Eigen::EigenvaluesOnly);

  return {make_check("single layer normal-derivative jump", sl_jump, "<=", 1e-10),
          make_check("double layer trace jump", dl_jump, "<=", 1e-10),
          make_check("interior representation, Dirichlet trace", rep_dirichlet, "<=", 1e-8),
          make_check("interior representation, Neumann trace", rep_neumann, "<=", 1e-8),
          make_check("exterior representation, Dirichlet trace", rep_exterior, "<=", 1e-8),
          make_check("single layer weighted symmetry", hermitian_defect(s_sym), "<=", 1e-10),
          make_check("hypersingular weighted symmetry", hermitian_defect(t_sym), "<=", 1e-10),
          make_check("single layer coercivity (min eigenvalue)", es.eigenvalues().minCoeff(), ">", 0.0),
          make_check("hypersingular coercivity (-max eigenvalue)", -et.eigenvalues().maxCoeff(), ">", 0.0)};
}

std::vector<Check> extension_block_checks(const RunConfig& cfg) {
  std::vector<Check> out;
  const BoundaryGrid g = cfg.grid();
  const int n = g.size();
  if (!cfg.extension.on_arc) {
    const BirmanBlock blk = birman_block(cfg.extension, g, reference_config(cfg.extension));
    RVec w = g.weight;
    if (blk.selector == Selector::Both) {
      w.resize(2 * n);
      w << g.weight, g.weight;
    }
    out.push_back(make_check("extension block weighted symmetry",
                             hermitian_defect(weighted_symmetrization(blk.matrix, w)), "<=", 1e-9));
  }

  // Robin with b+ = alpha/2 = -b- compressed to the first component, and with
  // b+ = 2/beta = -b- compressed to the second component.
  const RVec alpha = cfg.extension.alpha.sample(g);
  const RVec beta = cfg.extension.beta.sample(g);
  if (alpha.cwiseAbs().minCoeff() >= 1e-8) {
    const CMat robin = robin_parameter_matrix(0.5 * alpha, -0.5 * alpha);
    const CMat delta = (-alpha.cwiseInverse()).cast<cplx>().asDiagonal();
    out.push_back(make_check("robin reduces to delta", max_abs(select_components(robin, Selector::First, n) - delta),
                             "<=", 1e-12));
  }
  if (beta.cwiseAbs().minCoeff() >= 1e-8) {
    const RVec bp = 2.0 * beta.cwiseInverse();
    const CMat robin = robin_parameter_matrix(bp, -bp);
    const CMat dprime = beta.cwiseInverse().cast<cplx>().asDiagonal();
    out.push_back(make_check("robin reduces to delta prime",
                             max_abs(select_components(robin, Selector::Second, n) - dprime), "<=", 1e-12));
  }
  return out;
}

namespace {

int run_verify(const RunConfig& cfg, json& report, std::ostream& log) {
  std::vector<Check> checks = extension_algebra_checks(cfg.verify.n_models, cfg.seed);
  for (const Check& c : layer_operator_checks(cfg)) checks.push_back(c);
  for (const Check& c : extension_block_checks(cfg)) checks.push_back(c);
  json arr = json::array();
  bool all = true;
  for (const Check& c : checks) {
    arr.push_back(check_json(c));
    all = all && c.pass;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s  %-46s %.3e %s %.1e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                  c.measured, c.relation.c_str(), c.bound);
    log << buf;
  }
  report["checks"] = arr;
  report["all_pass"] = all;
  return all ? kExitOk : kExitCheckFailure;
}

int run_eig(const RunConfig& cfg, json& report, std::ostream& log) {
  const BoundaryGrid g = cfg.grid();
  const SpectrumResult res = point_spectrum(cfg.extension, g, cfg.eig.branch, cfg.eig.s_min, cfg.eig.s_max,
                                            cfg.eig.n_scan);
  CsvWriter scan(fs::path(cfg.out_dir) / "scan.csv", {"s", "z_re", "z_im", "sigma_min_preconditioned"});
  for (const ScanSample& s : res.scan) {
    const KernelConfig kc = scan_config(cfg.eig.branch, s.s, cfg.extension.V0);
    scan.row({s.s, kc.z.real(), kc.z.imag(), s.sigma_min});
  }
  json hits = json::array();
  for (std::size_t h = 0; h < res.hits.size(); ++h) {
    const SpectralHit& hit = res.hits[h];
    hits.push_back({{"s", hit.z_star}, {"z", complex_json(hit.z)}, {"kappa", complex_json(hit.kappa)},
                    {"residual", hit.residual}, {"block_norm", hit.block_norm},
                    {"multiplicity", hit.multiplicity}});
    log << "hit s = " << hit.z_star << " multiplicity " << hit.multiplicity << '\n';
    if (cfg.eig.eigenfunction_n > 1) {
      const double guard = 3.0 * g.mean_spacing();
      std::vector<Point> kept;
      for (const Point& p : box_grid(cfg.eig.eigenfunction_box, cfg.eig.eigenfunction_n)) {
        if (distance_to_nodes(g, p) > guard) kept.push_back(p);
      }
      Eigen::Matrix2Xd pts(2, kept.size());
      for (std::size_t i = 0; i < kept.size(); ++i) pts.col(i) = kept[i];
      const CVec u = eigenfunction_samples(cfg.extension, g, cfg.eig.branch, hit, pts);
      CsvWriter ef(fs::path(cfg.out_dir) / ("eigenfunction_" + std::to_string(h) + ".csv"),
                   {"x", "y", "u_re", "u_im"});
      for (std::size_t i = 0; i < kept.size(); ++i) ef.row({kept[i].x(), kept[i].y(), u(i).real(), u(i).imag()});
    }
  }
  report["hits"] = hits;
  write_json(fs::path(cfg.out_dir) / "hits.json", {{"config", cfg.to_json()}, {"hits", hits}});
  return kExitOk;
}

int run_green(const RunConfig& cfg, json& report, std::ostream& log) {
  const BoundaryGrid g = cfg.grid();
  const PerturbedResolvent pr(cfg.extension, g, cfg.green.z);
  const double guard = 3.0 * g.mean_spacing();
  if (distance_to_nodes(g, cfg.green.source) <= guard) {
    throw ConfigError("/task/source", "source lies within 3 node spacings of the boundary");
  }
  const CorrectionDensity rho = pr.source_density(cfg.green.source);
  CsvWriter csv(fs::path(cfg.out_dir) / "green.csv", {"x", "y", "G_re", "G_im", "g_re", "g_im"});
  int written = 0, skipped = 0;
  for (const Point& p : box_grid(cfg.green.box, cfg.green.n)) {
    if (distance_to_nodes(g, p) <= guard || (p - cfg.green.source).norm() < 1e-14) {
      ++skipped;
      continue;
    }
    const cplx free = fundamental_solution(pr.config(), p, cfg.green.source);
    const cplx full = free + pr.correction_at(rho, p);
    csv.row({p.x(), p.y(), full.real(), full.imag(), free.real(), free.imag()});
    ++written;
  }
  report["points_written"] = written;
  report["points_skipped_near_boundary"] = skipped;
  report["condition_number"] = pr.condition_number();
  log << "wrote " << written << " points\n";
  return kExitOk;
}

int run_scatter(const RunConfig& cfg, json& report, std::ostream& log) {
  const BoundaryGrid g = cfg.grid();
  std::vector<double> angles;
  for (int a = 0; a < cfg.scatter.n_angles; ++a) angles.push_back(2.0 * kPi * a / cfg.scatter.n_angles);
  Eigen::Matrix2Xd near(2, cfg.scatter.near_points.size());
  for (std::size_t i = 0; i < cfg.scatter.near_points.size(); ++i) near.col(i) = cfg.scatter.near_points[i];
  const ScatterResult res = scattered_field(cfg.extension, g, cfg.scatter.k, cfg.scatter.direction, angles, near,
                                            cfg.scatter.epsilon_path);
  CsvWriter ff(fs::path(cfg.out_dir) / "far_field.csv", {"angle", "F_re", "F_im"});
  for (std::size_t a = 0; a < angles.size(); ++a) ff.row({angles[a], res.far_field(a).real(), res.far_field(a).imag()});
  if (near.cols() > 0) {
    CsvWriter nf(fs::path(cfg.out_dir) / "near_field.csv", {"x", "y", "u_re", "u_im"});
    for (int i = 0; i < near.cols(); ++i) {
      nf.row({near(0, i), near(1, i), res.near_field(i).real(), res.near_field(i).imag()});
    }
  }
  report["condition_number"] = res.condition;
  report["trapped_mode_warning"] = res.trapped_mode_warning;
  json path = json::array();
  for (std::size_t e = 0; e < res.epsilons.size(); ++e) {
    path.push_back({{"epsilon", res.epsilons[e]}, {"relative_far_field_gap", res.eps_errors[e]}});
  }
  report["epsilon_path"] = path;
  if (res.trapped_mode_warning) log << "warning: boundary block condition number exceeds 1e10\n";
  return kExitOk;
}

int run_svd(const RunConfig& cfg, json& report, std::ostream& log) {
  const BoundaryGrid g = cfg.grid();
  const SvdDecay d = resolvent_difference_svd(cfg.extension, g, cfg.svd.z, cfg.svd.box, cfg.svd.n_samples);
  CsvWriter csv(fs::path(cfg.out_dir) / "singular_values.csv", {"j", "sigma"});
  for (int j = 0; j < d.singular_values.size(); ++j) csv.row({double(j + 1), d.singular_values(j)});
  report["slope"] = d.slope;
  report["fit_range"] = json::array({d.fit_lo, d.fit_hi});
  report["n_points"] = d.n_points;
  log << "fitted slope " << d.slope << '\n';
  return kExitOk;
}

json error_json(const std::string& code, const std::string& message) {
  return {{"code", code}, {"message", message}};
}

}  // namespace

int run_task(const RunConfig& cfg, std::ostream& log) {
  fs::create_directories(cfg.out_dir);
  json report = {{"command", task_name(cfg.task)}, {"config", cfg.to_json()}};
  int code = kExitOk;
  try {
    switch (cfg.task) {
      case TaskKind::Verify: code = run_verify(cfg, report, log); break;
      case TaskKind::Eig: code = run_eig(cfg, report, log); break;
      case TaskKind::Green: code = run_green(cfg, report, log); break;
      case TaskKind::Scatter: code = run_scatter(cfg, report, log); break;
      case TaskKind::Svd: code = run_svd(cfg, report, log); break;
    }
    report["status"] = code == kExitOk ? "ok" : "check_failure";
  } catch (const ConfigError& e) {
    report["status"] = "error";
    report["error"] = error_json("config_error", e.what());
    report["error"]["pointer"] = e.pointer;
    code = kExitConfigError;
  } catch (const BlockSingularError& e) {
    report["status"] = "error";
    report["error"] = error_json("block_singular", e.what());
    code = kExitNumericalFailure;
  } catch (const SingularShiftError& e) {
    report["status"] = "error";
    report["error"] = error_json("singular_shift", e.what());
    code = kExitNumericalFailure;
  } catch (const ProximityError& e) {
    report["status"] = "error";
    report["error"] = error_json("proximity", e.what());
    code = kExitNumericalFailure;
  }
  write_json(fs::path(cfg.out_dir) / "report.json", report);
  if (report.contains("error")) log << "error: " << report["error"]["message"].get<std::string>() << '\n';
  return code;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Boundary-integral resolvents of self-adjoint extensions"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  for (TaskKind kind : {TaskKind::Verify, TaskKind::Eig, TaskKind::Green, TaskKind::Scatter, TaskKind::Svd}) {
    CLI::App* sub = app.add_subcommand(task_name(kind));
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = load_config(config_path);
    if (command != task_name(cfg.task)) {
      throw ConfigError("/task/kind", "task '" + std::string(task_name(cfg.task)) +
                                          "' does not match subcommand '" + command + "'");
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return run_task(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", {{"code", "config_error"}, {"pointer", e.pointer}, {"message", e.what()}}}}.dump()
              << '\n';
    return kExitConfigError;
  }
}

}  // namespace krein::app
