#include "weldcreep/baseline.hpp"
#include "weldcreep/cli.hpp"
#include "weldcreep/kantorovich.hpp"
#include "weldcreep/nonlinear.hpp"
#include "weldcreep/ritz.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace weldcreep::cli {

namespace {

namespace fs = std::filesystem;

struct Row {
  double r, z;
  StressState s;
  const char* source;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

void write_rows(const fs::path& path, const std::vector<Row>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "r,z,sigma_r,sigma_theta,sigma_z,sigma_rz,source\n";
  for (const Row& w : rows) {
    fmt::print(f, "{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{}\n", w.r, w.z, w.s.sigma_r, w.s.sigma_theta,
               w.s.sigma_z, w.s.sigma_rz, w.source);
  }
}

// Accumulates "key: value" lines after the echoed configuration.
class Summary {
 public:
  Summary(const PipeConfig& c, const RunManifest& m) {
    text_ = "# stage: " + stage_name(m.stage) + "\n# effective configuration\n" + echo_config(c, m) + "# results\n";
  }
  void add(const std::string& key, double v) { text_ += fmt::format("{}: {:.9g}\n", key, v); }
  void add(const std::string& key, const std::string& v) { text_ += fmt::format("{}: {}\n", key, v); }
  void write(const fs::path& dir) const {
    std::ofstream f(dir / "summary.txt");
    f << text_;
  }

 private:
  std::string text_;
};

void add_baseline(Summary& sum, const PipeConfig& c) {
  const BaselineCoefficients k = baseline_coefficients(c);
  sum.add("a", k.a);
  sum.add("a_r", k.a_r);
  sum.add("a_theta", k.a_theta);
  sum.add("a_z", k.a_z);
  sum.add("jump_constant_c", jump_constant(c));
  const NormalizedLayup nl = normalize_layup(c.layup);
  sum.add("s", nl.s);
  sum.add("alphas", fmt::format("[{}]", fmt::join(nl.alphas, ", ")));
  sum.add("load_interfaces", fmt::format("[{}]", fmt::join(nl.interfaces, ", ")));
  if (nl.large_perturbation) sum.add("warning", "|s| > 0.5, first-order expansion expected to degrade");
}

struct RitzRun {
  std::shared_ptr<const Basis> basis;
  LinearCorrectionProblem problem;
  FieldSolution sigma1;
};

RitzRun run_ritz(const PipeConfig& c, const RunManifest& m, Summary& sum, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  BasisSpec spec;
  spec.n_radial = m.nr;
  spec.n_axial = m.nz;
  spec.discontinuous = m.disc_basis;
  spec.interfaces = normalize_layup(c.layup).interfaces;
  RitzRun run;
  run.basis = enumerate_basis(c, spec);
  fmt::print(log, "ritz: {} basis fields\n", run.basis->size());
  run.problem = assemble_problem(c, run.basis, m.quad_order);
  run.sigma1 = solve_correction(run.problem);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  sum.add("basis_size", static_cast<double>(run.basis->size()));
  sum.add("quadrature_points", static_cast<double>(run.problem.grid.points()));
  sum.add("gram_asymmetry", run.problem.asymmetry);
  sum.add("solver", run.sigma1.report.method);
  sum.add("solver_condition", run.sigma1.report.condition);
  sum.add("solver_discarded", static_cast<double>(run.sigma1.report.discarded));
  sum.add("solver_relative_residual", run.sigma1.report.relative_residual);
  sum.add("ritz_seconds", secs);
  for (double r : m.line_r) {
    for (double h : run.problem.interfaces) {
      const StressState up = run.sigma1.evaluate(r, h, Side::above);
      const StressState lo = run.sigma1.evaluate(r, h, Side::below);
      const std::string tag = fmt::format("r={:g},z={:g}", r, h);
      sum.add("ritz_jump_sigma_r[" + tag + "]", up.sigma_r - lo.sigma_r);
      sum.add("ritz_jump_sigma_theta[" + tag + "]", up.sigma_theta - lo.sigma_theta);
    }
    if (!run.problem.interfaces.empty()) sum.add(fmt::format("closed_form_jump_sigma_r[r={:g}]", r), stress_jump(c, r).sigma_r);
  }
  return run;
}

void sample(std::vector<Row>& rows, const RunManifest& m, double H, const char* source,
            const std::function<StressState(double, double)>& f) {
  for (double r : m.line_r)
    for (double z : linspace(0.0, H, m.z_points)) rows.push_back({r, z, f(r, z), source});
}

struct KantorovichRun {
  TrialFunction trial;
  OdePiecewiseSolution sol;
};

KantorovichRun run_kantorovich(const PipeConfig& c, Summary& sum) {
  KantorovichRun run{sine_trial(c), {}};
  const KantorovichConstants k = compute_constants(c, run.trial, run.trial);
  run.sol = solve_bvp(k, c, run.trial);
  const std::pair<const char*, double> named[] = {
      {"a1", k.a1}, {"a2", k.a2}, {"a3", k.a3}, {"b1", k.b1}, {"b2", k.b2}, {"b3", k.b3},
      {"b4", k.b4}, {"b5", k.b5}, {"k1", k.k1}, {"k2", k.k2}, {"k3", k.k3}, {"e1", k.e1},
      {"e2", k.e2}, {"e3", k.e3}, {"g1", k.g1}, {"g2", k.g2}};
  for (const auto& [name, v] : named) sum.add(name, v);
  sum.add("interface_load", interface_load(c, run.trial));
  sum.add("lambda_re", run.sol.lambda.real());
  sum.add("lambda_im", run.sol.lambda.imag());
  sum.add("bvp_rank", static_cast<double>(run.sol.rank));
  sum.add("bvp_condition", run.sol.condition);
  sum.add("bvp_relative_residual", run.sol.residual);
  return run;
}

void add_newton(Summary& sum, const NewtonDiagnostics& d, const std::string& tag) {
  sum.add("newton_converged" + tag, d.converged ? "true" : "false");
  sum.add("newton_iterations" + tag, static_cast<double>(d.iterations));
  sum.add("newton_fallback_steps" + tag, static_cast<double>(d.fallback_steps));
  sum.add("newton_potential" + tag, d.potential);
  sum.add("newton_gradient_inf" + tag, d.gradient_norm);
  sum.add("newton_message" + tag, d.message);
}

}  // namespace

int run_stage(const PipeConfig& c, const RunManifest& m, std::ostream& log) {
  c.validate();
  m.validate(c);
  const fs::path dir(m.out_dir);
  fs::create_directories(dir);
  Summary sum(c, m);
  add_baseline(sum, c);
  int status = 0;

  switch (m.stage) {
    case Stage::baseline: {
      std::vector<Row> rows;
      const BaselineCoefficients k = baseline_coefficients(c);
      for (double r : linspace(c.r_i, c.r_o, 50)) rows.push_back({r, 0.0, baseline_stress(c, k, r), "baseline"});
      write_rows(dir / "baseline.csv", rows);
      break;
    }
    case Stage::jumps: {
      std::ofstream f(dir / "jumps.csv");
      f << "r,jump_sigma_r,jump_sigma_theta,jump_u_r,jump_sigma_r_compliance\n";
      for (double r : linspace(c.r_i, c.r_o, 50)) {
        const StressJump j = stress_jump(c, r);
        fmt::print(f, "{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", r, j.sigma_r, j.sigma_theta, displacement_jump(c, r),
                   stress_jump_via_compliance(c, r).sigma_r);
      }
      break;
    }
    case Stage::ritz: {
      const RitzRun run = run_ritz(c, m, sum, log);
      const double s = normalize_layup(c.layup).s;
      std::vector<Row> rows;
      sample(rows, m, c.H, "ritz", [&](double r, double z) { return run.sigma1.evaluate(r, z); });
      sample(rows, m, c.H, "firstorder", [&](double r, double z) { return first_order_field(c, run.sigma1, s, r, z); });
      write_rows(dir / "ritz.csv", rows);
      break;
    }
    case Stage::kantorovich: {
      const KantorovichRun run = run_kantorovich(c, sum);
      std::vector<Row> rows;
      sample(rows, m, c.H, "kantorovich",
             [&](double r, double z) { return reconstruct_stress(run.sol, run.trial, run.trial, r, z); });
      write_rows(dir / "kantorovich.csv", rows);
      break;
    }
    case Stage::compare: {
      const RitzRun ritz = run_ritz(c, m, sum, log);
      const KantorovichRun kant = run_kantorovich(c, sum);
      std::vector<Row> rows;
      sample(rows, m, c.H, "ritz", [&](double r, double z) { return ritz.sigma1.evaluate(r, z); });
      sample(rows, m, c.H, "kantorovich",
             [&](double r, double z) { return reconstruct_stress(kant.sol, kant.trial, kant.trial, r, z); });
      write_rows(dir / "compare.csv", rows);
      break;
    }
    case Stage::solve: {
      const RitzRun ritz = run_ritz(c, m, sum, log);
      const NormalizedLayup layup = normalize_layup(c.layup);
      NonlinearProblem pb{c, layup, ritz.basis, layup.s * ritz.sigma1.coefficients, {}, m.quad_order};
      const NonlinearResult res = solve_nonlinear(pb);
      add_newton(sum, res.diagnostics, "");
      fmt::print(log, "solve: {}\n", res.diagnostics.message);
      std::vector<Row> rows;
      sample(rows, m, c.H, "nonlinear", [&](double r, double z) { return res.solution.evaluate(r, z); });
      sample(rows, m, c.H, "firstorder",
             [&](double r, double z) { return first_order_field(c, ritz.sigma1, layup.s, r, z); });
      write_rows(dir / "nonlinear.csv", rows);
      if (!res.diagnostics.converged) status = 3;
      break;
    }
    case Stage::sweep: {
      const RitzRun ritz = run_ritz(c, m, sum, log);
      const NormalizedLayup base = normalize_layup(c.layup);
      std::ofstream table(dir / "sweep.csv");
      table << "s,r,iterations,converged,max_err_sigma_r,max_err_sigma_theta,max_err_sigma_z,max_err_sigma_rz\n";
      for (double s : m.s_values) {
        NonlinearProblem pb{c, base.with_s(s), ritz.basis, s * ritz.sigma1.coefficients, {}, m.quad_order};
        const NonlinearResult res = solve_nonlinear(pb);
        const std::string tag = fmt::format("[s={:g}]", s);
        add_newton(sum, res.diagnostics, tag);
        fmt::print(log, "sweep s={:g}: {}\n", s, res.diagnostics.message);
        if (!res.diagnostics.converged) status = 3;

        std::vector<Row> rows;
        for (double r : m.line_r) {
          const ErrorReport e =
              perturbation_error(c, s, ritz.sigma1, res.solution, r, linspace(0.0, c.H, m.z_points));
          fmt::print(table, "{:.9g},{:.9g},{},{},{:.9g},{:.9g},{:.9g},{:.9g}\n", s, r, res.diagnostics.iterations,
                     res.diagnostics.converged ? 1 : 0, e.max_abs[0], e.max_abs[1], e.max_abs[2], e.max_abs[3]);
          for (std::size_t i = 0; i < e.z.size(); ++i) {
            rows.push_back({r, e.z[i], e.nonlinear[i], "nonlinear"});
            rows.push_back({r, e.z[i], e.first_order[i], "firstorder"});
          }
        }
        write_rows(dir / fmt::format("sweep_s{:g}.csv", s), rows);
      }
      break;
    }
  }
  sum.write(dir);
  return status;
}

}  // namespace weldcreep::cli
