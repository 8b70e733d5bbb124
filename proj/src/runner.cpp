#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "modica/config.hpp"
#include "modica/pfunc.hpp"
#include "modica/registry.hpp"
#include "modica/report.hpp"
#include "modica/solver.hpp"

namespace modica {

namespace {

bool wants(const std::vector<std::string>& checks, const char* name) {
  return std::find(checks.begin(), checks.end(), name) != checks.end();
}

Grid make_grid(const RunConfig& cfg) {
  std::vector<int> n = cfg.grid_n;
  std::vector<double> L = cfg.grid_length;
  if (n.empty()) n.assign(cfg.dim, 64);
  if (L.empty()) L.assign(cfg.dim, 2.0 * 3.14159265358979323846);
  return cfg.topology == "periodic" ? Grid::periodic(n, L, cfg.grid_origin)
                                    : Grid::clamped(n, L, cfg.grid_origin);
}

void write_masked_csv(const std::string& path, const MaskedField& mf, const char* column) {
  const Grid& g = mf.grid;
  std::vector<std::string> header{"node"};
  const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < g.dim(); ++a) header.emplace_back(names[a]);
  header.emplace_back(column);
  CsvTable csv(std::move(header));
  for (int64_t i = 0; i < g.size(); ++i) {
    auto idx = g.unpack(i);
    std::vector<std::string> row{std::to_string(i)};
    for (int a = 0; a < g.dim(); ++a) row.push_back(format_g17(g.coord(a, idx[a])));
    row.push_back(mf.mask[i] ? format_g17(mf.values[i]) : "nan");
    csv.add_row(std::move(row));
  }
  csv.write(path);
}

}  // namespace

int run_config(const RunConfig& cfg, const RunOverrides& overrides) {
  validate_config(cfg);
  const uint64_t seed = overrides.seed.value_or(cfg.seed);
  const std::string out_dir = overrides.out_dir.value_or(cfg.out_dir);
  const double tol_scale = overrides.tol_scale;
  std::vector<std::string> checks = overrides.checks.value_or(cfg.checks);
  std::filesystem::create_directories(out_dir);
  auto out_path = [&](const std::string& name) { return out_dir + "/" + name; };

  PhiModel model = PhiModel::family(cfg.phi_terms);
  SOperator s = make_s_operator(cfg.s_name, cfg.s_params, cfg.s_string_params, cfg.dim);
  SourceModel src = make_source(cfg.f_name, cfg.f_params, cfg.g_name, cfg.g_params, cfg.dim,
                                s.eta_dim(cfg.dim), cfg.beta);

  std::vector<Record> records;
  bool all_pass = true;
  auto push = [&](Record r) {
    all_pass = all_pass && r.pass();
    if (!r.pass()) std::cerr << "check failed: " << r.check() << "\n";
    records.push_back(std::move(r));
  };

  // Acquire the working field up front when any check needs it.
  bool need_field = wants(checks, "solve") || wants(checks, "bound") || wants(checks, "lemma") ||
                    wants(checks, "remainder") || wants(checks, "rigidity");
  std::optional<ScalarField> field;
  GradientFn exact_grad;
  SolveOutcome solve_outcome;
  bool solved = false;
  if (need_field) {
    Grid grid = make_grid(cfg);
    if (!cfg.analytic.empty()) {
      auto [f, grad] = analytic_tanh_heteroclinic(grid);
      field = std::move(f);
      exact_grad = std::move(grad);
    } else {
      ScalarField seed_field = sample_field(make_initial(cfg.initial, cfg.initial_params), grid);
      SolveParams params;
      params.max_iters = cfg.max_iters;
      params.tol = cfg.tol;
      params.damping = cfg.damping;
      params.jacobian = cfg.jacobian == "picard" ? JacobianMode::picard : JacobianMode::numeric_colored;
      solve_outcome = solve_newton(model, src, s, seed_field, params);
      field = solve_outcome.field;
      solved = true;
    }
  }

  double M_used = cfg.M.value_or(2.0);
  if (!cfg.M && field) {
    VectorField grad = gradient_of(*field);
    double gmax = 0.0;
    for (int64_t i = 0; i < field->size(); ++i) gmax = std::max(gmax, norm(grad.vec_at(i)));
    M_used = std::max(1.0, gmax);
  }

  // Regime selection: the power envelope when its hypotheses hold.
  Regime regime = Regime::A;
  {
    const auto& t = model.terms();
    double b1 = t.front().b;
    bool a_ok = t.front().p > 1.0;
    for (const auto& term : t) a_ok = a_ok && cfg.mu * b1 <= term.b && term.b <= b1 / cfg.mu;
    if (cfg.regime == "B" || (cfg.regime == "auto" && !a_ok)) regime = Regime::B;
  }

  if (wants(checks, "ellipticity")) {
    EllipticityCertificate cert = regime == Regime::A
                                      ? constants_assumption_a(model, cfg.mu, M_used)
                                      : constants_assumption_b(model, cfg.mu, M_used);
    cert = verify_bounds(model, cert, cfg.dim, cfg.samples, seed);
    Record rec("ellipticity");
    rec.set("regime", cert.regime == Regime::A ? "A" : "B");
    rec.set("p", cert.p);
    rec.set("a", cert.a);
    rec.set("M", cert.M);
    rec.set("mu", cert.mu);
    rec.set("c1_phi", cert.c1_phi);
    rec.set("c2_phi", cert.c2_phi);
    rec.set("c1_form", cert.c1_form);
    rec.set("c2_form", cert.c2_form);
    rec.set("samples", cert.samples);
    rec.set("violations", cert.violation_count);
    rec.set("seed", cert.seed);
    if (!cert.notes.empty()) rec.set("notes", cert.notes);
    rec.set("lambda_floor", lambda_floor(model, M_used));
    rec.set_pass(cert.violation_count == 0);
    push(std::move(rec));

    CsvTable csv({"sample", "inequality", "lhs", "rhs"});
    for (const auto& w : cert.violations)
      csv.add_row({std::to_string(w.sample), w.inequality, format_g17(w.lhs), format_g17(w.rhs)});
    csv.write(out_path("ellipticity.csv"));
  }

  if (wants(checks, "solve")) {
    Record rec("solve");
    if (solved) {
      rec.set("converged", solve_outcome.converged);
      rec.set("residual_norm", solve_outcome.residual_norm);
      rec.set("iterations", static_cast<int64_t>(solve_outcome.iterations));
      rec.set_pass(solve_outcome.converged);
      CsvTable csv({"iteration", "residual_norm"});
      for (size_t i = 0; i < solve_outcome.history.size(); ++i)
        csv.add_row({std::to_string(i), format_g17(solve_outcome.history[i])});
      csv.write(out_path("solve.csv"));
      write_field(out_path("solution.bin"), *field);
    } else {
      rec.set("note", "analytic field, nothing to solve");
    }
    push(std::move(rec));
  }

  if (wants(checks, "bound")) {
    Gauge gauge = build_gauge(src, *field);
    DerivativeMode mode =
        exact_grad ? DerivativeMode::analytic : DerivativeMode::finite_difference;
    double h = field->grid().max_spacing();
    double tol = (exact_grad ? 1e-10 : 10.0 * h * h) * tol_scale;
    PReport rep = p_field(model, gauge, *field, mode, exact_grad, tol);
    Record rec("bound");
    rec.set("mode", exact_grad ? "analytic" : "finite_difference");
    rec.set("max_p", rep.max_p);
    rec.set("tol", rep.tol);
    rec.set("argmax", rep.argmax);
    rec.set("violations", rep.violation_count);
    rec.set("s_variant", s.name());
    rec.set_pass(rep.max_p <= rep.tol);
    push(std::move(rec));

    CsvTable csv({"node", "p"});
    for (int64_t i = 0; i < rep.p_values.size(); ++i)
      csv.add_row({std::to_string(i), format_g17(rep.p_values[i])});
    csv.write(out_path("bound.csv"));
  }

  if (wants(checks, "lemma")) {
    double h = field->grid().max_spacing();
    LemmaReport rep = lemma_residual(model, src, s, *field, cfg.delta.value_or(-1.0), exact_grad);
    double tol = 10.0 * h * tol_scale;
    Record rec("lemma");
    rec.set("min_residual", rep.min_residual);
    rec.set("tol", tol);
    rec.set("admissible_nodes", rep.admissible_count);
    rec.set("pde_residual_norm", rep.pde_residual_norm);
    rec.set("solution_warning", rep.solution_warning);
    rec.set("s_variant", s.name());
    rec.set_pass(rep.min_residual >= -tol);
    push(std::move(rec));
    write_masked_csv(out_path("lemma.csv"), rep.residual, "residual");
  }

  if (wants(checks, "remainder")) {
    BoundCheckReport rep =
        remainder_lower_bound_check(model, src, *field, cfg.delta.value_or(-1.0));
    Record rec("remainder");
    rec.set("min_slack", rep.min_slack);
    rec.set("checked_nodes", rep.checked);
    rec.set("g_eta_min", rep.g_eta_min);
    rec.set_pass(rep.pass);
    push(std::move(rec));
    MaskedField mf = remainder_field(model, src, s, *field, cfg.delta.value_or(-1.0));
    write_masked_csv(out_path("remainder.csv"), mf, "remainder");
  }

  if (wants(checks, "case")) {
    CaseVerdict verdict = classify_case(model, src, std::min<uint64_t>(cfg.samples, 10000), seed);
    Record rec("case");
    std::string names;
    for (auto c : verdict.matched) {
      if (!names.empty()) names += ",";
      names += case_condition_name(c);
    }
    rec.set("matched", names);
    rec.set("fg_min", verdict.fg_min);
    rec.set("fg_max", verdict.fg_max);
    rec.set_pass(!verdict.matched.empty());
    push(std::move(rec));
  }

  if (wants(checks, "rigidity")) {
    Gauge gauge = build_gauge(src, *field);
    RigidityInput input;
    input.r0 = cfg.rigidity_r0;
    input.p_hat = rigidity_p_hat(regime, model.terms().front().p);
    RigidityVerdict v = rigidity_check(model, src, gauge, *field, input, cfg.rigidity_tol);
    Record rec("rigidity");
    rec.set("applicable", v.applicable);
    rec.set("field_constant", v.field_constant);
    rec.set("reason", v.reason);
    rec.set("touch_gap", v.touch_gap);
    rec.set("p_hat", input.p_hat);
    rec.set("gronwall_constant", v.gronwall_constant);
    if (v.witness >= 0) rec.set("witness", v.witness);
    rec.set_pass(v.pass);
    push(std::move(rec));
  }

  if (wants(checks, "counterexample")) {
    CounterexampleReport rep = counterexample_suite(cfg.ce_p, cfg.ce_beta, cfg.ce_n, 1000, seed);
    Record rec("counterexample");
    rec.set("max_rel_residual", rep.max_rel_residual);
    rec.set("value_at_unit", rep.value_at_unit);
    rec.set("slope", rep.slope);
    rec.set("slope_expected", rep.slope_expected);
    rec.set("f_origin", rep.f_origin);
    rec.set_pass(rep.pass());
    push(std::move(rec));
  }

  write_jsonl(out_path("summary.jsonl"), records);
  return all_pass ? 0 : 1;
}

}  // namespace modica
