// polarlam command-line interface: laminate analysis, constraint checks,
// discrete ply-count optimisation, blended stack recovery, pipeline runs
// and reproduction checks of the bundled reference datasets.
//
// Exit codes: 0 all checks pass, 1 verification failure, 2 usage/parse error.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarlam/dataset.hpp"
#include "polarlam/pipeline.hpp"
#include "polarlam/verify.hpp"

using nlohmann::json;
using namespace polarlam;

namespace {

enum class Format { text, json_fmt, csv };

Format parse_format(const std::string& f) {
  if (f == "json") return Format::json_fmt;
  if (f == "csv") return Format::csv;
  return Format::text;
}

PlyMaterial material_from(const std::string& file) {
  if (file.empty() || file == "builtin" || file == "t300_5208") return t300_5208();
  return io::load_material(file);
}

void print_quad(const char* name, const QuadTensor& q, const PolarQuad& p) {
  std::printf("%-3s [MPa]  %12.3f %12.3f %12.3f\n", name, q.q11, q.q12, q.q16);
  std::printf("           %12.3f %12.3f %12.3f\n", q.q12, q.q22, q.q26);
  std::printf("           %12.3f %12.3f %12.3f\n", q.q16, q.q26, q.q66);
  std::printf("    polar  T0=%.3f T1=%.3f R0=%.3f R1=%.3f Phi0=%.3f Phi1=%.3f%s%s\n",
              p.T0, p.T1, p.R0, p.R1, p.Phi0, p.Phi1,
              p.r0_degenerate ? " [R0~0]" : "", p.r1_degenerate ? " [R1~0]" : "");
}

json quad_json(const QuadTensor& q, const PolarQuad& p) {
  return json{{"matrix", {q.q11, q.q12, q.q16, q.q22, q.q26, q.q66}},
              {"polar",
               {{"T0", p.T0},
                {"T1", p.T1},
                {"R0", p.R0},
                {"R1", p.R1},
                {"Phi0", p.Phi0},
                {"Phi1", p.Phi1},
                {"R0_degenerate", p.r0_degenerate},
                {"R1_degenerate", p.r1_degenerate}}}};
}

int cmd_analyze(const std::string& material_file, const std::string& stack_text,
                double t_rho0K, double t_rho1, double t_phi1, bool with_target,
                int nref, bool unchecked, Format fmt) {
  const PlyMaterial m = material_from(material_file);
  const StackingSequence s = StackingSequence::parse(stack_text);
  if (s.empty()) {
    std::cerr << "analyze: empty stack\n";
    return 2;
  }
  const LaminateHomog L = laminate_homogenized(s, m);

  PanelExtractOptions opt;
  opt.unchecked = unchecked;
  if (nref > 0) opt.N_ref = nref;
  std::optional<PanelVars> vars;
  std::string ortho_note;
  try {
    vars = panel_from_laminate(L, m, opt);
  } catch (const OrthotropyError& e) {
    ortho_note = e.what();
  }

  std::optional<ResidualBreakdown> rb;
  if (with_target)
    rb = residuals(L, m, TargetPolar::from_signed(t_rho0K, t_rho1, t_phi1, L.N));

  if (fmt == Format::json_fmt) {
    json j{{"stack", s.to_string()},
           {"N", L.N},
           {"h_mm", L.h},
           {"A", quad_json(L.A, L.polar_A)},
           {"B", quad_json(L.B, L.polar_B)},
           {"D", quad_json(L.D, L.polar_D)},
           {"C", quad_json(L.C, L.polar_C)},
           {"H",
            {{"matrix", {L.H.m11, L.H.m12, L.H.m22}},
             {"polar", {{"T", L.polar_H.T}, {"R", L.polar_H.R}, {"Phi", L.polar_H.Phi}}}}}};
    if (vars)
      j["panel"] = {{"n0", vars->n0},
                    {"rho0K", vars->rho0K},
                    {"rho1", vars->rho1},
                    {"phi1", vars->phi1},
                    {"phi1_degenerate", vars->phi1_degenerate}};
    else
      j["orthotropy_error"] = ortho_note;
    if (rb)
      j["residual"] = {{"terms", rb->r}, {"total", rb->total},
                       {"norm_MPa", rb->norm_scale}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  std::printf("stack    %s\n", s.to_string().c_str());
  std::printf("N = %d plies, h = %.4f mm, material %s\n\n", L.N, L.h, m.name.c_str());
  print_quad("A*", L.A, L.polar_A);
  print_quad("B*", L.B, L.polar_B);
  print_quad("D*", L.D, L.polar_D);
  print_quad("C*", L.C, L.polar_C);
  std::printf("H*  [MPa]  %12.3f %12.3f\n           %12.3f %12.3f\n", L.H.m11,
              L.H.m12, L.H.m12, L.H.m22);
  std::printf("    polar  T=%.3f R=%.3f Phi=%.3f\n\n", L.polar_H.T, L.polar_H.R,
              L.polar_H.Phi);
  if (vars) {
    std::printf("panel vars  n0=%.4f rho0K=%.4f rho1=%.4f phi1=%.4f%s\n", vars->n0,
                vars->rho0K, vars->rho1, vars->phi1,
                vars->phi1_degenerate ? " [phi1 degenerate]" : "");
  } else {
    std::printf("panel vars  unavailable: %s\n", ortho_note.c_str());
  }
  if (rb) {
    std::printf("residual    R1..R6 = %.3e %.3e %.3e %.3e %.3e %.3e\n", rb->r[0],
                rb->r[1], rb->r[2], rb->r[3], rb->r[4], rb->r[5]);
    std::printf("            total = %.6e\n", rb->total);
  }
  return 0;
}

int cmd_polar(const std::string& material_file, Format fmt) {
  const PlyMaterial m = material_from(material_file);
  const QuadTensor Q = ply_reduced_stiffness(m);
  const PolarQuad p = polar_from_quad(Q);
  if (fmt == Format::json_fmt) {
    std::cout << json{{"material", m.name},
                      {"Q_from_engineering", quad_json(Q, p)},
                      {"polar_Q_dataset",
                       {{"T0", m.polar_Q.T0},
                        {"T1", m.polar_Q.T1},
                        {"R0", m.polar_Q.R0},
                        {"R1", m.polar_Q.R1}}}}
                     .dump(2)
              << '\n';
    return 0;
  }
  std::printf("material %s\n", m.name.c_str());
  print_quad("Q", Q, p);
  std::printf("dataset    T0=%.3f T1=%.3f R0=%.3f R1=%.3f\n", m.polar_Q.T0,
              m.polar_Q.T1, m.polar_Q.R0, m.polar_Q.R1);
  return 0;
}

int cmd_feasibility(const std::string& panels_file, double tol, Format fmt) {
  const io::PanelSet set = io::load_panels(panels_file);
  double worst = -std::numeric_limits<double>::infinity();
  json rows = json::array();
  bool any_violated = false;
  for (const io::PanelRecord& p : set.panels) {
    const double g = g_feas(PanelVars{p.n0, p.rho0K, p.rho1, p.phi1, false}).g;
    worst = std::max(worst, g);
    any_violated = any_violated || g > tol;
    if (fmt == Format::csv)
      std::printf("%s,%.6f\n", p.id.c_str(), g);
    else if (fmt == Format::text)
      std::printf("panel %-6s g_feas = %+.6f%s\n", p.id.c_str(), g,
                  g > tol ? "  VIOLATED" : "");
    else
      rows.push_back(json{{"id", p.id}, {"g_feas", g}});
  }
  if (fmt == Format::json_fmt)
    std::cout << json{{"panels", rows}, {"max", worst}, {"pass", !any_violated}}.dump(2)
              << '\n';
  else
    std::printf("max over %zu panels: %+.6f -> %s\n", set.panels.size(), worst,
                any_violated ? "FAIL" : "PASS");
  return any_violated ? 1 : 0;
}

int cmd_blend_check(const std::string& panels_file, const std::string& adjacency_file,
                    const std::string& parent_text, const std::string& child_text,
                    const std::string& group_file, const std::string& mode_name,
                    double tol, Format fmt) {
  const BlendMode mode =
      mode_name == "general" ? BlendMode::general : BlendMode::scheme;

  if (!parent_text.empty() || !child_text.empty()) {
    if (parent_text.empty() || child_text.empty()) {
      std::cerr << "blend-check: --parent and --child must be given together\n";
      return 2;
    }
    const StackingSequence parent = StackingSequence::parse(parent_text);
    const StackingSequence child = StackingSequence::parse(child_text);
    const BlendWitness w = is_blended(parent, child, mode);
    if (fmt == Format::json_fmt)
      std::cout << json{{"blended", w.blended}, {"ply_map", w.ply_map}}.dump(2) << '\n';
    else
      std::printf("%s\n", w.blended ? "blended" : "not blended");
    return w.blended ? 0 : 1;
  }

  if (!group_file.empty()) {
    const auto rows = io::load_stacks(group_file);
    // pair every thinner stack with every thicker one and test the decision
    int pairs = 0, failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (i == j || rows[i].second.size() < rows[j].second.size()) continue;
        ++pairs;
        if (!is_blended(rows[i].second, rows[j].second, mode)) ++failed;
      }
    std::printf("%d/%d ordered pairs pass the %s-mode blending decision\n",
                pairs - failed, pairs, mode_name.c_str());
    return failed == 0 ? 0 : 1;
  }

  if (panels_file.empty() || adjacency_file.empty()) {
    std::cerr << "blend-check: need --panels and --adjacency, or --parent/--child, "
                 "or --stacks\n";
    return 2;
  }
  const io::PanelSet set = io::load_panels(panels_file);
  const std::vector<Edge> edges = io::load_adjacency(adjacency_file, set);
  const std::vector<PanelVars> vars = set.vars();
  json rows = json::array();
  double worst = -std::numeric_limits<double>::infinity();
  for (const Edge& e : edges) {
    const BlendingPair b = g_blend_pair(vars[e.p], vars[e.q], set.N_ref);
    worst = std::max({worst, b.g0, b.g1});
    if (fmt == Format::text)
      std::printf("edge %s-%s  g0 = %+.6f  g1 = %+.6f\n", set.panels[e.p].id.c_str(),
                  set.panels[e.q].id.c_str(), b.g0, b.g1);
    else if (fmt == Format::csv)
      std::printf("%s,%s,%.6f,%.6f\n", set.panels[e.p].id.c_str(),
                  set.panels[e.q].id.c_str(), b.g0, b.g1);
    else
      rows.push_back(json{{"p", set.panels[e.p].id},
                          {"q", set.panels[e.q].id},
                          {"g0", b.g0},
                          {"g1", b.g1}});
  }
  const bool pass = edges.empty() || worst <= tol;
  if (fmt == Format::json_fmt)
    std::cout << json{{"edges", rows}, {"max", worst}, {"pass", pass}}.dump(2) << '\n';
  else if (edges.empty())
    std::printf("no edges: no constraint\n");
  else
    std::printf("max over %zu edges: %+.6f -> %s\n", edges.size(), worst,
                pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int cmd_discretize(const std::string& panels_file, const std::string& adjacency_file,
                   int dnmin, std::uint64_t seed, long budget, double tol,
                   const std::string& out_file, Format fmt) {
  const io::PanelSet set = io::load_panels(panels_file);
  const std::vector<Edge> edges = io::load_adjacency(adjacency_file, set);
  DiscreteConfig cfg;
  cfg.dN_min = dnmin;
  cfg.N_ref = set.N_ref;
  cfg.seed = seed;
  cfg.budget = std::max<long>(1, budget);
  cfg.constraint_tol = tol;
  const DiscreteResult res = solve_discrete(set.vars(), edges, cfg);

  io::PanelSet out = set;
  for (std::size_t j = 0; j < out.panels.size(); ++j) {
    out.panels[j].n0 = res.panels[j].n0d;
    out.panels[j].N = res.panels[j].N;
    out.panels[j].rho0K = res.panels[j].rho0K;
    out.panels[j].rho1 = res.panels[j].rho1;
  }
  if (!out_file.empty()) io::save_panels(out_file, out);

  if (fmt == Format::json_fmt) {
    std::cout << json{{"objective", res.objective},
                      {"feasible", res.feasible},
                      {"evaluations", res.evaluations},
                      {"exhaustive", res.exhaustive},
                      {"max_feas", res.constraints.max_feas},
                      {"max_blend", res.constraints.max_blend},
                      {"max_gap", res.constraints.max_gap}}
                     .dump(2)
              << '\n';
  } else {
    for (std::size_t j = 0; j < out.panels.size(); ++j)
      std::printf("panel %-6s N=%4d rho0K=%+.4f rho1=%.4f\n", out.panels[j].id.c_str(),
                  res.panels[j].N, res.panels[j].rho0K, res.panels[j].rho1);
    std::printf("objective %.6e  evaluations %ld%s\n", res.objective, res.evaluations,
                res.exhaustive ? " (exhaustive)" : "");
    std::printf("violations: feas %+.2e, blend %+.2e, drop %+.2e -> %s\n",
                res.constraints.max_feas, res.constraints.max_blend,
                res.constraints.max_gap, res.feasible ? "feasible" : "INFEASIBLE");
  }
  return res.feasible ? 0 : 1;
}

int cmd_recover(const std::string& material_file, const std::string& targets_file,
                const std::string& scheme_file, const std::string& bundled,
                std::uint64_t seed, long budget, int step, int population, int kernel,
                const std::string& out_file, Format fmt) {
  const PlyMaterial m = material_from(material_file);
  Subproblem sub;
  std::vector<std::string> ids;

  if (!bundled.empty()) {
    const bool skin = std::find_if(std::begin(data::kSkinGroups),
                                   std::end(data::kSkinGroups), [&](const char* s) {
                                     return bundled == s;
                                   }) != std::end(data::kSkinGroups);
    if (skin) {
      const data::StackGroup g = data::stack_group(bundled);
      const io::PanelSet panels = data::boxwing_panels();
      sub.scheme = g.scheme();
      for (const SchemePanel& sp : sub.scheme.panels) {
        sub.targets.push_back(data::target_for(panels, sp.id));
        ids.push_back(sp.id);
      }
    } else {
      const data::StackGroup g = data::standalone_group();
      const data::StackRow* row = nullptr;
      for (const data::StackRow& r : g.rows)
        if (r.id == bundled) row = &r;
      if (!row) {
        std::cerr << "recover: unknown bundled sub-problem '" << bundled << "'\n";
        return 2;
      }
      sub.scheme.covering = 0;
      sub.scheme.panels = {SchemePanel{row->id, row->target->N, -1}};
      sub.targets = {*row->target};
      ids = {row->id};
    }
  } else {
    if (targets_file.empty()) {
      std::cerr << "recover: need --targets (with optional --scheme) or --bundled\n";
      return 2;
    }
    const io::PanelSet set = io::load_panels(targets_file);
    if (!scheme_file.empty()) {
      sub.scheme = io::load_scheme(scheme_file).scheme;
    } else {
      sub.scheme.covering = 0;
      for (const io::PanelRecord& p : set.panels) {
        const int N =
            p.N ? *p.N : static_cast<int>(std::lround(p.n0 * set.N_ref));
        sub.scheme.panels.push_back(SchemePanel{p.id, N, -1});
      }
      if (sub.scheme.panels.size() > 1) {
        std::cerr << "recover: multiple targets without --scheme; recovery would "
                     "not be blended\n";
        return 2;
      }
    }
    for (const SchemePanel& sp : sub.scheme.panels) {
      const int i = set.index_of(sp.id);
      if (i < 0) {
        std::cerr << "recover: scheme panel '" << sp.id << "' missing from targets\n";
        return 2;
      }
      const io::PanelRecord& p = set.panels[i];
      sub.targets.push_back(TargetPolar::from_signed(p.rho0K, p.rho1, p.phi1, sp.N));
      ids.push_back(sp.id);
    }
  }

  SearchConfig cfg;
  cfg.grid_step_deg = step;
  cfg.population = population;
  cfg.kernel = kernel;
  cfg.budget = std::max<long>(1, budget);
  cfg.seed = seed;
  const RecoverResult res = recover(sub, m, cfg);

  std::vector<io::StackOutRow> rows;
  for (std::size_t i = 0; i < res.stacks.size(); ++i)
    rows.push_back(io::StackOutRow{ids[i], res.stacks[i], res.breakdown[i]});
  if (!out_file.empty()) io::save_stacks(out_file, rows, res.total);

  if (fmt == Format::json_fmt) {
    json panels = json::array();
    for (const io::StackOutRow& r : rows)
      panels.push_back(json{{"id", r.id},
                            {"stack", r.stack.to_string()},
                            {"residual", r.residual.total}});
    std::cout << json{{"panels", panels},
                      {"total", res.total},
                      {"evaluations", res.evaluations}}
                     .dump(2)
              << '\n';
  } else {
    for (const io::StackOutRow& r : rows)
      std::printf("%-14s %-10.3e %s\n", r.id.c_str(), r.residual.total,
                  r.stack.to_string().c_str());
    std::printf("total residual %.6e after %ld evaluations\n", res.total,
                res.evaluations);
  }
  return 0;
}

int cmd_pipeline(const std::string& config_file, std::uint64_t seed, long budget,
                 Format fmt) {
  app::PipelineConfig cfg = app::load_pipeline_config(config_file);
  if (seed != static_cast<std::uint64_t>(-1)) cfg.seed = seed;
  if (budget >= 0) cfg.budget = budget;
  const app::PipelineResult res = app::run_pipeline(cfg);
  if (fmt == Format::json_fmt) {
    std::ifstream report(cfg.output_dir / "report.json");
    std::cout << report.rdbuf();
  } else {
    std::printf("discrete: objective %.6e, %s\n", res.discrete.objective,
                res.discrete.feasible ? "feasible" : "INFEASIBLE");
    for (const app::SubproblemResult& s : res.subproblems)
      std::printf("%s: %zu panels, residual %.6e\n", s.name.c_str(),
                  s.panel_ids.size(), s.recovered.total);
    std::printf("recheck: feas %+.4f blend %+.4f drop %+.4f meso %s", res.recheck_feas,
                res.recheck_blend, res.recheck_gap, res.meso_ok ? "ok" : "FAIL");
    if (res.recheck_disp) std::printf(" disp %+.4f", *res.recheck_disp);
    if (res.recheck_buck) std::printf(" buck %+.4f", *res.recheck_buck);
    if (res.recheck_tsai_hill) std::printf(" strength %+.4f", *res.recheck_tsai_hill);
    std::printf("\n-> %s\n", res.constraints_ok ? "PASS" : "FAIL");
  }
  return res.constraints_ok ? 0 : 1;
}

int cmd_verify(const std::string& selector, const std::string& norm, Format fmt) {
  const TensorNormKind kind =
      norm == "polar" ? TensorNormKind::polar_moduli : TensorNormKind::frobenius;
  verify::Report rep;
  if (kind != TensorNormKind::frobenius) {
    // sensitivity run: only the residual-based selectors react to the norm
    rep.add(verify::check_standalone_residuals(kind));
    rep.add(verify::check_blended_residuals(kind).checks);
  } else {
    rep = verify::run(selector);
  }
  if (fmt == Format::json_fmt) {
    json rows = json::array();
    for (const verify::Check& c : rep.checks)
      rows.push_back(json{{"name", c.name},
                          {"ref", c.ref},
                          {"computed", c.computed},
                          {"expected", c.expected},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"note", c.note}});
    std::cout << json{{"checks", rows}, {"all_pass", rep.all_pass}}.dump(2) << '\n';
  } else {
    for (const verify::Check& c : rep.checks)
      std::printf("[%s] %-32s computed %-14.6g expected %-14.6g (%s, ref %s)\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.computed, c.expected,
                  c.note.c_str(), c.ref.c_str());
    std::printf("%s\n", rep.all_pass ? "all checks passed" : "CHECKS FAILED");
  }
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar-formalism design toolkit for blended composite laminates"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  app.add_option("--format", format, "output format: text, json, csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  std::string material = "builtin";
  std::string stack, panels, adjacency, targets, scheme, bundled, config, out;
  std::string parent, child, group, mode = "scheme", selector = "all";
  double t_rho0K = 0, t_rho1 = 0, t_phi1 = 0, tolerance = 1e-3;
  bool with_target = false, unchecked = false;
  int nref = 0, dnmin = 4, step = 1, population = 100, kernel = 20;
  std::uint64_t seed = 0;
  long budget = -1;

  CLI::App* analyze = app.add_subcommand("analyze", "homogenize a stack and report");
  analyze->add_option("--material", material, "material file or 'builtin'");
  analyze->add_option("--stack", stack, "slash-separated ply angles")->required();
  analyze->add_option("--target-rho0k", t_rho0K, "target rho0K");
  analyze->add_option("--target-rho1", t_rho1, "target rho1");
  analyze->add_option("--target-phi1", t_phi1, "target phi1");
  analyze->add_flag("--target", with_target, "evaluate residual against the target");
  analyze->add_option("--nref", nref, "reference ply count override");
  analyze->add_flag("--unchecked", unchecked, "skip the orthotropy test");

  CLI::App* polar = app.add_subcommand("polar", "polar parameters of a material");
  polar->add_option("--material", material, "material file or 'builtin'");

  CLI::App* feas = app.add_subcommand("feasibility", "per-panel feasibility check");
  feas->add_option("--panels", panels, "panel-set file")->required();
  feas->add_option("--tolerance", tolerance, "constraint tolerance");

  CLI::App* blend = app.add_subcommand("blend-check", "blending checks");
  blend->add_option("--panels", panels, "panel-set file (macro check)");
  blend->add_option("--adjacency", adjacency, "adjacency file (macro check)");
  blend->add_option("--parent", parent, "thicker stack (meso check)");
  blend->add_option("--child", child, "thinner stack (meso check)");
  blend->add_option("--stacks", group, "stack group file (meso check, all pairs)");
  blend->add_option("--mode", mode, "meso decision mode: scheme or general")
      ->check(CLI::IsMember({"scheme", "general"}));
  blend->add_option("--tolerance", tolerance, "constraint tolerance");

  CLI::App* disc = app.add_subcommand("discretize", "integer ply-count optimisation");
  disc->add_option("--input", panels, "continuous panel-set file")->required();
  disc->add_option("--adjacency", adjacency, "adjacency file")->required();
  disc->add_option("--dnmin", dnmin, "minimum admissible ply drop");
  disc->add_option("--seed", seed, "random seed");
  disc->add_option("--budget", budget, "evaluation budget");
  disc->add_option("--tolerance", tolerance, "constraint tolerance");
  disc->add_option("--out", out, "output panel file");

  CLI::App* rec = app.add_subcommand("recover", "blended stack recovery");
  rec->add_option("--material", material, "material file or 'builtin'");
  rec->add_option("--targets", targets, "target panel file");
  rec->add_option("--scheme", scheme, "blending scheme file");
  rec->add_option("--bundled", bundled,
                  "bundled sub-problem (fw_dorsal, fw_ventral, rw_dorsal, "
                  "rw_ventral, 25, 26, 51, 52, stringers, skin_vw, spar_web_vw)");
  rec->add_option("--seed", seed, "random seed");
  rec->add_option("--budget", budget, "evaluation budget");
  rec->add_option("--step", step, "orientation grid step [deg]");
  rec->add_option("--population", population, "population size");
  rec->add_option("--kernel", kernel, "elite kernel size");
  rec->add_option("--out", out, "output stacks file");

  CLI::App* pipe = app.add_subcommand("pipeline", "discretize + recover + re-check");
  pipe->add_option("--config", config, "pipeline config file")->required();
  pipe->add_option("--seed", seed, "random seed override");
  pipe->add_option("--budget", budget, "recovery budget override");

  CLI::App* ver = app.add_subcommand("verify-paper", "bundled dataset reproduction");
  ver->add_option("--dataset", selector,
                  "all, integrity, material, feasibility, standalone, blended, meso");
  std::string norm = "frobenius";
  ver->add_option("--norm", norm, "residual tensor norm: frobenius or polar")
      ->check(CLI::IsMember({"frobenius", "polar"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const Format fmt = parse_format(format);
  try {
    if (analyze->parsed())
      return cmd_analyze(material, stack, t_rho0K, t_rho1, t_phi1, with_target, nref,
                         unchecked, fmt);
    if (polar->parsed()) return cmd_polar(material, fmt);
    if (feas->parsed()) return cmd_feasibility(panels, tolerance, fmt);
    if (blend->parsed())
      return cmd_blend_check(panels, adjacency, parent, child, group, mode, tolerance,
                             fmt);
    if (disc->parsed())
      return cmd_discretize(panels, adjacency, dnmin, seed,
                            budget < 0 ? 20000 : budget, tolerance, out, fmt);
    if (rec->parsed())
      return cmd_recover(material, targets, scheme, bundled, seed,
                         budget < 0 ? 1000000 : budget, step, population, kernel, out,
                         fmt);
    if (pipe->parsed())
      return cmd_pipeline(config, pipe->count("--seed") ? seed
                                                        : static_cast<std::uint64_t>(-1),
                          budget, fmt);
    if (ver->parsed()) return cmd_verify(selector, norm, fmt);
  } catch (const io::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const data::DatasetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
