#include "polarlam/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

namespace polarlam::app {

using nlohmann::json;

PipelineConfig load_pipeline_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw io::FormatError("cannot open " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw io::FormatError(file.string() + ": " + e.what());
  }
  const std::filesystem::path base = file.parent_path();
  auto path_of = [&](const char* key) -> std::filesystem::path {
    if (!j.contains(key) || j.at(key).is_null()) return {};
    std::filesystem::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  PipelineConfig cfg;
  cfg.material_file = path_of("material");
  cfg.panels_file = path_of("panels");
  cfg.adjacency_file = path_of("adjacency");
  cfg.scheme_file = path_of("scheme");
  cfg.response_file = path_of("response");
  if (j.contains("output")) cfg.output_dir = path_of("output");
  cfg.seed = j.value("seed", 0ULL);
  cfg.budget = j.value("budget", cfg.budget);
  cfg.discrete_budget = j.value("discrete_budget", cfg.discrete_budget);
  cfg.dN_min = j.value("dnmin", cfg.dN_min);
  cfg.grid_step_deg = j.value("grid_step", cfg.grid_step_deg);
  cfg.covering = j.value("covering", cfg.covering);
  cfg.population = j.value("population", cfg.population);
  cfg.kernel = j.value("kernel", cfg.kernel);
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  if (cfg.material_file.empty() || cfg.panels_file.empty() ||
      cfg.adjacency_file.empty())
    throw io::FormatError(file.string() +
                          ": material, panels and adjacency are required");
  return cfg;
}

std::vector<std::pair<BlendingScheme, std::vector<int>>> derive_schemes(
    const io::PanelSet& panels, std::span<const int> N, std::span<const Edge> edges,
    int covering) {
  const int P = static_cast<int>(panels.panels.size());
  std::vector<std::vector<int>> adj(P);
  for (const Edge& e : edges) {
    adj[e.p].push_back(e.q);
    adj[e.q].push_back(e.p);
  }

  // connected components
  std::vector<int> comp(P, -1);
  int ncomp = 0;
  for (int s = 0; s < P; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> todo{s};
    comp[s] = ncomp;
    while (!todo.empty()) {
      const int v = todo.back();
      todo.pop_back();
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = ncomp;
          todo.push_back(w);
        }
    }
    ++ncomp;
  }

  std::vector<std::pair<BlendingScheme, std::vector<int>>> out(ncomp);
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int>& members = out[c].second;
    for (int p = 0; p < P; ++p)
      if (comp[p] == c) members.push_back(p);
    // thinnest first; every panel extends the thickest of its already
    // placed (hence not thicker) neighbours
    std::stable_sort(members.begin(), members.end(),
                     [&](int a, int b) { return N[a] < N[b]; });
    BlendingScheme& s = out[c].first;
    s.covering = covering;
    std::map<int, int> pos;  // panel index -> scheme position
    for (std::size_t i = 0; i < members.size(); ++i) {
      const int p = members[i];
      SchemePanel sp{panels.panels[p].id, N[p], -1};
      int best = -1;
      for (int q : adj[p]) {
        if (!pos.count(q) || q == p) continue;
        if (best < 0 || N[q] > N[best]) best = q;
      }
      if (best >= 0) sp.base = pos[best];
      pos[p] = static_cast<int>(i);
      s.panels.push_back(std::move(sp));
    }
    s.validate();
  }
  return out;
}

namespace {

json check_line(const char* name, double value, double tol, bool ok) {
  return json{{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", ok}};
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  PipelineResult res;

  PlyMaterial mat;
  io::PanelSet panels;
  std::vector<Edge> edges;
  try {
    mat = io::load_material(cfg.material_file);
    panels = io::load_panels(cfg.panels_file);
    edges = io::load_adjacency(cfg.adjacency_file, panels);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("pipeline/load: ") + e.what());
  }
  const int P = static_cast<int>(panels.panels.size());
  fs::create_directories(cfg.output_dir);

  // ---- stage 1: discrete ply counts ----
  try {
    DiscreteConfig dc;
    dc.dN_min = cfg.dN_min;
    dc.N_ref = panels.N_ref;
    dc.budget = std::max<long>(1, cfg.discrete_budget);
    dc.seed = cfg.seed;
    dc.constraint_tol = cfg.tolerance;
    res.discrete = solve_discrete(panels.vars(), edges, dc);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("pipeline/discretize: ") + e.what());
  }

  io::PanelSet discrete_set = panels;
  for (int j = 0; j < P; ++j) {
    discrete_set.panels[j].n0 = res.discrete.panels[j].n0d;
    discrete_set.panels[j].N = res.discrete.panels[j].N;
    discrete_set.panels[j].rho0K = res.discrete.panels[j].rho0K;
    discrete_set.panels[j].rho1 = res.discrete.panels[j].rho1;
  }
  io::save_panels(cfg.output_dir / "discrete_panels.json", discrete_set);

  // ---- stage 2: blended recovery per sub-problem ----
  std::vector<int> Nd(P);
  for (int j = 0; j < P; ++j) Nd[j] = res.discrete.panels[j].N;

  std::vector<std::pair<BlendingScheme, std::vector<int>>> schemes;
  try {
    if (!cfg.scheme_file.empty()) {
      const io::SchemeFile sf = io::load_scheme(cfg.scheme_file);
      std::vector<int> members;
      for (const SchemePanel& sp : sf.scheme.panels) {
        const int idx = panels.index_of(sp.id);
        if (idx < 0)
          throw io::FormatError("scheme panel '" + sp.id + "' not in the panel set");
        members.push_back(idx);
      }
      schemes.emplace_back(sf.scheme, std::move(members));
    } else {
      schemes = derive_schemes(panels, Nd, edges, cfg.covering);
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("pipeline/scheme: ") + e.what());
  }

  std::map<std::string, const StackingSequence*> stack_of;
  std::map<std::string, int> panel_index;
  for (int j = 0; j < P; ++j) panel_index[panels.panels[j].id] = j;

  res.meso_ok = true;
  try {
    int sub_id = 0;
    for (auto& [scheme, members] : schemes) {
      Subproblem sub;
      sub.scheme = scheme;
      for (const SchemePanel& sp : scheme.panels) {
        const int j = panel_index.at(sp.id);
        sub.targets.push_back(TargetPolar::from_signed(
            res.discrete.panels[j].rho0K, res.discrete.panels[j].rho1,
            res.discrete.panels[j].phi1, res.discrete.panels[j].N));
      }
      SearchConfig sc;
      sc.grid_step_deg = cfg.grid_step_deg;
      sc.population = cfg.population;
      sc.kernel = cfg.kernel;
      sc.budget = std::max<long>(1, cfg.budget);
      sc.seed = cfg.seed + static_cast<std::uint64_t>(sub_id);

      SubproblemResult sr;
      sr.name = "sub" + std::to_string(sub_id++);
      sr.recovered = recover(sub, mat, sc);
      for (std::size_t i = 0; i < scheme.panels.size(); ++i)
        sr.panel_ids.push_back(scheme.panels[i].id);

      std::vector<io::StackOutRow> rows;
      for (std::size_t i = 0; i < scheme.panels.size(); ++i) {
        rows.push_back(io::StackOutRow{sr.panel_ids[i], sr.recovered.stacks[i],
                                       sr.recovered.breakdown[i]});
        // meso-scale decision on every scheme pair
        if (scheme.panels[i].base >= 0) {
          const auto& parent = sr.recovered.stacks[i];
          const auto& child = sr.recovered.stacks[scheme.panels[i].base];
          if (!is_blended(parent, child, BlendMode::scheme)) res.meso_ok = false;
        }
      }
      io::save_stacks(cfg.output_dir / ("stacks_" + sr.name + ".json"), rows,
                      sr.recovered.total);
      res.subproblems.push_back(std::move(sr));
    }
    for (const SubproblemResult& sr : res.subproblems)
      for (std::size_t i = 0; i < sr.panel_ids.size(); ++i)
        stack_of[sr.panel_ids[i]] = &sr.recovered.stacks[i];
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("pipeline/recover: ") + e.what());
  }

  // ---- stage 3: constraint re-check on the recovered design ----
  try {
    std::vector<PanelVars> recovered_vars(P);
    for (int j = 0; j < P; ++j) {
      const auto it = stack_of.find(panels.panels[j].id);
      if (it == stack_of.end())
        throw std::runtime_error("panel '" + panels.panels[j].id +
                                 "' missing from every sub-problem");
      const LaminateHomog L = laminate_homogenized(*it->second, mat);
      PanelExtractOptions opt;
      opt.unchecked = true;  // recovered stacks are only near-orthotropic
      opt.N_ref = panels.N_ref;
      recovered_vars[j] = panel_from_laminate(L, mat, opt);
    }
    res.recheck_feas = -std::numeric_limits<double>::infinity();
    for (const PanelVars& v : recovered_vars)
      res.recheck_feas = std::max(res.recheck_feas, g_feas(v).g);
    res.recheck_blend = blend_aggregate(recovered_vars, edges, panels.N_ref);
    res.recheck_gap = -std::numeric_limits<double>::infinity();
    for (const Edge& e : edges)
      res.recheck_gap = std::max(
          res.recheck_gap, delta_n_gap(Nd[e.p], Nd[e.q], cfg.dN_min, panels.N_ref));

    if (!cfg.response_file.empty()) {
      const io::ResponseData rd = io::load_response(cfg.response_file);
      if (rd.semispan_mm > 0)
        res.recheck_disp = g_disp(rd.tip_u_mm, rd.semispan_mm);
      if (!rd.lambdas.empty()) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& [id, lambda] : rd.lambdas)
          worst = std::max(worst, g_buck(lambda));
        res.recheck_buck = worst;
      }
      if (!rd.elements.empty()) {
        std::vector<GenStrain> eps;
        std::vector<Mat8> G;
        std::vector<double> h;
        std::map<std::string, std::pair<Mat8, double>> cache;
        for (const io::ResponseElement& e : rd.elements) {
          auto it = cache.find(e.panel_id);
          if (it == cache.end()) {
            const auto sit = stack_of.find(e.panel_id);
            if (sit == stack_of.end())
              throw std::runtime_error("response element references unknown panel '" +
                                       e.panel_id + "'");
            const LaminateStrength ls = laminate_strength_matrix(*sit->second, mat);
            it = cache.emplace(e.panel_id, std::pair{assemble_strength(ls), ls.h})
                     .first;
          }
          eps.push_back(e.eps_gen);
          G.push_back(it->second.first);
          h.push_back(it->second.second);
        }
        res.recheck_tsai_hill = g_tsai_hill(eps, G, h).g;
      }
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("pipeline/recheck: ") + e.what());
  }

  const double tol = cfg.tolerance;
  res.constraints_ok = res.meso_ok && res.recheck_feas <= tol &&
                       (edges.empty() || (res.recheck_blend <= tol &&
                                          res.recheck_gap <= tol)) &&
                       (!res.recheck_disp || *res.recheck_disp <= tol) &&
                       (!res.recheck_buck || *res.recheck_buck <= tol) &&
                       (!res.recheck_tsai_hill || *res.recheck_tsai_hill <= tol);

  json report;
  report["discrete"] = {{"objective", res.discrete.objective},
                        {"feasible", res.discrete.feasible},
                        {"evaluations", res.discrete.evaluations},
                        {"max_feas", res.discrete.constraints.max_feas}};
  json subs = json::array();
  double total = 0.0;
  for (const SubproblemResult& s : res.subproblems) {
    total += s.recovered.total;
    subs.push_back(json{{"name", s.name},
                        {"panels", s.panel_ids},
                        {"residual_total", s.recovered.total},
                        {"evaluations", s.recovered.evaluations}});
  }
  report["subproblems"] = std::move(subs);
  report["residual_total"] = total;
  json checks = json::array();
  checks.push_back(check_line("feasibility", res.recheck_feas, tol,
                              res.recheck_feas <= tol));
  checks.push_back(check_line("blending", res.recheck_blend, tol,
                              edges.empty() || res.recheck_blend <= tol));
  checks.push_back(
      check_line("ply_drop", res.recheck_gap, tol, edges.empty() || res.recheck_gap <= tol));
  checks.push_back(check_line("meso_blending", res.meso_ok ? 0.0 : 1.0, 0.0,
                              res.meso_ok));
  if (res.recheck_disp)
    checks.push_back(check_line("stiffness", *res.recheck_disp, tol,
                                *res.recheck_disp <= tol));
  if (res.recheck_buck)
    checks.push_back(
        check_line("buckling", *res.recheck_buck, tol, *res.recheck_buck <= tol));
  if (res.recheck_tsai_hill)
    checks.push_back(check_line("strength", *res.recheck_tsai_hill, tol,
                                *res.recheck_tsai_hill <= tol));
  report["recheck"] = std::move(checks);
  report["constraints_ok"] = res.constraints_ok;
  std::ofstream out(cfg.output_dir / "report.json");
  out << report.dump(2) << '\n';

  return res;
}

}  // namespace polarlam::app
