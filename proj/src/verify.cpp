#include "polarlam/verify.hpp"

#include <cmath>

#include "polarlam/criteria.hpp"

namespace polarlam::verify {

namespace {

Check rel_check(const std::string& name, const std::string& ref, double computed,
                double expected, double rel_tol) {
  Check c{name, ref, computed, expected, rel_tol, false, "relative"};
  c.pass = std::fabs(computed - expected) <= rel_tol * std::fabs(expected);
  return c;
}

Check abs_check(const std::string& name, const std::string& ref, double computed,
                double expected, double abs_tol) {
  Check c{name, ref, computed, expected, abs_tol, false, "absolute"};
  c.pass = std::fabs(computed - expected) <= abs_tol;
  return c;
}

}  // namespace

std::vector<Check> check_material() {
  const PlyMaterial m = data::material();
  const PolarQuad p = polar_from_quad(ply_reduced_stiffness(m));
  const std::string ref = "t300_5208.json polar_Q";
  std::vector<Check> out;
  out.push_back(rel_check("material.T0", ref, p.T0, m.polar_Q.T0, 1e-3));
  out.push_back(rel_check("material.T1", ref, p.T1, m.polar_Q.T1, 1e-3));
  out.push_back(rel_check("material.R0", ref, p.R0, m.polar_Q.R0, 1e-3));
  out.push_back(rel_check("material.R1", ref, p.R1, m.polar_Q.R1, 1e-3));
  out.push_back(abs_check("material.Phi0", ref, p.Phi0, m.polar_Q.Phi0, 0.01));
  out.push_back(abs_check("material.Phi1", ref, p.Phi1, m.polar_Q.Phi1, 0.01));
  return out;
}

std::vector<Check> check_feasibility() {
  const io::PanelSet set = data::boxwing_panels();
  double worst = -std::numeric_limits<double>::infinity();
  int violations = 0;
  for (const PanelVars& p : set.vars()) {
    const double g = g_feas(p).g;
    worst = std::max(worst, g);
    if (g > 0.0) ++violations;
  }
  std::vector<Check> out;
  out.push_back(abs_check("feasibility.max_g", "boxwing/panels.json", worst, -0.2893,
                          1e-3));
  Check all{"feasibility.all_panels", "boxwing/panels.json", double(violations), 0.0,
            0.0, violations == 0, "count of g_feas > 0"};
  out.push_back(all);
  return out;
}

std::vector<Check> check_standalone_residuals(TensorNormKind norm) {
  const PlyMaterial m = data::material();
  const data::StackGroup g = data::standalone_group();
  const ResidualOptions opt{norm};
  std::vector<Check> out;
  for (const data::StackRow& r : g.rows) {
    const double total = residuals(r.stack, m, *r.target, opt).total;
    const double rep = r.reported_residual;
    Check c{"standalone." + r.id, "boxwing/stacks_standalone.json", total, rep, 0.0,
            false, "within [recorded/5, recorded*5] or < 1e-4"};
    c.pass = total < 1e-4 || (total >= rep / 5.0 && total <= rep * 5.0);
    out.push_back(c);
  }
  return out;
}

BlendedSummary check_blended_residuals(TensorNormKind norm) {
  const PlyMaterial m = data::material();
  const io::PanelSet panels = data::boxwing_panels();
  const ResidualOptions opt{norm};
  BlendedSummary sum;
  for (const char* name : data::kSkinGroups) {
    const data::StackGroup g = data::stack_group(name);
    double total = 0.0;
    for (const data::StackRow& r : g.rows) {
      const TargetPolar t = data::target_for(panels, r.id);
      const double v = residuals(r.stack, m, t, opt).total;
      total += v;
      ++sum.panels_total;
      const double tol = std::max(0.01, 0.10 * r.reported_residual);
      if (std::fabs(v - r.reported_residual) <= tol) ++sum.panels_matching;
    }
    sum.checks.push_back(rel_check(std::string("blended.total.") + name,
                                   "boxwing/stacks_" + std::string(name) + ".json",
                                   total, g.reported_total, 0.10));
  }
  Check frac{"blended.panel_match_fraction", "boxwing/stacks_*.json",
             double(sum.panels_matching) / sum.panels_total, 0.90, 0.0, false,
             "fraction within max(0.01, 10%) of recorded"};
  frac.pass = frac.computed >= frac.expected;
  sum.checks.push_back(frac);
  return sum;
}

std::vector<Check> check_meso_blending() {
  std::vector<Check> out;
  for (const char* name : data::kSkinGroups) {
    const data::StackGroup g = data::stack_group(name);
    int pairs = 0, pass = 0;
    for (const data::StackRow& r : g.rows) {
      if (r.base.empty()) continue;
      const data::StackRow* base = nullptr;
      for (const data::StackRow& b : g.rows)
        if (b.id == r.base) base = &b;
      ++pairs;
      if (base && is_blended(r.stack, base->stack, BlendMode::scheme)) ++pass;
    }
    Check c{std::string("meso.pairs.") + name,
            "boxwing/stacks_" + std::string(name) + ".json", double(pass),
            double(pairs), 0.0, pass == pairs, "scheme-mode blended pairs"};
    out.push_back(c);
    Check iv{std::string("meso.independent.") + name,
             "boxwing/stacks_" + std::string(name) + ".json",
             double(g.scheme().independent_count()),
             double(g.independent_variables), 0.0, false, "independent variables"};
    iv.pass = iv.computed == iv.expected;
    out.push_back(iv);
  }
  return out;
}

std::vector<Check> check_dataset_integrity() {
  Check c{"dataset.manifest", "MANIFEST.json", 0, 0, 0, false, "fnv1a64 checksums"};
  try {
    data::verify_manifest();
    c.pass = true;
  } catch (const data::DatasetError& e) {
    c.note = e.what();
  }
  return {c};
}

void Report::add(std::vector<Check> more) {
  for (Check& c : more) {
    all_pass = all_pass && c.pass;
    checks.push_back(std::move(c));
  }
}

Report run(const std::string& selector) {
  Report r;
  const bool all = selector.empty() || selector == "all";
  if (all || selector == "integrity") r.add(check_dataset_integrity());
  if (all || selector == "material") r.add(check_material());
  if (all || selector == "feasibility") r.add(check_feasibility());
  if (all || selector == "standalone") r.add(check_standalone_residuals());
  if (all || selector == "blended") r.add(check_blended_residuals().checks);
  if (all || selector == "meso") r.add(check_meso_blending());
  if (r.checks.empty())
    throw std::invalid_argument("unknown verification selector '" + selector + "'");
  return r;
}

}  // namespace polarlam::verify
