#include "polarlam/io.hpp"

#include <fstream>

#include <json.hpp>

namespace polarlam::io {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw FormatError("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

double need(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw FormatError(ctx + ": missing field '" + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

PlyMaterial load_material(const std::filesystem::path& file) {
  const json j = read_json(file);
  const std::string ctx = file.string();
  PlyMaterial m;
  m.name = j.value("name", "material");
  const json& e = j.at("engineering");
  m.E1 = need(e, "E1", ctx);
  m.E2 = need(e, "E2", ctx);
  m.G12 = need(e, "G12", ctx);
  m.G23 = need(e, "G23", ctx);
  m.G13 = need(e, "G13", ctx);
  m.nu12 = need(e, "nu12", ctx);
  m.nu23 = need(e, "nu23", ctx);
  m.nu13 = need(e, "nu13", ctx);
  const json& q = j.at("polar_Q");
  m.polar_Q = {need(q, "T0", ctx), need(q, "T1", ctx), need(q, "R0", ctx),
               need(q, "R1", ctx), need(q, "Phi0", ctx), need(q, "Phi1", ctx)};
  const json& qh = j.at("polar_Qhat");
  m.polar_Qhat = {need(qh, "T", ctx), need(qh, "R", ctx), need(qh, "Phi", ctx)};
  const json& g = j.at("polar_G");
  m.polar_G = {need(g, "Gamma0", ctx),  need(g, "Gamma1", ctx),
               need(g, "Lambda0", ctx), need(g, "Lambda1", ctx),
               need(g, "Omega0", ctx),  need(g, "Omega1", ctx)};
  const json& gh = j.at("polar_Ghat");
  m.polar_Ghat = {need(gh, "Gamma", ctx), need(gh, "Lambda", ctx),
                  need(gh, "Omega", ctx)};
  const json& p = j.at("ply");
  m.rho_ply = need(p, "rho", ctx);
  m.t_ply = need(p, "t", ctx);
  m.N_ref = static_cast<int>(need(p, "N_ref", ctx));
  const json& lim = j.at("limits");
  m.X = need(lim, "X", ctx);
  m.Y = need(lim, "Y", ctx);
  m.S12 = need(lim, "S12", ctx);
  m.S23 = need(lim, "S23", ctx);
  m.S13 = need(lim, "S13", ctx);
  m.validate();
  return m;
}

void save_material(const std::filesystem::path& file, const PlyMaterial& m) {
  json j;
  j["name"] = m.name;
  j["units"] = {{"modulus", "MPa"},   {"stress", "MPa"}, {"density", "kg/mm^3"},
                {"thickness", "mm"},  {"angle", "deg"}};
  j["engineering"] = {{"E1", m.E1},     {"E2", m.E2},    {"G12", m.G12},
                      {"G23", m.G23},   {"G13", m.G13},  {"nu12", m.nu12},
                      {"nu23", m.nu23}, {"nu13", m.nu13}};
  j["polar_Q"] = {{"T0", m.polar_Q.T0},     {"T1", m.polar_Q.T1},
                  {"R0", m.polar_Q.R0},     {"R1", m.polar_Q.R1},
                  {"Phi0", m.polar_Q.Phi0}, {"Phi1", m.polar_Q.Phi1}};
  j["polar_Qhat"] = {{"T", m.polar_Qhat.T}, {"R", m.polar_Qhat.R},
                     {"Phi", m.polar_Qhat.Phi}};
  j["polar_G"] = {{"Gamma0", m.polar_G.T0},  {"Gamma1", m.polar_G.T1},
                  {"Lambda0", m.polar_G.R0}, {"Lambda1", m.polar_G.R1},
                  {"Omega0", m.polar_G.Phi0}, {"Omega1", m.polar_G.Phi1}};
  j["polar_Ghat"] = {{"Gamma", m.polar_Ghat.T}, {"Lambda", m.polar_Ghat.R},
                     {"Omega", m.polar_Ghat.Phi}};
  j["ply"] = {{"rho", m.rho_ply}, {"t", m.t_ply}, {"N_ref", m.N_ref}};
  j["limits"] = {{"X", m.X}, {"Y", m.Y}, {"S12", m.S12}, {"S23", m.S23},
                 {"S13", m.S13}};
  write_json(file, j);
}

int PanelSet::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < panels.size(); ++i)
    if (panels[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<PanelVars> PanelSet::vars() const {
  std::vector<PanelVars> out;
  out.reserve(panels.size());
  for (const PanelRecord& p : panels)
    out.push_back(PanelVars{p.n0, p.rho0K, p.rho1, p.phi1, false});
  return out;
}

PanelSet load_panels(const std::filesystem::path& file) {
  const json j = read_json(file);
  const std::string ctx = file.string();
  PanelSet set;
  set.N_ref = j.value("N_ref", 150);
  if (!j.contains("panels") || !j.at("panels").is_array())
    throw FormatError(ctx + ": missing 'panels' array");
  for (const json& pj : j.at("panels")) {
    PanelRecord r;
    if (pj.contains("id"))
      r.id = pj.at("id").is_string() ? pj.at("id").get<std::string>()
                                     : std::to_string(pj.at("id").get<long>());
    else
      throw FormatError(ctx + ": panel without id");
    if (pj.contains("N")) {
      r.N = pj.at("N").get<int>();
      r.n0 = double(*r.N) / set.N_ref;
    }
    if (pj.contains("n0")) r.n0 = pj.at("n0").get<double>();
    if (!pj.contains("N") && !pj.contains("n0"))
      throw FormatError(ctx + ": panel " + r.id + " needs n0 or N");
    r.rho0K = need(pj, "rho0K", ctx + " panel " + r.id);
    r.rho1 = need(pj, "rho1", ctx + " panel " + r.id);
    r.phi1 = pj.value("phi1", 0.0);
    r.area = pj.value("area", 0.0);
    set.panels.push_back(std::move(r));
  }
  return set;
}

void save_panels(const std::filesystem::path& file, const PanelSet& set) {
  json arr = json::array();
  for (const PanelRecord& p : set.panels) {
    json pj = {{"id", p.id},     {"n0", p.n0},     {"rho0K", p.rho0K},
               {"rho1", p.rho1}, {"phi1", p.phi1}};
    if (p.N) pj["N"] = *p.N;
    if (p.area > 0) pj["area"] = p.area;
    arr.push_back(std::move(pj));
  }
  write_json(file, json{{"units", {{"angle", "deg"}, {"area", "mm^2"}}},
                        {"N_ref", set.N_ref},
                        {"panels", std::move(arr)}});
}

std::vector<Edge> load_adjacency(const std::filesystem::path& file,
                                 const PanelSet& panels) {
  const json j = read_json(file);
  std::vector<Edge> edges;
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw FormatError(file.string() + ": missing 'edges' array");
  for (const json& ej : j.at("edges")) {
    if (!ej.is_array() || ej.size() != 2)
      throw FormatError(file.string() + ": each edge must be a [p, q] pair");
    auto id = [&](const json& v) {
      return v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>());
    };
    const int p = panels.index_of(id(ej[0]));
    const int q = panels.index_of(id(ej[1]));
    if (p < 0 || q < 0)
      throw FormatError(file.string() + ": edge references unknown panel '" +
                        id(p < 0 ? ej[0] : ej[1]) + "'");
    edges.push_back(Edge{p, q});
  }
  return edges;
}

SchemeFile load_scheme(const std::filesystem::path& file) {
  const json j = read_json(file);
  const std::string ctx = file.string();
  SchemeFile out;
  if (j.contains("covering_angles")) {
    out.covering_angles = j.at("covering_angles").get<std::vector<int>>();
    out.scheme.covering = static_cast<int>(out.covering_angles.size());
  } else {
    out.scheme.covering = j.value("covering", 0);
  }
  std::vector<std::string> bases;
  for (const json& pj : j.at("panels")) {
    SchemePanel p;
    p.id = pj.at("id").is_string() ? pj.at("id").get<std::string>()
                                   : std::to_string(pj.at("id").get<long>());
    p.N = pj.at("N").get<int>();
    bases.push_back(pj.contains("base") && !pj.at("base").is_null()
                        ? (pj.at("base").is_string()
                               ? pj.at("base").get<std::string>()
                               : std::to_string(pj.at("base").get<long>()))
                        : std::string{});
    out.scheme.panels.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].empty()) continue;
    int idx = -1;
    for (std::size_t k = 0; k < out.scheme.panels.size(); ++k)
      if (out.scheme.panels[k].id == bases[i]) idx = static_cast<int>(k);
    if (idx < 0)
      throw FormatError(ctx + ": panel " + out.scheme.panels[i].id +
                        " references unknown base '" + bases[i] + "'");
    out.scheme.panels[i].base = idx;
  }
  out.scheme.validate();
  return out;
}

void save_scheme(const std::filesystem::path& file, const BlendingScheme& scheme) {
  json arr = json::array();
  for (const SchemePanel& p : scheme.panels) {
    json pj = {{"id", p.id}, {"N", p.N}};
    if (p.base >= 0)
      pj["base"] = scheme.panels[p.base].id;
    else
      pj["base"] = nullptr;
    arr.push_back(std::move(pj));
  }
  write_json(file, json{{"covering", scheme.covering}, {"panels", std::move(arr)}});
}

ResponseData load_response(const std::filesystem::path& file) {
  const json j = read_json(file);
  const std::string ctx = file.string();
  ResponseData out;
  out.tip_u_mm = j.value("tip_u_mm", 0.0);
  out.semispan_mm = j.value("semispan_mm", 0.0);
  if (j.contains("lambdas"))
    for (const json& lj : j.at("lambdas"))
      out.lambdas.emplace_back(lj.at("id").get<std::string>(),
                               lj.at("lambda").get<double>());
  if (j.contains("elements")) {
    for (const json& ej : j.at("elements")) {
      ResponseElement e;
      e.panel_id = ej.at("panel").is_string()
                       ? ej.at("panel").get<std::string>()
                       : std::to_string(ej.at("panel").get<long>());
      const auto v = ej.at("eps_gen").get<std::vector<double>>();
      if (v.size() != 8)
        throw FormatError(ctx +
                          ": eps_gen must have 8 components (membrane xx, yy, "
                          "xy; curvature xx, yy, xy; shear xz, yz)");
      std::copy(v.begin(), v.end(), e.eps_gen.begin());
      out.elements.push_back(std::move(e));
    }
  }
  return out;
}

void save_stacks(const std::filesystem::path& file, std::span<const StackOutRow> rows,
                 double total) {
  json arr = json::array();
  for (const StackOutRow& r : rows) {
    arr.push_back(json{{"id", r.id},
                       {"stack", r.stack.to_string()},
                       {"N", r.stack.size()},
                       {"residual", r.residual.total},
                       {"residual_terms", r.residual.r},
                       {"phi1_degenerate", r.residual.phi1_degenerate}});
  }
  write_json(file, json{{"units", {{"angle", "deg"}}},
                        {"total_residual", total},
                        {"panels", std::move(arr)}});
}

std::vector<std::pair<std::string, StackingSequence>> load_stacks(
    const std::filesystem::path& file) {
  const json j = read_json(file);
  std::vector<std::pair<std::string, StackingSequence>> out;
  for (const json& pj : j.at("panels")) {
    const std::string id = pj.at("id").is_string()
                               ? pj.at("id").get<std::string>()
                               : std::to_string(pj.at("id").get<long>());
    StackingSequence s;
    if (pj.at("stack").is_string()) {
      s = StackingSequence::parse(pj.at("stack").get<std::string>());
    } else {
      s.angles = pj.at("stack").get<std::vector<int>>();
      s.validate();
    }
    out.emplace_back(id, std::move(s));
  }
  return out;
}

}  // namespace polarlam::io
