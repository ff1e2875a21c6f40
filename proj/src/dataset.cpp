#include "polarlam/dataset.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#ifndef POLARLAM_DATA_DIR
#define POLARLAM_DATA_DIR "data"
#endif

namespace polarlam::data {

using nlohmann::json;

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("POLARLAM_DATA_DIR"); env && *env)
    return env;
  return POLARLAM_DATA_DIR;
}

std::uint64_t fnv1a64(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + file.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return h;
}

namespace {

json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DatasetError("cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DatasetError(file.string() + ": " + e.what());
  }
}

}  // namespace

void verify_manifest() {
  const std::filesystem::path dir = data_dir();
  const json manifest = read_json(dir / "MANIFEST.json");
  for (const auto& [rel, hex] : manifest.at("fnv1a64").items()) {
    const std::filesystem::path f = dir / rel;
    char actual[32];
    std::snprintf(actual, sizeof actual, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(f)));
    if (hex.get<std::string>() != actual)
      throw DatasetError("checksum mismatch for " + f.string() + ": expected " +
                         hex.get<std::string>() + ", got " + actual);
  }
}

PlyMaterial material() {
  PlyMaterial m = io::load_material(data_dir() / "t300_5208.json");
  m.validate();
  return m;
}

io::PanelSet boxwing_panels() {
  return io::load_panels(data_dir() / "boxwing" / "panels.json");
}

BlendingScheme StackGroup::scheme() const {
  BlendingScheme s;
  s.covering = static_cast<int>(covering.size());
  for (const StackRow& r : rows)
    s.panels.push_back(SchemePanel{r.id, r.stack.size(), -1});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].base.empty()) continue;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (rows[k].id == rows[i].base) s.panels[i].base = static_cast<int>(k);
  }
  s.validate();
  return s;
}

namespace {

StackGroup load_group(const std::filesystem::path& file) {
  const json j = read_json(file);
  StackGroup g;
  g.name = j.value("name", file.stem().string());
  if (j.contains("covering")) g.covering = j.at("covering").get<std::vector<int>>();
  g.reported_total = j.value("reported_total", 0.0);
  g.independent_variables = j.value("independent_variables", 0);
  for (const json& pj : j.at("panels")) {
    StackRow r;
    r.id = pj.at("id").is_string() ? pj.at("id").get<std::string>()
                                   : std::to_string(pj.at("id").get<long>());
    r.stack.angles = pj.at("stack").get<std::vector<int>>();
    r.stack.validate();
    r.reported_residual = pj.at("reported_residual").get<double>();
    r.cleaned = pj.value("cleaned", false);
    if (pj.contains("base") && !pj.at("base").is_null())
      r.base = pj.at("base").is_string() ? pj.at("base").get<std::string>()
                                         : std::to_string(pj.at("base").get<long>());
    if (pj.contains("target")) {
      const json& t = pj.at("target");
      r.target = TargetPolar::from_signed(t.at("rho0K").get<double>(),
                                          t.at("rho1").get<double>(),
                                          t.value("phi1", 0.0), t.at("N").get<int>());
    }
    g.rows.push_back(std::move(r));
  }
  return g;
}

}  // namespace

StackGroup stack_group(const std::string& name) {
  return load_group(data_dir() / "boxwing" / ("stacks_" + name + ".json"));
}

StackGroup standalone_group() {
  return load_group(data_dir() / "boxwing" / "stacks_standalone.json");
}

TargetPolar target_for(const io::PanelSet& panels, const std::string& id) {
  const int i = panels.index_of(id);
  if (i < 0) throw DatasetError("panel '" + id + "' not in the panel dataset");
  const io::PanelRecord& p = panels.panels[i];
  const int N = p.N ? *p.N
                    : static_cast<int>(std::lround(p.n0 * panels.N_ref));
  return TargetPolar::from_signed(p.rho0K, p.rho1, p.phi1, N);
}

}  // namespace polarlam::data
