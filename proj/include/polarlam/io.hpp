#ifndef POLARLAM_IO_HPP
#define POLARLAM_IO_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polarlam/criteria.hpp"
#include "polarlam/recovery.hpp"

// JSON file formats. Every file carries explicit units (MPa, mm, kg/mm^3,
// deg); stacks use the slash-separated integer notation.

namespace polarlam::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PlyMaterial load_material(const std::filesystem::path& file);
void save_material(const std::filesystem::path& file, const PlyMaterial& m);

// Panel-set file: per-panel id, n0 (or integer N), rho0K, rho1, phi1 and
// an optional area [mm^2]; N_ref in the header.
struct PanelRecord {
  std::string id;
  double n0 = 0;
  double rho0K = 0;
  double rho1 = 0;
  double phi1 = 0;
  double area = 0;
  std::optional<int> N;
};

struct PanelSet {
  int N_ref = 150;
  std::vector<PanelRecord> panels;

  int index_of(const std::string& id) const;  // -1 when missing
  std::vector<PanelVars> vars() const;
};

PanelSet load_panels(const std::filesystem::path& file);
void save_panels(const std::filesystem::path& file, const PanelSet& set);

// Adjacency file: {"edges": [["p","q"], ...]} with panel ids.
std::vector<Edge> load_adjacency(const std::filesystem::path& file,
                                 const PanelSet& panels);

// Blending-scheme file: covering count or explicit covering angles, plus
// per-panel {id, N, base}.
struct SchemeFile {
  BlendingScheme scheme;
  std::vector<int> covering_angles;  // empty unless the file pins them
};
SchemeFile load_scheme(const std::filesystem::path& file);
void save_scheme(const std::filesystem::path& file, const BlendingScheme& scheme);

// Structural response file: buckling factors per region, tip displacement
// and semi-span, generalized strain rows tagged by panel id.
struct ResponseElement {
  std::string panel_id;
  GenStrain eps_gen{};
};
struct ResponseData {
  std::vector<std::pair<std::string, double>> lambdas;
  double tip_u_mm = 0;
  double semispan_mm = 0;
  std::vector<ResponseElement> elements;
};
ResponseData load_response(const std::filesystem::path& file);

// Recovered-stack files: per-panel stack text plus residual columns.
struct StackOutRow {
  std::string id;
  StackingSequence stack;
  ResidualBreakdown residual;
};
void save_stacks(const std::filesystem::path& file, std::span<const StackOutRow> rows,
                 double total);
std::vector<std::pair<std::string, StackingSequence>> load_stacks(
    const std::filesystem::path& file);

}  // namespace polarlam::io

#endif
