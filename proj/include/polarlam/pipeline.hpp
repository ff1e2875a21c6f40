#ifndef POLARLAM_PIPELINE_HPP
#define POLARLAM_PIPELINE_HPP

#include <filesystem>
#include <optional>

#include "polarlam/discrete.hpp"
#include "polarlam/io.hpp"
#include "polarlam/recovery.hpp"

// End-to-end orchestration: discretize the continuous panel design, recover
// blended stacking sequences per connected sub-problem, then re-check the
// design constraints on the recovered design.

namespace polarlam::app {

struct PipelineConfig {
  std::filesystem::path material_file;
  std::filesystem::path panels_file;
  std::filesystem::path adjacency_file;
  std::filesystem::path scheme_file;    // empty: derive from adjacency
  std::filesystem::path response_file;  // optional
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  long budget = 100000;          // recovery evaluations per sub-problem
  long discrete_budget = 20000;  // discretization evaluations
  int dN_min = 4;
  int grid_step_deg = 1;
  int covering = 2;  // covering slots for derived schemes
  int population = 100;
  int kernel = 20;
  double tolerance = 1e-3;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& file);

struct SubproblemResult {
  std::string name;
  std::vector<std::string> panel_ids;
  RecoverResult recovered;
};

struct PipelineResult {
  DiscreteResult discrete;
  std::vector<SubproblemResult> subproblems;

  // constraint re-check at the recovered design
  double recheck_feas = 0;   // max g_feas over panels
  double recheck_blend = 0;  // max blending value over adjacency edges
  double recheck_gap = 0;    // max ply-drop value
  bool meso_ok = false;      // every scheme pair passes the blending decision
  std::optional<double> recheck_disp;
  std::optional<double> recheck_buck;  // worst g_buck over reported factors
  std::optional<double> recheck_tsai_hill;
  bool constraints_ok = false;
};

// Derived ply-sharing map: panels sorted by descending count; each panel
// extends its thickest adjacent panel that is not thicker than itself.
// Returns one scheme per connected component together with the component's
// panel indices.
std::vector<std::pair<BlendingScheme, std::vector<int>>> derive_schemes(
    const io::PanelSet& panels, std::span<const int> N, std::span<const Edge> edges,
    int covering);

// Runs the full flow and writes discrete_panels.json, stacks_<name>.json
// and report.json under the output directory. Throws on stage errors with
// the stage name in the message.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace polarlam::app

#endif
