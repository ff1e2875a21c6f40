#ifndef POLARLAM_DATASET_HPP
#define POLARLAM_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polarlam/io.hpp"
#include "polarlam/recovery.hpp"

// Bundled reference datasets for the box-wing wing-box case study:
// the T300/5208 material, the 52-panel optimal design, the recovered
// blended and stand-alone stacking sequences with their reported
// residuals, and an integrity manifest (FNV-1a 64 checksums).

namespace polarlam::data {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data directory: POLARLAM_DATA_DIR environment variable when set,
// otherwise the compiled-in source location.
std::filesystem::path data_dir();

std::uint64_t fnv1a64(const std::filesystem::path& file);

// Verifies every entry of data/MANIFEST.json; throws DatasetError on a
// missing file or checksum mismatch.
void verify_manifest();

PlyMaterial material();       // loads t300_5208.json (validated)
io::PanelSet boxwing_panels();  // the 52-panel optimal design

struct StackRow {
  std::string id;
  StackingSequence stack;
  double reported_residual = 0;
  bool cleaned = false;            // transcription artifacts were removed
  std::string base;                // id of the panel this stack extends, "" for a root
  std::optional<TargetPolar> target;  // stand-alone rows carry their own target
};

struct StackGroup {
  std::string name;
  std::vector<int> covering;       // shared leading plies (empty for stand-alone)
  double reported_total = 0;
  int independent_variables = 0;
  std::vector<StackRow> rows;

  // Ply-sharing map implied by the rows' base links, panels in row order.
  BlendingScheme scheme() const;
};

inline constexpr const char* kSkinGroups[] = {"fw_dorsal", "fw_ventral", "rw_dorsal",
                                              "rw_ventral"};

StackGroup stack_group(const std::string& name);  // one of kSkinGroups
StackGroup standalone_group();

// Target of a blended-group panel, looked up in the panel dataset.
TargetPolar target_for(const io::PanelSet& panels, const std::string& id);

}  // namespace polarlam::data

#endif
