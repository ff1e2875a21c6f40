#ifndef POLARLAM_RECOVERY_HPP
#define POLARLAM_RECOVERY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarlam/laminate.hpp"

// Stacking-sequence recovery: six-term polar residual against target panel
// properties, meso-scale blending decision, by-construction blended stack
// assembly (covering plies + nested tails) and the metaheuristic search
// minimizing the summed residual of a blended panel family.

namespace polarlam {

// Target properties of one panel, with the signed anisotropy split into the
// orthotropy index K (0/1) and the non-negative rho0: rho0K = (-1)^K rho0.
struct TargetPolar {
  int K = 0;
  double rho0 = 0;  // >= 0
  double rho1 = 0;
  double phi1 = 0;
  int N = 0;

  static TargetPolar from_signed(double rho0K, double rho1, double phi1, int N);
};

// K = 0 if rho0K >= 0, else 1; rho0 = |rho0K|.
std::pair<int, double> split_target(double rho0K);

enum class TensorNormKind {
  frobenius,      // matrix Frobenius norm of the 3x3 Voigt form (default)
  polar_moduli,   // sqrt(T0^2 + 2 T1^2 + R0^2 + 4 R1^2) of the tensor's own polar
};

struct ResidualOptions {
  TensorNormKind norm = TensorNormKind::frobenius;
};

// The six dimensionless residuals:
//   r[0] = |B*|/M        uncoupling
//   r[1] = |C*|/M        homogeneity
//   r[2] = |2(phi0 - phi1) - K|   orthotropy (circular, period 2)
//   r[3] = |rho0 - rho0_target|
//   r[4] = |rho1 - rho1_target|
//   r[5] = |phi1 - phi1_target|   (circular, period 2)
// and total = sum r_i^2. M = sqrt(T0^2 + 2 T1^2 + R0^2 + 4 R1^2) of the ply
// stiffness polar. A stack with total = 0 is a recovery stacking sequence.
struct ResidualBreakdown {
  std::array<double, 6> r{};
  double total = 0;
  double norm_scale = 0;  // M [MPa]
  bool phi1_degenerate = false;
};

ResidualBreakdown residuals(const StackingSequence& s, const PlyMaterial& m,
                            const TargetPolar& t, const ResidualOptions& opt = {});

// Same from an already homogenized laminate.
ResidualBreakdown residuals(const LaminateHomog& L, const PlyMaterial& m,
                            const TargetPolar& t, const ResidualOptions& opt = {});

enum class BlendMode {
  general,  // thinner is an order-preserving subsequence of parent
  scheme,   // thinner = shared leading plies + contiguous suffix of parent
};

struct BlendWitness {
  bool blended = false;
  std::vector<int> ply_map;  // thinner ply index -> parent ply index
  explicit operator bool() const { return blended; }
};

// Decides whether `thinner` can be obtained from `parent` by dropping
// plies, in the requested mode, and returns the ply mapping as witness.
BlendWitness is_blended(const StackingSequence& parent, const StackingSequence& thinner,
                        BlendMode mode);

// Ply-sharing map of one blended sub-problem. Each panel either is a root
// (its tail is fully its own) or extends a thinner panel: its stack is
//   covering plies + own block + base panel's tail,
// which makes every (thicker, thinner) pair blended by construction.
struct SchemePanel {
  std::string id;
  int N = 0;
  int base = -1;  // index into panels, -1 for a root
};

struct BlendingScheme {
  int covering = 0;
  std::vector<SchemePanel> panels;

  int own_count(int i) const;
  int independent_count() const;
  // Throws std::invalid_argument on cycles, bad base indices, N smaller
  // than the base panel's N, or N < covering.
  void validate() const;
};

// Builds the per-panel stacks from the independent orientation vector,
// laid out as [covering | own block of panel 0 | own block of panel 1 | ...].
// Throws std::invalid_argument when the vector length does not match.
std::vector<StackingSequence> assemble_stacks(std::span<const int> orientations,
                                              const BlendingScheme& scheme);

struct Subproblem {
  BlendingScheme scheme;
  std::vector<TargetPolar> targets;  // one per scheme panel, same order
};

struct SearchConfig {
  int grid_step_deg = 1;   // must divide 180
  int population = 100;
  int kernel = 20;         // elite pool size
  long budget = 1000000;   // residual evaluations
  std::uint64_t seed = 0;
  int stagnation_generations = 60;  // restart trigger
  ResidualOptions residual{};
};

struct RecoverResult {
  std::vector<StackingSequence> stacks;
  std::vector<ResidualBreakdown> breakdown;
  double total = 0;
  long evaluations = 0;
  int restarts = 0;
};

// Population search over the integer orientation grid: elite kernel,
// +-k-step mutations, uniform crossover, random immigrants, restart on
// stagnation. Deterministic for a fixed seed; the best-so-far total is
// non-increasing in the budget. Returns the best blended-by-construction
// family found when the budget is exhausted.
RecoverResult recover(const Subproblem& sub, const PlyMaterial& m,
                      const SearchConfig& cfg);

}  // namespace polarlam

#endif
