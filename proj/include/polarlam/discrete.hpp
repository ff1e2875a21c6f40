#ifndef POLARLAM_DISCRETE_HPP
#define POLARLAM_DISCRETE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "polarlam/criteria.hpp"

// Discrete ply-count optimisation: round the continuous panel design to
// integer ply counts at minimal squared L2 distance, subject to laminate
// feasibility, pairwise blending (evaluated at the discrete counts) and the
// minimum-ply-drop rule. Only n0 is integer-constrained; rho0K and rho1
// stay continuous, phi1 is fixed panel data.

namespace polarlam {

// ceil(n0 N_ref)/N_ref, with a snap tolerance so that an n0 already sitting
// on the lattice is not pushed up by floating-point noise.
double round_up_plies(double n0, int N_ref);

// Squared L2 distance over the (n0, rho0K, rho1) components.
// Throws std::invalid_argument on length mismatch.
double discrete_objective(std::span<const PanelVars> a, std::span<const PanelVars> b);

struct DiscreteConfig {
  int dN_min = 4;
  int N_ref = 150;
  long budget = 20000;  // candidate evaluations (inner solves), >= 1
  std::uint64_t seed = 0;
  int neighborhood_radius = 3;  // integer N moves per proposal
  double constraint_tol = 1e-3;
  double n0_lower = 0.2;        // lattice lower bound on n0
  long exhaustive_cap = 50000;  // enumerate lattices smaller than this

  void validate() const;  // throws std::invalid_argument
};

struct DiscretePanel {
  int N = 0;
  double n0d = 0;  // N / N_ref
  double rho0K = 0;
  double rho1 = 0;
  double phi1 = 0;
};

struct DiscreteConstraintReport {
  double max_feas = 0;   // max g_feas over panels
  double max_blend = 0;  // max blending value over edges (-inf if no edges)
  double max_gap = 0;    // max ply-drop value over edges (-inf if no edges)
};

struct DiscreteResult {
  std::vector<DiscretePanel> panels;
  double objective = 0;      // ||xi_c - xi_d||^2 over (n0, rho0K, rho1)
  bool feasible = false;     // all constraints within tolerance
  DiscreteConstraintReport constraints;
  long evaluations = 0;
  bool exhaustive = false;   // the whole lattice was enumerated
};

// For a fixed assignment of integer ply counts the remaining problem in
// (rho0K, rho1) is convex (quadratic objective, parabolic feasibility
// region, ellipse-band blending constraints); it is solved to high accuracy
// by an interior-point subsolver. The search over the ply-count lattice is
// exhaustive when the lattice is small, otherwise a seeded neighborhood
// descent restarted from the ceiling-rounded point. Deterministic for a
// fixed seed; the best-so-far result is monotone in the budget. When no
// feasible assignment was visited the best found is returned with
// `feasible` unset and the violation report filled in.
DiscreteResult solve_discrete(std::span<const PanelVars> xi_c,
                              std::span<const Edge> edges, const DiscreteConfig& cfg);

}  // namespace polarlam

#endif
