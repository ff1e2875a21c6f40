#ifndef POLARLAM_CRITERIA_HPP
#define POLARLAM_CRITERIA_HPP

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "polarlam/laminate.hpp"

// Macroscopic design-constraint functions. Every g is a <= 0 constraint;
// structural responses (buckling factor, tip displacement, generalized
// strains) are inputs produced by an external FE solve.

namespace polarlam {

// Default safety factors: strength 1.33 * 1.5^2, buckling 1.5 * 1.1.
inline constexpr double kStrengthSafety = 1.33 * 1.5 * 1.5;
inline constexpr double kBucklingSafety = 1.5 * 1.1;

// g = 2 rho1^2 - 1 - rho0K, feasible laminate iff g <= 0.
struct FeasibilityValue {
  double g;
  double d_rho0K;  // -1
  double d_rho1;   // 4 rho1
};
FeasibilityValue g_feas(const PanelVars& p);

// Blending constraint pair for adjacent panels p, q at ply counts
// N = n0 N_ref:
//   g0 = [D(N rho0K c4)]^2 + [D(N rho0K s4)]^2 - (Np - Nq)^2
//   g1 = [D(N rho1  c2)]^2 + [D(N rho1  s2)]^2 - (Np - Nq)^2
// where D(x) = x_p - x_q, c4/s4 = cos/sin 4 Phi1, c2/s2 = cos/sin 2 Phi1.
// Gradients are with respect to (n0, rho0K, phi1) of p then q for g0, and
// (n0, rho1, phi1) likewise for g1.
struct BlendingPair {
  double g0, g1;
  std::array<double, 6> grad0;
  std::array<double, 6> grad1;
};
BlendingPair g_blend_pair(const PanelVars& p, const PanelVars& q, double N_ref);

struct Edge {
  int p, q;
};

// Worst blending value over all edges (max of g0, g1); grouped-constraint
// form. Empty edge set yields -infinity ("no constraint"); an edge index
// outside the panel list throws std::out_of_range.
double blend_aggregate(std::span<const PanelVars> panels, std::span<const Edge> edges,
                       double N_ref);

// g = u/(0.15 b) - 1 for tip displacement u against semi-span b [mm].
double g_disp(double u, double b);

// g = 1 - lambda/safety for the first positive buckling eigenvalue.
double g_buck(double lambda, double safety = kBucklingSafety);

// Thickness-normalized laminate strength blocks, homogenized from the ply
// strength polar sets with the same stacking coefficients as the stiffness.
struct LaminateStrength {
  QuadTensor A, B, D, C;
  Mat2 H;
  double h = 0;
  int N = 0;
};
LaminateStrength laminate_strength_matrix(const StackingSequence& s, const PlyMaterial& m);

// Generalized strain: membrane xx, yy, xy; curvature xx, yy, xy [1/mm];
// transverse shear xz, yz.
using GenStrain = std::array<double, 8>;

using Mat8 = std::array<std::array<double, 8>, 8>;

// Laminate-level strength tensor over the generalized strain, blocks scaled
// so that (1/h) eps^T G eps is the thickness-averaged failure index:
//   [  h GA*     h^2/2 GB*   0    ]
//   [ h^2/2 GB*  h^3/12 GD*  0    ]
//   [  0          0          h GH*]
Mat8 assemble_strength(const LaminateStrength& g);

struct TsaiHillValue {
  double g;
  std::size_t argmax;  // element with the largest failure index
};

// g = safety * max_e ( (1/h_e) eps_e^T G_e eps_e ) - 1.
// Throws std::invalid_argument on an empty element set or mismatched spans.
TsaiHillValue g_tsai_hill(std::span<const GenStrain> eps, std::span<const Mat8> G,
                          std::span<const double> h, double safety = kStrengthSafety);

// Dimensionless structure mass:
//   Phi = (2/m_ref) (m0 + N_ref t_ply rho_ply sum_j A_j n0_j)
// areas in mm^2, masses in kg. Throws std::invalid_argument on m_ref <= 0,
// negative areas, or mismatched spans.
struct MassValue {
  double value;
  std::vector<double> d_n0;  // 2 N_ref t_ply rho_ply A_j / m_ref
};
MassValue mass_objective(std::span<const double> n0, std::span<const double> areas,
                         double m0, double m_ref, const PlyMaterial& m);

// Minimum-ply-drop constraint between adjacent panels:
//   |D n0d| (dN_min/N_ref - |D n0d|) <= 0
// i.e. the drop is either zero or at least dN_min plies.
double delta_n_gap(int N_p, int N_q, int dN_min, int N_ref);

}  // namespace polarlam

#endif
