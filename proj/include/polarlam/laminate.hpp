#ifndef POLARLAM_LAMINATE_HPP
#define POLARLAM_LAMINATE_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polarlam/material.hpp"
#include "polarlam/polar.hpp"

namespace polarlam {

// Ordered ply orientation angles, outermost first, integer degrees in
// (-90, 90]. Text form is the slash-separated notation "-81/-5/82/...".
struct StackingSequence {
  std::vector<int> angles;

  int size() const { return static_cast<int>(angles.size()); }
  bool empty() const { return angles.empty(); }
  void validate() const;  // throws std::invalid_argument on out-of-range angles

  static StackingSequence parse(std::string_view text);
  std::string to_string() const;

  StackingSequence reversed() const {
    return StackingSequence{{angles.rbegin(), angles.rend()}};
  }
  friend bool operator==(const StackingSequence&, const StackingSequence&) = default;
};

// Eq.-/stack-position weights for the homogenized matrices:
//   b_k = 2k - N - 1
//   d_k = 12 k (k - N - 1) + 4 + 3 N (N + 2)
//   c_k = -2 N^2 - 12 k (k - N - 1) - 4 - 6 N
// 1-based k; throws std::out_of_range unless 1 <= k <= N.
struct StackingCoeffs {
  double b, d, c;
};
StackingCoeffs stacking_coefficients(int k, int N);

// Thickness-normalized laminate stiffness matrices (identical plies):
//   A* = (1/N)   sum Q(theta_k)            membrane
//   B* = (1/N^2) sum b_k Q(theta_k)        membrane/bending coupling
//   D* = (1/N^3) sum d_k Q(theta_k)        bending
//   C* = A* - D*                           homogeneity defect
//   H* = (1/N)   sum Qhat(theta_k)         transverse shear
// with h = N t_ply. Polar forms of each tensor are attached.
struct LaminateHomog {
  QuadTensor A, B, D, C;
  Mat2 H;
  double h = 0;
  int N = 0;
  PolarQuad polar_A, polar_B, polar_D, polar_C;
  PolarShear polar_H;
};

// Throws std::invalid_argument on an empty stack. The ply sums are
// accumulated pairwise from both ends so that stack reversal reproduces
// A*, D*, C* bitwise and flips only the sign of B*.
LaminateHomog laminate_homogenized(const StackingSequence& s, const PlyMaterial& m);

// Same homogenization driven by an explicit polar pair; the strength
// blocks reuse this with the ply strength polar sets.
LaminateHomog homogenize_polar(const StackingSequence& s, const PolarQuad& quad,
                               const PolarShear& shear, double t_ply);

// Dimensionless panel design variables of an uncoupled, homogeneous,
// orthotropic laminate:
//   n0 = N/N_ref, rho0K = (-1)^K R0A/R0, rho1 = R1A/R1, phi1 = Phi1A/90.
struct PanelVars {
  double n0 = 0;
  double rho0K = 0;
  double rho1 = 0;
  double phi1 = 0;
  bool phi1_degenerate = false;  // R1A ~ 0: phi1 reported as 0
};

// Raised when the membrane tensor is not orthotropic within tolerance.
class OrthotropyError : public std::runtime_error {
 public:
  OrthotropyError(const std::string& msg, double offset_deg)
      : std::runtime_error(msg), offset_deg_(offset_deg) {}
  double offset_deg() const { return offset_deg_; }

 private:
  double offset_deg_;
};

struct PanelExtractOptions {
  double orthotropy_tol_deg = 0.5;
  bool unchecked = false;  // skip the orthotropy test, use the nearest K
  int N_ref = 0;           // 0 -> material N_ref
};

// K is read from the Phi0A - Phi1A offset (0 or 45 deg modulo 90). When
// R1A is degenerate, phi1 is reported as 0 with the flag set and the sign
// of rho0K comes from cos 4(Phi0A - Phi1A).
PanelVars panel_from_laminate(const LaminateHomog& L, const PlyMaterial& m,
                              const PanelExtractOptions& opt = {});

}  // namespace polarlam

#endif
