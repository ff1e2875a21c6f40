#ifndef POLARLAM_MATERIAL_HPP
#define POLARLAM_MATERIAL_HPP

#include <stdexcept>
#include <string>

#include "polarlam/polar.hpp"

namespace polarlam {

class MaterialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Elementary-layer data: engineering constants, polar parameters of the
// in-plane reduced stiffness Q, of the out-of-plane shear stiffness Qhat,
// of the in-plane strength tensor G and of the out-of-plane shear strength
// Ghat, plus ply geometry and limit stresses.
//
// The shear and strength polar sets are ingested as data, not derived from
// the 3D constants. Units: moduli and limit stresses in MPa, density in
// kg/mm^3, thickness in mm, angles in deg. The strength polar entries are
// dimensionless (strain-space failure tensor).
struct PlyMaterial {
  std::string name;

  double E1 = 0, E2 = 0, G12 = 0, G23 = 0, G13 = 0;
  double nu12 = 0, nu23 = 0, nu13 = 0;

  PolarQuad polar_Q;      // in-plane reduced stiffness
  PolarShear polar_Qhat;  // out-of-plane shear stiffness
  PolarQuad polar_G;      // in-plane strength (T0=Gamma0, R0=Lambda0, ...)
  PolarShear polar_Ghat;  // out-of-plane shear strength

  double rho_ply = 0;  // kg/mm^3
  double t_ply = 0;    // mm
  int N_ref = 1;

  double X = 0, Y = 0, S12 = 0, S23 = 0, S13 = 0;  // limit stresses [MPa]

  // Throws MaterialError when an invariant is broken (non-positive moduli,
  // negative anisotropic moduli, nu12 outside (0, sqrt(E1/E2)), N_ref < 1).
  void validate() const;
};

// Plane-stress reduced stiffness of the ply at 0 deg:
//   Q11 = E1/(1 - nu12 nu21), Q22 = E2/(1 - nu12 nu21),
//   Q12 = nu12 E2/(1 - nu12 nu21), Q66 = G12, nu21 = nu12 E2/E1.
// Throws MaterialError when 1 - nu12 nu21 <= 0.
QuadTensor ply_reduced_stiffness(const PlyMaterial& m);

// The bundled T300/5208 carbon-epoxy dataset.
PlyMaterial t300_5208();

}  // namespace polarlam

#endif
