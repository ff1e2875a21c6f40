#include "polarlam/material.hpp"

#include <cmath>

namespace polarlam {

void PlyMaterial::validate() const {
  auto positive = [this](double v, const char* what) {
    if (!(v > 0.0))
      throw MaterialError(name + ": " + what + " must be > 0");
  };
  positive(E1, "E1");
  positive(E2, "E2");
  positive(G12, "G12");
  positive(G23, "G23");
  positive(G13, "G13");
  positive(polar_Q.T0, "T0");
  positive(polar_Q.T1, "T1");
  positive(rho_ply, "rho_ply");
  positive(t_ply, "t_ply");
  if (polar_Q.R0 < 0.0 || polar_Q.R1 < 0.0)
    throw MaterialError(name + ": anisotropic moduli R0, R1 must be >= 0");
  if (!(nu12 > 0.0) || !(nu12 < std::sqrt(E1 / E2)))
    throw MaterialError(name + ": nu12 outside (0, sqrt(E1/E2))");
  if (N_ref < 1)
    throw MaterialError(name + ": N_ref must be >= 1");
}

QuadTensor ply_reduced_stiffness(const PlyMaterial& m) {
  const double nu21 = m.nu12 * m.E2 / m.E1;
  const double den = 1.0 - m.nu12 * nu21;
  if (!(den > 0.0))
    throw MaterialError(m.name + ": 1 - nu12*nu21 <= 0, not a valid ply");
  QuadTensor Q;
  Q.q11 = m.E1 / den;
  Q.q22 = m.E2 / den;
  Q.q12 = m.nu12 * m.E2 / den;
  Q.q66 = m.G12;
  Q.q16 = 0.0;
  Q.q26 = 0.0;
  return Q;
}

PlyMaterial t300_5208() {
  PlyMaterial m;
  m.name = "t300_5208";
  m.E1 = 181000.0;
  m.E2 = 10300.0;
  m.G12 = 7170.0;
  m.G23 = 3780.0;
  m.G13 = 7170.0;
  m.nu12 = 0.27;
  m.nu23 = 0.42;
  m.nu13 = 0.27;
  m.polar_Q = {26898.96, 24710.25, 19728.96, 21426.38, 0.0, 0.0};
  m.polar_Qhat = {5398.38, 1771.61, 90.0};
  m.polar_G = {7531.02, 2113.80, 3586.81, 1603.36, 45.0, 0.0};
  m.polar_Ghat = {10633.53, 484.30, 90.0};
  m.rho_ply = 1.6e-6;
  m.t_ply = 0.125;
  m.N_ref = 150;
  m.X = 1500.0;
  m.Y = 246.0;
  m.S12 = 68.0;
  m.S23 = 36.0;
  m.S13 = 68.0;
  return m;
}

}  // namespace polarlam
