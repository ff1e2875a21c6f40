#include "polarlam/polar.hpp"

namespace polarlam {

QuadTensor quad_from_polar(const PolarQuad& p, double rotation_deg) {
  const double a0 = deg2rad(4.0 * (p.Phi0 + rotation_deg));
  const double a1 = deg2rad(2.0 * (p.Phi1 + rotation_deg));
  const double c0 = p.R0 * std::cos(a0);
  const double s0 = p.R0 * std::sin(a0);
  const double c1 = p.R1 * std::cos(a1);
  const double s1 = p.R1 * std::sin(a1);
  QuadTensor L;
  L.q11 = p.T0 + 2.0 * p.T1 + c0 + 4.0 * c1;
  L.q22 = p.T0 + 2.0 * p.T1 + c0 - 4.0 * c1;
  L.q12 = -p.T0 + 2.0 * p.T1 - c0;
  L.q66 = p.T0 - c0;
  L.q16 = s0 + 2.0 * s1;
  L.q26 = -s0 + 2.0 * s1;
  return L;
}

PolarQuad polar_from_quad(const QuadTensor& L) {
  PolarQuad p;
  p.T0 = (L.q11 + L.q22 - 2.0 * L.q12 + 4.0 * L.q66) / 8.0;
  p.T1 = (L.q11 + L.q22 + 2.0 * L.q12) / 8.0;
  // complex combinations: R0 e^{4i Phi0}, R1 e^{2i Phi1}
  const double re0 = (L.q11 + L.q22 - 2.0 * L.q12 - 4.0 * L.q66) / 8.0;
  const double im0 = (L.q16 - L.q26) / 2.0;
  const double re1 = (L.q11 - L.q22) / 8.0;
  const double im1 = (L.q16 + L.q26) / 4.0;
  p.R0 = std::hypot(re0, im0);
  p.R1 = std::hypot(re1, im1);
  const double eps = kDegenerateRel * std::fabs(p.T0);
  p.r0_degenerate = p.R0 <= eps;
  p.r1_degenerate = p.R1 <= eps;
  p.Phi0 = p.r0_degenerate ? 0.0
                           : wrap_half_period(rad2deg(std::atan2(im0, re0)) / 4.0, 90.0);
  p.Phi1 = p.r1_degenerate ? 0.0
                           : wrap_half_period(rad2deg(std::atan2(im1, re1)) / 2.0, 180.0);
  return p;
}

Mat2 shear_from_polar(const PolarShear& p, double rotation_deg) {
  const double a = deg2rad(2.0 * (p.Phi + rotation_deg));
  Mat2 Z;
  Z.m11 = p.T + p.R * std::cos(a);
  Z.m12 = p.R * std::sin(a);
  Z.m22 = p.T - p.R * std::cos(a);
  return Z;
}

PolarShear polar_from_shear(const Mat2& Z) {
  PolarShear p;
  p.T = 0.5 * (Z.m11 + Z.m22);
  const double re = 0.5 * (Z.m11 - Z.m22);
  p.R = std::hypot(re, Z.m12);
  p.degenerate = p.R <= kDegenerateRel * std::fabs(p.T);
  p.Phi = p.degenerate ? 0.0
                       : wrap_half_period(rad2deg(std::atan2(Z.m12, re)) / 2.0, 180.0);
  return p;
}

}  // namespace polarlam
