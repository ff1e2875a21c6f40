#ifndef POLARLAM_POLAR_HPP
#define POLARLAM_POLAR_HPP

#include <array>
#include <cmath>

// Polar representation of plane tensors.
//
// A fourth-order plane elasticity-like tensor L (major and minor symmetries)
// is stored as the symmetric 3x3 Voigt matrix
//
//   [ L1111 L1122 L1112 ]
//   [ L1122 L2222 L2212 ]
//   [ L1112 L2212 L1212 ]
//
// and carries six polar parameters (T0, T1, R0, R1, Phi0, Phi1):
//
//   L1111 = T0 + 2 T1 + R0 cos 4Phi0 + 4 R1 cos 2Phi1
//   L1122 = -T0 + 2 T1 - R0 cos 4Phi0
//   L1112 = R0 sin 4Phi0 + 2 R1 sin 2Phi1
//   L2222 = T0 + 2 T1 + R0 cos 4Phi0 - 4 R1 cos 2Phi1
//   L2212 = -R0 sin 4Phi0 + 2 R1 sin 2Phi1
//   L1212 = T0 - R0 cos 4Phi0
//
// The moduli T0, T1, R0, R1 and the difference Phi0 - Phi1 are tensor
// invariants; rotating the frame by theta shifts both angles by theta.
// A second-order symmetric plane tensor Z has (T, R, Phi) with
//   Z11 = T + R cos 2Phi,  Z12 = R sin 2Phi,  Z22 = T - R cos 2Phi.
//
// Angles are degrees everywhere in the public interface; Phi0 lives on a
// 90 deg period, Phi1 (and the second-order Phi) on a 180 deg period.

namespace polarlam {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

// Wrap an angle (or any periodic quantity) into (-period/2, period/2].
inline double wrap_half_period(double x, double period) {
  double w = std::remainder(x, period);
  if (w <= -0.5 * period) w += period;
  return w;
}

// Circular distance |x| mod period, in [0, period/2].
inline double circular_distance(double x, double period) {
  return std::fabs(std::remainder(x, period));
}

// Symmetric 3x3 Voigt matrix of a fourth-order plane tensor [MPa].
struct QuadTensor {
  double q11 = 0, q12 = 0, q16 = 0, q22 = 0, q26 = 0, q66 = 0;

  QuadTensor& operator+=(const QuadTensor& o) {
    q11 += o.q11; q12 += o.q12; q16 += o.q16;
    q22 += o.q22; q26 += o.q26; q66 += o.q66;
    return *this;
  }
  QuadTensor& operator-=(const QuadTensor& o) {
    q11 -= o.q11; q12 -= o.q12; q16 -= o.q16;
    q22 -= o.q22; q26 -= o.q26; q66 -= o.q66;
    return *this;
  }
  QuadTensor& operator*=(double s) {
    q11 *= s; q12 *= s; q16 *= s; q22 *= s; q26 *= s; q66 *= s;
    return *this;
  }
  friend QuadTensor operator+(QuadTensor a, const QuadTensor& b) { return a += b; }
  friend QuadTensor operator-(QuadTensor a, const QuadTensor& b) { return a -= b; }
  friend QuadTensor operator*(QuadTensor a, double s) { return a *= s; }
  friend QuadTensor operator*(double s, QuadTensor a) { return a *= s; }

  // Matrix Frobenius norm of the Voigt form (off-diagonals counted twice).
  double frobenius() const {
    return std::sqrt(q11 * q11 + q22 * q22 + q66 * q66 +
                     2.0 * (q12 * q12 + q16 * q16 + q26 * q26));
  }
  double max_abs() const {
    double m = std::fabs(q11);
    for (double v : {q12, q16, q22, q26, q66}) m = std::max(m, std::fabs(v));
    return m;
  }
};

// Symmetric 2x2 matrix (out-of-plane shear blocks) [MPa].
struct Mat2 {
  double m11 = 0, m12 = 0, m22 = 0;

  Mat2& operator+=(const Mat2& o) {
    m11 += o.m11; m12 += o.m12; m22 += o.m22;
    return *this;
  }
  Mat2& operator*=(double s) {
    m11 *= s; m12 *= s; m22 *= s;
    return *this;
  }
  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator*(Mat2 a, double s) { return a *= s; }
  friend Mat2 operator*(double s, Mat2 a) { return a *= s; }
  double frobenius() const {
    return std::sqrt(m11 * m11 + m22 * m22 + 2.0 * m12 * m12);
  }
};

// Polar parameters of a fourth-order plane tensor. R0, R1 >= 0; Phi0 in
// (-45, 45], Phi1 in (-90, 90] [deg]. When an anisotropic modulus vanishes
// the matching angle is undefined; it is set to 0 and flagged.
struct PolarQuad {
  double T0 = 0, T1 = 0;
  double R0 = 0, R1 = 0;
  double Phi0 = 0, Phi1 = 0;
  bool r0_degenerate = false;
  bool r1_degenerate = false;

  bool isotropic() const { return r0_degenerate && r1_degenerate; }
  // Kandil-Verchery modulus norm sqrt(T0^2 + 2 T1^2 + R0^2 + 4 R1^2).
  double modulus_norm() const {
    return std::sqrt(T0 * T0 + 2.0 * T1 * T1 + R0 * R0 + 4.0 * R1 * R1);
  }
};

// Polar parameters of a second-order symmetric plane tensor. R >= 0,
// Phi in (-90, 90] [deg].
struct PolarShear {
  double T = 0, R = 0, Phi = 0;
  bool degenerate = false;
};

// Relative threshold below which an anisotropic modulus is treated as zero.
inline constexpr double kDegenerateRel = 1e-9;

QuadTensor quad_from_polar(const PolarQuad& p, double rotation_deg = 0.0);
PolarQuad polar_from_quad(const QuadTensor& L);

Mat2 shear_from_polar(const PolarShear& p, double rotation_deg = 0.0);
PolarShear polar_from_shear(const Mat2& Z);

}  // namespace polarlam

#endif
