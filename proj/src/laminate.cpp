#include "polarlam/laminate.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace polarlam {

void StackingSequence::validate() const {
  for (int a : angles)
    if (a <= -90 || a > 90)
      throw std::invalid_argument("ply angle " + std::to_string(a) +
                                  " outside (-90, 90]");
}

StackingSequence StackingSequence::parse(std::string_view text) {
  StackingSequence s;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find('/', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view tok = text.substr(pos, next - pos);
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
    if (!tok.empty()) {
      int v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw std::invalid_argument("bad ply angle token '" + std::string(tok) +
                                    "' at offset " + std::to_string(pos));
      if (v == -90) v = 90;  // same ply, 180 deg period
      s.angles.push_back(v);
    }
    if (next == text.size()) break;
    pos = next + 1;
  }
  s.validate();
  return s;
}

std::string StackingSequence::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i) out += '/';
    out += std::to_string(angles[i]);
  }
  return out;
}

StackingCoeffs stacking_coefficients(int k, int N) {
  if (N < 1 || k < 1 || k > N)
    throw std::out_of_range("stacking_coefficients: k=" + std::to_string(k) +
                            " outside 1.." + std::to_string(N));
  const double kk = k, nn = N;
  StackingCoeffs c;
  c.b = 2.0 * kk - nn - 1.0;
  c.d = 12.0 * kk * (kk - nn - 1.0) + 4.0 + 3.0 * nn * (nn + 2.0);
  c.c = -2.0 * nn * nn - 12.0 * kk * (kk - nn - 1.0) - 4.0 - 6.0 * nn;
  return c;
}

LaminateHomog laminate_homogenized(const StackingSequence& s, const PlyMaterial& m) {
  return homogenize_polar(s, m.polar_Q, m.polar_Qhat, m.t_ply);
}

LaminateHomog homogenize_polar(const StackingSequence& s, const PolarQuad& quad,
                               const PolarShear& shear, double t_ply) {
  const int N = s.size();
  if (N == 0) throw std::invalid_argument("laminate_homogenized: empty stack");

  LaminateHomog L;
  L.N = N;
  L.h = N * t_ply;

  const double wA = 1.0 / N;
  const double wB = 1.0 / (double(N) * N);
  const double wD = 1.0 / (double(N) * N * N);

  // Pair ply k with its mirror N+1-k. b is antisymmetric and d symmetric
  // under the mirror, so summing each pair first makes A*, D*, H* and |B*|
  // independent of stack orientation down to the last bit.
  for (int k = 1; 2 * k <= N + 1; ++k) {
    const int km = N + 1 - k;
    const StackingCoeffs ck = stacking_coefficients(k, N);
    const QuadTensor Qk = quad_from_polar(quad, s.angles[k - 1]);
    const Mat2 Hk = shear_from_polar(shear, s.angles[k - 1]);
    if (km == k) {
      L.A += wA * Qk;
      L.B += (wB * ck.b) * Qk;  // b = 0 at the middle ply
      L.D += (wD * ck.d) * Qk;
      L.H += wA * Hk;
    } else {
      const QuadTensor Qm = quad_from_polar(quad, s.angles[km - 1]);
      const Mat2 Hm = shear_from_polar(shear, s.angles[km - 1]);
      L.A += wA * (Qk + Qm);
      L.B += (wB * ck.b) * (Qk - Qm);
      L.D += (wD * ck.d) * (Qk + Qm);
      L.H += wA * (Hk + Hm);
    }
  }
  L.C = L.A - L.D;

  L.polar_A = polar_from_quad(L.A);
  L.polar_B = polar_from_quad(L.B);
  L.polar_D = polar_from_quad(L.D);
  L.polar_C = polar_from_quad(L.C);
  L.polar_H = polar_from_shear(L.H);
  return L;
}

PanelVars panel_from_laminate(const LaminateHomog& L, const PlyMaterial& m,
                              const PanelExtractOptions& opt) {
  const int N_ref = opt.N_ref > 0 ? opt.N_ref : m.N_ref;
  const PolarQuad& pa = L.polar_A;

  PanelVars v;
  v.n0 = double(L.N) / N_ref;
  v.rho1 = pa.r1_degenerate ? 0.0 : pa.R1 / m.polar_Q.R1;
  v.phi1_degenerate = pa.r1_degenerate;

  const double rho0 = pa.r0_degenerate ? 0.0 : pa.R0 / m.polar_Q.R0;

  if (pa.r1_degenerate) {
    // Phi1 undefined: read the sign of (-1)^K from cos 4(Phi0A - 0).
    v.phi1 = 0.0;
    const double c = std::cos(deg2rad(4.0 * pa.Phi0));
    v.rho0K = (c >= 0.0 ? 1.0 : -1.0) * rho0;
    return v;
  }

  v.phi1 = pa.Phi1 / 90.0;
  const double offset = wrap_half_period(pa.Phi0 - pa.Phi1, 90.0);  // (-45, 45]
  const double d0 = std::fabs(offset);          // distance to K = 0
  const double d1 = std::fabs(45.0 - d0);       // distance to K = 1 (+-45)
  const int K = d0 <= d1 ? 0 : 1;
  if (!opt.unchecked && !pa.r0_degenerate) {
    const double dev = std::min(d0, d1);
    if (dev > opt.orthotropy_tol_deg) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "membrane not orthotropic: Phi0-Phi1 offset %.4f deg "
                    "deviates %.4f deg from K*45 (tol %.4f)",
                    offset, dev, opt.orthotropy_tol_deg);
      throw OrthotropyError(buf, offset);
    }
  }
  v.rho0K = (K == 0 ? 1.0 : -1.0) * rho0;
  return v;
}

}  // namespace polarlam
