#include "polarlam/criteria.hpp"

#include <cmath>
#include <stdexcept>

namespace polarlam {

FeasibilityValue g_feas(const PanelVars& p) {
  FeasibilityValue v;
  v.g = 2.0 * p.rho1 * p.rho1 - 1.0 - p.rho0K;
  v.d_rho0K = -1.0;
  v.d_rho1 = 4.0 * p.rho1;
  return v;
}

namespace {

// One blending component g = (Da)^2 + (Db)^2 - (Np - Nq)^2 where
// a = N rho cos(w phi1), b = N rho sin(w phi1) per panel and w is the
// angular frequency in radians per unit phi1 (2*pi for the 4Phi1 terms,
// pi for the 2Phi1 terms).
void blend_component(double Np, double rp, double phip, double Nq, double rq,
                     double phiq, double w, double N_ref, double& g,
                     std::array<double, 6>& grad) {
  const double cp = std::cos(w * phip), sp = std::sin(w * phip);
  const double cq = std::cos(w * phiq), sq = std::sin(w * phiq);
  const double da = Np * rp * cp - Nq * rq * cq;
  const double db = Np * rp * sp - Nq * rq * sq;
  const double dn = Np - Nq;
  g = da * da + db * db - dn * dn;
  grad[0] = 2.0 * N_ref * (da * rp * cp + db * rp * sp - dn);       // n0_p
  grad[1] = 2.0 * Np * (da * cp + db * sp);                         // rho_p
  grad[2] = 2.0 * w * Np * rp * (-da * sp + db * cp);               // phi1_p
  grad[3] = 2.0 * N_ref * (-da * rq * cq - db * rq * sq + dn);      // n0_q
  grad[4] = -2.0 * Nq * (da * cq + db * sq);                        // rho_q
  grad[5] = -2.0 * w * Nq * rq * (-da * sq + db * cq);              // phi1_q
}

}  // namespace

BlendingPair g_blend_pair(const PanelVars& p, const PanelVars& q, double N_ref) {
  const double Np = p.n0 * N_ref, Nq = q.n0 * N_ref;
  BlendingPair out;
  blend_component(Np, p.rho0K, p.phi1, Nq, q.rho0K, q.phi1, 2.0 * kPi, N_ref,
                  out.g0, out.grad0);
  blend_component(Np, p.rho1, p.phi1, Nq, q.rho1, q.phi1, kPi, N_ref, out.g1,
                  out.grad1);
  return out;
}

double blend_aggregate(std::span<const PanelVars> panels, std::span<const Edge> edges,
                       double N_ref) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Edge& e : edges) {
    if (e.p < 0 || e.q < 0 || e.p >= std::ssize(panels) || e.q >= std::ssize(panels))
      throw std::out_of_range("blend_aggregate: edge references unknown panel");
    const BlendingPair b = g_blend_pair(panels[e.p], panels[e.q], N_ref);
    worst = std::max({worst, b.g0, b.g1});
  }
  return worst;
}

double g_disp(double u, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("g_disp: semi-span must be > 0");
  return u / (0.15 * b) - 1.0;
}

double g_buck(double lambda, double safety) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("g_buck: buckling factor must be > 0");
  return 1.0 - lambda / safety;
}

LaminateStrength laminate_strength_matrix(const StackingSequence& s,
                                          const PlyMaterial& m) {
  if (m.polar_G.T0 == 0.0 && m.polar_G.T1 == 0.0)
    throw MaterialError(m.name + ": strength polar parameters missing");
  const LaminateHomog L = homogenize_polar(s, m.polar_G, m.polar_Ghat, m.t_ply);
  LaminateStrength g;
  g.A = L.A;
  g.B = L.B;
  g.D = L.D;
  g.C = L.C;
  g.H = L.H;
  g.h = L.h;
  g.N = L.N;
  return g;
}

namespace {

void put_block3(Mat8& M, int r, int c, const QuadTensor& q, double scale) {
  const double b[3][3] = {{q.q11, q.q12, q.q16},
                          {q.q12, q.q22, q.q26},
                          {q.q16, q.q26, q.q66}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      M[r + i][c + j] = scale * b[i][j];
      M[c + j][r + i] = scale * b[i][j];
    }
}

}  // namespace

Mat8 assemble_strength(const LaminateStrength& g) {
  Mat8 M{};
  const double h = g.h;
  put_block3(M, 0, 0, g.A, h);
  put_block3(M, 0, 3, g.B, h * h / 2.0);
  put_block3(M, 3, 3, g.D, h * h * h / 12.0);
  M[6][6] = h * g.H.m11;
  M[6][7] = M[7][6] = h * g.H.m12;
  M[7][7] = h * g.H.m22;
  return M;
}

TsaiHillValue g_tsai_hill(std::span<const GenStrain> eps, std::span<const Mat8> G,
                          std::span<const double> h, double safety) {
  if (eps.empty()) throw std::invalid_argument("g_tsai_hill: no elements");
  if (eps.size() != G.size() || eps.size() != h.size())
    throw std::invalid_argument("g_tsai_hill: mismatched element spans");
  TsaiHillValue out{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t e = 0; e < eps.size(); ++e) {
    double q = 0.0;
    for (int i = 0; i < 8; ++i) {
      double row = 0.0;
      for (int j = 0; j < 8; ++j) row += G[e][i][j] * eps[e][j];
      q += eps[e][i] * row;
    }
    const double fi = q / h[e];
    if (fi > out.g) {
      out.g = fi;
      out.argmax = e;
    }
  }
  out.g = safety * out.g - 1.0;
  return out;
}

MassValue mass_objective(std::span<const double> n0, std::span<const double> areas,
                         double m0, double m_ref, const PlyMaterial& m) {
  if (!(m_ref > 0.0)) throw std::invalid_argument("mass_objective: m_ref <= 0");
  if (n0.size() != areas.size())
    throw std::invalid_argument("mass_objective: mismatched panel spans");
  const double w = m.N_ref * m.t_ply * m.rho_ply;
  MassValue out;
  double sum = 0.0;
  out.d_n0.resize(n0.size());
  for (std::size_t j = 0; j < n0.size(); ++j) {
    if (areas[j] < 0.0) throw std::invalid_argument("mass_objective: negative area");
    sum += areas[j] * n0[j];
    out.d_n0[j] = 2.0 * w * areas[j] / m_ref;
  }
  out.value = 2.0 / m_ref * (m0 + w * sum);
  return out;
}

double delta_n_gap(int N_p, int N_q, int dN_min, int N_ref) {
  const double d = std::fabs(double(N_p - N_q)) / N_ref;
  return d * (double(dN_min) / N_ref - d);
}

}  // namespace polarlam
