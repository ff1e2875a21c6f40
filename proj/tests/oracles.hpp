#ifndef POLARLAM_TESTS_ORACLES_HPP
#define POLARLAM_TESTS_ORACLES_HPP

// Test-only reference solvers, independent of the library's optimisation
// paths: an exhaustive stack enumerator for the recovery problem and a
// lattice enumeration with Dykstra-projection inner solves for the
// discrete ply-count problem (phi1 = 0 instances).

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "polarlam/discrete.hpp"
#include "polarlam/recovery.hpp"

namespace oracles {

// ---- exhaustive recovery over the orientation grid ----
struct ExhaustiveBest {
  double total = std::numeric_limits<double>::infinity();
  std::vector<int> orientations;
};

inline ExhaustiveBest exhaustive_recover(const polarlam::Subproblem& sub,
                                         const polarlam::PlyMaterial& m,
                                         int grid_step) {
  const int G = sub.scheme.independent_count();
  const int V = 180 / grid_step;
  std::vector<int> idx(G, 0), angles(G);
  ExhaustiveBest best;
  bool more = true;
  while (more) {
    for (int g = 0; g < G; ++g) angles[g] = -90 + grid_step * (idx[g] + 1);
    const auto stacks = polarlam::assemble_stacks(angles, sub.scheme);
    double total = 0.0;
    for (std::size_t p = 0; p < stacks.size(); ++p)
      total += polarlam::residuals(stacks[p], m, sub.targets[p]).total;
    if (total < best.total) {
      best.total = total;
      best.orientations = angles;
    }
    int g = 0;
    while (g < G && ++idx[g] == V) idx[g++] = 0;
    more = g < G;
  }
  return best;
}

// ---- Dykstra projection onto the inner feasible set (phi1 = 0) ----
//
// Variables x = (rho0K_0..rho0K_{P-1}, rho1_0..rho1_{P-1}); sets:
//   boxes, per-panel region {rho0K >= 2 rho1^2 - 1},
//   per-edge slabs |N_p v_p - N_q v_q| <= |N_p - N_q| on both fields.
// Returns the squared distance from the target once converged.

namespace detail {

// real roots of y^3 + p y + q = 0
inline std::vector<double> depressed_cubic_roots(double p, double q) {
  std::vector<double> roots;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s));
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double phi = std::acos(std::clamp(
        3.0 * q / (p * r == 0.0 ? 1e-300 : p * r), -1.0, 1.0));
    for (int k = 0; k < 3; ++k)
      roots.push_back(r * std::cos((phi - 2.0 * polarlam::kPi * k) / 3.0));
  }
  return roots;
}

// projection of (x0, y0) onto {x >= 2 y^2 - 1}
inline void project_parabola(double& x, double& y) {
  if (x >= 2.0 * y * y - 1.0) return;
  // minimize (2t^2-1-x)^2 + (t-y)^2 over the boundary point (2t^2-1, t)
  const double p = (1.0 - 4.0 * (1.0 + x)) / 8.0;
  const double q = -y / 8.0;
  double bt = 0.0, bd = std::numeric_limits<double>::infinity();
  for (double t : depressed_cubic_roots(p, q)) {
    const double zx = 2.0 * t * t - 1.0;
    const double d = (zx - x) * (zx - x) + (t - y) * (t - y);
    if (d < bd) {
      bd = d;
      bt = t;
    }
  }
  x = 2.0 * bt * bt - 1.0;
  y = bt;
}

}  // namespace detail

struct BruteInner {
  double objective = 0.0;  // squared distance of the rho block
  std::vector<double> x;   // projected point
};

inline BruteInner dykstra_inner(const std::vector<int>& N,
                                const std::vector<double>& t0,
                                const std::vector<double>& t1,
                                const std::vector<polarlam::Edge>& edges,
                                int max_sweeps = 50000, double tol = 1e-15) {
  const int P = static_cast<int>(N.size());
  const int n = 2 * P;
  std::vector<double> x(n);
  for (int j = 0; j < P; ++j) {
    x[j] = t0[j];
    x[P + j] = t1[j];
  }

  struct Set {
    int kind;  // 0 box rho0K, 1 box rho1, 2 parabola, 3 slab rho0K, 4 slab rho1
    int a = 0, b = 0;
  };
  std::vector<Set> sets;
  for (int j = 0; j < P; ++j) sets.push_back({0, j, 0});
  for (int j = 0; j < P; ++j) sets.push_back({1, j, 0});
  for (int j = 0; j < P; ++j) sets.push_back({2, j, 0});
  for (const polarlam::Edge& e : edges) {
    sets.push_back({3, e.p, e.q});
    sets.push_back({4, e.p, e.q});
  }

  auto project = [&](const Set& s, std::vector<double>& v) {
    switch (s.kind) {
      case 0:
        v[s.a] = std::clamp(v[s.a], -1.0, 1.0);
        break;
      case 1:
        v[P + s.a] = std::clamp(v[P + s.a], 0.0, 1.0);
        break;
      case 2:
        detail::project_parabola(v[s.a], v[P + s.a]);
        break;
      default: {
        const int off = s.kind == 3 ? 0 : P;
        const double ap = N[s.a], aq = -double(N[s.b]);
        const double c = std::fabs(double(N[s.a]) - double(N[s.b]));
        const double u = ap * v[off + s.a] + aq * v[off + s.b];
        if (std::fabs(u) <= c) break;
        const double target = u > 0 ? c : -c;
        const double scale = (u - target) / (ap * ap + aq * aq);
        v[off + s.a] -= scale * ap;
        v[off + s.b] -= scale * aq;
        break;
      }
    }
  };

  std::vector<std::vector<double>> corr(sets.size(), std::vector<double>(n, 0.0));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      std::vector<double> y = x;
      for (int i = 0; i < n; ++i) y[i] += corr[s][i];
      std::vector<double> z = y;
      project(sets[s], z);
      for (int i = 0; i < n; ++i) {
        corr[s][i] = y[i] - z[i];
        moved = std::max(moved, std::fabs(z[i] - x[i]));
        x[i] = z[i];
      }
    }
    if (moved < tol) break;
  }

  BruteInner out;
  out.x = x;
  for (int j = 0; j < P; ++j) {
    out.objective += (x[j] - t0[j]) * (x[j] - t0[j]);
    out.objective += (x[P + j] - t1[j]) * (x[P + j] - t1[j]);
  }
  return out;
}

struct BruteDiscrete {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<int> N;
};

// full lattice enumeration; the near-optimal assignments are re-projected
// with a tighter Dykstra pass
inline BruteDiscrete brute_discrete(const std::vector<polarlam::PanelVars>& xi_c,
                                    const std::vector<polarlam::Edge>& edges,
                                    int N_ref, int dN_min, double n0_lower = 0.2) {
  const int P = static_cast<int>(xi_c.size());
  const int lo = static_cast<int>(std::ceil(n0_lower * N_ref - 1e-9));
  const int hi = N_ref;
  std::vector<double> t0(P), t1(P);
  for (int j = 0; j < P; ++j) {
    t0[j] = xi_c[j].rho0K;
    t1[j] = xi_c[j].rho1;
  }

  BruteDiscrete best;
  std::vector<int> N(P, lo);
  bool more = true;
  while (more) {
    bool ok = true;
    for (const polarlam::Edge& e : edges) {
      const int d = std::abs(N[e.p] - N[e.q]);
      if (d != 0 && d < dN_min) ok = false;
    }
    if (ok) {
      double obj = 0.0;
      for (int j = 0; j < P; ++j) {
        const double d = double(N[j]) / N_ref - xi_c[j].n0;
        obj += d * d;
      }
      obj += dykstra_inner(N, t0, t1, edges, 4000, 1e-12).objective;
      if (obj < best.objective) {
        best.objective = obj;
        best.N = N;
      }
    }
    int g = 0;
    while (g < P && ++N[g] > hi) N[g++] = lo;
    more = g < P;
  }
  // polish the winner with a tight projection
  if (!best.N.empty()) {
    double obj = 0.0;
    for (int j = 0; j < P; ++j) {
      const double d = double(best.N[j]) / N_ref - xi_c[j].n0;
      obj += d * d;
    }
    obj += dykstra_inner(best.N, t0, t1, edges, 400000, 1e-16).objective;
    best.objective = obj;
  }
  return best;
}

}  // namespace oracles

#endif
