#include "polarlam/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace polarlam {

double round_up_plies(double n0, int N_ref) {
  const double v = n0 * N_ref;
  const double snapped = std::ceil(v - 1e-9 * std::max(1.0, std::fabs(v)));
  return snapped / N_ref;
}

double discrete_objective(std::span<const PanelVars> a, std::span<const PanelVars> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("discrete_objective: panel count mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double dn = a[j].n0 - b[j].n0;
    const double d0 = a[j].rho0K - b[j].rho0K;
    const double d1 = a[j].rho1 - b[j].rho1;
    s += dn * dn + d0 * d0 + d1 * d1;
  }
  return s;
}

void DiscreteConfig::validate() const {
  if (dN_min < 1) throw std::invalid_argument("discrete: dN_min must be >= 1");
  if (budget < 1) throw std::invalid_argument("discrete: budget must be >= 1");
  if (N_ref < 1) throw std::invalid_argument("discrete: N_ref must be >= 1");
  if (!(n0_lower > 0.0) || n0_lower > 1.0)
    throw std::invalid_argument("discrete: n0 lower bound outside (0, 1]");
}

namespace {

// ----------------------------------------------------------------------
// Inner convex subproblem: fixed integer N per panel, fixed phi1, solve
//   min sum_j (rho0K_j - a_j)^2 + (rho1_j - b_j)^2
//   s.t. 2 rho1_j^2 - 1 - rho0K_j <= 0, boxes, blending bands per edge.
// Equal-count edges force linear ties between the endpoint variables and
// are eliminated up front (signed union-find); the rest is solved with a
// log-barrier Newton method from a strictly feasible start.
// ----------------------------------------------------------------------

struct SignedUF {
  std::vector<int> parent;
  std::vector<double> sign;  // sign relative to parent

  explicit SignedUF(int n) : parent(n), sign(n, 1.0) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  std::pair<int, double> find(int i) {
    if (parent[i] == i) return {i, 1.0};
    auto [r, s] = find(parent[i]);
    parent[i] = r;
    sign[i] *= s;
    return {r, sign[i]};
  }
  // enforce x_i = s * x_j; returns false when this forces both to zero
  bool unite(int i, int j, double s) {
    auto [ri, si] = find(i);
    auto [rj, sj] = find(j);
    if (ri == rj) return si == sj * s;
    parent[ri] = rj;
    sign[ri] = s * sj / si;
    return true;
  }
};

struct QuadConstraint {
  // g(x) = sum_k (lin_k . x)^2 + aff . x + cst <= 0, each lin_k affine-free
  struct Lin {
    std::vector<std::pair<int, double>> c;
    double eval(std::span<const double> x) const {
      double v = 0.0;
      for (auto [i, w] : c) v += w * x[i];
      return v;
    }
  };
  std::vector<Lin> quad;
  std::vector<std::pair<int, double>> aff;
  double cst = 0.0;

  double eval(std::span<const double> x) const {
    double v = cst;
    for (const Lin& l : quad) {
      const double u = l.eval(x);
      v += u * u;
    }
    for (auto [i, w] : aff) v += w * x[i];
    return v;
  }
};

struct InnerProblem {
  int nvars = 0;
  std::vector<double> cnt, lin;     // f = sum cnt_i x_i^2 - 2 lin_i x_i + fconst
  double fconst = 0.0;
  std::vector<QuadConstraint> cons;
  // per original panel/field: (var index or -1 for fixed zero, sign)
  std::vector<std::pair<int, double>> map0, map1;
  std::vector<double> start;
};

struct InnerSolution {
  std::vector<double> rho0K, rho1;
  double objective = 0.0;  // rho-part only
};

class BarrierSolver {
 public:
  explicit BarrierSolver(const InnerProblem& p) : p_(p), n_(p.nvars) {}

  std::vector<double> solve() {
    std::vector<double> x = p_.start;
    if (n_ == 0) return x;
    const int m = static_cast<int>(p_.cons.size());
    if (m == 0) {
      for (int i = 0; i < n_; ++i)
        x[i] = p_.cnt[i] > 0 ? p_.lin[i] / p_.cnt[i] : 0.0;
      return x;
    }
    double t = 1.0;
    while (m / t > 1e-11) {
      newton(x, t);
      t *= 20.0;
    }
    return x;
  }

 private:
  double objective(std::span<const double> x) const {
    double f = p_.fconst;
    for (int i = 0; i < n_; ++i)
      f += p_.cnt[i] * x[i] * x[i] - 2.0 * p_.lin[i] * x[i];
    return f;
  }

  bool feasible(std::span<const double> x) const {
    for (const QuadConstraint& c : p_.cons)
      if (c.eval(x) >= 0.0) return false;
    return true;
  }

  double merit(std::span<const double> x, double t) const {
    double v = objective(x);
    for (const QuadConstraint& c : p_.cons) v -= std::log(-c.eval(x)) / t;
    return v;
  }

  void newton(std::vector<double>& x, double t) {
    std::vector<double> g(n_), H(n_ * n_), d(n_), xn(n_), cg(n_);
    for (int iter = 0; iter < 100; ++iter) {
      std::fill(g.begin(), g.end(), 0.0);
      std::fill(H.begin(), H.end(), 0.0);
      for (int i = 0; i < n_; ++i) {
        g[i] = 2.0 * p_.cnt[i] * x[i] - 2.0 * p_.lin[i];
        H[i * n_ + i] = 2.0 * p_.cnt[i];
      }
      for (const QuadConstraint& c : p_.cons) {
        const double gv = c.eval(x);
        const double inv = -1.0 / gv;  // 1/(-g) > 0
        std::fill(cg.begin(), cg.end(), 0.0);
        for (const auto& l : c.quad) {
          const double u = l.eval(x);
          for (auto [i, w] : l.c) {
            cg[i] += 2.0 * u * w;
            // curvature of the quadratic part
            for (auto [j, w2] : l.c) H[i * n_ + j] += 2.0 * w * w2 * inv / t;
          }
        }
        for (auto [i, w] : c.aff) cg[i] += w;
        for (int i = 0; i < n_; ++i) {
          if (cg[i] == 0.0) continue;
          g[i] += cg[i] * inv / t;
          for (int j = 0; j < n_; ++j)
            if (cg[j] != 0.0) H[i * n_ + j] += cg[i] * cg[j] * inv * inv / t;
        }
      }
      if (!cholesky_solve(H, g, d)) break;
      double lambda2 = 0.0;
      for (int i = 0; i < n_; ++i) lambda2 += g[i] * d[i];
      if (lambda2 * 0.5 < 1e-14) break;

      const double m0 = merit(x, t);
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-14) {
        for (int i = 0; i < n_; ++i) xn[i] = x[i] - alpha * d[i];
        if (feasible(xn) && merit(xn, t) <= m0 - 0.25 * alpha * lambda2) {
          x = xn;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
  }

  // solve H d = g, H symmetric positive definite (dense, small)
  bool cholesky_solve(std::vector<double>& H, const std::vector<double>& g,
                      std::vector<double>& d) const {
    for (int i = 0; i < n_; ++i) H[i * n_ + i] += 1e-12;
    for (int j = 0; j < n_; ++j) {
      double diag = H[j * n_ + j];
      for (int k = 0; k < j; ++k) diag -= H[j * n_ + k] * H[j * n_ + k];
      if (diag <= 0.0) return false;
      const double L = std::sqrt(diag);
      H[j * n_ + j] = L;
      for (int i = j + 1; i < n_; ++i) {
        double v = H[i * n_ + j];
        for (int k = 0; k < j; ++k) v -= H[i * n_ + k] * H[j * n_ + k];
        H[i * n_ + j] = v / L;
      }
    }
    d = g;
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < i; ++k) d[i] -= H[i * n_ + k] * d[k];
      d[i] /= H[i * n_ + i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      for (int k = i + 1; k < n_; ++k) d[i] -= H[k * n_ + i] * d[k];
      d[i] /= H[i * n_ + i];
    }
    return true;
  }

  const InnerProblem& p_;
  int n_;
};

struct PanelData {
  double a, b;    // rho0K, rho1 targets
  double c4, s4;  // cos/sin 4 Phi1
  double c2, s2;
};

InnerProblem build_inner(std::span<const int> N, std::span<const PanelData> pd,
                         std::span<const Edge> edges) {
  const int P = static_cast<int>(pd.size());
  // variable slots: 2j = rho0K_j, 2j+1 = rho1_j
  SignedUF uf(2 * P);
  std::vector<char> zero(2 * P, 0);

  auto tie_or_zero = [&](int vp, int vq, double cp, double sp, double cq, double sq,
                         bool nonneg) {
    // N (cp, sp) x_p = N (cq, sq) x_q with unit direction vectors
    const double dot = cp * cq + sp * sq;
    if (std::fabs(dot) > 1.0 - 1e-12) {
      const double s = dot > 0 ? 1.0 : -1.0;
      if ((nonneg && s < 0) || !uf.unite(vp, vq, s)) {
        zero[vp] = zero[vq] = 1;
      }
    } else {
      zero[vp] = zero[vq] = 1;
    }
  };

  for (const Edge& e : edges) {
    if (N[e.p] != N[e.q] || e.p == e.q) continue;
    tie_or_zero(2 * e.p, 2 * e.q, pd[e.p].c4, pd[e.p].s4, pd[e.q].c4, pd[e.q].s4, false);
    tie_or_zero(2 * e.p + 1, 2 * e.q + 1, pd[e.p].c2, pd[e.p].s2, pd[e.q].c2,
                pd[e.q].s2, true);
  }
  // propagate forced zeros to whole classes
  std::vector<char> root_zero(2 * P, 0);
  for (int v = 0; v < 2 * P; ++v)
    if (zero[v]) root_zero[uf.find(v).first] = 1;

  InnerProblem ip;
  std::vector<int> var_of(2 * P, -1);
  auto resolve = [&](int v) -> std::pair<int, double> {
    auto [r, s] = uf.find(v);
    if (root_zero[r]) return {-1, 0.0};
    if (var_of[r] < 0) {
      var_of[r] = ip.nvars++;
      ip.cnt.push_back(0.0);
      ip.lin.push_back(0.0);
    }
    return {var_of[r], s};
  };

  ip.map0.resize(P);
  ip.map1.resize(P);
  for (int j = 0; j < P; ++j) {
    ip.map0[j] = resolve(2 * j);
    ip.map1[j] = resolve(2 * j + 1);
    for (auto [mv, tgt] : {std::pair{ip.map0[j], pd[j].a}, {ip.map1[j], pd[j].b}}) {
      auto [idx, s] = mv;
      if (idx < 0) {
        ip.fconst += tgt * tgt;
      } else {
        ip.cnt[idx] += 1.0;
        ip.lin[idx] += s * tgt;
        ip.fconst += tgt * tgt;
      }
    }
  }
  // f = sum cnt x^2 - 2 lin x + fconst after expanding (s x - tgt)^2

  // boxes: rho0K in [-1, 1], rho1 in [0, 1] (sign-adjusted per class member)
  std::vector<double> lo(ip.nvars, -std::numeric_limits<double>::infinity());
  std::vector<double> hi(ip.nvars, std::numeric_limits<double>::infinity());
  auto tighten = [&](std::pair<int, double> mv, double l, double h) {
    auto [idx, s] = mv;
    if (idx < 0) return;
    if (s < 0) {
      const double t = l;
      l = -h;
      h = -t;
    }
    lo[idx] = std::max(lo[idx], l);
    hi[idx] = std::min(hi[idx], h);
  };
  for (int j = 0; j < P; ++j) {
    tighten(ip.map0[j], -1.0, 1.0);
    tighten(ip.map1[j], 0.0, 1.0);
  }
  for (int i = 0; i < ip.nvars; ++i) {
    QuadConstraint up;  // x_i - hi <= 0
    up.aff = {{i, 1.0}};
    up.cst = -hi[i];
    ip.cons.push_back(up);
    QuadConstraint dn;  // lo - x_i <= 0
    dn.aff = {{i, -1.0}};
    dn.cst = lo[i];
    ip.cons.push_back(dn);
  }

  // feasibility 2 rho1^2 - rho0K - 1 <= 0 per panel
  for (int j = 0; j < P; ++j) {
    QuadConstraint c;
    c.cst = -1.0;
    auto [i1, s1] = ip.map1[j];
    if (i1 >= 0) {
      QuadConstraint::Lin l;
      l.c = {{i1, std::sqrt(2.0)}};  // (sqrt2 * x)^2 = 2 x^2, sign irrelevant
      c.quad.push_back(l);
    }
    auto [i0, s0] = ip.map0[j];
    if (i0 >= 0) c.aff.push_back({i0, -s0});
    if (i0 < 0 && i1 < 0) continue;  // constant -1
    ip.cons.push_back(c);
  }

  // blending bands per edge with distinct counts
  for (const Edge& e : edges) {
    const double dn = double(N[e.p]) - double(N[e.q]);
    if (dn == 0.0 || e.p == e.q) continue;
    auto band = [&](std::pair<int, double> mp, std::pair<int, double> mq, double cp,
                    double sp, double cq, double sq) {
      QuadConstraint c;
      c.cst = -dn * dn;
      QuadConstraint::Lin u, v;
      auto add = [&](QuadConstraint::Lin& l, std::pair<int, double> mv, double w) {
        auto [idx, s] = mv;
        if (idx < 0 || w == 0.0) return;
        for (auto& [i2, w2] : l.c)
          if (i2 == idx) {
            w2 += s * w;
            return;
          }
        l.c.push_back({idx, s * w});
      };
      add(u, mp, N[e.p] * cp);
      add(u, mq, -N[e.q] * cq);
      add(v, mp, N[e.p] * sp);
      add(v, mq, -N[e.q] * sq);
      if (!u.c.empty()) c.quad.push_back(u);
      if (!v.c.empty()) c.quad.push_back(v);
      if (!c.quad.empty()) ip.cons.push_back(c);
    };
    band(ip.map0[e.p], ip.map0[e.q], pd[e.p].c4, pd[e.p].s4, pd[e.q].c4, pd[e.q].s4);
    band(ip.map1[e.p], ip.map1[e.q], pd[e.p].c2, pd[e.p].s2, pd[e.q].c2, pd[e.q].s2);
  }

  // strictly feasible start: rho0K classes at 0, rho1 classes at a small
  // eps inside every blending band
  double eps = 0.25;
  for (const Edge& e : edges) {
    const double dn = std::fabs(double(N[e.p]) - double(N[e.q]));
    if (dn == 0.0) continue;
    eps = std::min(eps, 0.25 * dn / (N[e.p] + N[e.q]));
  }
  eps = std::max(eps, 1e-7);
  ip.start.assign(ip.nvars, 0.0);
  for (int j = 0; j < P; ++j) {
    auto [i1, s1] = ip.map1[j];
    if (i1 >= 0) ip.start[i1] = s1 * eps;
  }
  return ip;
}

InnerSolution solve_inner(std::span<const int> N, std::span<const PanelData> pd,
                          std::span<const Edge> edges) {
  const int P = static_cast<int>(pd.size());
  InnerProblem ip = build_inner(N, pd, edges);
  BarrierSolver solver(ip);
  const std::vector<double> x = solver.solve();

  InnerSolution sol;
  sol.rho0K.resize(P);
  sol.rho1.resize(P);
  for (int j = 0; j < P; ++j) {
    auto [i0, s0] = ip.map0[j];
    auto [i1, s1] = ip.map1[j];
    sol.rho0K[j] = i0 < 0 ? 0.0 : s0 * x[i0];
    sol.rho1[j] = i1 < 0 ? 0.0 : s1 * x[i1];
    const double d0 = sol.rho0K[j] - pd[j].a;
    const double d1 = sol.rho1[j] - pd[j].b;
    sol.objective += d0 * d0 + d1 * d1;
  }
  return sol;
}

}  // namespace

DiscreteResult solve_discrete(std::span<const PanelVars> xi_c,
                              std::span<const Edge> edges, const DiscreteConfig& cfg) {
  cfg.validate();
  const int P = static_cast<int>(xi_c.size());
  if (P == 0) throw std::invalid_argument("solve_discrete: no panels");
  for (const Edge& e : edges)
    if (e.p < 0 || e.q < 0 || e.p >= P || e.q >= P)
      throw std::out_of_range("solve_discrete: edge references unknown panel");

  std::vector<PanelData> pd(P);
  for (int j = 0; j < P; ++j) {
    pd[j].a = xi_c[j].rho0K;
    pd[j].b = xi_c[j].rho1;
    pd[j].c4 = std::cos(2.0 * kPi * xi_c[j].phi1);
    pd[j].s4 = std::sin(2.0 * kPi * xi_c[j].phi1);
    pd[j].c2 = std::cos(kPi * xi_c[j].phi1);
    pd[j].s2 = std::sin(kPi * xi_c[j].phi1);
  }

  const int N_lo = static_cast<int>(std::ceil(cfg.n0_lower * cfg.N_ref - 1e-9));
  const int N_hi = cfg.N_ref;

  auto gap_violation = [&](std::span<const int> N) {
    double v = 0.0;
    for (const Edge& e : edges)
      v += std::max(0.0, delta_n_gap(N[e.p], N[e.q], cfg.dN_min, cfg.N_ref));
    return v;
  };
  auto n0_cost = [&](std::span<const int> N) {
    double s = 0.0;
    for (int j = 0; j < P; ++j) {
      const double d = double(N[j]) / cfg.N_ref - xi_c[j].n0;
      s += d * d;
    }
    return s;
  };

  struct Score {
    double violation, objective;
    bool operator<(const Score& o) const {
      if (violation != o.violation) return violation < o.violation;
      return objective < o.objective;
    }
  };

  long evals = 0;
  std::map<std::vector<int>, Score> memo;
  std::vector<int> bestN;
  Score best{std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
  InnerSolution best_sol;

  auto evaluate = [&](const std::vector<int>& N) -> bool {
    if (evals >= cfg.budget) return false;
    auto it = memo.find(N);
    if (it != memo.end()) return true;
    ++evals;
    Score sc{gap_violation(N), std::numeric_limits<double>::infinity()};
    InnerSolution sol;
    if (sc.violation == 0.0) {
      sol = solve_inner(N, pd, edges);
      sc.objective = n0_cost(N) + sol.objective;
    }
    memo.emplace(N, sc);
    if (sc < best) {
      best = sc;
      bestN = N;
      best_sol = std::move(sol);
    }
    return true;
  };

  std::vector<int> start(P);
  for (int j = 0; j < P; ++j) {
    const int n = static_cast<int>(std::lround(round_up_plies(xi_c[j].n0, cfg.N_ref) *
                                               cfg.N_ref));
    start[j] = std::clamp(n, N_lo, N_hi);
  }
  evaluate(start);

  double lattice = 1.0;
  for (int j = 0; j < P; ++j) lattice *= N_hi - N_lo + 1;
  const bool exhaustive = lattice <= double(std::min(cfg.budget, cfg.exhaustive_cap));

  if (exhaustive) {
    std::vector<int> N(P, N_lo);
    bool more = true;
    while (more && evals < cfg.budget) {
      evaluate(N);
      int j = 0;
      while (j < P && ++N[j] > N_hi) N[j++] = N_lo;
      more = j < P;
    }
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::vector<int> cur = start;
    Score cur_sc = memo.at(cur);
    int since_accept = 0;
    while (evals < cfg.budget) {
      std::vector<int> cand = cur;
      const int j = static_cast<int>(rng() % P);
      switch (rng() % 4) {
        case 0: {  // small integer move
          int d = 1 + static_cast<int>(rng() % cfg.neighborhood_radius);
          if (rng() & 1) d = -d;
          cand[j] = std::clamp(cand[j] + d, N_lo, N_hi);
          break;
        }
        case 1: {  // jump by the minimum admissible drop
          int d = cfg.dN_min;
          if (rng() & 1) d = -d;
          cand[j] = std::clamp(cand[j] + d, N_lo, N_hi);
          break;
        }
        case 2: {  // snap to a neighbor's count
          if (!edges.empty()) {
            const Edge& e = edges[rng() % edges.size()];
            if (rng() & 1)
              cand[e.p] = cand[e.q];
            else
              cand[e.q] = cand[e.p];
          }
          break;
        }
        default: {  // re-round one panel from scratch
          cand[j] = std::clamp(
              static_cast<int>(std::lround(round_up_plies(xi_c[j].n0, cfg.N_ref) *
                                           cfg.N_ref)) +
                  static_cast<int>(rng() % (2 * cfg.dN_min + 1)) - cfg.dN_min,
              N_lo, N_hi);
          break;
        }
      }
      if (cand == cur) continue;
      if (!evaluate(cand)) break;
      const Score sc = memo.at(cand);
      if (sc < cur_sc) {
        cur = cand;
        cur_sc = sc;
        since_accept = 0;
      } else if (++since_accept > 200) {
        // restart from a perturbed best-so-far
        cur = bestN;
        for (int r = 0; r < 3; ++r) {
          const int k = static_cast<int>(rng() % P);
          int d = 1 + static_cast<int>(rng() % cfg.neighborhood_radius);
          if (rng() & 1) d = -d;
          cur[k] = std::clamp(cur[k] + d, N_lo, N_hi);
        }
        if (memo.count(cur)) {
          cur_sc = memo.at(cur);
        } else if (evaluate(cur)) {
          cur_sc = memo.at(cur);
        } else {
          break;
        }
        since_accept = 0;
      }
    }
  }

  // final answer: recompute the inner solution when the best was infeasible
  DiscreteResult out;
  out.evaluations = evals;
  out.exhaustive = exhaustive;
  if (bestN.empty()) bestN = start;
  if (best.violation > 0.0) {
    best_sol = solve_inner(bestN, pd, edges);
  }

  out.panels.resize(P);
  std::vector<PanelVars> xd(P);
  for (int j = 0; j < P; ++j) {
    out.panels[j].N = bestN[j];
    out.panels[j].n0d = double(bestN[j]) / cfg.N_ref;
    out.panels[j].rho0K = best_sol.rho0K[j];
    out.panels[j].rho1 = best_sol.rho1[j];
    out.panels[j].phi1 = xi_c[j].phi1;
    xd[j] = PanelVars{out.panels[j].n0d, out.panels[j].rho0K, out.panels[j].rho1,
                      out.panels[j].phi1, false};
  }
  out.objective = discrete_objective(xd, xi_c);

  out.constraints.max_feas = -std::numeric_limits<double>::infinity();
  for (const PanelVars& p : xd)
    out.constraints.max_feas = std::max(out.constraints.max_feas, g_feas(p).g);
  out.constraints.max_blend = blend_aggregate(xd, edges, cfg.N_ref);
  out.constraints.max_gap = -std::numeric_limits<double>::infinity();
  for (const Edge& e : edges)
    out.constraints.max_gap =
        std::max(out.constraints.max_gap,
                 delta_n_gap(bestN[e.p], bestN[e.q], cfg.dN_min, cfg.N_ref));
  out.feasible = out.constraints.max_feas <= cfg.constraint_tol &&
                 (edges.empty() || (out.constraints.max_blend <= cfg.constraint_tol &&
                                    out.constraints.max_gap <= cfg.constraint_tol));
  return out;
}

}  // namespace polarlam
