#include "polarlam/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace polarlam {

TargetPolar TargetPolar::from_signed(double rho0K, double rho1, double phi1, int N) {
  auto [K, rho0] = split_target(rho0K);
  return TargetPolar{K, rho0, rho1, phi1, N};
}

std::pair<int, double> split_target(double rho0K) {
  const int K = rho0K >= 0.0 ? 0 : 1;
  return {K, std::fabs(rho0K)};
}

namespace {

double tensor_norm(const QuadTensor& q, TensorNormKind kind) {
  if (kind == TensorNormKind::frobenius) return q.frobenius();
  return polar_from_quad(q).modulus_norm();
}

ResidualBreakdown residual_core(const QuadTensor& A, const QuadTensor& B,
                                const QuadTensor& C, const PlyMaterial& m,
                                const TargetPolar& t, const ResidualOptions& opt) {
  ResidualBreakdown out;
  out.norm_scale = m.polar_Q.modulus_norm();
  out.r[0] = tensor_norm(B, opt.norm) / out.norm_scale;
  out.r[1] = tensor_norm(C, opt.norm) / out.norm_scale;

  const PolarQuad pa = polar_from_quad(A);
  const double rho0 = pa.r0_degenerate ? 0.0 : pa.R0 / m.polar_Q.R0;
  const double rho1 = pa.r1_degenerate ? 0.0 : pa.R1 / m.polar_Q.R1;
  const double phi0 = pa.Phi0 / 90.0;
  const double phi1 = pa.Phi1 / 90.0;

  // Both polar angles live on circles (Phi0: 90 deg, Phi1: 180 deg), so the
  // angle residuals are circular distances with period 2 in the
  // dimensionless variables. Degenerate moduli leave the matching angle
  // undefined and its residual is dropped.
  out.phi1_degenerate = pa.r1_degenerate;
  if (pa.r1_degenerate) {
    out.r[5] = 0.0;
    out.r[2] = pa.r0_degenerate ? 0.0 : circular_distance(2.0 * phi0 - t.K, 2.0);
  } else {
    out.r[5] = circular_distance(phi1 - t.phi1, 2.0);
    out.r[2] =
        pa.r0_degenerate ? 0.0 : circular_distance(2.0 * (phi0 - phi1) - t.K, 2.0);
  }
  out.r[3] = std::fabs(rho0 - t.rho0);
  out.r[4] = std::fabs(rho1 - t.rho1);

  out.total = 0.0;
  for (double ri : out.r) out.total += ri * ri;
  return out;
}

}  // namespace

ResidualBreakdown residuals(const LaminateHomog& L, const PlyMaterial& m,
                            const TargetPolar& t, const ResidualOptions& opt) {
  return residual_core(L.A, L.B, L.C, m, t, opt);
}

ResidualBreakdown residuals(const StackingSequence& s, const PlyMaterial& m,
                            const TargetPolar& t, const ResidualOptions& opt) {
  return residuals(laminate_homogenized(s, m), m, t, opt);
}

BlendWitness is_blended(const StackingSequence& parent, const StackingSequence& thinner,
                        BlendMode mode) {
  BlendWitness w;
  const int np = parent.size(), nq = thinner.size();
  if (nq > np) return w;

  if (mode == BlendMode::general) {
    w.ply_map.reserve(nq);
    int j = 0;
    for (int i = 0; i < np && j < nq; ++i) {
      if (parent.angles[i] == thinner.angles[j]) {
        w.ply_map.push_back(i);
        ++j;
      }
    }
    w.blended = j == nq;
    if (!w.blended) w.ply_map.clear();
    return w;
  }

  // scheme mode: thinner = shared leading block + contiguous suffix of parent
  int prefix = 0;
  while (prefix < nq && parent.angles[prefix] == thinner.angles[prefix]) ++prefix;
  int suffix = 0;
  while (suffix < nq && parent.angles[np - 1 - suffix] == thinner.angles[nq - 1 - suffix])
    ++suffix;
  if (prefix + suffix < nq) return w;
  const int c = std::min(prefix, nq);  // largest split, identity map when equal
  w.blended = true;
  w.ply_map.resize(nq);
  for (int i = 0; i < nq; ++i) w.ply_map[i] = i < c ? i : np - nq + i;
  return w;
}

int BlendingScheme::own_count(int i) const {
  const SchemePanel& p = panels[i];
  return p.base < 0 ? p.N - covering : p.N - panels[p.base].N;
}

int BlendingScheme::independent_count() const {
  int n = covering;
  for (int i = 0; i < std::ssize(panels); ++i) n += own_count(i);
  return n;
}

void BlendingScheme::validate() const {
  if (covering < 0) throw std::invalid_argument("scheme: negative covering count");
  const int P = static_cast<int>(panels.size());
  for (int i = 0; i < P; ++i) {
    const SchemePanel& p = panels[i];
    if (p.base >= P || p.base == i)
      throw std::invalid_argument("scheme: bad base index for panel " + p.id);
    if (p.N < covering)
      throw std::invalid_argument("scheme: panel " + p.id + " thinner than covering");
    if (own_count(i) < 0)
      throw std::invalid_argument("scheme: panel " + p.id +
                                  " thinner than its base panel");
    // walk the base chain; it must terminate
    int steps = 0, j = i;
    while (panels[j].base >= 0) {
      j = panels[j].base;
      if (++steps > P) throw std::invalid_argument("scheme: base cycle at " + p.id);
    }
  }
}

namespace {

// Gene index layout: [0, covering) shared slots, then each panel's own
// block in panel order. A panel's gene list is covering + own + base tail.
struct GeneLayout {
  std::vector<std::vector<int>> per_panel;  // gene index per ply position
  int total = 0;

  explicit GeneLayout(const BlendingScheme& s) {
    s.validate();
    const int P = static_cast<int>(s.panels.size());
    std::vector<int> own_start(P);
    int next = s.covering;
    for (int i = 0; i < P; ++i) {
      own_start[i] = next;
      next += s.own_count(i);
    }
    total = next;

    std::vector<std::vector<int>> tails(P);
    std::vector<char> done(P, 0);
    auto build = [&](auto&& self, int i) -> const std::vector<int>& {
      if (!done[i]) {
        std::vector<int> t;
        for (int g = 0; g < s.own_count(i); ++g) t.push_back(own_start[i] + g);
        if (s.panels[i].base >= 0) {
          const std::vector<int>& bt = self(self, s.panels[i].base);
          t.insert(t.end(), bt.begin(), bt.end());
        }
        tails[i] = std::move(t);
        done[i] = 1;
      }
      return tails[i];
    };
    per_panel.resize(P);
    for (int i = 0; i < P; ++i) {
      std::vector<int> ids;
      ids.reserve(s.panels[i].N);
      for (int g = 0; g < s.covering; ++g) ids.push_back(g);
      const std::vector<int>& t = build(build, i);
      ids.insert(ids.end(), t.begin(), t.end());
      per_panel[i] = std::move(ids);
    }
  }
};

}  // namespace

std::vector<StackingSequence> assemble_stacks(std::span<const int> orientations,
                                              const BlendingScheme& scheme) {
  GeneLayout layout(scheme);
  if (std::ssize(orientations) != layout.total)
    throw std::invalid_argument(
        "assemble_stacks: expected " + std::to_string(layout.total) +
        " orientations, got " + std::to_string(orientations.size()));
  std::vector<StackingSequence> out;
  out.reserve(scheme.panels.size());
  for (const std::vector<int>& ids : layout.per_panel) {
    StackingSequence s;
    s.angles.reserve(ids.size());
    for (int g : ids) s.angles.push_back(orientations[g]);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

// Residual-sum evaluator over the gene vector, with the per-angle ply
// tensors cached on the grid. Accumulation mirrors homogenize_polar
// (pairwise from both stack ends), so the reported breakdowns are bitwise
// those of residuals().
class FamilyEvaluator {
 public:
  FamilyEvaluator(const Subproblem& sub, const PlyMaterial& m, int grid_step,
                  const ResidualOptions& opt)
      : sub_(sub), mat_(m), opt_(opt), layout_(sub.scheme) {
    nvals_ = 180 / grid_step;
    grid_.resize(nvals_);
    table_.resize(nvals_);
    for (int g = 0; g < nvals_; ++g) {
      grid_[g] = -90 + grid_step * (g + 1);
      table_[g] = quad_from_polar(m.polar_Q, grid_[g]);
    }
    const int P = static_cast<int>(sub.scheme.panels.size());
    bw_.resize(P);
    dw_.resize(P);
    for (int i = 0; i < P; ++i) {
      const int N = sub.scheme.panels[i].N;
      const double wB = 1.0 / (double(N) * N);
      const double wD = 1.0 / (double(N) * N * N);
      bw_[i].resize(N);
      dw_[i].resize(N);
      for (int k = 1; k <= N; ++k) {
        // same rounding sequence as homogenize_polar, so the reported
        // breakdowns agree bit for bit with residuals()
        const StackingCoeffs c = stacking_coefficients(k, N);
        bw_[i][k - 1] = wB * c.b;
        dw_[i][k - 1] = wD * c.d;
      }
    }
  }

  int genes() const { return layout_.total; }
  int grid_values() const { return nvals_; }
  int grid_value(int g) const { return grid_[g]; }

  double total(std::span<const std::int16_t> genome,
               std::vector<ResidualBreakdown>* detail = nullptr) const {
    double sum = 0.0;
    if (detail) detail->clear();
    for (std::size_t i = 0; i < layout_.per_panel.size(); ++i) {
      const ResidualBreakdown b = panel_residual(genome, static_cast<int>(i));
      sum += b.total;
      if (detail) detail->push_back(b);
    }
    return sum;
  }

  std::vector<int> orientations(std::span<const std::int16_t> genome) const {
    std::vector<int> out(genome.size());
    for (std::size_t g = 0; g < genome.size(); ++g) out[g] = grid_[genome[g]];
    return out;
  }

 private:
  ResidualBreakdown panel_residual(std::span<const std::int16_t> genome, int i) const {
    const std::vector<int>& ids = layout_.per_panel[i];
    const int N = static_cast<int>(ids.size());
    const double wA = 1.0 / N;
    QuadTensor A, B, D;
    for (int k = 1; 2 * k <= N + 1; ++k) {
      const int km = N + 1 - k;
      const QuadTensor& Qk = table_[genome[ids[k - 1]]];
      if (km == k) {
        A += wA * Qk;
        B += (bw_[i][k - 1]) * Qk;
        D += (dw_[i][k - 1]) * Qk;
      } else {
        const QuadTensor& Qm = table_[genome[ids[km - 1]]];
        A += wA * (Qk + Qm);
        B += bw_[i][k - 1] * (Qk - Qm);
        D += dw_[i][k - 1] * (Qk + Qm);
      }
    }
    return residual_core(A, B, A - D, mat_, sub_.targets[i], opt_);
  }

  const Subproblem& sub_;
  const PlyMaterial& mat_;
  ResidualOptions opt_;
  GeneLayout layout_;
  int nvals_ = 0;
  std::vector<int> grid_;
  std::vector<QuadTensor> table_;
  std::vector<std::vector<double>> bw_, dw_;  // b_k/N^2, d_k/N^3 per panel
};

}  // namespace

RecoverResult recover(const Subproblem& sub, const PlyMaterial& m,
                      const SearchConfig& cfg) {
  if (cfg.grid_step_deg <= 0 || 180 % cfg.grid_step_deg != 0)
    throw std::invalid_argument("recover: grid step must divide 180");
  if (cfg.budget < 1) throw std::invalid_argument("recover: budget must be >= 1");
  if (cfg.population < 2 || cfg.kernel < 1 || cfg.kernel > cfg.population)
    throw std::invalid_argument("recover: bad population/kernel sizes");
  if (sub.targets.size() != sub.scheme.panels.size())
    throw std::invalid_argument("recover: one target per scheme panel required");
  for (std::size_t i = 0; i < sub.targets.size(); ++i)
    if (sub.targets[i].N != sub.scheme.panels[i].N)
      throw std::invalid_argument("recover: target/scheme ply count mismatch for panel " +
                                  sub.scheme.panels[i].id);

  FamilyEvaluator eval(sub, m, cfg.grid_step_deg, cfg.residual);
  const int G = eval.genes();
  const int V = eval.grid_values();

  std::mt19937_64 rng(cfg.seed);
  auto rand_gene = [&] { return static_cast<std::int16_t>(rng() % V); };

  using Genome = std::vector<std::int16_t>;
  const int P = cfg.population;
  std::vector<Genome> pop(P, Genome(G));
  std::vector<double> fit(P, 0.0);

  auto randomize = [&](Genome& g) {
    for (auto& v : g) v = rand_gene();
  };

  long evals = 0;
  Genome best;
  double best_fit = std::numeric_limits<double>::infinity();
  RecoverResult res;

  auto note = [&](const Genome& g, double f) {
    if (f < best_fit) {
      best_fit = f;
      best = g;
    }
  };

  // mutation: a few genes take +-k grid steps, occasionally a fresh value
  const double pm = std::max(1.0 / std::max(G, 1), 0.02);
  auto mutate = [&](Genome& g) {
    bool changed = false;
    for (auto& v : g) {
      if (std::uniform_real_distribution<>(0.0, 1.0)(rng) >= pm) continue;
      changed = true;
      if (rng() % 5 == 0) {
        v = rand_gene();
      } else {
        int step = 1 + static_cast<int>(std::geometric_distribution<>(0.5)(rng));
        if (rng() & 1) step = -step;
        int nv = (static_cast<int>(v) + step) % V;
        if (nv < 0) nv += V;
        v = static_cast<std::int16_t>(nv);
      }
    }
    if (!changed) g[rng() % G] = rand_gene();
  };

  // greedy +-1-grid-step descent over the genes in random order
  auto polish = [&](Genome g, double f) {
    bool improved_any = false;
    std::vector<int> order(G);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int gi : order) {
      if (evals >= cfg.budget) break;
      for (int dir : {+1, -1}) {
        bool moved = true;
        while (moved && evals < cfg.budget) {
          moved = false;
          Genome cand = g;
          int nv = (static_cast<int>(cand[gi]) + dir) % V;
          if (nv < 0) nv += V;
          cand[gi] = static_cast<std::int16_t>(nv);
          const double cf = eval.total(cand);
          ++evals;
          if (cf < f) {
            g = std::move(cand);
            f = cf;
            moved = true;
            improved_any = true;
          }
        }
      }
    }
    note(g, f);
    return improved_any;
  };

  int stagnant = 0;
  bool done = false;
  while (!done) {
    // (re)seed the population
    for (int i = 0; i < P && !done; ++i) {
      randomize(pop[i]);
      fit[i] = eval.total(pop[i]);
      note(pop[i], fit[i]);
      done = ++evals >= cfg.budget;
    }
    stagnant = 0;
    while (!done) {
      std::vector<int> order(P);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return fit[a] < fit[b]; });
      const int K = std::min(cfg.kernel, P);

      std::vector<Genome> next(P);
      std::vector<double> nfit(P, 0.0);
      next[0] = pop[order[0]];
      nfit[0] = fit[order[0]];
      const double prev_best = best_fit;
      for (int i = 1; i < P && !done; ++i) {
        Genome child;
        if (rng() % 10 == 0) {
          child.resize(G);
          randomize(child);  // immigrant
        } else {
          child = pop[order[rng() % K]];
          if (rng() & 1) {
            const Genome& other = pop[order[rng() % K]];
            for (int g = 0; g < G; ++g)
              if (rng() & 1) child[g] = other[g];
          }
          mutate(child);
        }
        nfit[i] = eval.total(child);
        note(child, nfit[i]);
        next[i] = std::move(child);
        done = ++evals >= cfg.budget;
      }
      for (int i = 0; i < P; ++i) {
        if (next[i].empty()) {  // budget ran out mid-generation
          next[i] = pop[order[std::min(i, P - 1)]];
          nfit[i] = fit[order[std::min(i, P - 1)]];
        }
      }
      pop = std::move(next);
      fit = std::move(nfit);

      stagnant = best_fit < prev_best ? 0 : stagnant + 1;
      if (stagnant == cfg.stagnation_generations / 2 && !done) {
        if (polish(best, best_fit)) stagnant = 0;
        done = evals >= cfg.budget;
      }
      if (stagnant >= cfg.stagnation_generations) {
        ++res.restarts;
        break;  // restart from fresh random population
      }
    }
  }

  res.evaluations = evals;
  res.total = eval.total(best, &res.breakdown);
  const std::vector<int> orient = eval.orientations(best);
  res.stacks = assemble_stacks(orient, sub.scheme);
  return res;
}

}  // namespace polarlam
