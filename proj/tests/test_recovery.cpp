#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polarlam/dataset.hpp"
#include "polarlam/recovery.hpp"

using namespace polarlam;

namespace {

StackingSequence stack(std::initializer_list<int> a) {
  return StackingSequence{std::vector<int>(a)};
}

StackingSequence uniform_stack(int angle, int n) {
  StackingSequence s;
  s.angles.assign(n, angle);
  return s;
}

TargetPolar self_target(const StackingSequence& s, const PlyMaterial& m) {
  const LaminateHomog L = laminate_homogenized(s, m);
  PanelExtractOptions opt;
  opt.unchecked = true;
  const PanelVars v = panel_from_laminate(L, m, opt);
  return TargetPolar::from_signed(v.rho0K, v.rho1, v.phi1, s.size());
}

}  // namespace

TEST_CASE("signed target split") {
  CHECK(split_target(-0.4252) == std::pair<int, double>{1, 0.4252});
  CHECK(split_target(0.5) == std::pair<int, double>{0, 0.5});
  CHECK(split_target(0.0) == std::pair<int, double>{0, 0.0});
  const TargetPolar t = TargetPolar::from_signed(-0.3, 0.2, 0.1, 40);
  CHECK(t.K == 1);
  CHECK(t.rho0 == doctest::Approx(0.3));
  CHECK(t.N == 40);
}

TEST_CASE("residual breakdown basics") {
  const PlyMaterial m = t300_5208();

  SUBCASE("norm scale is the ply modulus norm") {
    const ResidualBreakdown r =
        residuals(uniform_stack(0, 4), m, TargetPolar{0, 1.0, 1.0, 0.0, 4});
    CHECK(r.norm_scale == doctest::Approx(64578.153).epsilon(1e-6));
  }
  SUBCASE("uniform stack against its own polar is a recovery stack") {
    const StackingSequence s = uniform_stack(45, 4);
    const ResidualBreakdown r = residuals(s, m, self_target(s, m));
    CHECK(r.total < 1e-20);
  }
  SUBCASE("symmetric stacks have exactly zero uncoupling residual") {
    const ResidualBreakdown r = residuals(stack({30, -60, 15, 15, -60, 30}), m,
                                          TargetPolar{0, 0.5, 0.5, 0.0, 6});
    CHECK(r.r[0] == 0.0);
  }
  SUBCASE("uniform stacks have zero homogeneity residual and unit moduli") {
    const ResidualBreakdown r =
        residuals(uniform_stack(20, 7), m, TargetPolar{0, 1.0, 1.0, 20.0 / 90.0, 7});
    CHECK(r.r[1] < 1e-12);
    CHECK(r.r[3] < 1e-12);
    CHECK(r.r[4] < 1e-12);
    CHECK(r.total < 1e-20);
  }
  SUBCASE("angle residuals are circular") {
    // phi1 = 0.98 vs target -0.99 wraps to a distance of 0.03, not 1.97
    const TargetPolar t{0, 1.0, 1.0, -0.99, 3};
    const ResidualBreakdown r = residuals(uniform_stack(88, 3), m, t);
    CHECK(r.r[5] == doctest::Approx(2.0 - (88.0 / 90.0 + 0.99)).epsilon(1e-9));
    CHECK(r.r[5] < 0.04);
  }
  SUBCASE("degenerate Phi1 drops the phi residual and flags it") {
    StackingSequence s;
    for (int i = 0; i < 4; ++i) {
      s.angles.push_back(45);
      s.angles.push_back(-45);
    }
    const ResidualBreakdown r = residuals(s, m, TargetPolar{1, 1.0, 0.0, 0.7, 8});
    CHECK(r.phi1_degenerate);
    CHECK(r.r[5] == 0.0);
    CHECK(r.r[2] == doctest::Approx(0.0).epsilon(1e-9));  // Phi0 = 45, K = 1
    CHECK(r.r[4] == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("bundled stand-alone stacks reproduce the recorded residuals") {
  const PlyMaterial m = data::material();
  const data::StackGroup g = data::standalone_group();
  REQUIRE(g.rows.size() == 7);
  for (const data::StackRow& row : g.rows) {
    const double total = residuals(row.stack, m, *row.target).total;
    CAPTURE(row.id);
    CHECK(total < 1e-4);
    CHECK(total > row.reported_residual / 5.0);
    CHECK(total < row.reported_residual * 5.0);
  }
}

TEST_CASE("residual invariances") {
  const PlyMaterial m = t300_5208();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<> u01(0.0, 1.0);

  for (int it = 0; it < 40; ++it) {
    StackingSequence s;
    const int n = 1 + static_cast<int>(rng() % 24);
    for (int i = 0; i < n; ++i)
      s.angles.push_back(static_cast<int>(rng() % 180) - 89);
    const TargetPolar t{static_cast<int>(rng() % 2), u01(rng), u01(rng),
                        2.0 * u01(rng) - 1.0, n};

    // reversal: bitwise identical totals
    const ResidualBreakdown a = residuals(s, m, t);
    const ResidualBreakdown b = residuals(s.reversed(), m, t);
    CHECK(a.total == b.total);

    // 90 deg frame shift with the target phi1 shifted by 1 (period 2)
    StackingSequence shifted;
    for (int ang : s.angles) {
      int v = ang + 90;
      if (v > 90) v -= 180;
      shifted.angles.push_back(v);
    }
    TargetPolar t2 = t;
    t2.phi1 = t.phi1 + 1.0 > 1.0 ? t.phi1 - 1.0 : t.phi1 + 1.0;
    const ResidualBreakdown c = residuals(shifted, m, t2);
    CHECK(c.total == doctest::Approx(a.total).epsilon(1e-9));
  }
}

TEST_CASE("meso-scale blending decision") {
  SUBCASE("identical stacks with identity witness") {
    const StackingSequence s = stack({10, -20, 30});
    const BlendWitness w = is_blended(s, s, BlendMode::scheme);
    CHECK(w.blended);
    CHECK(w.ply_map == std::vector<int>{0, 1, 2});
    CHECK(is_blended(s, s, BlendMode::general).blended);
  }
  SUBCASE("order violation fails both modes") {
    const StackingSequence parent = stack({0, 45, 90});
    const StackingSequence child = stack({90, 45});
    CHECK(!is_blended(parent, child, BlendMode::scheme));
    CHECK(!is_blended(parent, child, BlendMode::general));
  }
  SUBCASE("general subsequence with interior drops") {
    const StackingSequence parent = stack({0, 45, 90, -30, 60});
    const StackingSequence child = stack({45, -30, 60});
    const BlendWitness w = is_blended(parent, child, BlendMode::general);
    CHECK(w.blended);
    CHECK(w.ply_map == std::vector<int>{1, 3, 4});
    // scheme mode needs a contiguous suffix after the shared block
    CHECK(!is_blended(parent, child, BlendMode::scheme));
  }
  SUBCASE("thinner longer than parent is never blended") {
    CHECK(!is_blended(stack({0}), stack({0, 0}), BlendMode::general));
  }
  SUBCASE("published dorsal-skin pair") {
    const data::StackGroup g = data::stack_group("fw_dorsal");
    const data::StackRow* r1 = nullptr;
    const data::StackRow* r8 = nullptr;
    for (const data::StackRow& r : g.rows) {
      if (r.id == "1") r1 = &r;
      if (r.id == "8") r8 = &r;
    }
    REQUIRE(r1);
    REQUIRE(r8);
    const BlendWitness w = is_blended(r1->stack, r8->stack, BlendMode::scheme);
    CHECK(w.blended);
    CHECK(w.ply_map[0] == 0);  // shared covering plies
    CHECK(w.ply_map[1] == 1);
    CHECK(w.ply_map[2] == r1->stack.size() - r8->stack.size() + 2);
  }
}

TEST_CASE("scheme assembly") {
  SUBCASE("single panel is the orientation vector verbatim") {
    BlendingScheme s;
    s.covering = 0;
    s.panels = {SchemePanel{"a", 4, -1}};
    const std::vector<int> ori{10, -20, 30, 40};
    const auto stacks = assemble_stacks(ori, s);
    REQUIRE(stacks.size() == 1);
    CHECK(stacks[0].angles == ori);
  }
  SUBCASE("two panels share covering and the root tail") {
    BlendingScheme s;
    s.covering = 2;
    s.panels = {SchemePanel{"thin", 4, -1}, SchemePanel{"thick", 6, 0}};
    CHECK(s.independent_count() == 6);
    const std::vector<int> ori{1, 2, 3, 4, 5, 6};
    const auto stacks = assemble_stacks(ori, s);
    CHECK(stacks[0].angles == std::vector<int>{1, 2, 3, 4});
    CHECK(stacks[1].angles == std::vector<int>{1, 2, 5, 6, 3, 4});
    CHECK(is_blended(stacks[1], stacks[0], BlendMode::scheme).blended);
  }
  SUBCASE("length mismatch throws") {
    BlendingScheme s;
    s.covering = 1;
    s.panels = {SchemePanel{"a", 3, -1}};
    CHECK_THROWS_AS(assemble_stacks(std::vector<int>{1, 2}, s),
                    std::invalid_argument);
  }
  SUBCASE("every assembled family is blended, exhaustively on a toy scheme") {
    BlendingScheme s;
    s.covering = 1;
    s.panels = {SchemePanel{"thin", 2, -1}, SchemePanel{"thick", 3, 0}};
    REQUIRE(s.independent_count() == 3);
    const int grid[4] = {-45, 0, 45, 90};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          const std::vector<int> ori{grid[a], grid[b], grid[c]};
          const auto stacks = assemble_stacks(ori, s);
          CHECK(is_blended(stacks[1], stacks[0], BlendMode::scheme).blended);
          CHECK(is_blended(stacks[1], stacks[0], BlendMode::general).blended);
        }
  }
  SUBCASE("bundled dorsal-skin scheme has the recorded variable count") {
    const data::StackGroup g = data::stack_group("fw_dorsal");
    const BlendingScheme s = g.scheme();
    CHECK(s.independent_count() == 246);
    std::mt19937_64 rng(5);
    std::vector<int> ori(246);
    for (int& v : ori) v = static_cast<int>(rng() % 180) - 89;
    const auto stacks = assemble_stacks(ori, s);
    for (std::size_t i = 0; i < s.panels.size(); ++i) {
      CHECK(stacks[i].size() == s.panels[i].N);
      if (s.panels[i].base >= 0)
        CHECK(is_blended(stacks[i], stacks[s.panels[i].base], BlendMode::scheme)
                  .blended);
    }
  }
  SUBCASE("scheme validation") {
    BlendingScheme s;
    s.covering = 2;
    s.panels = {SchemePanel{"a", 4, 1}, SchemePanel{"b", 6, 0}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // cycle
    s.panels = {SchemePanel{"a", 1, -1}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // thinner than covering
    s.panels = {SchemePanel{"a", 6, -1}, SchemePanel{"b", 4, 0}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // thinner than base
  }
}

TEST_CASE("recovery search on toy problems") {
  const PlyMaterial m = t300_5208();

  SUBCASE("single laminate on the 45-degree grid finds the zero-residual stack") {
    Subproblem sub;
    sub.scheme.covering = 0;
    sub.scheme.panels = {SchemePanel{"a", 4, -1}};
    sub.targets = {self_target(uniform_stack(45, 4), m)};

    SearchConfig cfg;
    cfg.grid_step_deg = 45;
    cfg.population = 40;
    cfg.kernel = 8;
    cfg.budget = 4000;
    cfg.seed = 3;
    const RecoverResult res = recover(sub, m, cfg);

    const oracles::ExhaustiveBest bf = oracles::exhaustive_recover(sub, m, 45);
    CHECK(bf.total < 1e-20);
    CHECK(res.total == doctest::Approx(bf.total).epsilon(1e-12));
    CHECK(res.stacks[0].angles == std::vector<int>(4, 45));
  }
  SUBCASE("two nested panels recover the exhaustive optimum") {
    Subproblem sub;
    sub.scheme.covering = 2;
    sub.scheme.panels = {SchemePanel{"thin", 4, -1}, SchemePanel{"thick", 6, 0}};
    sub.targets = {self_target(uniform_stack(45, 4), m),
                   self_target(uniform_stack(45, 6), m)};
    SearchConfig cfg;
    cfg.grid_step_deg = 45;
    cfg.population = 50;
    cfg.kernel = 10;
    cfg.budget = 12000;
    cfg.seed = 1;
    const RecoverResult res = recover(sub, m, cfg);
    const oracles::ExhaustiveBest bf = oracles::exhaustive_recover(sub, m, 45);
    CHECK(std::fabs(res.total - bf.total) < 1e-12);
    CHECK(res.total < 1e-20);
    CHECK(is_blended(res.stacks[1], res.stacks[0], BlendMode::scheme).blended);
  }
}

TEST_CASE("recovery determinism and budget monotonicity") {
  const PlyMaterial m = t300_5208();
  Subproblem sub;
  sub.scheme.covering = 0;
  sub.scheme.panels = {SchemePanel{"a", 8, -1}};
  sub.targets = {TargetPolar{0, 0.55, 0.3, 0.25, 8}};

  SearchConfig cfg;
  cfg.grid_step_deg = 5;
  cfg.population = 30;
  cfg.kernel = 6;
  cfg.seed = 7;

  cfg.budget = 400;
  const RecoverResult a1 = recover(sub, m, cfg);
  const RecoverResult a2 = recover(sub, m, cfg);
  CHECK(a1.total == a2.total);
  CHECK(a1.stacks[0].angles == a2.stacks[0].angles);
  CHECK(a1.evaluations == 400);
  // the reported breakdown is exactly what residuals() recomputes
  CHECK(a1.breakdown[0].total == residuals(a1.stacks[0], m, sub.targets[0]).total);

  cfg.budget = 4000;
  const RecoverResult b = recover(sub, m, cfg);
  CHECK(b.total <= a1.total);
}

TEST_CASE("stand-alone stringer target reaches a small residual") {
  const PlyMaterial m = data::material();
  const data::StackGroup g = data::standalone_group();
  const data::StackRow* stringer = nullptr;
  for (const data::StackRow& r : g.rows)
    if (r.id == "stringers") stringer = &r;
  REQUIRE(stringer);

  Subproblem sub;
  sub.scheme.covering = 0;
  sub.scheme.panels = {SchemePanel{"stringers", stringer->target->N, -1}};
  sub.targets = {*stringer->target};

  SearchConfig cfg;
  cfg.grid_step_deg = 1;
  cfg.budget = 150000;
  cfg.seed = 4;
  const RecoverResult res = recover(sub, m, cfg);
  CHECK(res.total <= 1e-4);
}

TEST_CASE("recover input validation") {
  const PlyMaterial m = t300_5208();
  Subproblem sub;
  sub.scheme.covering = 0;
  sub.scheme.panels = {SchemePanel{"a", 4, -1}};
  sub.targets = {TargetPolar{0, 0.5, 0.5, 0.0, 4}};
  SearchConfig cfg;
  cfg.grid_step_deg = 7;  // does not divide 180
  CHECK_THROWS_AS(recover(sub, m, cfg), std::invalid_argument);
  cfg = SearchConfig{};
  cfg.budget = 0;
  CHECK_THROWS_AS(recover(sub, m, cfg), std::invalid_argument);
  cfg = SearchConfig{};
  sub.targets[0].N = 5;  // target/scheme mismatch
  CHECK_THROWS_AS(recover(sub, m, cfg), std::invalid_argument);
}
