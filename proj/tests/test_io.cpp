#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "polarlam/dataset.hpp"
#include "polarlam/io.hpp"

using namespace polarlam;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("polarlam_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("material file round trip and bundled dataset equality") {
  TempDir tmp;
  const PlyMaterial m = t300_5208();
  io::save_material(tmp.path / "mat.json", m);
  const PlyMaterial back = io::load_material(tmp.path / "mat.json");
  CHECK(back.E1 == m.E1);
  CHECK(back.polar_Q.R1 == m.polar_Q.R1);
  CHECK(back.polar_Ghat.T == m.polar_Ghat.T);
  CHECK(back.N_ref == m.N_ref);
  CHECK(back.S23 == m.S23);

  const PlyMaterial ds = data::material();
  CHECK(ds.E1 == m.E1);
  CHECK(ds.polar_Q.T0 == m.polar_Q.T0);
  CHECK(ds.polar_Q.R0 == m.polar_Q.R0);
  CHECK(ds.polar_Qhat.T == m.polar_Qhat.T);
  CHECK(ds.polar_G.T0 == m.polar_G.T0);
  CHECK(ds.rho_ply == m.rho_ply);
  CHECK(ds.X == m.X);
}

TEST_CASE("panel set round trip") {
  TempDir tmp;
  io::PanelSet set;
  set.N_ref = 100;
  set.panels = {{"a", 0.5, 0.3, 0.2, 0.0, 1e5, 50},
                {"b", 0.31, -0.1, 0.05, 0.5, 0.0, std::nullopt}};
  io::save_panels(tmp.path / "p.json", set);
  const io::PanelSet back = io::load_panels(tmp.path / "p.json");
  REQUIRE(back.panels.size() == 2);
  CHECK(back.N_ref == 100);
  CHECK(back.panels[0].id == "a");
  CHECK(back.panels[0].N.value() == 50);
  CHECK(back.panels[0].area == 1e5);
  CHECK(back.panels[1].n0 == doctest::Approx(0.31));
  CHECK(back.panels[1].phi1 == doctest::Approx(0.5));
  CHECK(back.index_of("b") == 1);
  CHECK(back.index_of("zz") == -1);
}

TEST_CASE("panel file errors carry context") {
  TempDir tmp;
  std::ofstream(tmp.path / "bad.json") << "{\"panels\": [{\"id\": \"x\"}]}";
  CHECK_THROWS_WITH_AS(io::load_panels(tmp.path / "bad.json"),
                       doctest::Contains("needs n0 or N"), io::FormatError);
  std::ofstream(tmp.path / "broken.json") << "{ not json";
  CHECK_THROWS_AS(io::load_panels(tmp.path / "broken.json"), io::FormatError);
  CHECK_THROWS_AS(io::load_panels(tmp.path / "missing.json"), io::FormatError);
}

TEST_CASE("adjacency file") {
  TempDir tmp;
  io::PanelSet set;
  set.panels = {{"a", 0.5, 0, 0, 0, 0, std::nullopt},
                {"b", 0.5, 0, 0, 0, 0, std::nullopt}};
  std::ofstream(tmp.path / "e.json") << R"({"edges": [["a", "b"]]})";
  const std::vector<Edge> edges = io::load_adjacency(tmp.path / "e.json", set);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].p == 0);
  CHECK(edges[0].q == 1);

  std::ofstream(tmp.path / "bad.json") << R"({"edges": [["a", "zz"]]})";
  CHECK_THROWS_AS(io::load_adjacency(tmp.path / "bad.json", set), io::FormatError);
}

TEST_CASE("scheme file round trip") {
  TempDir tmp;
  BlendingScheme s;
  s.covering = 2;
  s.panels = {SchemePanel{"root", 6, -1}, SchemePanel{"mid", 8, 0},
              SchemePanel{"top", 11, 1}};
  io::save_scheme(tmp.path / "s.json", s);
  const io::SchemeFile back = io::load_scheme(tmp.path / "s.json");
  CHECK(back.scheme.covering == 2);
  REQUIRE(back.scheme.panels.size() == 3);
  CHECK(back.scheme.panels[2].base == 1);
  CHECK(back.scheme.independent_count() == s.independent_count());

  std::ofstream(tmp.path / "bad.json")
      << R"({"covering": 1, "panels": [{"id": "a", "N": 4, "base": "nope"}]})";
  CHECK_THROWS_AS(io::load_scheme(tmp.path / "bad.json"), io::FormatError);
}

TEST_CASE("response file") {
  TempDir tmp;
  std::ofstream(tmp.path / "r.json") << R"({
    "tip_u_mm": 1350.0, "semispan_mm": 18000.0,
    "lambdas": [{"id": "fw_dorsal", "lambda": 1.8}],
    "elements": [{"panel": "a", "eps_gen": [1e-3,0,0, 0,0,0, 0,0]}]
  })";
  const io::ResponseData r = io::load_response(tmp.path / "r.json");
  CHECK(r.tip_u_mm == 1350.0);
  CHECK(r.lambdas.at(0).second == 1.8);
  REQUIRE(r.elements.size() == 1);
  CHECK(r.elements[0].eps_gen[0] == 1e-3);

  std::ofstream(tmp.path / "bad.json")
      << R"({"elements": [{"panel": "a", "eps_gen": [1, 2, 3]}]})";
  CHECK_THROWS_AS(io::load_response(tmp.path / "bad.json"), io::FormatError);
}

TEST_CASE("stack output round trip keeps angles exact") {
  TempDir tmp;
  std::vector<io::StackOutRow> rows;
  io::StackOutRow r;
  r.id = "7";
  r.stack = StackingSequence::parse("-81/-5/13/15/-6/-84");
  r.residual.total = 0.247;
  rows.push_back(r);
  io::save_stacks(tmp.path / "s.json", rows, 0.247);
  const auto back = io::load_stacks(tmp.path / "s.json");
  REQUIRE(back.size() == 1);
  CHECK(back[0].first == "7");
  CHECK(back[0].second == rows[0].stack);
}

TEST_CASE("fnv1a64 matches the reference value") {
  TempDir tmp;
  std::ofstream(tmp.path / "x", std::ios::binary) << "abc";
  CHECK(data::fnv1a64(tmp.path / "x") == 0xe71fa2190541574bULL);
}

TEST_CASE("manifest verification notices corruption") {
  CHECK_NOTHROW(data::verify_manifest());

  // copy the data tree, corrupt one byte, point the loader at the copy
  TempDir tmp;
  fs::copy(data::data_dir(), tmp.path / "data", fs::copy_options::recursive);
  {
    std::fstream f(tmp.path / "data" / "t300_5208.json",
                   std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('#');
  }
  ::setenv("POLARLAM_DATA_DIR", (tmp.path / "data").c_str(), 1);
  CHECK_THROWS_AS(data::verify_manifest(), data::DatasetError);
  ::unsetenv("POLARLAM_DATA_DIR");
}

TEST_CASE("bundled stack groups are structurally sound") {
  const io::PanelSet panels = data::boxwing_panels();
  REQUIRE(panels.panels.size() == 52);
  CHECK(panels.N_ref == 150);

  int cleaned = 0;
  for (const char* name : data::kSkinGroups) {
    const data::StackGroup g = data::stack_group(name);
    REQUIRE(g.rows.size() == 12);
    CHECK(g.covering.size() == 2);
    for (const data::StackRow& r : g.rows) {
      // every stack length matches the panel dataset ply count
      const TargetPolar t = data::target_for(panels, r.id);
      CHECK(r.stack.size() == t.N);
      CHECK(r.stack.angles[0] == g.covering[0]);
      CHECK(r.stack.angles[1] == g.covering[1]);
      if (r.cleaned) ++cleaned;
    }
  }
  CHECK(cleaned > 0);  // the transcription artifacts are flagged, not hidden
}
