#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "patspan/omega.hpp"

using namespace patspan;

TEST_CASE("planar tree notation") {
  CHECK(parse_planar_tree("e").text() == "e");
  CHECK(parse_planar_tree("*3").text() == "*3");
  CHECK(parse_planar_tree("(v: *1 e)").text() == "(v: *1 e)");
  CHECK(parse_planar_tree("(v: e e)").text() == "*2");
  CHECK_THROWS_AS(parse_planar_tree("(v: e"), input_error);
  CHECK_THROWS_AS(parse_planar_tree("x"), input_error);
  PlanarTree two_level = parse_planar_tree("(v: *1 e)");
  CHECK(two_level.edge_count() == 4);
  CHECK(two_level.vertex_count() == 2);
  CHECK(two_level.leaf_count() == 2);
  CHECK(parse_planar_tree("e").leaf_count() == 1);
}

TEST_CASE("omega elementary slice shapes") {
  FinCat eta = omega_elementary_slice(parse_planar_tree("e"));
  CHECK(eta.objects.size() == 1);
  CHECK(eta.mors.size() == 1);
  for (int a = 0; a <= 4; ++a) {
    FinCat st = omega_elementary_slice(corolla(a));
    CHECK(int(st.objects.size()) == a + 2);
    int nonid = 0;
    for (size_t m = 0; m < st.mors.size(); ++m)
      if (!st.is_identity(int(m))) nonid++;
    CHECK(nonid == a + 1);
  }
  FinCat two = omega_elementary_slice(parse_planar_tree("(v: *1 e)"));
  CHECK(two.objects.size() == 6);  // 4 edges + 2 vertices
}

TEST_CASE("slice object count is edges plus vertices") {
  for (const auto& t : enumerate_planar_trees(3, 3)) {
    FinCat s = omega_elementary_slice(t);
    CHECK(int(s.objects.size()) == t.edge_count() + t.vertex_count());
  }
}

TEST_CASE("inert inclusions") {
  CHECK(inert_inclusions(parse_planar_tree("e"), corolla(3)).size() == 4);
  CHECK(inert_inclusions(corolla(2), corolla(2)).size() == 1);
  CHECK(inert_inclusions(corolla(1), parse_planar_tree("(v: *1 e)")).size() == 1);
}

TEST_CASE("sub-dendrex inclusions are closed under composition") {
  OmegaPattern p(3, 3);
  auto objs = p.objects();
  for (const auto& x : objs)
    for (const auto& y : objs)
      for (const auto& f : p.hom(x, y)) {
        if (!p.is_inert(f)) continue;
        for (const auto& z : objs)
          for (const auto& g : p.hom(y, z))
            if (p.is_inert(g)) CHECK(p.is_inert(p.compose(g, f)));
      }
}

TEST_CASE("corolla active cover") {
  // on a corolla the cover is the identity
  OmegaMor id = corolla_active(corolla(2));
  CHECK(id.edge_map == std::vector<int>{0, 1, 2});
  // degenerate case: the vertexless tree yields the identity on eta
  CHECK(corolla_active(parse_planar_tree("e")).edge_map == std::vector<int>{0});
  // two-level tree: unique boundary-preserving cover from the 2-corolla
  PlanarTree t = parse_planar_tree("(v: *1 e)");
  OmegaMor c = corolla_active(t);
  CHECK(c.edge_map.size() == corolla(2).edge_count());
  // brute force: exactly one boundary-preserving assignment exists
  CHECK(active_maps(corolla(t.leaf_count()), t).size() == 1);
}

TEST_CASE("covers exist and are unique for every tree within bound") {
  for (const auto& t : enumerate_planar_trees(3, 3)) {
    if (!t.has_vertex) continue;
    CHECK(active_maps(corolla(t.leaf_count()), t).size() == 1);
  }
}

TEST_CASE("unit-insertion actives") {
  // the two boundary-preserving maps from the linear 2-tree onto the
  // 1-corolla insert an identity at the top or at the bottom
  CHECK(active_maps(parse_planar_tree("(v: *1)"), corolla(1)).size() == 2);
  // the unit direction: one active map from the 1-corolla onto eta
  CHECK(active_maps(corolla(1), parse_planar_tree("e")).size() == 1);
}

TEST_CASE("actives between linear trees count like endpoint-preserving maps") {
  // the chain with m vertices corresponds to the m-simplex; boundary
  // preserving maps between chains are the monotone endpoint-preserving
  // edge assignments
  auto chain = [](int m) {
    PlanarTree t;
    PlanarTree* cur = &t;
    for (int i = 0; i < m; ++i) {
      cur->has_vertex = true;
      cur->inputs.push_back(PlanarTree{});
      cur = &cur->inputs.front();
    }
    return t;
  };
  auto monotone_endpoint = [](int m, int n) {
    // monotone sequences 0 = h0 <= ... <= hm = n
    std::function<long long(int, int)> cnt = [&](int i, int prev) -> long long {
      if (i == m + 1) return prev == n ? 1 : 0;
      if (i == 0) return cnt(1, 0);
      long long s = 0;
      for (int v = prev; v <= n; ++v) s += cnt(i + 1, v);
      return s;
    };
    return cnt(0, 0);
  };
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      CHECK((long long)active_maps(chain(m), chain(n)).size() == monotone_endpoint(m, n));
}

TEST_CASE("pattern factorization round trips") {
  OmegaPattern p(3, 2);
  auto objs = p.objects();
  for (const auto& x : objs)
    for (const auto& y : objs)
      for (const auto& f : p.hom(x, y)) {
        auto [i, a] = p.factorize(f);
        CHECK(p.is_inert(i));
        CHECK(p.is_active(a));
        CHECK(p.compose(a, i) == f);
      }
}

TEST_CASE("generic elementary slice matches the dendroidal one") {
  OmegaPattern p(3, 3);
  for (const auto& t : enumerate_planar_trees(3, 3)) {
    Slice s = elementary_slice(p, t.text());
    FinCat direct = omega_elementary_slice(t);
    CHECK(s.cat.objects.size() == direct.objects.size());
    CHECK(s.cat.mors.size() == direct.mors.size());
    // the generic slice is the opposite orientation (span, not multicospan)
    FinCat op = direct;
    for (auto& m : op.mors) std::swap(m.src, m.dst);
    std::map<std::pair<int, int>, int> c;
    for (const auto& [k, v] : direct.comp) c[{k.second, k.first}] = v;
    op.comp = c;
    auto iso = find_isomorphism(s.cat, op);
    CHECK(iso.has_value());
  }
}
