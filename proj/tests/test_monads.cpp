#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "patspan/gamma.hpp"
#include "patspan/monad.hpp"
#include "patspan/theta.hpp"

using namespace patspan;
using patspan::testing::make_graph;
using patspan::testing::monoid_nerve;

namespace {

// core assignment for the delta pattern from a unit element and a table
MonadSection delta_monad(std::shared_ptr<const Pattern> p, const PGraph& g, int unit,
                         const std::vector<std::vector<int>>& table) {
  MonadSection m;
  m.graph = g;
  m.objs = default_monad_truncation("delta-natural");
  // seeds: unit component over [0] ~> [1]; multiplication over [2] ~> [1];
  // the ternary component is determined, fill it by left bracketing
  int n = int(g.value.at("[1]").elems.size());
  m.core["[0]|[0,0]|[1]"] = {unit};
  std::vector<int> mul(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      // fiber families over [2] are (v0,v1,v2,e01,e12) with singleton
      // vertices: family index is the lexicographic (name-sorted) pair
      mul[a * n + b] = table[a][b];
    }
  // family order: limit enumeration is lexicographic in slice-object order
  // (v0,v1,v2,e01,e12) -> index = a*n + b when names sort numerically
  m.core["[2]|[0,2]|[1]"] = mul;
  std::vector<int> tri(n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) tri[(a * n + b) * n + c] = table[table[a][b]][c];
  m.core["[3]|[0,3]|[1]"] = tri;
  return m;
}

}  // namespace

TEST_CASE("validate_monad accepts the group law and rejects a magma") {
  auto p = pattern_by_id("delta-natural");
  PGraph g = make_graph(p, {{"[1]", 2}});
  // C2: unit 0, 1+1 = 0
  MonadSection good = delta_monad(p, g, 0, {{0, 1}, {1, 0}});
  auto rep = validate_monad(good);
  if (!rep.ok) MESSAGE(rep.failures.front());
  CHECK(rep.ok);
  // non-associative magma: m(a,b) = b except m(1,1) = 0, unit 0 fails
  // associativity at the (3 -> 2 -> 1) coherences
  MonadSection bad = delta_monad(p, g, 0, {{0, 1}, {1, 1}});
  bad.core["[3]|[0,3]|[1]"] = {0, 1, 1, 1, 1, 1, 1, 0};  // deliberately wrong
  auto rep2 = validate_monad(bad);
  CHECK(!rep2.ok);
  bool fun_failure = false;
  for (const auto& f : rep2.failures)
    if (f.find("functoriality") != std::string::npos) fun_failure = true;
  CHECK(fun_failure);
}

TEST_CASE("identity-only pattern accepts any graph vacuously") {
  auto p = pattern_by_id("terminal");
  PGraph g = make_graph(p, {{"*", 3}});
  MonadSection m;
  m.graph = g;
  m.objs = {"*"};
  CHECK(validate_monad(m).ok);
}

TEST_CASE("brute force over the 16 tables finds exactly the monoids") {
  auto p = pattern_by_id("delta-natural");
  PGraph g = make_graph(p, {{"[1]", 2}});
  int valid = 0;
  for (int unit = 0; unit < 2; ++unit)
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<std::vector<int>> table{{(mask >> 0) & 1, (mask >> 1) & 1},
                                          {(mask >> 2) & 1, (mask >> 3) & 1}};
      MonadSection m = delta_monad(p, g, unit, table);
      if (validate_monad(m).ok) valid++;
    }
  CHECK(valid == 4);  // the four monoid tables on a two-element set
}

TEST_CASE("enumerate_monads: delta with X0 a point and X1 of size 2") {
  auto p = monad_pattern_instance("delta-natural");
  PGraph g = make_graph(p, {{"[1]", 2}});
  auto res = enumerate_monads(p, g, default_monad_truncation("delta-natural"));
  CHECK(res.raw_count == 4);
  CHECK(res.monads.size() == 2);  // the two monoid structures on 2 elements
  for (const auto& m : res.monads) CHECK(validate_monad(m).ok);
}

TEST_CASE("enumerate_monads: empty X1 with nonempty X0 gives no monads") {
  auto p = monad_pattern_instance("delta-natural");
  PGraph g = make_graph(p, {{"[0]", 1}, {"[1]", 0}});
  auto res = enumerate_monads(p, g, default_monad_truncation("delta-natural"));
  CHECK(res.candidates == 0);
  CHECK(res.raw_count == 0);
  CHECK(res.monads.empty());
}

TEST_CASE("enumerate_monads: gamma-flat commutative monoids") {
  auto p = monad_pattern_instance("gamma-flat");
  PGraph g = make_graph(p, {{"<1>", 2}});
  auto res = enumerate_monads(p, g, default_monad_truncation("gamma-flat"));
  CHECK(res.raw_count == 4);
  CHECK(res.monads.size() == 2);  // the two commutative monoids
}

TEST_CASE("round trips between Segal functors and monad sections") {
  auto p = monad_pattern_instance("delta-natural");
  PGraph g = make_graph(p, {{"[1]", 2}});
  auto res = enumerate_monads(p, g, default_monad_truncation("delta-natural"));
  EnumerateOptions raw_opts;
  raw_opts.dedup = false;
  auto raw = enumerate_monads(p, g, default_monad_truncation("delta-natural"), raw_opts);
  for (const auto& m : raw.monads) {
    TruncatedFunctor x = monad_to_segal(m);
    CHECK(segal_passes(check_segal(x)));
    MonadSection back = segal_to_monad(x);
    std::string why;
    bool okB = monad_equivalent(m, back, &why);
    if (!okB) MESSAGE(why);
    CHECK(okB);
    TruncatedFunctor x2 = monad_to_segal(back);
    bool okA = segal_equivalent(x, x2, &why);
    if (!okA) MESSAGE(why);
    CHECK(okA);
  }
}

TEST_CASE("segal_to_monad on the nerve of the 2-element monoids") {
  auto p = monad_pattern_instance("delta-natural");
  // C2 nerve
  TruncatedFunctor x = monoid_nerve(p, 2, {{0, 1}, {1, 0}}, 3);
  MonadSection m = segal_to_monad(x);
  CHECK(validate_monad(m).ok);
  // the multiplication component is the group law
  const auto& mul = m.core.at("[2]|[0,2]|[1]");
  REQUIRE(mul.size() == 4);
  // fiber families over [2] in canonical order: pairs of singleton-tagged
  // elements; the diagonal entries must be the identity element
  int diag0 = -1, diag1 = -1;
  // family order: (<0>,<0>) < (<0>,<1>) < (<1>,<0>) < (<1>,<1>)
  diag0 = mul[0];
  diag1 = mul[3];
  CHECK(diag0 == x.value.at("[1]").index_of("<0>"));
  CHECK(diag1 == x.value.at("[1]").index_of("<0>"));  // 1+1 = 0 in C2
}

TEST_CASE("monad_to_segal of the terminal monad is the constant singleton") {
  auto p = monad_pattern_instance("delta-natural");
  PGraph g = make_graph(p, {{"[1]", 1}});
  auto res = enumerate_monads(p, g, default_monad_truncation("delta-natural"));
  REQUIRE(res.monads.size() == 1);
  TruncatedFunctor x = monad_to_segal(res.monads.front());
  for (const auto& o : x.objs) CHECK(x.value.at(o).elems.size() == 1);
}

TEST_CASE("gamma monad nerve has sizes 2^n") {
  auto p = monad_pattern_instance("gamma-flat");
  PGraph g = make_graph(p, {{"<1>", 2}});
  auto res = enumerate_monads(p, g, default_monad_truncation("gamma-flat"));
  REQUIRE(!res.monads.empty());
  TruncatedFunctor x = monad_to_segal(res.monads.front());
  CHECK(x.value.at("<0>").elems.size() == 1);
  CHECK(x.value.at("<1>").elems.size() == 2);
  CHECK(x.value.at("<2>").elems.size() == 4);
  CHECK(x.value.at("<3>").elems.size() == 8);
}

TEST_CASE("theta-2 sections with one object and one 1-cell are commutative monoids") {
  auto p = monad_pattern_instance("theta-2");
  for (int msize : {2, 3}) {
    PGraph g = make_graph(p, {{"(())", msize}});
    auto res = enumerate_monads(p, g, default_monad_truncation("theta-2"));
    // Eckmann-Hilton: valid sections correspond to pairs of unital tables
    // satisfying interchange, i.e. commutative monoid structures
    long long expect_raw = 0;
    int n = msize;
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    std::function<void(int)> fill = [&](int at) {
      if (at == n * n) {
        // unital?
        int unit = -1;
        for (int e = 0; e < n; ++e) {
          bool u = true;
          for (int v = 0; v < n; ++v)
            if (table[e][v] != v || table[v][e] != v) u = false;
          if (u) unit = e;
        }
        if (unit < 0) return;
        // commutative and associative?
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            if (table[a][b] != table[b][a]) return;
            for (int c = 0; c < n; ++c)
              if (table[table[a][b]][c] != table[a][table[b][c]]) return;
          }
        expect_raw++;
        return;
      }
      for (int v = 0; v < n; ++v) {
        table[at / n][at % n] = v;
        fill(at + 1);
      }
    };
    fill(0);
    CHECK(res.raw_count == expect_raw);
    if (msize == 2) CHECK(res.monads.size() == 2);
  }
}

TEST_CASE("omega sections with one colour and binary P(1)") {
  auto p = monad_pattern_instance("omega-planar");
  PGraph g = make_graph(p, {{"*1", 2}, {"*0", 0}, {"*2", 0}});
  auto res = enumerate_monads(p, g, default_monad_truncation("omega-planar"));
  CHECK(res.raw_count == 4);
  CHECK(res.monads.size() == 2);
}

TEST_CASE("monad JSON round trip") {
  auto p = monad_pattern_instance("delta-natural");
  PGraph g = make_graph(p, {{"[1]", 2}});
  auto res = enumerate_monads(p, g, default_monad_truncation("delta-natural"));
  REQUIRE(!res.monads.empty());
  const MonadSection& m = res.monads.front();
  MonadSection back = monad_from_json(monad_to_json(m), p);
  CHECK(validate_monad(back).ok);
  std::string why;
  CHECK(monad_equivalent(m, back, &why));
}
