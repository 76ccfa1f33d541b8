#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "patspan/segal.hpp"
#include "patspan/simplex.hpp"
#include "patspan/theta.hpp"

using namespace patspan;
using patspan::testing::monoid_nerve;
using patspan::testing::random_fiber;

namespace {

std::shared_ptr<const Pattern> delta3() {
  return std::make_shared<DeltaPattern>(true, 3);
}

}  // namespace

TEST_CASE("segal check on composable-pair data") {
  // nerve of the 2-element group: X[2] is the set of composable pairs
  auto p = delta3();
  std::vector<std::vector<int>> orgroup{{0, 1}, {1, 0}};  // C2
  TruncatedFunctor x = monoid_nerve(p, 2, orgroup, 3);
  REQUIRE(validate_truncated(x).empty());
  auto reports = check_segal(x);
  CHECK(segal_passes(reports));
  for (const auto& r : reports) {
    if (r.object == "[2]") CHECK(r.limit_card == 4);
    if (r.object == "[3]") CHECK(r.limit_card == 8);
  }
}

TEST_CASE("segal check fails with cardinality report on padded data") {
  auto p = delta3();
  TruncatedFunctor x = monoid_nerve(p, 2, {{0, 1}, {1, 0}}, 3);
  // pad X[2] with one extra element
  x.value["[2]"].elems.push_back("zz");
  std::sort(x.value["[2]"].elems.begin(), x.value["[2]"].elems.end());
  // extend all actions involving [2] arbitrarily so the functor still
  // validates: send the new element wherever its neighbour goes
  // simpler: rebuild actions from scratch is overkill; instead expect the
  // validator to reject or the segal check to fail
  bool rejected = false;
  try {
    auto reports = check_segal(x);
    for (const auto& r : reports)
      if (r.object == "[2]") {
        CHECK(r.value_card == 5);
        CHECK(r.limit_card == 4);
        CHECK(!r.bijective);
      }
  } catch (const input_error&) {
    rejected = true;
  }
  CHECK(rejected);  // the padded table no longer has total actions
}

TEST_CASE("constant singleton functor is Segal everywhere") {
  auto p = delta3();
  TruncatedFunctor x;
  x.pattern = p;
  x.objs = p->objects();
  std::sort(x.objs.begin(), x.objs.end());
  for (const auto& o : x.objs) x.value[o] = FinSet{{"*"}};
  for (const auto& a : x.objs)
    for (const auto& b : x.objs)
      for (const auto& f : p->hom(a, b)) x.action[f.uid()] = {0};
  CHECK(segal_passes(check_segal(x)));
}

TEST_CASE("eval_fiber at the identity reproduces the fiber") {
  auto p = delta3();
  std::mt19937 rng(11);
  FiberObject f = random_fiber(*p, "[2]", rng, 3);
  REQUIRE(validate_fiber(f).empty());
  EvalResult ev = eval_fiber(*p, f, p->identity("[2]"));
  // families project onto the stored values at every slice object
  int e01 = f.slice.index_of(PatMor{"[2]", "[0,1]", "[1]"});
  int e12 = f.slice.index_of(PatMor{"[2]", "[1,2]", "[1]"});
  // pullback cardinality oracle: pairs agreeing at the middle vertex
  int v1 = f.slice.index_of(PatMor{"[2]", "[1]", "[0]"});
  int count = 0;
  auto leg = [&](int from, int to) {
    for (size_t m = 0; m < f.slice.cat.mors.size(); ++m)
      if (f.slice.cat.mors[m].src == from && f.slice.cat.mors[m].dst == to)
        return f.action[m];
    throw std::runtime_error("leg missing");
  };
  auto l1 = leg(e01, v1), l2 = leg(e12, v1);
  for (size_t a = 0; a < f.value[e01].elems.size(); ++a)
    for (size_t b = 0; b < f.value[e12].elems.size(); ++b)
      if (l1[a] == l2[b]) count++;
  CHECK(int(ev.families.size()) == count);
}

TEST_CASE("pushforward along an inert morphism is restriction") {
  auto p = delta3();
  std::mt19937 rng(5);
  FiberObject f = random_fiber(*p, "[3]", rng, 3);
  PatMor inert{"[3]", "[0,1,2]", "[2]"};
  REQUIRE(p->is_inert(inert));
  FiberObject g = pushforward(*p, f, inert);
  for (size_t e = 0; e < g.slice.labels.size(); ++e) {
    PatMor comp = p->compose(g.slice.labels[e], inert);
    int src = f.slice.index_of(comp);
    REQUIRE(src >= 0);
    CHECK(g.value[e].elems.size() == f.value[src].elems.size());
  }
}

TEST_CASE("pushforward along the active [2] ~> [1] is binary span composition") {
  auto p = delta3();
  std::mt19937 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    FiberObject f = random_fiber(*p, "[2]", rng, 5);
    PatMor act{"[2]", "[0,2]", "[1]"};
    FiberObject g = pushforward(*p, f, act);
    Slice s2 = f.slice;
    int e01 = s2.index_of(PatMor{"[2]", "[0,1]", "[1]"});
    int e12 = s2.index_of(PatMor{"[2]", "[1,2]", "[1]"});
    auto leg = [&](int from, const std::string& vkey) {
      for (size_t m = 0; m < s2.cat.mors.size(); ++m)
        if (s2.cat.mors[m].src == from && s2.labels[s2.cat.mors[m].dst].key == vkey)
          return f.action[m];
      throw std::runtime_error("leg missing");
    };
    Span a{f.value[s2.index_of(PatMor{"[2]", "[0]", "[0]"})], f.value[e01],
           f.value[s2.index_of(PatMor{"[2]", "[1]", "[0]"})], leg(e01, "[0]"), leg(e01, "[1]")};
    Span b{f.value[s2.index_of(PatMor{"[2]", "[1]", "[0]"})], f.value[e12],
           f.value[s2.index_of(PatMor{"[2]", "[2]", "[0]"})], leg(e12, "[1]"), leg(e12, "[2]")};
    Span c = compose_binary_spans(a, b);
    int edge = -1;
    for (size_t t = 0; t < g.slice.labels.size(); ++t)
      if (g.slice.labels[t].dst == "[1]") edge = int(t);
    REQUIRE(edge >= 0);
    REQUIRE(g.value[edge].elems.size() == c.apex.elems.size());
    // naturality in the legs: the pushforward's vertex actions match the
    // outer legs of the composed span
    int v0 = -1, v1 = -1;
    for (size_t t = 0; t < g.slice.labels.size(); ++t) {
      if (g.slice.labels[t].key == "[0]") v0 = int(t);
      if (g.slice.labels[t].key == "[1]") v1 = int(t);
    }
    auto gleg = [&](int from, int to) {
      for (size_t m = 0; m < g.slice.cat.mors.size(); ++m)
        if (g.slice.cat.mors[m].src == from && g.slice.cat.mors[m].dst == to)
          return g.action[m];
      throw std::runtime_error("leg missing");
    };
    // elementwise bijection: a composed pair (s,t) corresponds to the limit
    // family with components (v0, v1, v2, s, t) in canonical slice order
    auto vleg = [&](int from, const std::string& vkey) {
      for (size_t m = 0; m < s2.cat.mors.size(); ++m)
        if (s2.cat.mors[m].src == from && s2.labels[s2.cat.mors[m].dst].key == vkey)
          return f.action[m];
      throw std::runtime_error("leg missing");
    };
    int sv0 = s2.index_of(PatMor{"[2]", "[0]", "[0]"});
    int sv1 = s2.index_of(PatMor{"[2]", "[1]", "[0]"});
    int sv2 = s2.index_of(PatMor{"[2]", "[2]", "[0]"});
    std::set<int> hit;
    for (size_t k = 0; k < c.apex.elems.size(); ++k) {
      // recover the pair indices from the span construction order
      int a_idx = -1, b_idx = -1;
      {
        int pos = 0;
        for (size_t aa = 0; aa < f.value[e01].elems.size() && a_idx < 0; ++aa)
          for (size_t bb = 0; bb < f.value[e12].elems.size() && a_idx < 0; ++bb)
            if (a.right_leg[aa] == b.left_leg[bb]) {
              if (pos == int(k)) {
                a_idx = int(aa);
                b_idx = int(bb);
              }
              pos++;
            }
      }
      REQUIRE(a_idx >= 0);
      std::string nm = "(" + f.value[sv0].elems[vleg(e01, "[0]")[a_idx]] + "," +
                       f.value[sv1].elems[vleg(e01, "[1]")[a_idx]] + "," +
                       f.value[sv2].elems[vleg(e12, "[2]")[b_idx]] + "," +
                       f.value[e01].elems[a_idx] + "," + f.value[e12].elems[b_idx] + ")";
      int gi = g.value[edge].index_of(nm);
      REQUIRE(gi >= 0);
      hit.insert(gi);
      CHECK(gleg(edge, v0)[gi] == c.left_leg[k]);
      CHECK(gleg(edge, v1)[gi] == c.right_leg[k]);
    }
    CHECK(hit.size() == g.value[edge].elems.size());
  }
}

TEST_CASE("pushforward along the unit direction gives the identity span") {
  auto p = delta3();
  FiberObject f;
  f.base = "[0]";
  f.slice = elementary_slice(*p, "[0]");
  f.value = {FinSet{{"x", "y"}}};
  f.action = {{0, 1}};
  PatMor unit{"[0]", "[0,0]", "[1]"};
  REQUIRE(p->is_active(unit));
  FiberObject g = pushforward(*p, f, unit);
  for (size_t e = 0; e < g.slice.labels.size(); ++e)
    CHECK(g.value[e].elems.size() == 2);
  REQUIRE(validate_fiber(g).empty());
}

TEST_CASE("span composition unit and empty laws") {
  Span s{FinSet{{"a0", "a1"}}, FinSet{{"s0", "s1", "s2"}}, FinSet{{"b0", "b1"}},
         {0, 0, 1}, {0, 1, 1}};
  // identity span on the right foot
  Span idb{FinSet{{"b0", "b1"}}, FinSet{{"b0", "b1"}}, FinSet{{"b0", "b1"}}, {0, 1}, {0, 1}};
  Span c = compose_binary_spans(s, idb);
  CHECK(c.apex.elems.size() == s.apex.elems.size());
  for (size_t k = 0; k < c.apex.elems.size(); ++k) {
    CHECK(c.left_leg[k] == s.left_leg[k]);
    CHECK(c.right_leg[k] == s.right_leg[k]);
  }
  Span empty{FinSet{{"a"}}, FinSet{}, FinSet{{"b"}}, {}, {}};
  Span e2{FinSet{{"b"}}, FinSet{}, FinSet{{"c"}}, {}, {}};
  CHECK(compose_binary_spans(empty, e2).apex.elems.empty());
  Span mismatched{FinSet{{"z"}}, FinSet{}, FinSet{{"q"}}, {}, {}};
  CHECK_THROWS_AS(compose_binary_spans(s, mismatched), input_error);
}

TEST_CASE("running example: 3 and 2 element apexes compose to 4") {
  Span s{FinSet{{"a"}}, FinSet{{"s0", "s1", "s2"}}, FinSet{{"y0", "y1"}},
         {0, 0, 0}, {0, 0, 1}};
  Span t{FinSet{{"y0", "y1"}}, FinSet{{"t0", "t1"}}, FinSet{{"c"}}, {0, 1}, {0, 0}};
  // fiber sizes over (y0, y1): legs (2,1)x(1,1) give 3; (2,1)x(2,0) give 4
  Span t2{FinSet{{"y0", "y1"}}, FinSet{{"t0", "t1"}}, FinSet{{"c"}}, {0, 0}, {0, 0}};
  CHECK(compose_binary_spans(s, t2).apex.elems.size() == 4);
  CHECK(compose_binary_spans(s, t).apex.elems.size() == 3);
}

TEST_CASE("pushforward functoriality on composable pairs within [3]") {
  auto p = delta3();
  std::mt19937 rng(99);
  int cases = 0;
  for (const auto& a : p->objects())
    for (const auto& b : p->objects())
      for (const auto& f : p->hom(a, b))
        for (const auto& c : p->objects())
          for (const auto& g : p->hom(b, c)) {
            if (cases >= 120) break;
            // one random fiber per pair keeps the run fast
            FiberObject f0 = random_fiber(*p, a, rng, 3);
            std::string why;
            bool ok = check_pushforward_functoriality(*p, f0, f, g, &why);
            if (!ok) MESSAGE(why);
            CHECK(ok);
            cases++;
          }
  CHECK(cases >= 100);
}

TEST_CASE("span monoidal determinacy") {
  auto p = delta3();
  std::mt19937 rng(3);
  SUBCASE("delta at [2]") {
    std::vector<FiberObject> tests;
    for (int i = 0; i < 5; ++i) tests.push_back(random_fiber(*p, "[2]", rng, 3));
    auto rep = check_span_monoidal(*p, "[2]", tests);
    CHECK(rep.determined);
  }
  SUBCASE("elementary objects are trivially determined") {
    std::vector<FiberObject> tests{random_fiber(*p, "[1]", rng, 3)};
    CHECK(check_span_monoidal(*p, "[1]", tests).determined);
  }
  SUBCASE("theta at the vertical pasting") {
    ThetaPattern tp(2, 5);
    std::vector<FiberObject> tests;
    for (int i = 0; i < 3; ++i) tests.push_back(random_fiber(tp, "(()())", rng, 2));
    auto rep = check_span_monoidal(tp, "(()())", tests);
    CHECK(rep.determined);
  }
}

TEST_CASE("truncated functor JSON round trip") {
  auto p = delta3();
  TruncatedFunctor x = monoid_nerve(p, 2, {{0, 1}, {1, 0}}, 2);
  // shrink to [0..2] truncation for a small file
  TruncatedFunctor y = truncated_from_json(truncated_to_json(x), p);
  CHECK(truncated_to_json(y) == truncated_to_json(x));
  Span s{FinSet{{"a"}}, FinSet{{"s"}}, FinSet{{"b"}}, {0}, {0}};
  CHECK(span_to_json(span_from_json(span_to_json(s))) == span_to_json(s));
}
