#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "patspan/fincat.hpp"

using namespace patspan;

namespace {

FinCat one_object() {
  return make_fincat({"x"}, {{"id", "x", "x"}}, {{"id", "id", "id"}}, {{"x", "id"}});
}

// the walking span shape used by the Segal condition at [2]:
// e01 -> v0, e01 -> v1, e12 -> v1, e12 -> v2
FinCat span5() {
  return make_fincat(
      {"e01", "e12", "v0", "v1", "v2"},
      {{"i0", "e01", "e01"},
       {"i1", "e12", "e12"},
       {"j0", "v0", "v0"},
       {"j1", "v1", "v1"},
       {"j2", "v2", "v2"},
       {"a", "e01", "v0"},
       {"b", "e01", "v1"},
       {"c", "e12", "v1"},
       {"d", "e12", "v2"}},
      {{"i0", "i0", "i0"}, {"i1", "i1", "i1"}, {"j0", "j0", "j0"}, {"j1", "j1", "j1"},
       {"j2", "j2", "j2"}, {"a", "i0", "a"},   {"b", "i0", "b"},   {"c", "i1", "c"},
       {"d", "i1", "d"},   {"j0", "a", "a"},   {"j1", "b", "b"},   {"j1", "c", "c"},
       {"j2", "d", "d"}},
      {{"e01", "i0"}, {"e12", "i1"}, {"v0", "j0"}, {"v1", "j1"}, {"v2", "j2"}});
}

FinCat discrete(const std::vector<std::string>& os) {
  std::vector<std::tuple<std::string, std::string, std::string>> mors, comps;
  std::vector<std::pair<std::string, std::string>> ids;
  for (const auto& o : os) {
    mors.push_back({"id_" + o, o, o});
    comps.push_back({"id_" + o, "id_" + o, "id_" + o});
    ids.push_back({o, "id_" + o});
  }
  return make_fincat(os, mors, comps, ids);
}

Functor inclusion(const FinCat& sub, const FinCat& big) {
  Functor f;
  f.source = sub;
  f.target = big;
  for (const auto& o : sub.objects) f.omap.push_back(big.obj_index(o));
  for (const auto& m : sub.mors) f.mmap.push_back(big.mor_index(m.id));
  return f;
}

}  // namespace

TEST_CASE("validate: identity-only category is clean") {
  CHECK(validate_category(one_object()).empty());
}

TEST_CASE("validate: missing composite is reported with the pair") {
  FinCat c = make_fincat(
      {"x", "y", "z"},
      {{"ix", "x", "x"}, {"iy", "y", "y"}, {"iz", "z", "z"}, {"f", "x", "y"}, {"g", "y", "z"}},
      {{"ix", "ix", "ix"},
       {"iy", "iy", "iy"},
       {"iz", "iz", "iz"},
       {"f", "ix", "f"},
       {"iy", "f", "f"},
       {"g", "iy", "g"},
       {"iz", "g", "g"}},
      {{"x", "ix"}, {"y", "iy"}, {"z", "iz"}});
  auto diag = validate_category(c);
  REQUIRE(!diag.empty());
  bool found = false;
  for (const auto& d : diag)
    if (d.find("g") != std::string::npos && d.find("f") != std::string::npos &&
        d.find("missing") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("limit over one-object category returns the value set") {
  SetDiagram d;
  d.base = one_object();
  d.values = {{"a", "b"}};
  d.maps = {{0, 1}};
  auto lim = limit_of_set_diagram(d);
  CHECK(lim.families.size() == 2);
}

TEST_CASE("limit over discrete base is the product") {
  SetDiagram d;
  d.base = discrete({"p", "q", "r"});
  d.values = {{"a", "b"}, {"c"}, {"d", "e"}};
  d.maps = {{0, 1}, {0}, {0, 1}};
  auto lim = limit_of_set_diagram(d);
  CHECK(lim.families.size() == 4);
}

TEST_CASE("limit over any discrete base is the cartesian product") {
  // all discrete bases with up to 4 objects and value sets of size up to 3
  for (int nobj = 0; nobj <= 4; ++nobj) {
    std::vector<int> sizes(nobj, 1);
    std::function<void(int)> rec = [&](int at) {
      if (at == nobj) {
        std::vector<std::string> names;
        for (int i = 0; i < nobj; ++i) names.push_back("o" + std::to_string(i));
        SetDiagram d;
        d.base = discrete(names);
        long long product = 1;
        for (int i = 0; i < nobj; ++i) {
          std::vector<std::string> vals;
          for (int v = 0; v < sizes[i]; ++v) vals.push_back("v" + std::to_string(v));
          d.values.push_back(vals);
          product *= sizes[i];
        }
        for (int i = 0; i < nobj; ++i) {
          std::vector<int> idm(sizes[i]);
          for (int v = 0; v < sizes[i]; ++v) idm[v] = v;
          d.maps.push_back(idm);
        }
        CHECK((long long)limit_of_set_diagram(d).families.size() == product);
        return;
      }
      for (int v = 0; v <= 3; ++v) {
        sizes[at] = v;
        rec(at + 1);
      }
    };
    rec(0);
  }
}

TEST_CASE("limit over the span shape is the fiber product") {
  FinCat base = span5();
  SetDiagram d;
  d.base = base;
  d.values.resize(5);
  d.maps.resize(base.mors.size());
  auto set = [&](const std::string& o, std::vector<std::string> v) {
    d.values[base.obj_index(o)] = v;
  };
  set("e01", {"s0", "s1", "s2"});
  set("e12", {"t0", "t1"});
  set("v0", {"x0", "x1"});
  set("v1", {"y0", "y1"});
  set("v2", {"z0"});
  auto setmap = [&](const std::string& m, std::vector<int> v) {
    d.maps[base.mor_index(m)] = v;
  };
  setmap("i0", {0, 1, 2});
  setmap("i1", {0, 1});
  setmap("j0", {0, 1});
  setmap("j1", {0, 1});
  setmap("j2", {0});
  setmap("a", {0, 0, 1});
  setmap("b", {0, 0, 1});  // legs into y: fibers over y0 = {s0,s1}, y1 = {s2}
  setmap("c", {0, 1});     // fibers over y0 = {t0}, y1 = {t1}
  setmap("d", {0, 0});
  auto lim = limit_of_set_diagram(d);
  // independent oracle: enumerate pairs directly
  int expect = 0;
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 2; ++t)
      if (d.maps[base.mor_index("b")][s] == d.maps[base.mor_index("c")][t]) ++expect;
  CHECK(int(lim.families.size()) == expect);
  CHECK(expect == 3);
}

TEST_CASE("category of elements: constant singleton recovers the base") {
  FinCat base = span5();
  SetDiagram d;
  d.base = base;
  d.values.assign(5, {"*"});
  d.maps.assign(base.mors.size(), {0});
  auto el = category_of_elements(d);
  auto iso = find_isomorphism(el.cat, base);
  REQUIRE(iso.has_value());
  CHECK(is_isomorphism(*iso));
}

TEST_CASE("category of elements: empty diagram gives the empty category") {
  SetDiagram d;
  d.base = one_object();
  d.values = {{}};
  d.maps = {{}};
  auto el = category_of_elements(d);
  CHECK(el.cat.objects.empty());
  CHECK(el.cat.mors.empty());
}

namespace {

// globe category truncated at dimension L: objects "0".."L", two arrows
// k->m for k<m distinguished by the sign of the lowest step.
FinCat globe_cat(int L) {
  std::vector<std::string> objs;
  std::vector<std::tuple<std::string, std::string, std::string>> mors, comps;
  std::vector<std::pair<std::string, std::string>> ids;
  auto nm = [](int k, int m, char s) {
    return std::string(1, s) + std::to_string(k) + ">" + std::to_string(m);
  };
  for (int k = 0; k <= L; ++k) {
    objs.push_back(std::to_string(k));
    mors.push_back({"id" + std::to_string(k), std::to_string(k), std::to_string(k)});
    ids.push_back({std::to_string(k), "id" + std::to_string(k)});
  }
  for (int k = 0; k <= L; ++k)
    for (int m = k + 1; m <= L; ++m)
      for (char s : {'-', '+'}) mors.push_back({nm(k, m, s), std::to_string(k), std::to_string(m)});
  // composition: sign of the composite is the sign of the first (lowest) step
  for (int k = 0; k <= L; ++k) {
    comps.push_back({"id" + std::to_string(k), "id" + std::to_string(k), "id" + std::to_string(k)});
    for (int m = k + 1; m <= L; ++m)
      for (char s : {'-', '+'}) {
        comps.push_back({nm(k, m, s), "id" + std::to_string(k), nm(k, m, s)});
        comps.push_back({"id" + std::to_string(m), nm(k, m, s), nm(k, m, s)});
        for (int n = m + 1; n <= L; ++n)
          for (char s2 : {'-', '+'}) comps.push_back({nm(m, n, s2), nm(k, m, s), nm(k, n, s)});
      }
  }
  return make_fincat(objs, mors, comps, ids);
}

}  // namespace

TEST_CASE("elements of a representable presheaf is the slice (globes up to dim 3)") {
  FinCat g = globe_cat(3);
  for (int c = 0; c <= 3; ++c) {
    SetDiagram d;
    d.base = g;
    d.covariant = false;
    d.values.resize(g.objects.size());
    for (size_t o = 0; o < g.objects.size(); ++o) {
      for (size_t m = 0; m < g.mors.size(); ++m)
        if (g.mors[m].src == int(o) && g.mors[m].dst == g.obj_index(std::to_string(c)))
          d.values[o].push_back(g.mors[m].id);
      std::sort(d.values[o].begin(), d.values[o].end());
    }
    d.maps.resize(g.mors.size());
    for (size_t m = 0; m < g.mors.size(); ++m) {
      int bs = g.mors[m].src, bt = g.mors[m].dst;
      // presheaf action: precomposition y_c(g) : Hom(bt,c) -> Hom(bs,c)
      for (const auto& h : d.values[bt]) {
        int comp = g.compose(g.mor_index(h), int(m));
        REQUIRE(comp >= 0);
        auto it = std::find(d.values[bs].begin(), d.values[bs].end(), g.mors[comp].id);
        REQUIRE(it != d.values[bs].end());
        d.maps[m].push_back(int(it - d.values[bs].begin()));
      }
    }
    auto el = category_of_elements(d);
    // slice of g over c: objects = arrows into c
    int count = 0;
    for (size_t o = 0; o < g.objects.size(); ++o) count += int(d.values[o].size());
    CHECK(int(el.cat.objects.size()) == count);
    // build the slice directly and compare
    std::vector<std::string> sobjs;
    for (size_t o = 0; o < g.objects.size(); ++o)
      for (const auto& h : d.values[o]) sobjs.push_back(h);
    std::vector<std::pair<std::string, std::string>> leq;
    for (const auto& f : sobjs)
      for (const auto& h : sobjs) {
        // one arrow f -> h iff f factors through h ... slice morphism f -> h is
        // g with h∘g = f; in the gaunt globe category count pairs directly
        int fm = g.mor_index(f), hm = g.mor_index(h);
        for (size_t m = 0; m < g.mors.size(); ++m)
          if (g.mors[m].src == g.mors[fm].src && g.mors[m].dst == g.mors[hm].src &&
              g.compose(hm, int(m)) == fm && f != h)
            leq.push_back({f, h});
      }
    // slice of a gaunt category along unique factorizations: poset-like here
    std::sort(leq.begin(), leq.end());
    leq.erase(std::unique(leq.begin(), leq.end()), leq.end());
    // cannot use fincat_from_poset when parallel arrows exist; for the globe
    // slice they do not collapse only when distinct signs give distinct
    // factorizations, which the elements category also records. Compare
    // object and morphism counts instead of poset isomorphism.
    int el_nonid = 0;
    for (size_t m = 0; m < el.cat.mors.size(); ++m)
      if (!el.cat.is_identity(int(m))) ++el_nonid;
    int slice_mors = 0;
    for (const auto& f : sobjs)
      for (const auto& h : sobjs) {
        int fm = g.mor_index(f), hm = g.mor_index(h);
        for (size_t m = 0; m < g.mors.size(); ++m)
          if (g.mors[m].src == g.mors[fm].src && g.mors[m].dst == g.mors[hm].src &&
              g.compose(hm, int(m)) == fm && !(f == h && g.is_identity(int(m))))
            ++slice_mors;
      }
    CHECK(el_nonid == slice_mors);
  }
}

TEST_CASE("colimit over a one-object index returns the input") {
  GauntColimitInput in;
  in.index = one_object();
  in.diagram = {span5()};
  auto res = colimit_of_gaunt_categories(in);
  auto iso = find_isomorphism(res.colimit, span5());
  CHECK(iso.has_value());
}

TEST_CASE("colimit of singletons over a discrete index is discrete") {
  GauntColimitInput in;
  in.index = discrete({"1", "2", "3"});
  FinCat pt = one_object();
  in.diagram = {pt, pt, pt};
  auto res = colimit_of_gaunt_categories(in);
  CHECK(res.colimit.objects.size() == 3);
  CHECK(res.colimit.mors.size() == 3);
}

TEST_CASE("is_isomorphism basics") {
  Functor idf = inclusion(span5(), span5());
  CHECK(is_isomorphism(idf));
  // collapse two objects
  FinCat two = discrete({"a", "b"});
  FinCat one = discrete({"a"});
  Functor col;
  col.source = two;
  col.target = one;
  col.omap = {0, 0};
  col.mmap = {0, 0};
  CHECK(validate_functor(col).empty());
  CHECK(!is_isomorphism(col));
}

TEST_CASE("binary pushout matches the independent gluing oracle") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 12; ++trial) {
    // random poset A with <=3 elements, extended to B and C
    int na = 1 + int(rng() % 3);
    std::vector<std::string> aelems;
    for (int i = 0; i < na; ++i) aelems.push_back("a" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> aleq;
    for (int i = 0; i < na; ++i)
      for (int j = i + 1; j < na; ++j)
        if (rng() % 2) aleq.push_back({aelems[i], aelems[j]});
    // transitive closure
    bool ch = true;
    while (ch) {
      ch = false;
      for (auto& p : aleq)
        for (auto& q : aleq)
          if (p.second == q.first) {
            std::pair<std::string, std::string> t{p.first, q.second};
            if (std::find(aleq.begin(), aleq.end(), t) == aleq.end()) {
              aleq.push_back(t);
              ch = true;
            }
          }
    }
    auto extend = [&](const std::string& prefix, int extra) {
      auto elems = aelems;
      auto leq = aleq;
      for (int i = 0; i < extra; ++i) {
        std::string e = prefix + std::to_string(i);
        // new element above or below a random old one
        std::string anchor = elems[rng() % elems.size()];
        elems.push_back(e);
        if (rng() % 2)
          leq.push_back({anchor, e});
        else
          leq.push_back({e, anchor});
      }
      bool c2 = true;
      while (c2) {
        c2 = false;
        for (auto& p : leq)
          for (auto& q : leq)
            if (p.second == q.first && p.first != q.second) {
              std::pair<std::string, std::string> t{p.first, q.second};
              if (std::find(leq.begin(), leq.end(), t) == leq.end()) {
                leq.push_back(t);
                c2 = true;
              }
            }
      }
      return fincat_from_poset(elems, leq);
    };
    FinCat A = fincat_from_poset(aelems, aleq);
    FinCat B = extend("b", 1 + int(rng() % 2));
    FinCat C = extend("c", 1 + int(rng() % 2));
    Functor fab = inclusion(A, B), fac = inclusion(A, C);
    auto oracle = pushout_of_span_oracle(A, B, C, fab, fac);
    GauntColimitInput in;
    in.index = make_fincat(
        {"0", "1", "2"},
        {{"i0", "0", "0"}, {"i1", "1", "1"}, {"i2", "2", "2"}, {"l", "0", "1"}, {"r", "0", "2"}},
        {{"i0", "i0", "i0"},
         {"i1", "i1", "i1"},
         {"i2", "i2", "i2"},
         {"l", "i0", "l"},
         {"i1", "l", "l"},
         {"r", "i0", "r"},
         {"i2", "r", "r"}},
        {{"0", "i0"}, {"1", "i1"}, {"2", "i2"}});
    in.diagram = {A, B, C};
    in.transitions[in.index.mor_index("l")] = fab;
    in.transitions[in.index.mor_index("r")] = fac;
    auto col = colimit_of_gaunt_categories(in);
    REQUIRE(col.colimit.objects.size() == oracle.cat.objects.size());
    REQUIRE(col.colimit.mors.size() == oracle.cat.mors.size());
    auto iso = find_isomorphism(col.colimit, oracle.cat);
    CHECK(iso.has_value());
  }
}

TEST_CASE("non-gaunt colimit input is rejected") {
  // two-object category with inverse pair
  FinCat c = make_fincat(
      {"x", "y"},
      {{"ix", "x", "x"}, {"iy", "y", "y"}, {"f", "x", "y"}, {"g", "y", "x"}},
      {{"ix", "ix", "ix"},
       {"iy", "iy", "iy"},
       {"g", "f", "ix"},
       {"f", "g", "iy"},
       {"f", "ix", "f"},
       {"iy", "f", "f"},
       {"g", "iy", "g"},
       {"ix", "g", "g"}},
      {{"x", "ix"}, {"y", "iy"}});
  REQUIRE(validate_category(c).empty());
  CHECK(!is_gaunt(c));
  GauntColimitInput in;
  in.index = one_object();
  in.diagram = {c};
  CHECK_THROWS_AS(colimit_of_gaunt_categories(in), input_error);
}

TEST_CASE("json round trip for FinCat") {
  FinCat c = span5();
  FinCat back = fincat_from_json(fincat_to_json(c));
  CHECK(fincat_to_json(back) == fincat_to_json(c));
}

TEST_CASE("dot emitter lists one node per object and generator edges only") {
  std::string dot = fincat_to_dot(span5());
  CHECK(dot.find("\"e01\" -> \"v0\"") != std::string::npos);
  // no identity edges
  CHECK(dot.find("label=\"i0\"") == std::string::npos);
}
