#include "patspan/fincat.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace patspan {

using json = nlohmann::ordered_json;

int FinCat::obj_index(const std::string& o) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), o);
  if (it == objects.end() || *it != o) return -1;
  return int(it - objects.begin());
}

int FinCat::mor_index(const std::string& m) const {
  for (size_t i = 0; i < mors.size(); ++i)
    if (mors[i].id == m) return int(i);
  return -1;
}

int FinCat::compose(int g, int f) const {
  auto it = comp.find({g, f});
  return it == comp.end() ? -1 : it->second;
}

bool FinCat::is_identity(int m) const {
  return m >= 0 && identity[mors[m].src] == m;
}

void FinCat::canonicalize() {
  std::vector<int> operm(objects.size());
  std::iota(operm.begin(), operm.end(), 0);
  std::sort(operm.begin(), operm.end(),
            [&](int a, int b) { return objects[a] < objects[b]; });
  std::vector<int> oinv(objects.size());
  for (size_t i = 0; i < operm.size(); ++i) oinv[operm[i]] = int(i);

  std::vector<int> mperm(mors.size());
  std::iota(mperm.begin(), mperm.end(), 0);
  std::sort(mperm.begin(), mperm.end(),
            [&](int a, int b) { return mors[a].id < mors[b].id; });
  std::vector<int> minv(mors.size());
  for (size_t i = 0; i < mperm.size(); ++i) minv[mperm[i]] = int(i);

  std::vector<std::string> new_objects(objects.size());
  for (size_t i = 0; i < objects.size(); ++i) new_objects[i] = objects[operm[i]];
  std::vector<Mor> new_mors(mors.size());
  for (size_t i = 0; i < mors.size(); ++i) {
    const Mor& m = mors[mperm[i]];
    new_mors[i] = {m.id, oinv[m.src], oinv[m.dst]};
  }
  std::vector<int> new_identity(objects.size());
  for (size_t i = 0; i < objects.size(); ++i)
    new_identity[oinv[i]] = minv[identity[i]];
  std::map<std::pair<int, int>, int> new_comp;
  for (const auto& [k, v] : comp)
    new_comp[{minv[k.first], minv[k.second]}] = minv[v];

  objects = std::move(new_objects);
  mors = std::move(new_mors);
  identity = std::move(new_identity);
  comp = std::move(new_comp);
}

FinCat make_fincat(std::vector<std::string> objects,
                   std::vector<std::tuple<std::string, std::string, std::string>> mors,
                   std::vector<std::tuple<std::string, std::string, std::string>> compose,
                   std::vector<std::pair<std::string, std::string>> identities) {
  FinCat c;
  std::sort(objects.begin(), objects.end());
  if (std::adjacent_find(objects.begin(), objects.end()) != objects.end())
    throw input_error("duplicate object identifier");
  c.objects = objects;
  std::map<std::string, int> oidx;
  for (size_t i = 0; i < c.objects.size(); ++i) oidx[c.objects[i]] = int(i);
  std::map<std::string, int> midx;
  for (auto& [id, s, d] : mors) {
    if (!oidx.count(s) || !oidx.count(d)) throw input_error("morphism endpoint unknown: " + id);
    if (midx.count(id)) throw input_error("duplicate morphism identifier: " + id);
    midx[id] = int(c.mors.size());
    c.mors.push_back({id, oidx[s], oidx[d]});
  }
  c.identity.assign(c.objects.size(), -1);
  for (auto& [o, m] : identities) {
    if (!oidx.count(o) || !midx.count(m)) throw input_error("bad identity assignment");
    c.identity[oidx[o]] = midx[m];
  }
  for (size_t i = 0; i < c.identity.size(); ++i)
    if (c.identity[i] < 0) throw input_error("object without identity: " + c.objects[i]);
  for (auto& [g, f, gf] : compose) {
    if (!midx.count(g) || !midx.count(f) || !midx.count(gf))
      throw input_error("compose entry references unknown morphism");
    c.comp[{midx[g], midx[f]}] = midx[gf];
  }
  c.canonicalize();
  return c;
}

Diagnostics validate_category(const FinCat& c) {
  Diagnostics out;
  const int M = int(c.mors.size());
  for (size_t o = 0; o < c.objects.size(); ++o) {
    int e = c.identity[o];
    if (e < 0 || e >= M) {
      out.push_back("missing identity on " + c.objects[o]);
      continue;
    }
    if (c.mors[e].src != int(o) || c.mors[e].dst != int(o))
      out.push_back("identity of " + c.objects[o] + " has wrong endpoints");
  }
  for (const auto& [k, v] : c.comp) {
    auto [g, f] = k;
    if (c.mors[f].dst != c.mors[g].src)
      out.push_back("compose(" + c.mors[g].id + "," + c.mors[f].id + ") on non-composable pair");
    else if (c.mors[v].src != c.mors[f].src || c.mors[v].dst != c.mors[g].dst)
      out.push_back("compose(" + c.mors[g].id + "," + c.mors[f].id + ") has wrong endpoints");
  }
  for (int f = 0; f < M; ++f)
    for (int g = 0; g < M; ++g) {
      if (c.mors[f].dst != c.mors[g].src) continue;
      if (c.compose(g, f) < 0)
        out.push_back("compose(" + c.mors[g].id + "," + c.mors[f].id + ") missing");
    }
  for (int m = 0; m < M; ++m) {
    int el = c.identity[c.mors[m].dst], er = c.identity[c.mors[m].src];
    if (el >= 0 && c.compose(el, m) != m)
      out.push_back("left unit fails at " + c.mors[m].id);
    if (er >= 0 && c.compose(m, er) != m)
      out.push_back("right unit fails at " + c.mors[m].id);
  }
  // associativity on all composable triples
  for (int f = 0; f < M; ++f)
    for (int g = 0; g < M; ++g) {
      if (c.mors[f].dst != c.mors[g].src) continue;
      int gf = c.compose(g, f);
      if (gf < 0) continue;
      for (int h = 0; h < M; ++h) {
        if (c.mors[g].dst != c.mors[h].src) continue;
        int hg = c.compose(h, g);
        if (hg < 0) continue;
        int a = c.compose(h, gf), b = c.compose(hg, f);
        if (a != b || a < 0)
          out.push_back("associativity fails at (" + c.mors[h].id + "," + c.mors[g].id + "," +
                        c.mors[f].id + ")");
      }
    }
  return out;
}

bool is_gaunt(const FinCat& c) {
  const int M = int(c.mors.size());
  for (int f = 0; f < M; ++f) {
    if (c.is_identity(f)) continue;
    for (int g = 0; g < M; ++g) {
      if (c.mors[g].src != c.mors[f].dst || c.mors[g].dst != c.mors[f].src) continue;
      if (c.is_identity(c.compose(g, f)) && c.is_identity(c.compose(f, g))) return false;
    }
  }
  return true;
}

FinCat fincat_from_poset(const std::vector<std::string>& elems,
                         const std::vector<std::pair<std::string, std::string>>& leq) {
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  std::vector<std::tuple<std::string, std::string, std::string>> comps;
  std::vector<std::pair<std::string, std::string>> ids;
  std::set<std::pair<std::string, std::string>> rel(leq.begin(), leq.end());
  for (const auto& e : elems) rel.insert({e, e});
  auto name = [](const std::string& a, const std::string& b) { return a + "<=" + b; };
  for (const auto& [a, b] : rel) mors.push_back({name(a, b), a, b});
  for (const auto& e : elems) ids.push_back({e, name(e, e)});
  for (const auto& [a, b] : rel)
    for (const auto& [b2, c] : rel)
      if (b == b2) {
        if (!rel.count({a, c})) throw input_error("relation not transitive: " + a + "," + c);
        comps.push_back({name(b, c), name(a, b), name(a, c)});
      }
  return make_fincat(elems, mors, comps, ids);
}

Diagnostics validate_functor(const Functor& f) {
  Diagnostics out;
  if (f.omap.size() != f.source.objects.size() || f.mmap.size() != f.source.mors.size()) {
    out.push_back("functor maps have wrong arity");
    return out;
  }
  for (size_t m = 0; m < f.source.mors.size(); ++m) {
    const auto& mm = f.source.mors[m];
    const auto& tm = f.target.mors[f.mmap[m]];
    if (tm.src != f.omap[mm.src] || tm.dst != f.omap[mm.dst])
      out.push_back("endpoints not preserved at " + mm.id);
  }
  for (size_t o = 0; o < f.source.objects.size(); ++o)
    if (f.mmap[f.source.identity[o]] != f.target.identity[f.omap[o]])
      out.push_back("identity not preserved at " + f.source.objects[o]);
  for (const auto& [k, v] : f.source.comp) {
    int tg = f.mmap[k.first], tf = f.mmap[k.second];
    if (f.target.compose(tg, tf) != f.mmap[v])
      out.push_back("composition not preserved at (" + f.source.mors[k.first].id + "," +
                    f.source.mors[k.second].id + ")");
  }
  return out;
}

bool is_isomorphism(const Functor& f) {
  if (!is_gaunt(f.source) || !is_gaunt(f.target))
    throw input_error("is_isomorphism requires gaunt categories");
  if (f.source.objects.size() != f.target.objects.size()) return false;
  std::vector<char> seen(f.target.objects.size(), 0);
  for (int o : f.omap) {
    if (seen[o]) return false;
    seen[o] = 1;
  }
  if (f.source.mors.size() != f.target.mors.size()) return false;
  std::vector<char> mseen(f.target.mors.size(), 0);
  for (int m : f.mmap) {
    if (mseen[m]) return false;
    mseen[m] = 1;
  }
  return true;
}

namespace {

// backtracking object matcher for find_isomorphism
bool iso_extend(const FinCat& a, const FinCat& b, std::vector<int>& omap,
                std::vector<char>& used, size_t at,
                const std::vector<std::vector<int>>& ahom,
                const std::vector<std::vector<int>>& bhom) {
  size_t n = a.objects.size();
  if (at == n) return true;
  for (size_t cand = 0; cand < n; ++cand) {
    if (used[cand]) continue;
    bool ok = true;
    for (size_t prev = 0; prev <= at && ok; ++prev) {
      int bq = (prev == at) ? int(cand) : omap[prev];
      if (bq < 0) continue;
      if (ahom[at * n + prev].size() != bhom[cand * n + bq].size() ||
          ahom[prev * n + at].size() != bhom[bq * n + cand].size())
        ok = false;
    }
    if (!ok) continue;
    omap[at] = int(cand);
    used[cand] = 1;
    if (iso_extend(a, b, omap, used, at + 1, ahom, bhom)) return true;
    used[cand] = 0;
    omap[at] = -1;
  }
  return false;
}

std::vector<std::vector<int>> hom_table(const FinCat& c) {
  size_t n = c.objects.size();
  std::vector<std::vector<int>> t(n * n);
  for (size_t m = 0; m < c.mors.size(); ++m)
    t[c.mors[m].src * n + c.mors[m].dst].push_back(int(m));
  return t;
}

}  // namespace

std::optional<Functor> find_isomorphism(const FinCat& a, const FinCat& b) {
  if (a.objects.size() != b.objects.size() || a.mors.size() != b.mors.size())
    return std::nullopt;
  if (!is_gaunt(a) || !is_gaunt(b)) throw input_error("find_isomorphism requires gaunt inputs");
  size_t n = a.objects.size();
  auto ahom = hom_table(a), bhom = hom_table(b);
  std::vector<int> omap(n, -1);
  std::vector<char> used(n, 0);
  if (!iso_extend(a, b, omap, used, 0, ahom, bhom)) return std::nullopt;
  // extend to morphisms: try all hom-set bijections compatible with composition.
  // Hom sets here are tiny; greedy per-hom assignment with a final functor check.
  Functor f;
  f.source = a;
  f.target = b;
  f.omap = omap;
  f.mmap.assign(a.mors.size(), -1);
  // enumerate assignments per hom set recursively
  std::vector<std::pair<int, int>> cells;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!ahom[i * n + j].empty()) cells.push_back({int(i), int(j)});
  std::function<bool(size_t)> assign = [&](size_t ci) -> bool {
    if (ci == cells.size()) return validate_functor(f).empty();
    auto [i, j] = cells[ci];
    const auto& as = ahom[i * n + j];
    const auto& bs = bhom[size_t(omap[i]) * n + omap[j]];
    std::vector<int> perm(as.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::function<bool(size_t)> place = [&](size_t k) -> bool {
      if (k == as.size()) return assign(ci + 1);
      for (size_t t = k; t < as.size(); ++t) {
        std::swap(perm[k], perm[t]);
        f.mmap[as[k]] = bs[perm[k]];
        if (a.is_identity(as[k]) == b.is_identity(bs[perm[k]])) {
          if (place(k + 1)) return true;
        }
        f.mmap[as[k]] = -1;
        std::swap(perm[k], perm[t]);
      }
      return false;
    };
    return place(0);
  };
  if (!assign(0)) return std::nullopt;
  return f;
}

Diagnostics validate_diagram(const SetDiagram& d) {
  Diagnostics out = validate_category(d.base);
  if (!out.empty()) return out;
  if (d.values.size() != d.base.objects.size() || d.maps.size() != d.base.mors.size()) {
    out.push_back("diagram tables have wrong arity");
    return out;
  }
  auto from = [&](int m) { return d.covariant ? d.base.mors[m].src : d.base.mors[m].dst; };
  auto to = [&](int m) { return d.covariant ? d.base.mors[m].dst : d.base.mors[m].src; };
  for (size_t m = 0; m < d.maps.size(); ++m) {
    if (d.maps[m].size() != d.values[from(int(m))].size()) {
      out.push_back("map arity mismatch at " + d.base.mors[m].id);
      continue;
    }
    for (int v : d.maps[m])
      if (v < 0 || v >= int(d.values[to(int(m))].size()))
        out.push_back("map out of range at " + d.base.mors[m].id);
  }
  if (!out.empty()) return out;
  for (size_t o = 0; o < d.base.objects.size(); ++o) {
    const auto& idm = d.maps[d.base.identity[o]];
    for (size_t v = 0; v < idm.size(); ++v)
      if (idm[v] != int(v)) out.push_back("identity not sent to identity at " + d.base.objects[o]);
  }
  for (const auto& [k, v] : d.base.comp) {
    auto [g, f] = k;
    int inner = d.covariant ? f : g;
    int outer = d.covariant ? g : f;
    const auto& mi = d.maps[inner];
    const auto& mo = d.maps[outer];
    const auto& mc = d.maps[v];
    for (size_t x = 0; x < mi.size(); ++x)
      if (mo[mi[x]] != mc[x]) {
        out.push_back("functoriality fails at (" + d.base.mors[g].id + "," + d.base.mors[f].id + ")");
        break;
      }
  }
  return out;
}

LimitResult limit_of_set_diagram(const SetDiagram& d) {
  Diagnostics diag = validate_diagram(d);
  if (!diag.empty()) throw input_error("invalid diagram: " + diag.front());
  if (!d.covariant) throw input_error("limit_of_set_diagram expects a covariant diagram");
  LimitResult res;
  size_t n = d.base.objects.size();
  std::vector<int> fam(n, -1);
  // group morphisms by source for constraint propagation
  std::function<void(size_t)> rec = [&](size_t o) {
    if (o == n) {
      res.families.push_back(fam);
      return;
    }
    for (size_t v = 0; v < d.values[o].size(); ++v) {
      fam[o] = int(v);
      bool ok = true;
      for (size_t m = 0; m < d.base.mors.size() && ok; ++m) {
        int s = d.base.mors[m].src, t = d.base.mors[m].dst;
        if (size_t(s) <= o && size_t(t) <= o && fam[s] >= 0 && fam[t] >= 0)
          if (d.maps[m][fam[s]] != fam[t]) ok = false;
      }
      if (ok) rec(o + 1);
    }
    fam[o] = -1;
  };
  rec(0);
  return res;
}

ElementsResult category_of_elements(const SetDiagram& d) {
  Diagnostics diag = validate_diagram(d);
  if (!diag.empty()) throw input_error("invalid diagram: " + diag.front());
  ElementsResult res;
  std::vector<std::string> objs;
  std::vector<std::pair<int, int>> labels;
  auto oname = [&](int o, int v) {
    return "(" + d.base.objects[o] + "," + d.values[o][v] + ")";
  };
  for (size_t o = 0; o < d.base.objects.size(); ++o)
    for (size_t v = 0; v < d.values[o].size(); ++v) {
      objs.push_back(oname(int(o), int(v)));
      labels.push_back({int(o), int(v)});
    }
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  std::vector<std::tuple<std::string, std::string, std::string>> comps;
  std::vector<std::pair<std::string, std::string>> ids;
  // element morphism name: base morphism id + both element endpoints
  auto mname = [&](int m, int src_o, int src_v, int dst_o, int dst_v) {
    return "[" + d.base.mors[m].id + ";" + oname(src_o, src_v) + ">" + oname(dst_o, dst_v) + "]";
  };
  struct EMor {
    int base_m, so, sv, to, tv;
  };
  std::vector<EMor> emors;
  for (size_t m = 0; m < d.base.mors.size(); ++m) {
    int bs = d.base.mors[m].src, bt = d.base.mors[m].dst;
    if (d.covariant) {
      for (size_t x = 0; x < d.values[bs].size(); ++x) {
        int y = d.maps[m][x];
        emors.push_back({int(m), bs, int(x), bt, y});
      }
    } else {
      // (n,y) -> (m,z) over g: n -> m with D(g)(z) = y
      for (size_t z = 0; z < d.values[bt].size(); ++z) {
        int y = d.maps[m][z];
        emors.push_back({int(m), bs, y, bt, int(z)});
      }
    }
  }
  auto ename = [&](const EMor& e) { return mname(e.base_m, e.so, e.sv, e.to, e.tv); };
  for (const auto& e : emors) mors.push_back({ename(e), oname(e.so, e.sv), oname(e.to, e.tv)});
  for (size_t o = 0; o < d.base.objects.size(); ++o)
    for (size_t v = 0; v < d.values[o].size(); ++v) {
      EMor e{d.base.identity[o], int(o), int(v), int(o), int(v)};
      ids.push_back({oname(int(o), int(v)), ename(e)});
    }
  for (size_t i = 0; i < emors.size(); ++i)
    for (size_t j = 0; j < emors.size(); ++j) {
      const auto& f = emors[i];
      const auto& g = emors[j];
      if (f.to != g.so || f.tv != g.sv) continue;
      int c = d.base.compose(g.base_m, f.base_m);
      if (c < 0) continue;
      EMor e{c, f.so, f.sv, g.to, g.tv};
      comps.push_back({ename(g), ename(f), ename(e)});
    }
  res.cat = make_fincat(objs, mors, comps, ids);
  // reorder labels to the canonical object order
  std::vector<std::pair<int, int>> sorted_labels(res.cat.objects.size());
  for (size_t k = 0; k < objs.size(); ++k)
    sorted_labels[res.cat.obj_index(oname(labels[k].first, labels[k].second))] = labels[k];
  res.labels = sorted_labels;
  return res;
}

// ---------------------------------------------------------------------------
// Colimit of gaunt categories.

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace

ColimitResult colimit_of_gaunt_categories(const GauntColimitInput& in, const ColimitOptions& opts) {
  const FinCat& I = in.index;
  if (in.diagram.size() != I.objects.size())
    throw input_error("colimit: diagram size does not match index");
  for (const auto& c : in.diagram) {
    if (!validate_category(c).empty()) throw input_error("colimit: invalid diagram category");
    if (!is_gaunt(c)) throw input_error("colimit: unsupported non-gaunt input");
  }
  for (const auto& [m, f] : in.transitions) {
    if (!validate_functor(f).empty()) throw input_error("colimit: invalid transition functor");
    std::set<int> img(f.omap.begin(), f.omap.end());
    if (img.size() != f.omap.size())
      throw input_error("colimit: transition functor not injective on objects");
  }
  // global offsets
  std::vector<int> ooff(in.diagram.size() + 1, 0), moff(in.diagram.size() + 1, 0);
  for (size_t i = 0; i < in.diagram.size(); ++i) {
    ooff[i + 1] = ooff[i] + int(in.diagram[i].objects.size());
    moff[i + 1] = moff[i] + int(in.diagram[i].mors.size());
  }
  UnionFind ouf(ooff.back()), muf(moff.back());
  for (const auto& [mi, f] : in.transitions) {
    int si = I.mors[mi].src, ti = I.mors[mi].dst;
    for (size_t o = 0; o < f.omap.size(); ++o) ouf.unite(ooff[si] + int(o), ooff[ti] + f.omap[o]);
    for (size_t m = 0; m < f.mmap.size(); ++m) muf.unite(moff[si] + int(m), moff[ti] + f.mmap[m]);
  }
  // composition congruence: if representatives of classes compose inside one
  // category, all such composites must be identified.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> pairc;  // (gcls, fcls) -> composite cls
    for (size_t i = 0; i < in.diagram.size(); ++i) {
      const FinCat& D = in.diagram[i];
      for (const auto& [k, v] : D.comp) {
        int g = muf.find(moff[i] + k.first);
        int f = muf.find(moff[i] + k.second);
        int c = muf.find(moff[i] + v);
        auto it = pairc.find({g, f});
        if (it == pairc.end())
          pairc[{g, f}] = c;
        else if (muf.find(it->second) != c) {
          muf.unite(it->second, c);
          changed = true;
        }
      }
    }
  }
  // object classes, canonical names
  std::map<int, std::vector<std::pair<int, int>>> oclasses;  // root -> members (cat, obj)
  for (size_t i = 0; i < in.diagram.size(); ++i)
    for (size_t o = 0; o < in.diagram[i].objects.size(); ++o)
      oclasses[ouf.find(ooff[i] + int(o))].push_back({int(i), int(o)});
  std::map<int, std::string> oname;
  for (auto& [root, members] : oclasses) {
    std::string best;
    for (auto& [i, o] : members) {
      std::string cand = in.diagram[i].objects[o];
      if (best.empty() || cand < best) best = cand;
    }
    oname[root] = best;
  }
  {
    // disambiguate identical canonical names across distinct classes
    std::map<std::string, int> cnt;
    for (auto& [root, nm] : oname) cnt[nm]++;
    std::map<std::string, int> used;
    for (auto& [root, nm] : oname)
      if (cnt[nm] > 1) nm += "#" + std::to_string(used[nm]++);
  }
  // morphism classes
  std::map<int, std::vector<std::pair<int, int>>> mclasses;
  for (size_t i = 0; i < in.diagram.size(); ++i)
    for (size_t m = 0; m < in.diagram[i].mors.size(); ++m)
      mclasses[muf.find(moff[i] + int(m))].push_back({int(i), int(m)});
  auto class_src = [&](int root) {
    auto [i, m] = mclasses[root].front();
    return ouf.find(ooff[i] + in.diagram[i].mors[m].src);
  };
  auto class_dst = [&](int root) {
    auto [i, m] = mclasses[root].front();
    return ouf.find(ooff[i] + in.diagram[i].mors[m].dst);
  };
  std::map<int, bool> class_is_id;
  for (auto& [root, members] : mclasses) {
    bool id = false;
    for (auto& [i, m] : members)
      if (in.diagram[i].is_identity(m)) id = true;
    class_is_id[root] = id;
  }
  std::map<int, std::string> mclsname;
  for (auto& [root, members] : mclasses) {
    std::string best;
    for (auto& [i, m] : members) {
      std::string cand = in.diagram[i].mors[m].id;
      if (best.empty() || cand < best) best = cand;
    }
    mclsname[root] = best;
  }
  {
    std::map<std::string, int> cnt;
    for (auto& [root, nm] : mclsname) cnt[nm]++;
    std::map<std::string, int> used;
    for (auto& [root, nm] : mclsname)
      if (cnt[nm] > 1) nm += "#" + std::to_string(used[nm]++);
  }
  // in-category composition table on classes
  std::map<std::pair<int, int>, int> ctable;
  for (size_t i = 0; i < in.diagram.size(); ++i)
    for (const auto& [k, v] : in.diagram[i].comp) {
      int g = muf.find(moff[i] + k.first);
      int f = muf.find(moff[i] + k.second);
      ctable[{g, f}] = muf.find(moff[i] + v);
    }
  // generator classes: non-identities
  std::vector<int> gens;
  for (auto& [root, members] : mclasses)
    if (!class_is_id[root]) gens.push_back(root);
  std::sort(gens.begin(), gens.end(),
            [&](int a, int b) { return mclsname[a] < mclsname[b]; });

  // enumerate composable generator paths up to the cap
  using Path = std::vector<int>;
  std::map<Path, int> path_id;
  std::vector<Path> paths;
  auto intern = [&](const Path& p) {
    auto it = path_id.find(p);
    if (it != path_id.end()) return it->second;
    int id = int(paths.size());
    path_id[p] = id;
    paths.push_back(p);
    if (int(paths.size()) > opts.morphism_cap)
      throw resource_error("colimit: morphism cap exceeded");
    return id;
  };
  std::function<void(Path&, int)> grow = [&](Path& p, int at_obj) {
    if (int(p.size()) >= opts.path_cap) {
      if (!p.empty()) throw resource_error("colimit: path length cap exceeded");
      return;
    }
    for (int g : gens) {
      if (class_src(g) != at_obj) continue;
      p.push_back(g);
      intern(p);
      grow(p, class_dst(g));
      p.pop_back();
    }
  };
  for (auto& [root, nm] : oname) {
    Path p;
    intern(p);  // note: shared empty path; identities handled separately below
    grow(p, root);
  }
  // the empty path must be object-specific; use (obj, path) keys instead
  // Rebuild with object-tagged paths.
  path_id.clear();
  paths.clear();
  struct TPath {
    int start;
    Path p;
    bool operator<(const TPath& o) const {
      if (start != o.start) return start < o.start;
      return p < o.p;
    }
  };
  std::map<TPath, int> tid;
  std::vector<TPath> tpaths;
  auto tintern = [&](const TPath& t) {
    auto it = tid.find(t);
    if (it != tid.end()) return it->second;
    int id = int(tpaths.size());
    tid[t] = id;
    tpaths.push_back(t);
    if (int(tpaths.size()) > opts.morphism_cap)
      throw resource_error("colimit: morphism cap exceeded");
    return id;
  };
  std::function<void(TPath&, int)> tgrow = [&](TPath& t, int at_obj) {
    if (int(t.p.size()) >= opts.path_cap) return;
    for (int g : gens) {
      if (class_src(g) != at_obj) continue;
      t.p.push_back(g);
      tintern(t);
      tgrow(t, class_dst(g));
      t.p.pop_back();
    }
  };
  for (auto& [root, nm] : oname) {
    TPath t{root, {}};
    tintern(t);
    tgrow(t, root);
  }
  // congruence closure: relate path with single contraction (or identity drop)
  UnionFind puf(tpaths.size());
  bool pchanged = true;
  while (pchanged) {
    pchanged = false;
    for (size_t pi = 0; pi < tpaths.size(); ++pi) {
      const TPath& t = tpaths[pi];
      for (size_t k = 0; k + 1 < t.p.size(); ++k) {
        auto it = ctable.find({t.p[k + 1], t.p[k]});
        if (it == ctable.end()) continue;
        TPath r{t.start, {}};
        r.p.insert(r.p.end(), t.p.begin(), t.p.begin() + k);
        if (!class_is_id[it->second]) r.p.push_back(it->second);
        r.p.insert(r.p.end(), t.p.begin() + k + 2, t.p.end());
        int rid = tintern(r);
        if (puf.unite(int(pi), rid)) pchanged = true;
      }
    }
  }
  // build the quotient category
  std::map<int, std::vector<int>> pclasses;
  for (size_t pi = 0; pi < tpaths.size(); ++pi) pclasses[puf.find(int(pi))].push_back(int(pi));
  auto path_end = [&](const TPath& t) {
    int at = t.start;
    for (int g : t.p) at = class_dst(g);
    return at;
  };
  auto path_name = [&](int root) -> std::string {
    // canonical: shortest member, then lexicographic by generator names
    const auto& members = pclasses[root];
    std::string best;
    for (int pi : members) {
      const TPath& t = tpaths[pi];
      std::string nm;
      if (t.p.empty())
        nm = "id(" + oname[t.start] + ")";
      else {
        for (size_t k = 0; k < t.p.size(); ++k) {
          if (k) nm += ".";
          nm += mclsname[t.p[k]];
        }
      }
      std::string keyed = std::to_string(t.p.size() < 10 ? t.p.size() : 9) + nm;
      if (best.empty() || keyed < best) best = keyed;
    }
    return best.substr(1);
  };
  std::vector<std::string> objs;
  std::map<int, std::string> obj_of_root;
  for (auto& [root, nm] : oname) {
    objs.push_back(nm);
    obj_of_root[root] = nm;
  }
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  std::vector<std::pair<std::string, std::string>> ids;
  std::map<int, std::string> pname;
  {
    std::map<std::string, int> cnt;
    for (auto& [root, members] : pclasses) pname[root] = path_name(root);
    for (auto& [root, nm] : pname) cnt[nm]++;
    std::map<std::string, int> used;
    for (auto& [root, nm] : pname)
      if (cnt[nm] > 1) nm += "#" + std::to_string(used[nm]++);
  }
  for (auto& [root, members] : pclasses) {
    const TPath& t = tpaths[members.front()];
    mors.push_back({pname[root], obj_of_root[ouf.find(t.start)], obj_of_root[path_end(t)]});
  }
  for (auto& [root, nm] : oname) {
    TPath t{root, {}};
    ids.push_back({nm, pname[puf.find(tid[t])]});
  }
  // composition: concatenate then contract into the enumerated universe
  std::function<int(const TPath&)> resolve = [&](const TPath& t) -> int {
    auto it = tid.find(t);
    if (it != tid.end()) return puf.find(it->second);
    // contract one step (any position); all results must agree
    int res = -1;
    for (size_t k = 0; k + 1 < t.p.size(); ++k) {
      auto ct = ctable.find({t.p[k + 1], t.p[k]});
      if (ct == ctable.end()) continue;
      TPath r{t.start, {}};
      r.p.insert(r.p.end(), t.p.begin(), t.p.begin() + k);
      if (!class_is_id[ct->second]) r.p.push_back(ct->second);
      r.p.insert(r.p.end(), t.p.begin() + k + 2, t.p.end());
      int sub = resolve(r);
      if (sub < 0) continue;
      if (res >= 0 && res != sub)
        throw resource_error("colimit: non-confluent contraction (raise path cap)");
      res = sub;
    }
    return res;
  };
  std::vector<std::tuple<std::string, std::string, std::string>> comps;
  for (auto& [fr, fmembers] : pclasses)
    for (auto& [gr, gmembers] : pclasses) {
      const TPath& ft = tpaths[fmembers.front()];
      const TPath& gt = tpaths[gmembers.front()];
      if (path_end(ft) != ouf.find(gt.start)) continue;
      TPath cat{ft.start, ft.p};
      cat.p.insert(cat.p.end(), gt.p.begin(), gt.p.end());
      int croot = resolve(cat);
      if (croot < 0) throw resource_error("colimit: could not resolve composite (raise path cap)");
      comps.push_back({pname[gr], pname[fr], pname[croot]});
    }
  ColimitResult out;
  out.colimit = make_fincat(objs, mors, comps, ids);
  Diagnostics d = validate_category(out.colimit);
  if (!d.empty()) throw resource_error("colimit: result failed validation: " + d.front());
  // cocone functors
  for (size_t i = 0; i < in.diagram.size(); ++i) {
    Functor f;
    f.source = in.diagram[i];
    f.target = out.colimit;
    f.omap.resize(in.diagram[i].objects.size());
    f.mmap.resize(in.diagram[i].mors.size());
    for (size_t o = 0; o < f.omap.size(); ++o)
      f.omap[o] = out.colimit.obj_index(obj_of_root[ouf.find(ooff[i] + int(o))]);
    for (size_t m = 0; m < f.mmap.size(); ++m) {
      int root = muf.find(moff[i] + int(m));
      TPath t{class_src(root), {}};
      if (!class_is_id[root]) t.p.push_back(root);
      f.mmap[m] = out.colimit.mor_index(pname[puf.find(tid.at(t))]);
    }
    out.cocone.push_back(std::move(f));
  }
  return out;
}

PushoutResult pushout_of_span_oracle(const FinCat& a, const FinCat& b, const FinCat& c,
                                     const Functor& f_ab, const Functor& f_ac,
                                     const ColimitOptions& opts) {
  // Direct binary gluing, deliberately written without the index-category
  // machinery: objects B+C glued along A; morphisms are reduced generator
  // words over glued non-identity morphisms of B and C.
  size_t nb = b.objects.size(), nc = c.objects.size();
  UnionFind ouf(nb + nc);
  for (size_t o = 0; o < a.objects.size(); ++o)
    ouf.unite(f_ab.omap[o], int(nb) + f_ac.omap[o]);
  UnionFind muf(b.mors.size() + c.mors.size());
  for (size_t m = 0; m < a.mors.size(); ++m)
    muf.unite(f_ab.mmap[m], int(b.mors.size()) + f_ac.mmap[m]);
  auto msrc = [&](int gm) {
    return gm < int(b.mors.size()) ? ouf.find(b.mors[gm].src)
                                   : ouf.find(int(nb) + c.mors[gm - int(b.mors.size())].src);
  };
  auto mdst = [&](int gm) {
    return gm < int(b.mors.size()) ? ouf.find(b.mors[gm].dst)
                                   : ouf.find(int(nb) + c.mors[gm - int(b.mors.size())].dst);
  };
  auto mis_id = [&](int gm) {
    return gm < int(b.mors.size()) ? b.is_identity(gm)
                                   : c.is_identity(gm - int(b.mors.size()));
  };
  std::map<int, std::vector<int>> mcls;
  for (size_t m = 0; m < b.mors.size() + c.mors.size(); ++m)
    mcls[muf.find(int(m))].push_back(int(m));
  std::map<int, bool> cls_id;
  for (auto& [r, ms] : mcls) {
    bool id = false;
    for (int m : ms) id = id || mis_id(m);
    cls_id[r] = id;
  }
  // class composition from within B or C
  std::map<std::pair<int, int>, int> ctable;
  bool ch = true;
  while (ch) {
    ch = false;
    auto feed = [&](const FinCat& cat, int off) {
      for (const auto& [k, v] : cat.comp) {
        int g = muf.find(off + k.first), f = muf.find(off + k.second), r = muf.find(off + v);
        auto it = ctable.find({g, f});
        if (it == ctable.end())
          ctable[{g, f}] = r;
        else if (muf.find(it->second) != r) {
          muf.unite(it->second, r);
          ch = true;
        }
      }
    };
    feed(b, 0);
    feed(c, int(b.mors.size()));
    if (ch) {
      std::map<std::pair<int, int>, int> fixed;
      for (auto& [k, v] : ctable) fixed[{muf.find(k.first), muf.find(k.second)}] = muf.find(v);
      ctable = fixed;
      mcls.clear();
      for (size_t m = 0; m < b.mors.size() + c.mors.size(); ++m)
        mcls[muf.find(int(m))].push_back(int(m));
      cls_id.clear();
      for (auto& [r, ms] : mcls) {
        bool id = false;
        for (int m : ms) id = id || mis_id(m);
        cls_id[r] = id;
      }
    }
  }
  std::vector<int> gens;
  for (auto& [r, ms] : mcls)
    if (!cls_id[r]) gens.push_back(r);
  std::sort(gens.begin(), gens.end());
  // enumerate all composable generator words, then quotient by the
  // congruence generated by single in-category contractions (the rewriting
  // is not confluent across the two legs, so a plain normal form is not
  // enough).
  using Word = std::pair<int, std::vector<int>>;  // (start object root, gens)
  std::map<Word, int> wid;
  std::vector<Word> words;
  auto intern = [&](const Word& w) {
    auto it = wid.find(w);
    if (it != wid.end()) return it->second;
    int id = int(words.size());
    wid[w] = id;
    words.push_back(w);
    if (int(words.size()) > opts.morphism_cap) throw resource_error("pushout oracle: cap");
    return id;
  };
  std::set<int> oroots;
  for (size_t o = 0; o < nb + nc; ++o) oroots.insert(ouf.find(int(o)));
  auto wend = [&](const Word& w) {
    int end = w.first;
    for (int g : w.second) end = mdst(g);
    return end;
  };
  for (int r : oroots) intern({r, {}});
  for (size_t at = 0; at < words.size(); ++at) {
    Word w = words[at];
    if (int(w.second.size()) >= opts.path_cap) continue;
    int end = wend(w);
    for (int g : gens) {
      if (msrc(g) != end) continue;
      Word w2 = w;
      w2.second.push_back(g);
      intern(w2);
    }
  }
  UnionFind wuf(words.size() + 16);
  bool more = true;
  while (more) {
    more = false;
    for (size_t wi = 0; wi < words.size(); ++wi) {
      const Word w = words[wi];
      for (size_t k = 0; k + 1 < w.second.size(); ++k) {
        auto it = ctable.find({w.second[k + 1], w.second[k]});
        if (it == ctable.end()) continue;
        Word r{w.first, {}};
        r.second.insert(r.second.end(), w.second.begin(), w.second.begin() + k);
        int cc = muf.find(it->second);
        if (!cls_id[cc]) r.second.push_back(cc);
        r.second.insert(r.second.end(), w.second.begin() + k + 2, w.second.end());
        int rid = intern(r);
        if (int(wuf.parent.size()) < int(words.size())) {
          size_t old = wuf.parent.size();
          wuf.parent.resize(words.size());
          for (size_t x = old; x < wuf.parent.size(); ++x) wuf.parent[x] = int(x);
        }
        if (wuf.unite(int(wi), rid)) more = true;
      }
    }
  }
  if (wuf.parent.size() < words.size()) {
    size_t old = wuf.parent.size();
    wuf.parent.resize(words.size());
    for (size_t x = old; x < wuf.parent.size(); ++x) wuf.parent[x] = int(x);
  }
  std::map<int, std::vector<int>> wcls;
  for (size_t wi = 0; wi < words.size(); ++wi) wcls[wuf.find(int(wi))].push_back(int(wi));
  auto resolve = [&](const Word& w) -> int {
    auto it = wid.find(w);
    if (it == wid.end()) throw resource_error("pushout oracle: unresolved composite");
    return wuf.find(it->second);
  };
  auto wname = [&](int root) {
    // canonical member: shortest word, ties by content
    const auto& ms = wcls[root];
    Word best;
    bool first = true;
    for (int wi : ms) {
      const Word& w = words[wi];
      if (first || w.second.size() < best.second.size() ||
          (w.second.size() == best.second.size() && w < best)) {
        best = w;
        first = false;
      }
    }
    std::string nm = "w" + std::to_string(best.first);
    for (int g : best.second) nm += "." + std::to_string(g);
    return nm;
  };
  std::vector<std::string> objs;
  std::map<int, std::string> objname;
  for (int r : oroots) {
    objname[r] = "o" + std::to_string(r);
    objs.push_back(objname[r]);
  }
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  std::vector<std::tuple<std::string, std::string, std::string>> comps;
  std::vector<std::pair<std::string, std::string>> ids;
  for (auto& [root, ms] : wcls) {
    const Word& w = words[ms.front()];
    mors.push_back({wname(root), objname[w.first], objname[wend(w)]});
  }
  for (int r : oroots) ids.push_back({objname[r], wname(resolve({r, {}}))});
  for (auto& [fr, fms] : wcls)
    for (auto& [gr, gms] : wcls) {
      const Word& wf = words[fms.front()];
      const Word& wg = words[gms.front()];
      if (wend(wf) != wg.first) continue;
      Word cat = wf;
      cat.second.insert(cat.second.end(), wg.second.begin(), wg.second.end());
      comps.push_back({wname(gr), wname(fr), wname(resolve(cat))});
    }
  PushoutResult out;
  out.cat = make_fincat(objs, mors, comps, ids);
  auto mk = [&](const FinCat& src, int ooffv, int moffv) {
    Functor f;
    f.source = src;
    f.target = out.cat;
    for (size_t o = 0; o < src.objects.size(); ++o)
      f.omap.push_back(out.cat.obj_index(objname[ouf.find(ooffv + int(o))]));
    for (size_t m = 0; m < src.mors.size(); ++m) {
      int root = muf.find(moffv + int(m));
      Word w{msrc(root), {}};
      if (!cls_id[root]) w.second.push_back(root);
      f.mmap.push_back(out.cat.mor_index(wname(resolve(w))));
    }
    return f;
  };
  out.from_b = mk(b, 0, 0);
  out.from_c = mk(c, int(nb), int(b.mors.size()));
  return out;
}

// ---------------------------------------------------------------------------
// JSON / DOT

std::string fincat_to_json(const FinCat& c) {
  json j;
  j["objects"] = c.objects;
  json homs = json::array();
  for (const auto& m : c.mors)
    homs.push_back({{"src", c.objects[m.src]}, {"dst", c.objects[m.dst]}, {"id", m.id}});
  j["homs"] = homs;
  json comp = json::array();
  for (const auto& [k, v] : c.comp)
    comp.push_back({c.mors[k.first].id, c.mors[k.second].id, c.mors[v].id});
  j["compose"] = comp;
  json ids = json::array();
  for (size_t o = 0; o < c.objects.size(); ++o)
    ids.push_back({{"object", c.objects[o]}, {"id", c.mors[c.identity[o]].id}});
  j["identities"] = ids;
  return j.dump(2);
}

FinCat fincat_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("bad JSON: ") + e.what());
  }
  std::vector<std::string> objects = j.at("objects").get<std::vector<std::string>>();
  std::vector<std::tuple<std::string, std::string, std::string>> mors, comps;
  for (const auto& h : j.at("homs"))
    mors.push_back({h.at("id").get<std::string>(), h.at("src").get<std::string>(),
                    h.at("dst").get<std::string>()});
  for (const auto& t : j.at("compose"))
    comps.push_back({t.at(0).get<std::string>(), t.at(1).get<std::string>(),
                     t.at(2).get<std::string>()});
  std::vector<std::pair<std::string, std::string>> ids;
  for (const auto& e : j.at("identities"))
    ids.push_back({e.at("object").get<std::string>(), e.at("id").get<std::string>()});
  return make_fincat(objects, mors, comps, ids);
}

std::string functor_to_json(const Functor& f) {
  json j;
  j["source"] = json::parse(fincat_to_json(f.source));
  j["target"] = json::parse(fincat_to_json(f.target));
  json om = json::object(), mm = json::object();
  for (size_t o = 0; o < f.omap.size(); ++o)
    om[f.source.objects[o]] = f.target.objects[f.omap[o]];
  for (size_t m = 0; m < f.mmap.size(); ++m)
    mm[f.source.mors[m].id] = f.target.mors[f.mmap[m]].id;
  j["object_map"] = om;
  j["morphism_map"] = mm;
  return j.dump(2);
}

std::string diagram_to_json(const SetDiagram& d) {
  json j;
  j["base"] = json::parse(fincat_to_json(d.base));
  j["variance"] = d.covariant ? "covariant" : "contravariant";
  json vals = json::object();
  for (size_t o = 0; o < d.values.size(); ++o) vals[d.base.objects[o]] = d.values[o];
  j["object_values"] = vals;
  json maps = json::object();
  for (size_t m = 0; m < d.maps.size(); ++m) {
    int from = d.covariant ? d.base.mors[m].src : d.base.mors[m].dst;
    int to = d.covariant ? d.base.mors[m].dst : d.base.mors[m].src;
    json pairs = json::array();
    for (size_t x = 0; x < d.maps[m].size(); ++x)
      pairs.push_back({d.values[from][x], d.values[to][d.maps[m][x]]});
    maps[d.base.mors[m].id] = pairs;
  }
  j["morphism_values"] = maps;
  return j.dump(2);
}

SetDiagram diagram_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("bad JSON: ") + e.what());
  }
  SetDiagram d;
  d.base = fincat_from_json(j.at("base").dump());
  d.covariant = j.at("variance").get<std::string>() == "covariant";
  d.values.resize(d.base.objects.size());
  for (auto& [key, arr] : j.at("object_values").items()) {
    int o = d.base.obj_index(key);
    if (o < 0) throw input_error("object_values references unknown object " + key);
    d.values[o] = arr.get<std::vector<std::string>>();
    std::sort(d.values[o].begin(), d.values[o].end());
  }
  d.maps.resize(d.base.mors.size());
  for (auto& [key, pairs] : j.at("morphism_values").items()) {
    int m = d.base.mor_index(key);
    if (m < 0) throw input_error("morphism_values references unknown morphism " + key);
    int from = d.covariant ? d.base.mors[m].src : d.base.mors[m].dst;
    int to = d.covariant ? d.base.mors[m].dst : d.base.mors[m].src;
    d.maps[m].assign(d.values[from].size(), -1);
    for (auto& p : pairs) {
      auto xs = p.at(0).get<std::string>();
      auto ys = p.at(1).get<std::string>();
      auto xit = std::find(d.values[from].begin(), d.values[from].end(), xs);
      auto yit = std::find(d.values[to].begin(), d.values[to].end(), ys);
      if (xit == d.values[from].end() || yit == d.values[to].end())
        throw input_error("morphism_values element unknown at " + key);
      d.maps[m][xit - d.values[from].begin()] = int(yit - d.values[to].begin());
    }
    for (int v : d.maps[m])
      if (v < 0) throw input_error("morphism_values incomplete at " + key);
  }
  return d;
}

std::string fincat_to_dot(const FinCat& c) {
  // generators: non-identity morphisms that are not composites of two
  // non-identities
  std::set<int> composite;
  for (const auto& [k, v] : c.comp) {
    if (c.is_identity(k.first) || c.is_identity(k.second)) continue;
    composite.insert(v);
  }
  std::ostringstream os;
  os << "digraph fincat {\n";
  for (const auto& o : c.objects) os << "  \"" << o << "\";\n";
  for (size_t m = 0; m < c.mors.size(); ++m) {
    if (c.is_identity(int(m)) || composite.count(int(m))) continue;
    os << "  \"" << c.objects[c.mors[m].src] << "\" -> \"" << c.objects[c.mors[m].dst]
       << "\" [label=\"" << c.mors[m].id << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace patspan
