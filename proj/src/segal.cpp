#include "patspan/segal.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace patspan {

int FinSet::index_of(const std::string& e) const {
  auto it = std::lower_bound(elems.begin(), elems.end(), e);
  if (it == elems.end() || *it != e) return -1;
  return int(it - elems.begin());
}

namespace {

// Interned composition tables per (pattern, truncation); the expensive
// pattern-level composition runs once per truncation, not per validation.
struct CompTables {
  std::vector<std::string> objs;
  std::vector<std::string> uids;                       // morphism id -> uid
  std::map<std::string, int> index;                    // uid -> id
  std::vector<std::pair<int, int>> ends;               // morphism id -> (a, b) object idx
  std::vector<std::vector<std::vector<int>>> homs;     // [a][b] -> morphism ids
  std::vector<std::tuple<int, int, int>> comp_pairs;   // (f, g, g∘f)
  std::vector<int> identities;                         // per object
};

const CompTables& comp_tables(const Pattern& p, const std::vector<std::string>& objs) {
  static std::map<std::string, CompTables> cache;
  static std::mutex mtx;
  std::string key = p.name() + "#";
  for (const auto& o : objs) key += o + ";";
  std::lock_guard<std::mutex> lk(mtx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  CompTables t;
  t.objs = objs;
  size_t n = objs.size();
  t.homs.assign(n, std::vector<std::vector<int>>(n));
  auto intern = [&](const PatMor& f, int a, int b) {
    auto jt = t.index.find(f.uid());
    if (jt != t.index.end()) return jt->second;
    int id = int(t.uids.size());
    t.index.emplace(f.uid(), id);
    t.uids.push_back(f.uid());
    t.ends.push_back({a, b});
    return id;
  };
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (const auto& f : p.hom(objs[a], objs[b]))
        t.homs[a][b].push_back(intern(f, int(a), int(b)));
  for (size_t a = 0; a < n; ++a) t.identities.push_back(t.index.at(p.identity(objs[a]).uid()));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (const auto& f : p.hom(objs[a], objs[b]))
        for (size_t c = 0; c < n; ++c)
          for (const auto& g : p.hom(objs[b], objs[c])) {
            PatMor gf = p.compose(g, f);
            t.comp_pairs.push_back(
                {t.index.at(f.uid()), t.index.at(g.uid()), t.index.at(gf.uid())});
          }
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace

Diagnostics validate_truncated(const TruncatedFunctor& x) {
  Diagnostics out;
  const Pattern& p = *x.pattern;
  for (const auto& o : x.objs) {
    if (!x.value.count(o)) out.push_back("missing value set at " + o);
  }
  if (!out.empty()) return out;
  const CompTables& t = comp_tables(p, x.objs);
  auto val = [&](int o) -> const FinSet& { return x.value.at(t.objs[o]); };
  std::vector<const std::vector<int>*> act(t.uids.size(), nullptr);
  for (size_t m = 0; m < t.uids.size(); ++m) {
    auto it = x.action.find(t.uids[m]);
    if (it == x.action.end()) {
      out.push_back("missing action at " + t.uids[m]);
      continue;
    }
    act[m] = &it->second;
    auto [a, b] = t.ends[m];
    if (it->second.size() != val(a).elems.size()) {
      out.push_back("action arity mismatch at " + t.uids[m]);
      act[m] = nullptr;
      continue;
    }
    for (int v : it->second)
      if (v < 0 || v >= int(val(b).elems.size())) {
        out.push_back("action out of range at " + t.uids[m]);
        act[m] = nullptr;
        break;
      }
  }
  if (!out.empty()) return out;
  for (size_t o = 0; o < t.objs.size(); ++o) {
    const auto& idm = *act[t.identities[o]];
    for (size_t v = 0; v < idm.size(); ++v)
      if (idm[v] != int(v)) out.push_back("identity not preserved at " + t.objs[o]);
  }
  for (const auto& [f, g, gf] : t.comp_pairs) {
    const auto& mf = *act[f];
    const auto& mg = *act[g];
    const auto& mgf = *act[gf];
    for (size_t v = 0; v < mf.size(); ++v)
      if (mg[mf[v]] != mgf[v]) {
        out.push_back("functoriality fails at (" + t.uids[g] + ")∘(" + t.uids[f] + ")");
        break;
      }
  }
  return out;
}

std::vector<SegalReport> check_segal(const TruncatedFunctor& x) {
  Diagnostics d = validate_truncated(x);
  if (!d.empty()) throw input_error("invalid functor: " + d.front());
  const Pattern& p = *x.pattern;
  std::vector<SegalReport> out;
  for (const auto& o : x.objs) {
    Slice s = elementary_slice(p, o);
    SetDiagram diag;
    diag.base = s.cat;
    diag.values.resize(s.labels.size());
    for (size_t e = 0; e < s.labels.size(); ++e) diag.values[e] = x.value.at(s.labels[e].dst).elems;
    diag.maps.resize(s.cat.mors.size());
    for (size_t m = 0; m < s.cat.mors.size(); ++m) {
      const PatMor& h = s.mor_witness[m];
      PatMor hm{s.labels[s.cat.mors[m].src].dst, h.key, s.labels[s.cat.mors[m].dst].dst};
      diag.maps[m] = x.action.at(hm.uid());
    }
    auto lim = limit_of_set_diagram(diag);
    SegalReport rep;
    rep.object = o;
    rep.value_card = int(x.value.at(o).elems.size());
    rep.limit_card = int(lim.families.size());
    // canonical comparison x |-> (X(e)(x))_e
    std::set<std::vector<int>> image;
    bool injective = true;
    for (size_t v = 0; v < x.value.at(o).elems.size(); ++v) {
      std::vector<int> fam;
      for (size_t e = 0; e < s.labels.size(); ++e)
        fam.push_back(x.action.at(s.labels[e].uid())[v]);
      if (!image.insert(fam).second) injective = false;
    }
    bool surjective = true;
    for (const auto& fam : lim.families)
      if (!image.count(fam)) surjective = false;
    rep.bijective = injective && surjective && rep.value_card == rep.limit_card;
    out.push_back(rep);
  }
  return out;
}

bool segal_passes(const std::vector<SegalReport>& reports) {
  for (const auto& r : reports)
    if (!r.bijective) return false;
  return true;
}

Diagnostics validate_fiber(const FiberObject& f) {
  Diagnostics out;
  if (f.value.size() != f.slice.labels.size() || f.action.size() != f.slice.cat.mors.size()) {
    out.push_back("fiber tables have wrong arity");
    return out;
  }
  SetDiagram d;
  d.base = f.slice.cat;
  for (const auto& v : f.value) d.values.push_back(v.elems);
  d.maps = f.action;
  return validate_diagram(d);
}

int EvalResult::index_of(const std::vector<int>& fam) const {
  for (size_t i = 0; i < families.size(); ++i)
    if (families[i] == fam) return int(i);
  return -1;
}

EvalResult eval_fiber(const Pattern& p, const FiberObject& f, const PatMor& g) {
  if (!p.is_inert(g)) throw input_error("eval_fiber: non-inert morphism");
  if (g.src != f.base) throw input_error("eval_fiber: base mismatch");
  EvalResult res;
  res.target_slice = elementary_slice(p, g.dst);
  const Slice& sr = res.target_slice;
  res.obj_to_src.resize(sr.labels.size());
  for (size_t e = 0; e < sr.labels.size(); ++e) {
    PatMor comp = p.compose(sr.labels[e], g);
    int idx = f.slice.index_of(comp);
    if (idx < 0) throw input_error("eval_fiber: composed slice object missing");
    res.obj_to_src[e] = idx;
  }
  SetDiagram d;
  d.base = sr.cat;
  d.values.resize(sr.labels.size());
  for (size_t e = 0; e < sr.labels.size(); ++e) d.values[e] = f.value[res.obj_to_src[e]].elems;
  d.maps.resize(sr.cat.mors.size());
  for (size_t m = 0; m < sr.cat.mors.size(); ++m) {
    const PatMor& h = sr.mor_witness[m];
    int src = res.obj_to_src[sr.cat.mors[m].src];
    int dst = res.obj_to_src[sr.cat.mors[m].dst];
    int found = -1;
    for (size_t k = 0; k < f.slice.cat.mors.size(); ++k)
      if (f.slice.cat.mors[k].src == src && f.slice.cat.mors[k].dst == dst &&
          f.slice.mor_witness[k] == h)
        found = int(k);
    if (found < 0) throw input_error("eval_fiber: slice morphism image missing");
    d.maps[m] = f.action[found];
  }
  auto lim = limit_of_set_diagram(d);
  res.families = lim.families;
  return res;
}

namespace {

std::string family_name(const EvalResult& ev, const FiberObject& f, const std::vector<int>& fam) {
  std::string s = "(";
  for (size_t e = 0; e < fam.size(); ++e) {
    if (e) s += ",";
    s += f.value[ev.obj_to_src[e]].elems[fam[e]];
  }
  return s + ")";
}

}  // namespace

FiberObject pushforward(const Pattern& p, const FiberObject& f, const PatMor& m) {
  if (m.src != f.base) throw input_error("pushforward: base mismatch");
  FiberObject g;
  g.base = m.dst;
  g.slice = elementary_slice(p, m.dst);
  std::vector<PatMor> inert_part(g.slice.labels.size());
  std::vector<PatMor> active_part(g.slice.labels.size());
  std::vector<EvalResult> evs(g.slice.labels.size());
  for (size_t e = 0; e < g.slice.labels.size(); ++e) {
    PatMor comp = p.compose(g.slice.labels[e], m);
    auto [i, a] = p.factorize(comp);
    inert_part[e] = i;
    active_part[e] = a;
    evs[e] = eval_fiber(p, f, i);
    FinSet vs;
    for (const auto& fam : evs[e].families) vs.elems.push_back(family_name(evs[e], f, fam));
    std::sort(vs.elems.begin(), vs.elems.end());
    g.value.push_back(vs);
  }
  g.action.resize(g.slice.cat.mors.size());
  for (size_t sm = 0; sm < g.slice.cat.mors.size(); ++sm) {
    int e1 = g.slice.cat.mors[sm].src, e2 = g.slice.cat.mors[sm].dst;
    const PatMor& h = g.slice.mor_witness[sm];
    // h' = inrt(h ∘ act(e1)) : M1 >-> M2 reindexes limit families
    PatMor ha = p.compose(h, active_part[e1]);
    auto [hp, ha2] = p.factorize(ha);
    const Slice& s1 = evs[e1].target_slice;
    const Slice& s2 = evs[e2].target_slice;
    std::vector<int> reindex(s2.labels.size());
    for (size_t t = 0; t < s2.labels.size(); ++t) {
      PatMor comp = p.compose(s2.labels[t], hp);
      int idx = s1.index_of(comp);
      if (idx < 0) throw input_error("pushforward: reindex target missing");
      reindex[t] = idx;
    }
    g.action[sm].resize(evs[e1].families.size());
    for (size_t k = 0; k < evs[e1].families.size(); ++k) {
      std::vector<int> out(s2.labels.size());
      for (size_t t = 0; t < s2.labels.size(); ++t) out[t] = evs[e1].families[k][reindex[t]];
      int target = evs[e2].index_of(out);
      if (target < 0) throw input_error("pushforward: reindexed family not in target limit");
      // account for lexicographic renaming of the value sets
      std::string nm1 = family_name(evs[e1], f, evs[e1].families[k]);
      std::string nm2 = family_name(evs[e2], f, evs[e2].families[target]);
      g.action[sm][g.value[e1].index_of(nm1)] = g.value[e2].index_of(nm2);
    }
  }
  return g;
}

Span compose_binary_spans(const Span& s, const Span& t) {
  if (s.right.elems != t.left.elems) throw input_error("span composition: middle feet differ");
  Span out;
  out.left = s.left;
  out.right = t.right;
  for (size_t a = 0; a < s.apex.elems.size(); ++a)
    for (size_t b = 0; b < t.apex.elems.size(); ++b)
      if (s.right_leg[a] == t.left_leg[b]) {
        out.apex.elems.push_back("(" + s.apex.elems[a] + "," + t.apex.elems[b] + ")");
        out.left_leg.push_back(s.left_leg[a]);
        out.right_leg.push_back(t.right_leg[b]);
      }
  return out;
}

bool check_pushforward_functoriality(const Pattern& p, const FiberObject& f0, const PatMor& f,
                                     const PatMor& g, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  PatMor gf = p.compose(g, f);
  Slice sq = elementary_slice(p, f.dst);
  Slice sr = elementary_slice(p, g.dst);
  // one-step data at Q
  std::vector<EvalResult> ev1(sq.labels.size());
  std::vector<PatMor> act1(sq.labels.size());
  for (size_t e = 0; e < sq.labels.size(); ++e) {
    PatMor comp = p.compose(sq.labels[e], f);
    auto [i, a] = p.factorize(comp);
    ev1[e] = eval_fiber(p, f0, i);
    act1[e] = a;
  }
  FiberObject g1 = pushforward(p, f0, f);
  for (size_t e = 0; e < sr.labels.size(); ++e) {
    // flat: eval over slice(N_e) with values in f0
    PatMor comp_flat = p.compose(sr.labels[e], gf);
    auto [i_flat, a_flat] = p.factorize(comp_flat);
    EvalResult flat = eval_fiber(p, f0, i_flat);
    // nested: eval of g1 along inrt(e ∘ g)
    PatMor comp_g = p.compose(sr.labels[e], g);
    auto [i2, a2] = p.factorize(comp_g);
    EvalResult nested = eval_fiber(p, g1, i2);
    if (flat.families.size() != nested.families.size())
      return fail("cardinality mismatch at " + sr.labels[e].uid() + ": " +
                  std::to_string(flat.families.size()) + " vs " +
                  std::to_string(nested.families.size()));
    // unfold a nested family to a map slice(P)-object -> f0 value
    // keys: for slice(M2)-object t (-> slice(Q) object q), the slice objects
    // of ev1[q] composed down to slice(P)
    std::vector<std::map<int, int>> nested_unfold;
    for (const auto& fam : nested.families) {
      std::map<int, int> u;
      for (size_t t = 0; t < fam.size(); ++t) {
        int qobj = -1;
        {
          PatMor comp = p.compose(nested.target_slice.labels[t], i2);
          qobj = sq.index_of(comp);
        }
        if (qobj < 0) return fail("nested: slice object missing");
        // g1 value at qobj is a named family of ev1[qobj]
        const std::string& nm = g1.value[sq.index_of(p.compose(
            nested.target_slice.labels[t], i2))].elems[fam[t]];
        // locate the family with this name
        int famidx = -1;
        for (size_t k = 0; k < ev1[qobj].families.size(); ++k) {
          std::string cand = "(";
          for (size_t c = 0; c < ev1[qobj].families[k].size(); ++c) {
            if (c) cand += ",";
            cand += f0.value[ev1[qobj].obj_to_src[c]].elems[ev1[qobj].families[k][c]];
          }
          cand += ")";
          if (cand == nm) famidx = int(k);
        }
        if (famidx < 0) return fail("nested: family name not found");
        for (size_t c = 0; c < ev1[qobj].families[famidx].size(); ++c) {
          int pobj = ev1[qobj].obj_to_src[c];
          int val = ev1[qobj].families[famidx][c];
          auto it = u.find(pobj);
          if (it != u.end() && it->second != val) return fail("nested unfolding inconsistent");
          u[pobj] = val;
        }
      }
      nested_unfold.push_back(u);
    }
    // flat unfoldings restricted to the nested key set
    std::set<int> keys;
    if (!nested_unfold.empty())
      for (const auto& [k, v] : nested_unfold.front()) keys.insert(k);
    std::vector<std::map<int, int>> flat_unfold;
    for (const auto& fam : flat.families) {
      std::map<int, int> u;
      for (size_t t = 0; t < fam.size(); ++t) u[flat.obj_to_src[t]] = fam[t];
      std::map<int, int> restricted;
      for (int k : keys) {
        auto it = u.find(k);
        if (it == u.end()) return fail("flat unfolding misses a nested key");
        restricted[k] = it->second;
      }
      flat_unfold.push_back(restricted);
    }
    std::multiset<std::vector<std::pair<int, int>>> a, b;
    for (const auto& u : nested_unfold) a.insert({u.begin(), u.end()});
    for (const auto& u : flat_unfold) b.insert({u.begin(), u.end()});
    if (a != b) return fail("family multisets differ at " + sr.labels[e].uid());
    // bijectivity: no duplicates on either side
    if (a.size() != std::set<std::vector<std::pair<int, int>>>(a.begin(), a.end()).size())
      return fail("restriction not injective at " + sr.labels[e].uid());
  }
  return true;
}

MonoidalReport check_span_monoidal(const Pattern& p, const std::string& p0,
                                   const std::vector<FiberObject>& tests) {
  MonoidalReport rep;
  rep.object = p0;
  Slice s = elementary_slice(p, p0);
  for (const auto& f : tests) {
    for (size_t e = 0; e < s.labels.size(); ++e) {
      FiberObject h = pushforward(p, f, s.labels[e]);
      // the restriction at id of the elementary must recover F(e)
      const std::string& el = s.labels[e].dst;
      int idpos = h.slice.index_of(p.identity(el));
      if (idpos < 0) {
        rep.determined = false;
        rep.failure = "identity slot missing in slice of " + el;
        return rep;
      }
      // canonical map F(e) -> H_e(id): x |-> (F(e -> tilde∘e)(x))_tilde
      EvalResult ev = eval_fiber(p, f, s.labels[e]);
      std::set<std::vector<int>> image;
      for (size_t v = 0; v < f.value[e].elems.size(); ++v) {
        std::vector<int> fam(ev.target_slice.labels.size());
        for (size_t t = 0; t < ev.target_slice.labels.size(); ++t) {
          // slice(P0) morphism e -> (tilde ∘ e) with witness tilde
          const PatMor& tilde = ev.target_slice.labels[t];
          int target_obj = ev.obj_to_src[t];
          int found = -1;
          for (size_t k = 0; k < f.slice.cat.mors.size(); ++k)
            if (f.slice.cat.mors[k].src == int(e) && f.slice.cat.mors[k].dst == target_obj &&
                f.slice.mor_witness[k] == tilde)
              found = int(k);
          if (found < 0) {
            rep.determined = false;
            rep.failure = "slice morphism for reconstruction missing";
            return rep;
          }
          fam[t] = f.action[found][v];
        }
        if (!image.insert(fam).second) {
          rep.determined = false;
          rep.failure = "restriction not injective at " + s.labels[e].uid();
        }
      }
      if (image.size() != ev.families.size()) {
        rep.determined = false;
        rep.failure = "restriction not surjective at " + s.labels[e].uid();
      }
      rep.cardinalities.push_back(s.labels[e].uid() + ": fiber " +
                                  std::to_string(f.value[e].elems.size()) + " ~ limit " +
                                  std::to_string(ev.families.size()));
      if (h.value[idpos].elems.size() != ev.families.size()) {
        rep.determined = false;
        rep.failure = "pushforward value disagrees with the limit at " + s.labels[e].uid();
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

using json = nlohmann::ordered_json;

std::string truncated_to_json(const TruncatedFunctor& x) {
  json j;
  j["pattern"] = x.pattern->name();
  j["objects"] = x.objs;
  json vals = json::object();
  for (const auto& o : x.objs) vals[o] = x.value.at(o).elems;
  j["values"] = vals;
  json act = json::object();
  const Pattern& p = *x.pattern;
  for (const auto& a : x.objs)
    for (const auto& b : x.objs)
      for (const auto& f : p.hom(a, b)) {
        json pairs = json::array();
        const auto& m = x.action.at(f.uid());
        for (size_t v = 0; v < m.size(); ++v)
          pairs.push_back({x.value.at(a).elems[v], x.value.at(b).elems[m[v]]});
        act[f.uid()] = pairs;
      }
  j["actions"] = act;
  return j.dump(2);
}

TruncatedFunctor truncated_from_json(const std::string& text,
                                     std::shared_ptr<const Pattern> pattern) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("bad JSON: ") + e.what());
  }
  TruncatedFunctor x;
  x.pattern = pattern ? pattern : pattern_by_id(j.at("pattern").get<std::string>());
  x.objs = j.at("objects").get<std::vector<std::string>>();
  std::sort(x.objs.begin(), x.objs.end());
  for (const auto& o : x.objs) {
    FinSet s;
    s.elems = j.at("values").at(o).get<std::vector<std::string>>();
    std::sort(s.elems.begin(), s.elems.end());
    x.value[o] = s;
  }
  for (auto& [uid, pairs] : j.at("actions").items()) {
    // uid = src|key|dst
    size_t b1 = uid.find('|');
    size_t b2 = uid.rfind('|');
    if (b1 == std::string::npos || b2 == b1) throw input_error("bad morphism uid: " + uid);
    std::string src = uid.substr(0, b1), dst = uid.substr(b2 + 1);
    if (!x.value.count(src) || !x.value.count(dst))
      throw input_error("action references unknown object: " + uid);
    std::vector<int> m(x.value.at(src).elems.size(), -1);
    for (const auto& pr : pairs) {
      int a = x.value.at(src).index_of(pr.at(0).get<std::string>());
      int b = x.value.at(dst).index_of(pr.at(1).get<std::string>());
      if (a < 0 || b < 0) throw input_error("action element unknown at " + uid);
      m[a] = b;
    }
    for (int v : m)
      if (v < 0) throw input_error("action incomplete at " + uid);
    x.action[uid] = m;
  }
  return x;
}

std::string span_to_json(const Span& s) {
  json j;
  j["left"] = s.left.elems;
  j["apex"] = s.apex.elems;
  j["right"] = s.right.elems;
  json l = json::array(), r = json::array();
  for (size_t a = 0; a < s.apex.elems.size(); ++a) {
    l.push_back({s.apex.elems[a], s.left.elems[s.left_leg[a]]});
    r.push_back({s.apex.elems[a], s.right.elems[s.right_leg[a]]});
  }
  j["left_leg"] = l;
  j["right_leg"] = r;
  return j.dump(2);
}

Span span_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("bad JSON: ") + e.what());
  }
  Span s;
  s.left.elems = j.at("left").get<std::vector<std::string>>();
  s.apex.elems = j.at("apex").get<std::vector<std::string>>();
  s.right.elems = j.at("right").get<std::vector<std::string>>();
  std::sort(s.left.elems.begin(), s.left.elems.end());
  std::sort(s.apex.elems.begin(), s.apex.elems.end());
  std::sort(s.right.elems.begin(), s.right.elems.end());
  s.left_leg.assign(s.apex.elems.size(), -1);
  s.right_leg.assign(s.apex.elems.size(), -1);
  for (const auto& pr : j.at("left_leg")) {
    int a = s.apex.index_of(pr.at(0).get<std::string>());
    int b = s.left.index_of(pr.at(1).get<std::string>());
    if (a < 0 || b < 0) throw input_error("left leg references unknown element");
    s.left_leg[a] = b;
  }
  for (const auto& pr : j.at("right_leg")) {
    int a = s.apex.index_of(pr.at(0).get<std::string>());
    int b = s.right.index_of(pr.at(1).get<std::string>());
    if (a < 0 || b < 0) throw input_error("right leg references unknown element");
    s.right_leg[a] = b;
  }
  for (size_t a = 0; a < s.apex.elems.size(); ++a)
    if (s.left_leg[a] < 0 || s.right_leg[a] < 0) throw input_error("incomplete span legs");
  return s;
}

}  // namespace patspan
