#include "patspan/monad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "patspan/gamma.hpp"
#include "patspan/omega.hpp"
#include "patspan/simplex.hpp"
#include "patspan/theta.hpp"

namespace patspan {

Diagnostics validate_pgraph(const PGraph& g) {
  Diagnostics out;
  const Pattern& p = *g.pattern;
  auto els = p.elementaries();
  if (g.els != els) {
    out.push_back("graph must carry exactly the elementary objects");
    return out;
  }
  for (const auto& e : els)
    if (!g.value.count(e)) out.push_back("missing value at " + e);
  if (!out.empty()) return out;
  for (const auto& a : els)
    for (const auto& b : els)
      for (const auto& w : p.hom(a, b)) {
        if (!p.is_inert(w)) continue;
        auto it = g.action.find(w.uid());
        if (it == g.action.end()) {
          out.push_back("missing action at " + w.uid());
          continue;
        }
        if (it->second.size() != g.value.at(a).elems.size())
          out.push_back("action arity mismatch at " + w.uid());
        else
          for (int v : it->second)
            if (v < 0 || v >= int(g.value.at(b).elems.size()))
              out.push_back("action out of range at " + w.uid());
      }
  if (!out.empty()) return out;
  for (const auto& a : els)
    for (const auto& b : els)
      for (const auto& f : p.hom(a, b)) {
        if (!p.is_inert(f)) continue;
        for (const auto& c : els)
          for (const auto& h : p.hom(b, c)) {
            if (!p.is_inert(h)) continue;
            PatMor hf = p.compose(h, f);
            const auto& mf = g.action.at(f.uid());
            const auto& mh = g.action.at(h.uid());
            const auto& mhf = g.action.at(hf.uid());
            for (size_t v = 0; v < mf.size(); ++v)
              if (mh[mf[v]] != mhf[v]) {
                out.push_back("graph functoriality fails at " + h.uid() + " ∘ " + f.uid());
                break;
              }
          }
      }
  for (const auto& e : els) {
    const auto& idm = g.action.at(p.identity(e).uid());
    for (size_t v = 0; v < idm.size(); ++v)
      if (idm[v] != int(v)) out.push_back("identity not preserved at " + e);
  }
  return out;
}

PGraph graph_of(const TruncatedFunctor& x) {
  PGraph g;
  g.pattern = x.pattern;
  g.els = x.pattern->elementaries();
  for (const auto& e : g.els) g.value[e] = x.value.at(e);
  const Pattern& p = *x.pattern;
  for (const auto& a : g.els)
    for (const auto& b : g.els)
      for (const auto& w : p.hom(a, b))
        if (p.is_inert(w)) g.action[w.uid()] = x.action.at(w.uid());
  return g;
}

// ---------------------------------------------------------------------------
// Interned calculator for monad-section laws. Morphisms, objects, reindex
// tables and component slots are integer ids; the candidate loops never
// touch strings.

namespace {

struct FibSet {
  std::vector<std::vector<int>> families;
  std::map<std::vector<int>, int> index;
};

class MonadCalc {
 public:
  MonadCalc(std::shared_ptr<const Pattern> p, PGraph g, std::vector<std::string> objlist)
      : pat(std::move(p)), graph(std::move(g)) {
    std::sort(objlist.begin(), objlist.end());
    for (const auto& o : objlist) bound_objs.push_back(obj_id(o));
  }

  std::shared_ptr<const Pattern> pat;
  PGraph graph;
  std::vector<int> bound_objs;

  int obj_id(const std::string& o) {
    auto it = obj_index.find(o);
    if (it != obj_index.end()) return it->second;
    int id = int(objects.size());
    obj_index.emplace(o, id);
    objects.push_back(o);
    slices.emplace_back();
    fibs.emplace_back();
    return id;
  }
  const std::string& obj(int id) const { return objects[id]; }

  int mor_id(const PatMor& f) {
    auto it = mor_index.find(f.uid());
    if (it != mor_index.end()) return it->second;
    int id = int(mors.size());
    mor_index.emplace(f.uid(), id);
    mors.push_back(f);
    return id;
  }
  const PatMor& mor(int id) const { return mors[id]; }

  const Slice& slice(int oid) {
    if (!slices[oid]) slices[oid] = std::make_unique<Slice>(elementary_slice(*pat, obj(oid)));
    return *slices[oid];
  }

  const FibSet& fib(int oid) {
    if (fibs[oid]) return *fibs[oid];
    const Slice& s = slice(oid);
    SetDiagram d;
    d.base = s.cat;
    d.values.resize(s.labels.size());
    for (size_t t = 0; t < s.labels.size(); ++t)
      d.values[t] = graph.value.at(s.labels[t].dst).elems;
    d.maps.resize(s.cat.mors.size());
    for (size_t m = 0; m < s.cat.mors.size(); ++m) {
      const PatMor& w = s.mor_witness[m];
      PatMor wm{s.labels[s.cat.mors[m].src].dst, w.key, s.labels[s.cat.mors[m].dst].dst};
      d.maps[m] = graph.action.at(wm.uid());
    }
    auto f = std::make_unique<FibSet>();
    f->families = limit_of_set_diagram(d).families;
    for (size_t k = 0; k < f->families.size(); ++k) f->index[f->families[k]] = int(k);
    fibs[oid] = std::move(f);
    return *fibs[oid];
  }

  const std::vector<int>& hom_ids(int a, int b) {
    auto key = std::make_pair(a, b);
    auto it = hom_cache.find(key);
    if (it != hom_cache.end()) return it->second;
    std::vector<int> ids;
    for (const auto& f : pat->hom(obj(a), obj(b))) ids.push_back(mor_id(f));
    return hom_cache.emplace(key, std::move(ids)).first->second;
  }

  struct Slot {
    int mid;    // object id of the factorization middle
    int inert;  // morphism id
    int act;    // morphism id, active with elementary target
  };

  const Slot& slot(int fid, int e) {
    auto key = std::make_pair(fid, e);
    auto it = slot_cache.find(key);
    if (it != slot_cache.end()) return it->second;
    const PatMor& f = mor(fid);
    PatMor comp = pat->compose(slice(obj_id(f.dst)).labels[e], f);
    auto [i, a] = pat->factorize(comp);
    Slot s{obj_id(i.dst), mor_id(i), mor_id(a)};
    fib(s.mid);
    return slot_cache.emplace(key, s).first->second;
  }

  // reindex table fib(m1) -> fib(dst hp) along inert hp; returns a stable id
  int reindex_id(int m1, int hpid) {
    auto key = std::make_pair(m1, hpid);
    auto it = reindex_index.find(key);
    if (it != reindex_index.end()) return it->second;
    const PatMor& hp = mor(hpid);
    int m2 = obj_id(hp.dst);
    const Slice& s1 = slice(m1);
    const Slice& s2 = slice(m2);
    std::vector<int> objmap(s2.labels.size());
    for (size_t t = 0; t < s2.labels.size(); ++t) {
      PatMor comp = pat->compose(s2.labels[t], hp);
      int idx = s1.index_of(comp);
      if (idx < 0) throw input_error("reindex: composed slice object missing");
      objmap[t] = idx;
    }
    const FibSet& f1 = fib(m1);
    const FibSet& f2 = fib(m2);
    std::vector<int> out(f1.families.size());
    for (size_t k = 0; k < f1.families.size(); ++k) {
      std::vector<int> fam(s2.labels.size());
      for (size_t t = 0; t < s2.labels.size(); ++t) fam[t] = f1.families[k][objmap[t]];
      auto jt = f2.index.find(fam);
      if (jt == f2.index.end()) throw input_error("reindex: family not in target fiber");
      out[k] = jt->second;
    }
    int id = int(reindex_tabs.size());
    reindex_tabs.push_back(std::move(out));
    reindex_index.emplace(key, id);
    return id;
  }
  const std::vector<int>& reindex(int id) const { return reindex_tabs[id]; }

  // dense component slots: actives with elementary target (plus identities)
  int core_slot(int act_mid) {
    auto it = core_slot_index.find(act_mid);
    if (it != core_slot_index.end()) return it->second;
    int id = int(core_slot_mor.size());
    core_slot_index.emplace(act_mid, id);
    core_slot_mor.push_back(act_mid);
    return id;
  }
  int core_slot_count() const { return int(core_slot_mor.size()); }
  const PatMor& core_slot_act(int cs) const { return mors[core_slot_mor[cs]]; }

  void collect_core() {
    if (core_collected) return;
    core_collected = true;
    // identities first so their dense ids are stable
    for (const auto& el : graph.els) {
      int cs = core_slot(mor_id(pat->identity(el)));
      identity_slots.push_back(cs);
    }
    // active parts of composites coincide with those of their active
    // factors, so the pure actives already carry every component slot
    for (int a : bound_objs)
      for (int b : bound_objs)
        for (int fid : hom_ids(a, b)) {
          const PatMor& f = mor(fid);
          if (!pat->is_active(f)) continue;
          const Slice& sb = slice(b);
          for (size_t e = 0; e < sb.labels.size(); ++e) core_slot(slot(fid, int(e)).act);
        }
  }

  struct NatCheck {
    int inner1, inner2;
    const std::vector<int>* w;
    int re;
  };
  struct FunCheck {
    int lhs, outer;  // dense core slots
    int N, M2;       // object ids
    std::vector<std::pair<int, int>> inner;  // (dense core slot, reindex id)
    long long cost = 0;
  };

  void build_checks() {
    if (checks_built) return;
    checks_built = true;
    collect_core();
    std::set<std::string> nat_sigs, fun_sigs;
    // the record of a composite with an inert part coincides with the record
    // of its active part, so only pure active morphisms generate checks;
    // this requires the bound to be closed under inert images
    std::vector<int> bound;
    for (int a : bound_objs)
      for (int b : bound_objs)
        for (int fid : hom_ids(a, b)) {
          const PatMor& f = mor(fid);
          if (!pat->is_active(f)) continue;
          if (a == b && f == pat->identity(f.src)) continue;
          bound.push_back(fid);
        }
    for (int fid : bound) {
      const PatMor& f = mor(fid);
      int b = obj_id(f.dst);
      const Slice& sq = slice(b);
      for (size_t m = 0; m < sq.cat.mors.size(); ++m) {
        if (sq.cat.is_identity(int(m))) continue;
        int e1 = sq.cat.mors[m].src, e2 = sq.cat.mors[m].dst;
        const PatMor& wraw = sq.mor_witness[m];
        PatMor w{sq.labels[e1].dst, wraw.key, sq.labels[e2].dst};
        const Slot& s1 = slot(fid, e1);
        const Slot& s2 = slot(fid, e2);
        PatMor ha = pat->compose(w, mor(s1.act));
        auto [hp, rest] = pat->factorize(ha);
        if (obj_id(hp.dst) != s2.mid)
          throw input_error("naturality: factorization middle mismatch");
        NatCheck nc{core_slot(s1.act), core_slot(s2.act), &graph.action.at(w.uid()),
                    reindex_id(s1.mid, mor_id(hp))};
        std::string sig = std::to_string(nc.inner1) + "/" + std::to_string(nc.inner2) + "/" +
                          w.uid() + "/" + std::to_string(nc.re);
        if (nat_sigs.insert(sig).second) nats.push_back(nc);
      }
    }
    // the inner tables depend only on (f, inert part of e∘g) and are shared
    struct InnerSpec {
      int N;
      std::vector<std::pair<int, int>> inner;
      std::string sig;
    };
    std::map<std::pair<int, int>, InnerSpec> inner_cache;
    auto inner_spec = [&](int fid, int i2id) -> const InnerSpec& {
      auto key = std::make_pair(fid, i2id);
      auto it = inner_cache.find(key);
      if (it != inner_cache.end()) return it->second;
      const PatMor& f = mor(fid);
      const PatMor& i2 = mor(i2id);
      InnerSpec spec;
      PatMor i2f = pat->compose(i2, f);
      auto [iN, b_act] = pat->factorize(i2f);
      spec.N = obj_id(iN.dst);
      const Slice& sm2 = slice(obj_id(i2.dst));
      const Slice& sb = slice(obj_id(f.dst));
      for (size_t t = 0; t < sm2.labels.size(); ++t) {
        PatMor q = pat->compose(sm2.labels[t], i2);
        int qidx = sb.index_of(q);
        if (qidx < 0) throw input_error("functoriality: slice object missing");
        const Slot& sf = slot(fid, qidx);
        PatMor tb = pat->compose(sm2.labels[t], b_act);
        auto [hp, rest2] = pat->factorize(tb);
        if (obj_id(hp.dst) != sf.mid) throw input_error("functoriality: inner middle mismatch");
        spec.inner.push_back({core_slot(sf.act), reindex_id(spec.N, mor_id(hp))});
      }
      spec.sig = std::to_string(spec.N);
      for (auto& [u, re] : spec.inner)
        spec.sig += "|" + std::to_string(u) + "@" + std::to_string(re);
      return inner_cache.emplace(key, std::move(spec)).first->second;
    };
    for (int fid : bound)
      for (int gid : bound) {
        const PatMor& f = mor(fid);
        const PatMor& g = mor(gid);
        if (f.dst != g.src) continue;
        int gfid = mor_id(pat->compose(g, f));
        int c = obj_id(g.dst);
        const Slice& sc = slice(c);
        for (size_t e = 0; e < sc.labels.size(); ++e) {
          const Slot& sg = slot(gid, int(e));
          const Slot& sgf = slot(gfid, int(e));
          const InnerSpec& spec = inner_spec(fid, sg.inert);
          if (spec.N != sgf.mid)
            throw input_error("functoriality: factorization middle mismatch");
          int lhs = core_slot(sgf.act);
          int outer = core_slot(sg.act);
          std::string sig =
              std::to_string(lhs) + "/" + std::to_string(outer) + "/" + spec.sig;
          if (!fun_sigs.insert(sig).second) continue;
          FunCheck fc;
          fc.N = spec.N;
          fc.M2 = sg.mid;
          fc.lhs = lhs;
          fc.outer = outer;
          fc.inner = spec.inner;
          fc.cost = (long long)fib(fc.N).families.size() * (long long)(fc.inner.size() + 1);
          funs.push_back(std::move(fc));
        }
      }
    std::sort(funs.begin(), funs.end(),
              [](const FunCheck& a, const FunCheck& b) { return a.cost < b.cost; });
  }

  const std::vector<NatCheck>& nat_checks() {
    build_checks();
    return nats;
  }
  const std::vector<FunCheck>& fun_checks() {
    build_checks();
    return funs;
  }

  int graph_card(const std::string& e) const { return int(graph.value.at(e).elems.size()); }

  std::vector<int> canonical_proj(const std::string& el) {
    int oid = obj_id(el);
    const Slice& s = slice(oid);
    int idpos = s.index_of(pat->identity(el));
    if (idpos < 0) throw input_error("canonical projection: identity slot missing at " + el);
    const FibSet& f = fib(oid);
    std::vector<int> out(f.families.size());
    for (size_t k = 0; k < f.families.size(); ++k) out[k] = f.families[k][idpos];
    return out;
  }

  using CoreTab = std::vector<std::vector<int>>;

  // converts a named core map into the dense table; missing entries are an
  // error unless fill_identities is set for the identity slots
  CoreTab to_table(const std::map<std::string, std::vector<int>>& core, Diagnostics* diag) {
    collect_core();
    CoreTab tab(core_slot_count());
    for (int cs = 0; cs < core_slot_count(); ++cs) {
      const PatMor& act = core_slot_act(cs);
      if (act.src == act.dst && act == pat->identity(act.src)) {
        tab[cs] = canonical_proj(act.src);
        continue;
      }
      auto it = core.find(act.uid());
      if (it == core.end()) {
        if (diag) diag->push_back("missing component at " + act.uid());
        continue;
      }
      if (it->second.size() != fib(obj_id(act.src)).families.size()) {
        if (diag) diag->push_back("component arity mismatch at " + act.uid());
        continue;
      }
      tab[cs] = it->second;
    }
    return tab;
  }

  std::map<std::string, std::vector<int>> to_named(const CoreTab& tab) {
    std::map<std::string, std::vector<int>> out;
    for (int cs = 0; cs < core_slot_count(); ++cs) out[core_slot_act(cs).uid()] = tab[cs];
    return out;
  }

  bool eval_nat(const NatCheck& nc, const CoreTab& tab, std::string* why) {
    const auto& in1 = tab[nc.inner1];
    const auto& in2 = tab[nc.inner2];
    const auto& w = *nc.w;
    const auto& re = reindex(nc.re);
    for (size_t k = 0; k < in1.size(); ++k)
      if (w[in1[k]] != in2[re[k]]) {
        if (why)
          *why = "naturality fails (" + core_slot_act(nc.inner1).uid() + " vs " +
                 core_slot_act(nc.inner2).uid() + ")";
        return false;
      }
    return true;
  }

  bool eval_fun(const FunCheck& fc, const CoreTab& tab, std::string* why) {
    const auto& lhs = tab[fc.lhs];
    const auto& outer = tab[fc.outer];
    const FibSet& fn = fib(fc.N);
    const FibSet& fm2 = fib(fc.M2);
    std::vector<int> fam(fc.inner.size());
    for (size_t x = 0; x < fn.families.size(); ++x) {
      for (size_t t = 0; t < fc.inner.size(); ++t)
        fam[t] = tab[fc.inner[t].first][reindex(fc.inner[t].second)[x]];
      auto it = fm2.index.find(fam);
      if (it == fm2.index.end()) {
        if (why)
          *why = "functoriality: assembled family not in the middle fiber (" +
                 core_slot_act(fc.lhs).uid() + ")";
        return false;
      }
      if (outer[it->second] != lhs[x]) {
        if (why)
          *why = "functoriality fails (" + core_slot_act(fc.lhs).uid() + " vs " +
                 core_slot_act(fc.outer).uid() + ")";
        return false;
      }
    }
    return true;
  }

  std::vector<int> identity_slots;

 private:
  std::map<std::string, int> obj_index;
  std::vector<std::string> objects;
  std::vector<std::unique_ptr<Slice>> slices;
  std::vector<std::unique_ptr<FibSet>> fibs;
  std::map<std::string, int> mor_index;
  std::vector<PatMor> mors;
  std::map<std::pair<int, int>, std::vector<int>> hom_cache;
  std::map<std::pair<int, int>, Slot> slot_cache;
  std::map<std::pair<int, int>, int> reindex_index;
  std::vector<std::vector<int>> reindex_tabs;
  std::map<int, int> core_slot_index;
  std::vector<int> core_slot_mor;
  bool core_collected = false;
  bool checks_built = false;
  std::vector<NatCheck> nats;
  std::vector<FunCheck> funs;
};

std::shared_ptr<MonadCalc> shared_calc(std::shared_ptr<const Pattern> p, const PGraph& g,
                                        const std::vector<std::string>& objs) {
  // per-thread cache: calculators carry unguarded memo tables
  thread_local std::map<std::string, std::shared_ptr<MonadCalc>> cache;
  std::string key = p->name() + "#";
  std::vector<std::string> sorted = objs;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& o : sorted) key += o + ";";
  key += "|";
  for (const auto& e : g.els) {
    key += e + ":";
    for (const auto& v : g.value.at(e).elems) key += v + ",";
  }
  for (const auto& [uid, fun] : g.action) {
    key += uid + "=";
    for (int v : fun) key += std::to_string(v) + ".";
  }
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto calc = std::make_shared<MonadCalc>(p, g, objs);
  cache.emplace(key, calc);
  return calc;
}

}  // namespace

MonadReport validate_monad(const MonadSection& m) {
  MonadReport rep;
  Diagnostics gd = validate_pgraph(m.graph);
  if (!gd.empty()) {
    rep.ok = false;
    for (auto& d : gd) rep.failures.push_back("graph: " + d);
    return rep;
  }
  auto calcp = shared_calc(m.graph.pattern, m.graph, m.objs);
  MonadCalc& calc = *calcp;
  calc.build_checks();
  Diagnostics missing;
  auto tab = calc.to_table(m.core, &missing);
  if (!missing.empty()) {
    rep.ok = false;
    rep.failures = missing;
    return rep;
  }
  std::string why;
  for (const auto& nc : calc.nat_checks())
    if (!calc.eval_nat(nc, tab, &why)) {
      rep.ok = false;
      rep.failures.push_back(why);
    }
  for (const auto& fc : calc.fun_checks())
    if (!calc.eval_fun(fc, tab, &why)) {
      rep.ok = false;
      rep.failures.push_back(why);
    }
  return rep;
}

MonadSection segal_to_monad(const TruncatedFunctor& x) {
  auto reports = check_segal(x);
  for (const auto& r : reports)
    if (!r.bijective)
      throw input_error("segal_to_monad: Segal condition fails at " + r.object + " (" +
                        std::to_string(r.value_card) + " vs limit " +
                        std::to_string(r.limit_card) + ")");
  MonadSection m;
  m.graph = graph_of(x);
  m.objs = x.objs;
  auto calcp = shared_calc(x.pattern, m.graph, m.objs);
  MonadCalc& calc = *calcp;
  calc.collect_core();
  for (int cs = 0; cs < calc.core_slot_count(); ++cs) {
    const PatMor& act = calc.core_slot_act(cs);
    if (act.src == act.dst && act == x.pattern->identity(act.src)) continue;
    const std::string& mid = act.src;
    auto vit = x.value.find(mid);
    if (vit == x.value.end())
      throw input_error("segal_to_monad: truncation misses middle object " + mid);
    const Slice& s = calc.slice(calc.obj_id(mid));
    const FibSet& f = calc.fib(calc.obj_id(mid));
    std::vector<int> fun(f.families.size(), -1);
    for (size_t k = 0; k < f.families.size(); ++k) {
      int match = -1;
      for (size_t v = 0; v < vit->second.elems.size(); ++v) {
        bool ok = true;
        for (size_t t = 0; t < s.labels.size() && ok; ++t)
          if (x.action.at(s.labels[t].uid())[v] != f.families[k][t]) ok = false;
        if (ok) {
          if (match >= 0) throw input_error("segal_to_monad: comparison not injective at " + mid);
          match = int(v);
        }
      }
      if (match < 0) throw input_error("segal_to_monad: comparison not surjective at " + mid);
      fun[k] = x.action.at(act.uid())[match];
    }
    m.core[act.uid()] = fun;
  }
  return m;
}

TruncatedFunctor monad_to_segal(const MonadSection& m) {
  MonadReport rep = validate_monad(m);
  if (!rep.ok) throw input_error("monad_to_segal: invalid monad: " + rep.failures.front());
  auto calcp = shared_calc(m.graph.pattern, m.graph, m.objs);
  MonadCalc& calc = *calcp;
  calc.collect_core();
  auto tab = calc.to_table(m.core, nullptr);
  TruncatedFunctor x;
  x.pattern = m.graph.pattern;
  x.objs = m.objs;
  std::sort(x.objs.begin(), x.objs.end());
  std::map<std::string, std::vector<int>> order;
  for (const auto& o : x.objs) {
    int oid = calc.obj_id(o);
    const Slice& s = calc.slice(oid);
    const FibSet& f = calc.fib(oid);
    std::vector<std::string> names(f.families.size());
    for (size_t k = 0; k < f.families.size(); ++k) {
      std::string nm = "(";
      for (size_t t = 0; t < s.labels.size(); ++t) {
        if (t) nm += ",";
        nm += m.graph.value.at(s.labels[t].dst).elems[f.families[k][t]];
      }
      nm += ")";
      names[k] = nm;
    }
    FinSet vs;
    vs.elems = names;
    std::sort(vs.elems.begin(), vs.elems.end());
    x.value[o] = vs;
    std::vector<int> ord(names.size());
    for (size_t k = 0; k < names.size(); ++k) ord[k] = x.value[o].index_of(names[k]);
    order[o] = ord;
  }
  for (const auto& a : x.objs)
    for (const auto& b : x.objs) {
      int aid = calc.obj_id(a), bid = calc.obj_id(b);
      for (int fid : calc.hom_ids(aid, bid)) {
        const Slice& sb = calc.slice(bid);
        const FibSet& fa = calc.fib(aid);
        const FibSet& fbt = calc.fib(bid);
        std::vector<int> fun(fa.families.size());
        for (size_t k = 0; k < fa.families.size(); ++k) {
          std::vector<int> fam(sb.labels.size());
          for (size_t e = 0; e < sb.labels.size(); ++e) {
            const auto& sl = calc.slot(fid, int(e));
            const auto& re = calc.reindex(calc.reindex_id(aid, sl.inert));
            fam[e] = tab[calc.core_slot(sl.act)][re[k]];
          }
          auto it = fbt.index.find(fam);
          if (it == fbt.index.end())
            throw input_error("monad_to_segal: assembled family is not Segal at " +
                              calc.mor(fid).uid());
          fun[k] = it->second;
        }
        std::vector<int> out(fun.size());
        for (size_t k = 0; k < fun.size(); ++k) out[order[a][k]] = order[b][fun[k]];
        x.action[calc.mor(fid).uid()] = out;
      }
    }
  return x;
}

// ---------------------------------------------------------------------------

EnumerateResult enumerate_monads(std::shared_ptr<const Pattern> p, const PGraph& graph,
                                 const std::vector<std::string>& objs,
                                 const EnumerateOptions& opts) {
  Diagnostics gd = validate_pgraph(graph);
  if (!gd.empty()) throw input_error("enumerate_monads: invalid graph: " + gd.front());
  auto calcp = shared_calc(p, graph, objs);
  MonadCalc& calc = *calcp;
  calc.build_checks();
  EnumerateResult res;
  const auto& funs = calc.fun_checks();
  const auto& nats = calc.nat_checks();
  // group records by lhs slot for the derivability closure
  int ncs = calc.core_slot_count();
  std::vector<std::vector<const MonadCalc::FunCheck*>> by_lhs(ncs);
  for (const auto& fc : funs) by_lhs[fc.lhs].push_back(&fc);
  std::vector<char> is_identity_slot(ncs, 0);
  for (int cs : calc.identity_slots) is_identity_slot[cs] = 1;
  std::vector<int> slots;
  for (int cs = 0; cs < ncs; ++cs)
    if (!is_identity_slot[cs]) slots.push_back(cs);
  auto closure = [&](const std::vector<char>& seed_mask,
                     std::vector<const MonadCalc::FunCheck*>* recipes_out) {
    std::vector<char> avail(ncs, 0);
    for (int cs : calc.identity_slots) avail[cs] = 1;
    for (int cs : slots)
      if (seed_mask[cs]) avail[cs] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      for (int cs : slots) {
        if (avail[cs]) continue;
        for (const auto* fc : by_lhs[cs]) {
          if (fc->outer == cs || !avail[fc->outer]) continue;
          bool deps = true;
          for (const auto& [icue, re] : fc->inner)
            if (!avail[icue]) deps = false;
          if (!deps) continue;
          if (recipes_out) recipes_out->push_back(fc);
          avail[cs] = 1;
          progress = true;
          break;
        }
      }
    }
    return avail;
  };
  std::vector<char> seed_mask(ncs, 0);
  for (int cs : slots) seed_mask[cs] = 1;
  {
    auto options_of = [&](int cs) {
      const PatMor& act = calc.core_slot_act(cs);
      double domain = double(calc.fib(calc.obj_id(act.src)).families.size());
      double codomain = double(calc.graph_card(act.dst));
      return domain * std::log(std::max(codomain, 1.5));
    };
    std::vector<int> order(slots);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double oa = options_of(a), ob = options_of(b);
      if (oa != ob) return oa > ob;
      return calc.core_slot_act(a).uid() < calc.core_slot_act(b).uid();
    });
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      for (int cs : order) {
        if (!seed_mask[cs]) continue;
        auto trial = seed_mask;
        trial[cs] = 0;
        auto avail = closure(trial, nullptr);
        bool complete = true;
        for (int s : slots)
          if (!avail[s]) complete = false;
        if (complete) {
          seed_mask = std::move(trial);
          shrunk = true;
        }
      }
    }
  }
  std::vector<const MonadCalc::FunCheck*> recipes;
  closure(seed_mask, &recipes);
  std::vector<int> seeds;
  for (int cs : slots)
    if (seed_mask[cs]) seeds.push_back(cs);
  for (int cs : seeds) res.seeds.push_back(calc.core_slot_act(cs).uid());
  // candidate space
  long long total = 1;
  struct SeedDim {
    int cs;
    size_t domain;
    int codomain;
  };
  std::vector<SeedDim> dims;
  for (int cs : seeds) {
    const PatMor& act = calc.core_slot_act(cs);
    size_t domain = calc.fib(calc.obj_id(act.src)).families.size();
    int codomain = calc.graph_card(act.dst);
    if (domain > 0 && codomain == 0) {
      res.candidates = 0;
      res.raw_count = 0;
      return res;
    }
    long long options = 1;
    for (size_t i = 0; i < domain; ++i) {
      options *= codomain;
      if (options > opts.candidate_cap) throw resource_error("enumerate_monads: candidate cap");
    }
    dims.push_back({cs, domain, codomain});
    total *= std::max<long long>(options, 1);
    if (total > opts.candidate_cap) throw resource_error("enumerate_monads: candidate cap");
  }
  res.candidates = total;
  // graph symmetries (value relabelings preserving the actions)
  std::vector<std::map<std::string, std::vector<int>>> symmetries;
  {
    std::map<std::string, std::vector<int>> id;
    for (const auto& e : graph.els) {
      std::vector<int> v(graph.value.at(e).elems.size());
      std::iota(v.begin(), v.end(), 0);
      id[e] = v;
    }
    std::vector<std::map<std::string, std::vector<int>>> all{id};
    for (const auto& e : graph.els) {
      std::vector<std::map<std::string, std::vector<int>>> next;
      std::vector<int> perm(graph.value.at(e).elems.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::vector<int>> perms;
      do {
        perms.push_back(perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (const auto& base : all)
        for (const auto& pm : perms) {
          auto cand = base;
          cand[e] = pm;
          next.push_back(cand);
        }
      all = std::move(next);
    }
    for (const auto& cand : all) {
      bool ok = true;
      for (const auto& [uid, act] : graph.action) {
        size_t b1 = uid.find('|');
        size_t b2 = uid.rfind('|');
        std::string srce = uid.substr(0, b1), dste = uid.substr(b2 + 1);
        const auto& ps = cand.at(srce);
        const auto& pd = cand.at(dste);
        for (size_t v = 0; v < act.size() && ok; ++v)
          if (act[ps[v]] != pd[act[v]]) ok = false;
        if (!ok) break;
      }
      if (ok) symmetries.push_back(cand);
    }
  }
  auto relabel_tab = [&](const MonadCalc::CoreTab& tab,
                         const std::map<std::string, std::vector<int>>& sym) {
    MonadCalc::CoreTab out(tab.size());
    for (int cs = 0; cs < int(tab.size()); ++cs) {
      const PatMor& act = calc.core_slot_act(cs);
      const Slice& s = calc.slice(calc.obj_id(act.src));
      const FibSet& f = calc.fib(calc.obj_id(act.src));
      const auto& pd = sym.at(act.dst);
      std::vector<int> nf(tab[cs].size());
      for (size_t k = 0; k < f.families.size(); ++k) {
        std::vector<int> fam(f.families[k].size());
        for (size_t t = 0; t < fam.size(); ++t)
          fam[t] = sym.at(s.labels[t].dst)[f.families[k][t]];
        nf[f.index.at(fam)] = pd[tab[cs][k]];
      }
      out[cs] = nf;
    }
    return out;
  };
  auto serialize = [](const MonadCalc::CoreTab& tab) {
    std::string s;
    for (const auto& fun : tab) {
      for (int v : fun) s += char('0' + v);
      s += ";";
    }
    return s;
  };
  // enumeration: odometer over seed functions
  MonadCalc::CoreTab tab(ncs);
  for (int cs : calc.identity_slots) tab[cs] = calc.canonical_proj(calc.core_slot_act(cs).src);
  for (auto& d : dims) tab[d.cs].assign(d.domain, 0);
  std::set<std::string> canon_seen;
  long long raw = 0;
  bool done = total == 0;
  while (!done) {
    // evaluate the candidate in tab
    bool viable = true;
    for (const auto* fc : recipes) {
      const FibSet& fn = calc.fib(fc->N);
      const FibSet& fm2 = calc.fib(fc->M2);
      std::vector<int>& fun = tab[fc->lhs];
      fun.assign(fn.families.size(), 0);
      std::vector<int> fam(fc->inner.size());
      for (size_t x = 0; x < fn.families.size() && viable; ++x) {
        for (size_t t = 0; t < fc->inner.size(); ++t)
          fam[t] = tab[fc->inner[t].first][calc.reindex(fc->inner[t].second)[x]];
        auto it = fm2.index.find(fam);
        if (it == fm2.index.end())
          viable = false;
        else
          fun[x] = tab[fc->outer][it->second];
      }
      if (!viable) break;
    }
    if (viable) {
      for (const auto& nc : nats)
        if (!calc.eval_nat(nc, tab, nullptr)) {
          viable = false;
          break;
        }
    }
    if (viable) {
      for (size_t c = 0; c < funs.size(); ++c)
        if (!calc.eval_fun(funs[c], tab, nullptr)) {
          viable = false;
          break;
        }
    }
    if (viable) {
      ++raw;
      std::string best;
      MonadCalc::CoreTab besttab;
      for (const auto& sym : symmetries) {
        auto rl = relabel_tab(tab, sym);
        std::string ser = serialize(rl);
        if (best.empty() || ser < best) {
          best = ser;
          besttab = rl;
        }
      }
      bool fresh = canon_seen.insert(best).second;
      if (!opts.dedup || fresh) {
        MonadSection ms;
        ms.graph = graph;
        ms.objs.clear();
        for (int o : calc.bound_objs) ms.objs.push_back(calc.obj(o));
        ms.core = calc.to_named(opts.dedup ? besttab : tab);
        // identities are canonical, keep them out of the stored core
        for (int cs : calc.identity_slots) ms.core.erase(calc.core_slot_act(cs).uid());
        res.monads.push_back(std::move(ms));
      }
    }
    // advance the odometer
    done = true;
    for (auto& d : dims) {
      bool carried = false;
      for (size_t i = 0; i < d.domain; ++i) {
        if (tab[d.cs][i] + 1 < d.codomain) {
          tab[d.cs][i]++;
          for (size_t j = 0; j < i; ++j) tab[d.cs][j] = 0;
          carried = true;
          break;
        }
      }
      if (carried) {
        done = false;
        break;
      }
      for (size_t i = 0; i < d.domain; ++i) tab[d.cs][i] = 0;
    }
  }
  res.raw_count = raw;
  std::sort(res.monads.begin(), res.monads.end(),
            [](const MonadSection& a, const MonadSection& b) {
              std::ostringstream oa, ob;
              for (const auto& [u, f] : a.core) {
                oa << u << "=";
                for (int v : f) oa << v << ".";
              }
              for (const auto& [u, f] : b.core) {
                ob << u << "=";
                for (int v : f) ob << v << ".";
              }
              return oa.str() < ob.str();
            });
  return res;
}

// ---------------------------------------------------------------------------

bool segal_equivalent(const TruncatedFunctor& x, const TruncatedFunctor& y, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (x.objs != y.objs) return fail("different truncations");
  const Pattern& p = *x.pattern;
  std::map<std::string, std::vector<int>> cmap;
  for (const auto& o : x.objs) {
    Slice s = elementary_slice(p, o);
    std::vector<int> c(x.value.at(o).elems.size());
    std::set<int> hit;
    for (size_t v = 0; v < x.value.at(o).elems.size(); ++v) {
      std::string nm = "(";
      for (size_t t = 0; t < s.labels.size(); ++t) {
        if (t) nm += ",";
        nm += x.value.at(s.labels[t].dst).elems[x.action.at(s.labels[t].uid())[v]];
      }
      nm += ")";
      int idx = y.value.at(o).index_of(nm);
      if (idx < 0) return fail("family name missing at " + o + ": " + nm);
      c[v] = idx;
      hit.insert(idx);
    }
    if (hit.size() != y.value.at(o).elems.size()) return fail("comparison not bijective at " + o);
    cmap[o] = c;
  }
  for (const auto& a : x.objs)
    for (const auto& b : x.objs)
      for (const auto& f : p.hom(a, b)) {
        const auto& xm = x.action.at(f.uid());
        const auto& ym = y.action.at(f.uid());
        for (size_t v = 0; v < xm.size(); ++v)
          if (cmap[b][xm[v]] != ym[cmap[a][v]]) return fail("actions differ along " + f.uid());
      }
  return true;
}

bool monad_equivalent(const MonadSection& a, const MonadSection& b, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (a.objs != b.objs) return fail("different truncations");
  auto cap = shared_calc(a.graph.pattern, a.graph, a.objs);
  auto cbp = shared_calc(b.graph.pattern, b.graph, b.objs);
  MonadCalc& ca = *cap;
  MonadCalc& cb = *cbp;
  ca.collect_core();
  cb.collect_core();
  std::map<std::string, std::vector<int>> cmap;
  for (const auto& el : a.graph.els) {
    std::vector<int> c(a.graph.value.at(el).elems.size());
    if (a.graph.value.at(el).elems == b.graph.value.at(el).elems) {
      std::iota(c.begin(), c.end(), 0);
      cmap[el] = c;
      continue;
    }
    // otherwise match along the canonical family naming of the nerve
    Slice s = elementary_slice(*a.graph.pattern, el);
    std::set<int> hit;
    for (size_t v = 0; v < c.size(); ++v) {
      std::string nm = "(";
      for (size_t t = 0; t < s.labels.size(); ++t) {
        if (t) nm += ",";
        nm += a.graph.value.at(s.labels[t].dst).elems[a.graph.action.at(s.labels[t].uid())[v]];
      }
      nm += ")";
      int idx = b.graph.value.at(el).index_of(nm);
      if (idx < 0) return fail("graph element missing at " + el + ": " + nm);
      c[v] = idx;
      hit.insert(idx);
    }
    if (hit.size() != b.graph.value.at(el).elems.size())
      return fail("graph comparison not bijective at " + el);
    cmap[el] = c;
  }
  auto atab = ca.to_table(a.core, nullptr);
  auto btab = cb.to_table(b.core, nullptr);
  for (int cs = 0; cs < ca.core_slot_count(); ++cs) {
    const PatMor& act = ca.core_slot_act(cs);
    const Slice& s = ca.slice(ca.obj_id(act.src));
    const FibSet& fa = ca.fib(ca.obj_id(act.src));
    const FibSet& fb = cb.fib(cb.obj_id(act.src));
    if (fa.families.size() != fb.families.size()) return fail("fiber size mismatch at " + act.src);
    int cs_b = cb.core_slot(cb.mor_id(act));
    if (cs_b >= int(btab.size()) || btab[cs_b].empty() != atab[cs].empty())
      if (atab[cs].size() != btab[cs_b].size()) return fail("component missing in b: " + act.uid());
    for (size_t k = 0; k < fa.families.size(); ++k) {
      std::vector<int> fam(fa.families[k].size());
      for (size_t t = 0; t < fam.size(); ++t)
        fam[t] = cmap.at(s.labels[t].dst)[fa.families[k][t]];
      auto jt = fb.index.find(fam);
      if (jt == fb.index.end()) return fail("fiber family missing at " + act.src);
      if (cmap.at(act.dst)[atab[cs][k]] != btab[cs_b][jt->second])
        return fail("components differ at " + act.uid());
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::vector<std::string> default_monad_truncation(const std::string& pattern_id) {
  if (pattern_id == "delta-natural" || pattern_id == "delta-flat")
    return {"[0]", "[1]", "[2]", "[3]"};
  if (pattern_id == "gamma-flat" || pattern_id == "gamma-natural")
    return {"<0>", "<1>", "<2>", "<3>"};
  if (pattern_id == "theta-2") {
    // closed under images of globe maps: root intervals with at most two
    // children, each with at most two grandchildren
    return {"",         "()",       "(())",       "(()())",     "()()",       "()(())",
            "(())()",   "(())(())", "()(()())",   "(()())()",   "(())(()())", "(()())(())",
            "(()())(()())"};
  }
  if (pattern_id == "omega-planar") return {"e", "*0", "*1", "*2", "(v: *1)", "(v: (v: *1))"};
  if (pattern_id == "terminal") return {"*"};
  throw input_error("no default monad truncation for pattern " + pattern_id);
}

std::shared_ptr<const Pattern> monad_pattern_instance(const std::string& pattern_id) {
  if (pattern_id == "theta-2")
    return std::make_shared<ThetaPattern>(2, default_monad_truncation(pattern_id));
  if (pattern_id == "omega-planar")
    return std::make_shared<OmegaPattern>(default_monad_truncation(pattern_id));
  return pattern_by_id(pattern_id);
}

using json = nlohmann::ordered_json;

std::string pgraph_to_json(const PGraph& g) {
  json j;
  j["pattern"] = g.pattern->name();
  j["elementaries"] = g.els;
  json vals = json::object();
  for (const auto& e : g.els) vals[e] = g.value.at(e).elems;
  j["values"] = vals;
  json act = json::object();
  for (const auto& [uid, fun] : g.action) {
    size_t b1 = uid.find('|');
    size_t b2 = uid.rfind('|');
    std::string srce = uid.substr(0, b1), dste = uid.substr(b2 + 1);
    json pairs = json::array();
    for (size_t v = 0; v < fun.size(); ++v)
      pairs.push_back({g.value.at(srce).elems[v], g.value.at(dste).elems[fun[v]]});
    act[uid] = pairs;
  }
  j["actions"] = act;
  return j.dump(2);
}

PGraph pgraph_from_json(const std::string& text, std::shared_ptr<const Pattern> pattern) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("bad JSON: ") + e.what());
  }
  PGraph g;
  g.pattern = pattern ? pattern : monad_pattern_instance(j.at("pattern").get<std::string>());
  g.els = g.pattern->elementaries();
  for (const auto& e : g.els) {
    FinSet s;
    s.elems = j.at("values").at(e).get<std::vector<std::string>>();
    std::sort(s.elems.begin(), s.elems.end());
    g.value[e] = s;
  }
  for (auto& [uid, pairs] : j.at("actions").items()) {
    size_t b1 = uid.find('|');
    size_t b2 = uid.rfind('|');
    if (b1 == std::string::npos || b2 == b1) throw input_error("bad morphism uid: " + uid);
    std::string srce = uid.substr(0, b1), dste = uid.substr(b2 + 1);
    if (!g.value.count(srce) || !g.value.count(dste))
      throw input_error("action references unknown object: " + uid);
    std::vector<int> fun(g.value.at(srce).elems.size(), -1);
    for (const auto& pr : pairs) {
      int x = g.value.at(srce).index_of(pr.at(0).get<std::string>());
      int y = g.value.at(dste).index_of(pr.at(1).get<std::string>());
      if (x < 0 || y < 0) throw input_error("unknown element in action at " + uid);
      fun[x] = y;
    }
    for (int v : fun)
      if (v < 0) throw input_error("incomplete action at " + uid);
    g.action[uid] = fun;
  }
  Diagnostics d = validate_pgraph(g);
  if (!d.empty()) throw input_error("invalid graph: " + d.front());
  return g;
}

std::string monad_to_json(const MonadSection& m) {
  json j;
  j["pattern"] = m.graph.pattern->name();
  j["objects"] = m.objs;
  j["graph"] = json::parse(pgraph_to_json(m.graph));
  auto calcp = shared_calc(m.graph.pattern, m.graph, m.objs);
  MonadCalc& calc = *calcp;
  calc.collect_core();
  auto tab = calc.to_table(m.core, nullptr);
  // full component tables over every morphism within bound
  json comps = json::object();
  for (const auto& a : m.objs)
    for (const auto& b : m.objs) {
      int aid = calc.obj_id(a), bid = calc.obj_id(b);
      for (int fid : calc.hom_ids(aid, bid)) {
        json per_e = json::object();
        const Slice& sb = calc.slice(bid);
        for (size_t e = 0; e < sb.labels.size(); ++e) {
          const auto& sl = calc.slot(fid, int(e));
          const FibSet& fm = calc.fib(sl.mid);
          const Slice& sm = calc.slice(sl.mid);
          const auto& fun = tab[calc.core_slot(sl.act)];
          const PatMor& act = calc.core_slot_act(calc.core_slot(sl.act));
          json table = json::array();
          for (size_t k = 0; k < fm.families.size(); ++k) {
            std::string nm = "(";
            for (size_t t = 0; t < sm.labels.size(); ++t) {
              if (t) nm += ",";
              nm += m.graph.value.at(sm.labels[t].dst).elems[fm.families[k][t]];
            }
            nm += ")";
            table.push_back({nm, m.graph.value.at(act.dst).elems[fun[k]]});
          }
          per_e[sb.labels[e].uid()] = table;
        }
        comps[calc.mor(fid).uid()] = per_e;
      }
    }
  j["components"] = comps;
  json corej = json::object();
  auto named = calc.to_named(tab);
  for (const auto& [uid, fun] : named) corej[uid] = fun;
  j["core"] = corej;
  return j.dump(2);
}

MonadSection monad_from_json(const std::string& text, std::shared_ptr<const Pattern> pattern) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("bad JSON: ") + e.what());
  }
  MonadSection m;
  m.graph = pgraph_from_json(
      j.at("graph").dump(),
      pattern ? pattern : monad_pattern_instance(j.at("pattern").get<std::string>()));
  m.objs = j.at("objects").get<std::vector<std::string>>();
  std::sort(m.objs.begin(), m.objs.end());
  for (auto& [uid, fun] : j.at("core").items()) m.core[uid] = fun.get<std::vector<int>>();
  return m;
}

}  // namespace patspan
