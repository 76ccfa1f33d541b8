#include "patspan/pattern.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "patspan/gamma.hpp"
#include "patspan/omega.hpp"
#include "patspan/simplex.hpp"
#include "patspan/theta.hpp"

namespace patspan {

bool Pattern::is_object(const std::string& o) const {
  auto os = objects();
  return std::find(os.begin(), os.end(), o) != os.end();
}

std::vector<std::string> Pattern::elementaries() const {
  std::vector<std::string> out;
  for (const auto& o : objects())
    if (is_elementary(o)) out.push_back(o);
  return out;
}

std::vector<PatMor> TerminalPattern::hom(const std::string& x, const std::string& y) const {
  if (x != "*" || y != "*") throw input_error("terminal pattern has one object");
  return {PatMor{"*", "id", "*"}};
}

PatMor TerminalPattern::identity(const std::string& x) const {
  if (x != "*") throw input_error("terminal pattern has one object");
  return PatMor{"*", "id", "*"};
}

PatMor TerminalPattern::compose(const PatMor&, const PatMor&) const {
  return PatMor{"*", "id", "*"};
}

std::pair<PatMor, PatMor> TerminalPattern::factorize(const PatMor& f) const { return {f, f}; }

std::pair<std::string, std::string> ProductPattern::split_obj(const std::string& o) {
  if (o.size() < 3 || o.front() != '(' || o.back() != ')')
    throw input_error("bad product object: " + o);
  int depth = 0;
  for (size_t i = 1; i + 1 < o.size(); ++i) {
    char c = o[i];
    if (c == '(') depth++;
    if (c == ')') depth--;
    if (c == ';' && depth == 0)
      return {o.substr(1, i - 1), o.substr(i + 1, o.size() - i - 2)};
  }
  throw input_error("bad product object: " + o);
}

std::pair<std::string, std::string> ProductPattern::split_key(const std::string& k) {
  if (k.size() < 3 || k.front() != '(' || k.back() != ')')
    throw input_error("bad product morphism: " + k);
  int depth = 0;
  for (size_t i = 1; i + 1 < k.size(); ++i) {
    char c = k[i];
    if (c == '(') depth++;
    if (c == ')') depth--;
    if (c == ';' && depth == 0)
      return {k.substr(1, i - 1), k.substr(i + 1, k.size() - i - 2)};
  }
  throw input_error("bad product morphism: " + k);
}

static std::string join2(const std::string& a, const std::string& b) {
  return "(" + a + ";" + b + ")";
}

std::vector<std::string> ProductPattern::objects() const {
  std::vector<std::string> out;
  for (const auto& a : p_->objects())
    for (const auto& b : q_->objects()) out.push_back(join2(a, b));
  std::sort(out.begin(), out.end());
  return out;
}

bool ProductPattern::is_elementary(const std::string& o) const {
  auto [a, b] = split_obj(o);
  return p_->is_elementary(a) && q_->is_elementary(b);
}

std::vector<PatMor> ProductPattern::hom(const std::string& x, const std::string& y) const {
  auto [xa, xb] = split_obj(x);
  auto [ya, yb] = split_obj(y);
  std::vector<PatMor> out;
  for (const auto& f : p_->hom(xa, ya))
    for (const auto& g : q_->hom(xb, yb))
      out.push_back(PatMor{x, join2(f.key, g.key), y});
  std::sort(out.begin(), out.end());
  return out;
}

PatMor ProductPattern::identity(const std::string& x) const {
  auto [a, b] = split_obj(x);
  return PatMor{x, join2(p_->identity(a).key, q_->identity(b).key), x};
}

static std::pair<PatMor, PatMor> product_parts(const PatMor& f) {
  auto [sa, sb] = ProductPattern::split_obj(f.src);
  auto [da, db] = ProductPattern::split_obj(f.dst);
  auto [ka, kb] = ProductPattern::split_key(f.key);
  return {PatMor{sa, ka, da}, PatMor{sb, kb, db}};
}

PatMor ProductPattern::compose(const PatMor& g, const PatMor& f) const {
  if (f.dst != g.src) throw input_error("product: morphisms not composable");
  auto [f1, f2] = product_parts(f);
  auto [g1, g2] = product_parts(g);
  PatMor c1 = p_->compose(g1, f1);
  PatMor c2 = q_->compose(g2, f2);
  return PatMor{f.src, join2(c1.key, c2.key), g.dst};
}

bool ProductPattern::is_inert(const PatMor& f) const {
  auto [f1, f2] = product_parts(f);
  return p_->is_inert(f1) && q_->is_inert(f2);
}

bool ProductPattern::is_active(const PatMor& f) const {
  auto [f1, f2] = product_parts(f);
  return p_->is_active(f1) && q_->is_active(f2);
}

std::pair<PatMor, PatMor> ProductPattern::factorize(const PatMor& f) const {
  auto [f1, f2] = product_parts(f);
  auto [i1, a1] = p_->factorize(f1);
  auto [i2, a2] = q_->factorize(f2);
  PatMor i{f.src, join2(i1.key, i2.key), join2(i1.dst, i2.dst)};
  PatMor a{i.dst, join2(a1.key, a2.key), f.dst};
  return {i, a};
}

// ---------------------------------------------------------------------------

int Slice::index_of(const PatMor& e) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == e) return int(i);
  return -1;
}

Slice elementary_slice(const Pattern& p, const std::string& x) {
  Slice s;
  s.base = x;
  std::vector<PatMor> objs;
  for (const auto& e : p.elementaries())
    for (const auto& f : p.hom(x, e))
      if (p.is_inert(f)) objs.push_back(f);
  // skeleton: keep one representative per orbit under automorphisms of the
  // elementary codomain, so the slice is gaunt even for patterns with
  // symmetries (Gamma). The representative is the least (codomain, key).
  {
    std::map<std::string, std::vector<PatMor>> autos;
    auto autos_of = [&](const std::string& e) -> const std::vector<PatMor>& {
      auto it = autos.find(e);
      if (it != autos.end()) return it->second;
      std::vector<PatMor> out;
      for (const auto& u : p.hom(e, e))
        for (const auto& v : p.hom(e, e))
          if (p.compose(v, u) == p.identity(e) && p.compose(u, v) == p.identity(e)) {
            out.push_back(u);
            break;
          }
      return autos.emplace(e, std::move(out)).first->second;
    };
    std::set<PatMor> drop;
    for (const auto& e : objs) {
      if (drop.count(e)) continue;
      for (const auto& u : autos_of(e.dst)) {
        PatMor other = p.compose(u, e);
        if (!(other == e)) {
          // keep the lexicographically least member of the orbit
          if (std::make_pair(e.dst, e.key) < std::make_pair(other.dst, other.key))
            drop.insert(other);
        }
      }
    }
    std::vector<PatMor> kept;
    for (const auto& e : objs)
      if (!drop.count(e)) kept.push_back(e);
    objs = std::move(kept);
  }
  std::sort(objs.begin(), objs.end(), [](const PatMor& a, const PatMor& b) {
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.key < b.key;
  });
  auto oname = [&](size_t i) { return objs[i].dst + "!" + objs[i].key; };
  std::vector<std::string> names;
  for (size_t i = 0; i < objs.size(); ++i) names.push_back(oname(i));
  // slice morphisms: inert g: E1 -> E2 with g ∘ e1 = e2
  struct SM {
    int from, to;
    PatMor g;
  };
  std::vector<SM> sms;
  for (size_t i = 0; i < objs.size(); ++i)
    for (size_t j = 0; j < objs.size(); ++j)
      for (const auto& g : p.hom(objs[i].dst, objs[j].dst)) {
        if (!p.is_inert(g)) continue;
        if (p.compose(g, objs[i]) == objs[j]) sms.push_back({int(i), int(j), g});
      }
  auto mname = [&](const SM& m) {
    return names[m.from] + "!" + names[m.to] + "!" + m.g.key;
  };
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  std::vector<std::tuple<std::string, std::string, std::string>> comps;
  std::vector<std::pair<std::string, std::string>> ids;
  for (const auto& m : sms) mors.push_back({mname(m), names[m.from], names[m.to]});
  for (size_t i = 0; i < objs.size(); ++i) {
    SM idm{int(i), int(i), p.identity(objs[i].dst)};
    ids.push_back({names[i], mname(idm)});
  }
  for (const auto& m1 : sms)
    for (const auto& m2 : sms) {
      if (m1.to != m2.from) continue;
      PatMor c = p.compose(m2.g, m1.g);
      SM cm{m1.from, m2.to, c};
      comps.push_back({mname(m2), mname(m1), mname(cm)});
    }
  s.cat = make_fincat(names, mors, comps, ids);
  s.labels.resize(objs.size());
  for (size_t i = 0; i < objs.size(); ++i) s.labels[s.cat.obj_index(names[i])] = objs[i];
  s.mor_witness.resize(s.cat.mors.size());
  for (const auto& m : sms) s.mor_witness[s.cat.mor_index(mname(m))] = m.g;
  // identities carry the identity witness
  for (size_t i = 0; i < objs.size(); ++i) {
    int oi = s.cat.obj_index(names[i]);
    s.mor_witness[s.cat.identity[oi]] = p.identity(s.labels[oi].dst);
  }
  return s;
}

SliceAction slice_action(const Pattern& p, const PatMor& f, const Slice& sy) {
  SliceAction act;
  act.f = f;
  act.inert_part.resize(sy.labels.size());
  act.act.resize(sy.labels.size());
  for (size_t e = 0; e < sy.labels.size(); ++e) {
    PatMor comp = p.compose(sy.labels[e], f);
    auto [i, a] = p.factorize(comp);
    act.inert_part[e] = i;
    act.act[e] = a;
  }
  act.mor_map.resize(sy.cat.mors.size());
  for (size_t m = 0; m < sy.cat.mors.size(); ++m) {
    int e1 = sy.cat.mors[m].src;
    int e2 = sy.cat.mors[m].dst;
    const PatMor& h = sy.mor_witness[m];
    PatMor hm{sy.labels[e1].dst, h.key, sy.labels[e2].dst};
    // inrt(h ∘ act(e1)) carries M_{e1} into M_{e2}
    PatMor ha = p.compose(hm, act.act[e1]);
    auto [hp, rest] = p.factorize(ha);
    if (!(p.compose(hp, act.inert_part[e1]) == act.inert_part[e2]))
      throw input_error("slice_action: factorization does not commute");
    act.mor_map[m] = hp;
  }
  return act;
}

std::vector<std::pair<PatMor, PatMor>> factorization_pairs(const Pattern& p, const PatMor& f) {
  std::vector<std::pair<PatMor, PatMor>> out;
  for (const auto& m : p.objects()) {
    std::vector<PatMor> inerts, actives;
    for (const auto& i : p.hom(f.src, m))
      if (p.is_inert(i)) inerts.push_back(i);
    for (const auto& a : p.hom(m, f.dst))
      if (p.is_active(a)) actives.push_back(a);
    for (const auto& i : inerts)
      for (const auto& a : actives)
        if (p.compose(a, i) == f) out.push_back({i, a});
  }
  return out;
}

int factorization_orbit_count(const Pattern& p, const PatMor& f,
                              const std::vector<std::pair<PatMor, PatMor>>& pairs) {
  std::vector<int> parent(pairs.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = int(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < pairs.size(); ++i)
    for (size_t j = 0; j < pairs.size(); ++j) {
      if (i == j) continue;
      const auto& [i1, a1] = pairs[i];
      const auto& [i2, a2] = pairs[j];
      // look for iso u with i2 = u ∘ i1 and a1 = a2 ∘ u
      for (const auto& u : p.hom(i1.dst, i2.dst)) {
        bool iso = false;
        for (const auto& v : p.hom(i2.dst, i1.dst))
          if (p.compose(v, u) == p.identity(i1.dst) && p.compose(u, v) == p.identity(i2.dst))
            iso = true;
        if (!iso) continue;
        if (p.compose(u, i1) == i2 && p.compose(a2, u) == a1) {
          int a = find(int(i)), b = find(int(j));
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
    }
  std::set<int> roots;
  for (size_t i = 0; i < pairs.size(); ++i) roots.insert(find(int(i)));
  return int(roots.size());
}

std::shared_ptr<const Pattern> pattern_by_id(const std::string& id) {
  size_t star = id.find('*');
  if (star != std::string::npos) {
    auto left = pattern_by_id(id.substr(0, star));
    auto right = pattern_by_id(id.substr(star + 1));
    return std::make_shared<ProductPattern>(left, right);
  }
  if (id == "delta-natural") return std::make_shared<DeltaPattern>(true);
  if (id == "delta-flat") return std::make_shared<DeltaPattern>(false);
  if (id == "gamma-natural") return std::make_shared<GammaPattern>(true);
  if (id == "gamma-flat") return std::make_shared<GammaPattern>(false);
  if (id == "theta-2") return std::make_shared<ThetaPattern>(2);
  if (id == "theta-3") return std::make_shared<ThetaPattern>(3);
  if (id == "omega-planar") return std::make_shared<OmegaPattern>();
  if (id == "terminal") return std::make_shared<TerminalPattern>();
  throw input_error("unknown pattern id: " + id);
}

}  // namespace patspan
