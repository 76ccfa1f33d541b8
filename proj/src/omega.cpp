#include "patspan/omega.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace patspan {

int PlanarTree::vertex_count() const {
  if (!has_vertex) return 0;
  int n = 1;
  for (const auto& c : inputs) n += c.vertex_count();
  return n;
}

int PlanarTree::edge_count() const {
  int n = 1;  // root edge
  for (const auto& c : inputs) n += c.edge_count();
  return n;
}

int PlanarTree::leaf_count() const {
  if (!has_vertex) return 1;
  int n = 0;
  for (const auto& c : inputs) n += c.leaf_count();
  return n;
}

std::string PlanarTree::text() const {
  if (!has_vertex) return "e";
  bool all_eta = true;
  for (const auto& c : inputs) all_eta = all_eta && !c.has_vertex;
  if (all_eta) return "*" + std::to_string(inputs.size());
  std::string s = "(v:";
  for (const auto& c : inputs) s += " " + c.text();
  return s + ")";
}

PlanarTree corolla(int a) {
  PlanarTree t;
  t.has_vertex = true;
  t.inputs.assign(a, PlanarTree{});
  return t;
}

namespace {

PlanarTree parse_planar_at(const std::string& s, size_t& pos) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
  if (pos >= s.size()) throw input_error("truncated tree notation");
  if (s[pos] == 'e') {
    ++pos;
    return PlanarTree{};
  }
  if (s[pos] == '*') {
    ++pos;
    size_t start = pos;
    while (pos < s.size() && isdigit(s[pos])) ++pos;
    if (start == pos) throw input_error("corolla arity missing");
    return corolla(std::stoi(s.substr(start, pos - start)));
  }
  if (s[pos] == '(') {
    ++pos;
    if (s.compare(pos, 2, "v:") != 0) throw input_error("expected 'v:' in tree notation");
    pos += 2;
    PlanarTree t;
    t.has_vertex = true;
    while (true) {
      while (pos < s.size() && s[pos] == ' ') ++pos;
      if (pos >= s.size()) throw input_error("unbalanced '(' in tree notation");
      if (s[pos] == ')') {
        ++pos;
        return t;
      }
      t.inputs.push_back(parse_planar_at(s, pos));
    }
  }
  throw input_error("unexpected character in tree notation: " + std::string(1, s[pos]));
}

}  // namespace

PlanarTree parse_planar_tree(const std::string& s) {
  size_t pos = 0;
  PlanarTree t = parse_planar_at(s, pos);
  while (pos < s.size() && s[pos] == ' ') ++pos;
  if (pos != s.size()) throw input_error("trailing garbage in tree notation: " + s);
  return t;
}

std::string OmegaMor::text() const {
  std::ostringstream os;
  os << "m[";
  for (size_t i = 0; i < edge_map.size(); ++i) {
    if (i) os << ",";
    os << edge_map[i];
  }
  os << "]";
  return os.str();
}

namespace {

OmegaMor parse_omega_mor(const std::string& s) {
  if (s.size() < 3 || s.compare(0, 2, "m[") != 0 || s.back() != ']')
    throw input_error("bad omega morphism notation: " + s);
  OmegaMor m;
  std::string body = s.substr(2, s.size() - 3);
  if (!body.empty()) {
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) m.edge_map.push_back(std::stoi(tok));
  }
  return m;
}

// subtree (as a tree plus its edge range) rooted at edge index e; DFS
// numbering makes the range contiguous
struct EdgeInfo {
  const PlanarTree* node;  // subtree whose root edge this is
};

void collect_edges(const PlanarTree& t, std::vector<const PlanarTree*>& edges) {
  edges.push_back(&t);
  if (t.has_vertex)
    for (const auto& c : t.inputs) collect_edges(c, edges);
}

// leaf edge indices in planar order
void collect_leaves(const PlanarTree& t, int base, std::vector<int>& out) {
  if (!t.has_vertex) {
    out.push_back(base);
    return;
  }
  int off = base + 1;
  for (const auto& c : t.inputs) {
    collect_leaves(c, off, out);
    off += c.edge_count();
  }
}

// all cuts of size a: lists of edge indices bounding a root region
std::vector<std::vector<int>> cuts(const PlanarTree& t, int a, int base) {
  std::vector<std::vector<int>> out;
  if (a == 1) out.push_back({base});
  if (!t.has_vertex) return out;
  int k = int(t.inputs.size());
  // compositions a = a_1 + ... + a_k with a_i >= 0
  std::vector<std::vector<std::vector<int>>> parts(k);
  std::function<void(int, int, std::vector<std::vector<int>>&)> rec =
      [&](int i, int remaining, std::vector<std::vector<int>>& acc) {
        if (i == k) {
          if (remaining == 0) {
            std::vector<int> flat;
            for (const auto& piece : acc)
              flat.insert(flat.end(), piece.begin(), piece.end());
            out.push_back(flat);
          }
          return;
        }
        int off = base + 1;
        for (int j = 0; j < i; ++j) off += t.inputs[j].edge_count();
        for (int ai = 0; ai <= remaining; ++ai)
          for (const auto& ci : cuts(t.inputs[i], ai, off)) {
            acc.push_back(ci);
            rec(i + 1, remaining - ai, acc);
            acc.pop_back();
          }
      };
  std::vector<std::vector<int>> acc;
  rec(0, a, acc);
  return out;
}

const PlanarTree* subtree_at(const PlanarTree& t, int edge, int base = 0) {
  if (edge == base) return &t;
  int off = base + 1;
  for (const auto& c : t.inputs) {
    if (edge < off + c.edge_count()) return subtree_at(c, edge, off);
    off += c.edge_count();
  }
  throw input_error("edge index out of range");
}

}  // namespace

std::vector<OmegaMor> inert_inclusions(const PlanarTree& s, const PlanarTree& t) {
  // embeddings of s with root edge at each edge of t
  std::vector<OmegaMor> out;
  std::function<bool(const PlanarTree&, const PlanarTree&, int, std::vector<int>&)> match =
      [&](const PlanarTree& sub, const PlanarTree& host, int host_edge,
          std::vector<int>& emap) -> bool {
    emap.push_back(host_edge);
    if (!sub.has_vertex) return true;
    if (!host.has_vertex) return false;
    if (sub.inputs.size() != host.inputs.size()) return false;
    int off = host_edge + 1;
    for (size_t i = 0; i < sub.inputs.size(); ++i) {
      if (!match(sub.inputs[i], host.inputs[i], off, emap)) return false;
      off += host.inputs[i].edge_count();
    }
    return true;
  };
  for (int e = 0; e < t.edge_count(); ++e) {
    const PlanarTree* host = subtree_at(t, e);
    std::vector<int> emap;
    if (match(s, *host, e, emap)) out.push_back(OmegaMor{emap});
  }
  return out;
}

std::vector<OmegaMor> active_maps(const PlanarTree& s, const PlanarTree& t) {
  std::vector<OmegaMor> out;
  if (!s.has_vertex) {
    if (!t.has_vertex) out.push_back(OmegaMor{{0}});
    return out;
  }
  int a = int(s.inputs.size());
  for (const auto& cut : cuts(t, a, 0)) {
    // recursively map each input subtree of s into the stub above its cut
    std::vector<std::vector<OmegaMor>> choices;
    bool ok = true;
    for (int i = 0; i < a && ok; ++i) {
      const PlanarTree* stub = subtree_at(t, cut[i]);
      auto sub = active_maps(s.inputs[i], *stub);
      if (sub.empty()) ok = false;
      choices.push_back(std::move(sub));
    }
    if (!ok) continue;
    OmegaMor m;
    m.edge_map.assign(s.edge_count(), -1);
    m.edge_map[0] = 0;
    std::function<void(int)> build = [&](int i) {
      if (i == a) {
        out.push_back(m);
        return;
      }
      int soff = 1;
      for (int j = 0; j < i; ++j) soff += s.inputs[j].edge_count();
      for (const auto& sub : choices[i]) {
        for (size_t k = 0; k < sub.edge_map.size(); ++k)
          m.edge_map[soff + k] = cut[i] + sub.edge_map[k];
        build(i + 1);
      }
    };
    build(0);
  }
  std::sort(out.begin(), out.end(),
            [](const OmegaMor& x, const OmegaMor& y) { return x.edge_map < y.edge_map; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OmegaMor corolla_active(const PlanarTree& t) {
  if (!t.has_vertex) {
    // degenerate case: the vertexless tree is covered by the identity
    return OmegaMor{{0}};
  }
  auto maps = active_maps(corolla(t.leaf_count()), t);
  if (maps.size() != 1) throw input_error("corolla cover is not unique");
  return maps.front();
}

FinCat omega_elementary_slice(const PlanarTree& t) {
  std::vector<const PlanarTree*> edges;
  collect_edges(t, edges);
  std::vector<std::string> objs;
  std::vector<std::tuple<std::string, std::string, std::string>> mors, comps;
  std::vector<std::pair<std::string, std::string>> ids;
  int nv = 0;
  std::vector<std::string> vname(edges.size());
  for (size_t e = 0; e < edges.size(); ++e) {
    objs.push_back("edge" + std::to_string(e));
    mors.push_back({"id_edge" + std::to_string(e), objs.back(), objs.back()});
    ids.push_back({objs.back(), "id_edge" + std::to_string(e)});
    if (edges[e]->has_vertex) {
      vname[e] = "vertex" + std::to_string(nv++);
      objs.push_back(vname[e]);
      mors.push_back({"id_" + vname[e], vname[e], vname[e]});
      ids.push_back({vname[e], "id_" + vname[e]});
    }
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    if (!edges[e]->has_vertex) continue;
    // incident edges: output edge e and the input edges just above
    mors.push_back({"root_leg" + std::to_string(e), "edge" + std::to_string(e), vname[e]});
    int off = int(e) + 1;
    for (size_t i = 0; i < edges[e]->inputs.size(); ++i) {
      mors.push_back({"leaf_leg" + std::to_string(e) + "_" + std::to_string(i),
                      "edge" + std::to_string(off), vname[e]});
      off += edges[e]->inputs[i].edge_count();
    }
  }
  // only identity compositions
  for (const auto& [id, src, dst] : mors) {
    comps.push_back({id, "id_" + src, id});
    comps.push_back({"id_" + dst, id, id});
  }
  return make_fincat(objs, mors, comps, ids);
}

std::vector<PlanarTree> enumerate_planar_trees(int max_vertices, int max_arity) {
  std::vector<std::vector<PlanarTree>> by_v(max_vertices + 1);
  by_v[0].push_back(PlanarTree{});
  for (int v = 1; v <= max_vertices; ++v) {
    // root vertex of arity a, inputs using v-1 vertices total
    for (int a = 0; a <= max_arity; ++a) {
      std::vector<PlanarTree> acc;
      std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i == a) {
          if (remaining == 0) {
            PlanarTree t;
            t.has_vertex = true;
            t.inputs = acc;
            by_v[v].push_back(t);
          }
          return;
        }
        for (int take = 0; take <= remaining; ++take)
          for (const auto& c : by_v[take]) {
            acc.push_back(c);
            rec(i + 1, remaining - take);
            acc.pop_back();
          }
      };
      rec(0, v - 1);
    }
  }
  std::vector<PlanarTree> out;
  for (auto& batch : by_v) out.insert(out.end(), batch.begin(), batch.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Pattern adapter

std::vector<std::string> OmegaPattern::objects() const {
  if (!curated_.empty()) {
    auto out = curated_;
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<std::string> out;
  for (const auto& t : enumerate_planar_trees(vertex_bound_, arity_bound_))
    out.push_back(t.text());
  std::sort(out.begin(), out.end());
  return out;
}

bool OmegaPattern::is_elementary(const std::string& o) const {
  PlanarTree t = parse_planar_tree(o);
  if (!t.has_vertex) return true;
  for (const auto& c : t.inputs)
    if (c.has_vertex) return false;
  return true;
}

std::vector<PatMor> OmegaPattern::hom(const std::string& x, const std::string& y) const {
  PlanarTree tx = parse_planar_tree(x), ty = parse_planar_tree(y);
  // pattern morphism x -> y is an omega-side map ty -> tx in the class
  // generated by inclusions and active maps: (inclusion of a region) after
  // an active map onto that region.
  std::vector<OmegaMor> reps;
  std::function<void(const PlanarTree&, int, std::vector<std::pair<PlanarTree, std::vector<int>>>&)>
      subs = [&](const PlanarTree& host, int root_edge,
                 std::vector<std::pair<PlanarTree, std::vector<int>>>& out) {
        // sub-dendrices rooted at root_edge of host (host is that subtree)
        std::vector<std::pair<PlanarTree, std::vector<int>>> local;
        local.push_back({PlanarTree{}, {root_edge}});
        if (host.has_vertex) {
          std::vector<std::vector<std::pair<PlanarTree, std::vector<int>>>> per_input;
          int off = root_edge + 1;
          for (const auto& c : host.inputs) {
            std::vector<std::pair<PlanarTree, std::vector<int>>> sub;
            subs(c, off, sub);
            per_input.push_back(sub);
            off += c.edge_count();
          }
          std::vector<std::pair<PlanarTree, std::vector<int>>> acc;
          std::function<void(size_t, PlanarTree&, std::vector<int>&)> rec =
              [&](size_t i, PlanarTree& tree, std::vector<int>& emap) {
                if (i == per_input.size()) {
                  local.push_back({tree, emap});
                  return;
                }
                for (const auto& [ctree, cmap] : per_input[i]) {
                  size_t tsz = tree.inputs.size();
                  size_t esz = emap.size();
                  tree.inputs.push_back(ctree);
                  emap.insert(emap.end(), cmap.begin(), cmap.end());
                  rec(i + 1, tree, emap);
                  tree.inputs.resize(tsz);
                  emap.resize(esz);
                }
              };
          PlanarTree vt;
          vt.has_vertex = true;
          std::vector<int> emap{root_edge};
          rec(0, vt, emap);
        }
        out.insert(out.end(), local.begin(), local.end());
      };
  std::vector<std::pair<PlanarTree, std::vector<int>>> regions;
  for (int e = 0; e < tx.edge_count(); ++e) {
    const PlanarTree* host = subtree_at(tx, e);
    subs(*host, e, regions);
  }
  std::vector<PatMor> out;
  for (const auto& [region, emb] : regions) {
    for (const auto& act : active_maps(ty, region)) {
      OmegaMor c;
      for (int v : act.edge_map) c.edge_map.push_back(emb[v]);
      out.push_back(PatMor{x, c.text(), y});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PatMor OmegaPattern::identity(const std::string& x) const {
  PlanarTree t = parse_planar_tree(x);
  OmegaMor m;
  for (int e = 0; e < t.edge_count(); ++e) m.edge_map.push_back(e);
  return PatMor{x, m.text(), x};
}

PatMor OmegaPattern::compose(const PatMor& g, const PatMor& f) const {
  if (f.dst != g.src) throw input_error("omega: morphisms not composable");
  OmegaMor mf = parse_omega_mor(f.key);  // edges(dst f) -> edges(src f)
  OmegaMor mg = parse_omega_mor(g.key);  // edges(dst g) -> edges(src g = dst f)
  OmegaMor c;
  for (int v : mg.edge_map) c.edge_map.push_back(mf.edge_map[v]);
  return PatMor{f.src, c.text(), g.dst};
}

bool OmegaPattern::is_inert(const PatMor& f) const {
  PlanarTree q = parse_planar_tree(f.dst), p = parse_planar_tree(f.src);
  OmegaMor m = parse_omega_mor(f.key);
  // check m : q -> p is a sub-dendrex inclusion
  std::function<bool(const PlanarTree&, int)> chk = [&](const PlanarTree& sub, int qe) -> bool {
    // qe is the index of sub's root edge within q
    if (!sub.has_vertex) return true;
    const PlanarTree* host = subtree_at(p, m.edge_map[qe]);
    if (!host->has_vertex || host->inputs.size() != sub.inputs.size()) return false;
    int qoff = qe + 1;
    int poff = m.edge_map[qe] + 1;
    for (size_t i = 0; i < sub.inputs.size(); ++i) {
      if (m.edge_map[qoff] != poff) return false;
      if (!chk(sub.inputs[i], qoff)) return false;
      qoff += sub.inputs[i].edge_count();
      poff += host->inputs[i].edge_count();
    }
    return true;
  };
  if (m.edge_map.size() != size_t(q.edge_count())) return false;
  return chk(q, 0);
}

std::pair<PatMor, PatMor> OmegaPattern::factorize(const PatMor& f) const {
  PlanarTree q = parse_planar_tree(f.dst), p = parse_planar_tree(f.src);
  OmegaMor m = parse_omega_mor(f.key);
  // region of p spanned between the image of q's root and of q's leaves
  std::vector<int> qleaves;
  collect_leaves(q, 0, qleaves);
  std::vector<int> boundary;
  for (int l : qleaves) boundary.push_back(m.edge_map[l]);
  size_t bpos = 0;
  std::vector<int> emb;  // region edge -> p edge
  std::function<PlanarTree(int)> build = [&](int pe) -> PlanarTree {
    emb.push_back(pe);
    if (bpos < boundary.size() && boundary[bpos] == pe) {
      ++bpos;
      return PlanarTree{};
    }
    const PlanarTree* host = subtree_at(p, pe);
    if (!host->has_vertex)
      throw input_error("omega factorize: map does not bound a region");
    PlanarTree out;
    out.has_vertex = true;
    int off = pe + 1;
    for (const auto& c : host->inputs) {
      out.inputs.push_back(build(off));
      off += c.edge_count();
    }
    return out;
  };
  PlanarTree region = build(m.edge_map[0]);
  if (bpos != boundary.size()) throw input_error("omega factorize: leaf images out of order");
  // active part: q -> region
  std::map<int, int> emb_inv;
  for (size_t i = 0; i < emb.size(); ++i) emb_inv[emb[i]] = int(i);
  OmegaMor act;
  for (int v : m.edge_map) {
    auto it = emb_inv.find(v);
    if (it == emb_inv.end()) throw input_error("omega factorize: edge escapes the region");
    act.edge_map.push_back(it->second);
  }
  OmegaMor inc;
  inc.edge_map = emb;
  PatMor inert_part{f.src, inc.text(), region.text()};
  PatMor active_part{region.text(), act.text(), f.dst};
  return {inert_part, active_part};
}

bool OmegaPattern::is_active(const PatMor& f) const {
  if (f.src != f.dst || !(parse_omega_mor(f.key) == parse_omega_mor(identity(f.src).key))) {
    auto [i, a] = factorize(f);
    return parse_omega_mor(i.key) == parse_omega_mor(identity(f.src).key) && i.dst == f.src;
  }
  return true;
}

}  // namespace patspan
