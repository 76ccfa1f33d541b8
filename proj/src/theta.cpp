#include "patspan/theta.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace patspan {

int LevelTree::height() const {
  int h = 0;
  for (const auto& c : children) h = std::max(h, 1 + c.height());
  return h;
}

int LevelTree::node_count() const {
  int n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

int LevelTree::leaf_count() const {
  if (children.empty()) return 1;
  int n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

bool LevelTree::linear() const {
  if (children.empty()) return true;
  return children.size() == 1 && children.front().linear();
}

std::string LevelTree::text() const { return print_tree(*this); }

std::string print_tree(const LevelTree& t) {
  std::string out;
  for (const auto& c : t.children) out += "(" + print_tree(c) + ")";
  return out;
}

LevelTree parse_tree(const std::string& s) {
  LevelTree root;
  std::vector<LevelTree*> stack{&root};
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') {
      stack.back()->children.push_back(LevelTree{});
      stack.push_back(&stack.back()->children.back());
    } else if (c == ')') {
      if (stack.size() == 1)
        throw input_error("unbalanced ')' at position " + std::to_string(i));
      stack.pop_back();
    } else if (c == ' ') {
      continue;
    } else {
      throw input_error("unexpected character '" + std::string(1, c) + "' at position " +
                        std::to_string(i));
    }
  }
  if (stack.size() != 1)
    throw input_error("unbalanced '(' (missing " + std::to_string(stack.size() - 1) + " ')')");
  return root;
}

LevelTree globe(int n) {
  LevelTree t;
  LevelTree* cur = &t;
  for (int k = 0; k < n; ++k) {
    cur->children.push_back(LevelTree{});
    cur = &cur->children.front();
  }
  return t;
}

int GlobularSet::total_cells() const {
  int n = 0;
  for (const auto& c : cells) n += int(c.size());
  return n;
}

Diagnostics validate_globular(const GlobularSet& g) {
  Diagnostics out;
  for (int k = 1; k <= g.dim(); ++k) {
    if (g.src[k].size() != g.cells[k].size() || g.tgt[k].size() != g.cells[k].size()) {
      out.push_back("boundary tables have wrong arity at dimension " + std::to_string(k));
      continue;
    }
    for (int i = 0; i < int(g.cells[k].size()); ++i) {
      if (g.src[k][i] < 0 || g.src[k][i] >= int(g.cells[k - 1].size()) || g.tgt[k][i] < 0 ||
          g.tgt[k][i] >= int(g.cells[k - 1].size()))
        out.push_back("boundary out of range at " + g.cells[k][i]);
    }
  }
  for (int k = 2; k <= g.dim(); ++k)
    for (int i = 0; i < int(g.cells[k].size()); ++i) {
      int s = g.src[k][i], t = g.tgt[k][i];
      if (g.src[k - 1][s] != g.src[k - 1][t])
        out.push_back("ss != st at " + g.cells[k][i]);
      if (g.tgt[k - 1][s] != g.tgt[k - 1][t])
        out.push_back("ts != tt at " + g.cells[k][i]);
    }
  return out;
}

namespace {

struct NodeRef {
  std::vector<int> path;  // child indices from the root
};

void collect_nodes(const LevelTree& t, std::vector<int>& path,
                   std::vector<std::vector<std::vector<int>>>& by_level) {
  int level = int(path.size());
  if (int(by_level.size()) <= level) by_level.resize(level + 1);
  by_level[level].push_back(path);
  for (size_t i = 0; i < t.children.size(); ++i) {
    path.push_back(int(i));
    collect_nodes(t.children[i], path, by_level);
    path.pop_back();
  }
}

const LevelTree* node_at(const LevelTree& t, const std::vector<int>& path) {
  const LevelTree* cur = &t;
  for (int i : path) cur = &cur->children[i];
  return cur;
}

std::string path_text(const std::vector<int>& path) {
  std::string s = "r";
  for (int i : path) s += "." + std::to_string(i);
  return s;
}

}  // namespace

GlobularSet sectors(const LevelTree& t) {
  std::vector<std::vector<std::vector<int>>> by_level;
  std::vector<int> path;
  collect_nodes(t, path, by_level);
  GlobularSet g;
  g.cells.resize(by_level.size());
  g.src.resize(by_level.size());
  g.tgt.resize(by_level.size());
  // index of each sector within its dimension, keyed by (path text, gap)
  std::map<std::pair<std::string, int>, int> index;
  for (size_t k = 0; k < by_level.size(); ++k) {
    for (const auto& p : by_level[k]) {
      const LevelTree* n = node_at(t, p);
      for (int gap = 0; gap <= int(n->children.size()); ++gap) {
        index[{path_text(p), gap}] = int(g.cells[k].size());
        g.cells[k].push_back(path_text(p) + ":" + std::to_string(gap));
      }
    }
  }
  for (size_t k = 1; k < by_level.size(); ++k) {
    g.src[k].resize(g.cells[k].size());
    g.tgt[k].resize(g.cells[k].size());
    for (const auto& p : by_level[k]) {
      const LevelTree* n = node_at(t, p);
      std::vector<int> parent(p.begin(), p.end() - 1);
      int pos = p.back();
      for (int gap = 0; gap <= int(n->children.size()); ++gap) {
        int idx = index.at({path_text(p), gap});
        g.src[k][idx] = index.at({path_text(parent), pos});
        g.tgt[k][idx] = index.at({path_text(parent), pos + 1});
      }
    }
  }
  return g;
}

std::string globular_to_json(const GlobularSet& g) {
  nlohmann::ordered_json j;
  std::vector<int> grades;
  for (const auto& c : g.cells) grades.push_back(int(c.size()));
  j["grades"] = grades;
  j["cells"] = g.cells;
  nlohmann::ordered_json src = nlohmann::ordered_json::array();
  nlohmann::ordered_json tgt = nlohmann::ordered_json::array();
  for (int k = 0; k <= g.dim(); ++k) {
    if (k == 0) {
      src.push_back(nlohmann::ordered_json::array());
      tgt.push_back(nlohmann::ordered_json::array());
      continue;
    }
    nlohmann::ordered_json s = nlohmann::ordered_json::array(), t = nlohmann::ordered_json::array();
    for (size_t i = 0; i < g.cells[k].size(); ++i) {
      s.push_back(g.cells[k - 1][g.src[k][i]]);
      t.push_back(g.cells[k - 1][g.tgt[k][i]]);
    }
    src.push_back(s);
    tgt.push_back(t);
  }
  j["source"] = src;
  j["target"] = tgt;
  return j.dump(2);
}

long long count_globular_maps(const GlobularSet& a, const GlobularSet& b) {
  if (a.dim() > b.dim()) {
    // a map must land cells of each dimension in the same dimension
    for (int k = b.dim() + 1; k <= a.dim(); ++k)
      if (!a.cells[k].empty()) return 0;
  }
  // assign images dimension by dimension from the bottom, checking
  // boundaries against the previous dimension
  std::vector<std::vector<int>> img(a.cells.size());
  long long count = 0;
  std::function<void(int, int)> rec = [&](int k, int i) {
    if (k == int(a.cells.size())) {
      count++;
      return;
    }
    if (i == int(a.cells[k].size())) {
      rec(k + 1, 0);
      return;
    }
    int blim = (k <= b.dim()) ? int(b.cells[k].size()) : 0;
    for (int v = 0; v < blim; ++v) {
      if (k > 0) {
        if (b.src[k][v] != img[k - 1][a.src[k][i]]) continue;
        if (b.tgt[k][v] != img[k - 1][a.tgt[k][i]]) continue;
      }
      img[k].push_back(v);
      rec(k, i + 1);
      img[k].pop_back();
    }
  };
  rec(0, 0);
  return count;
}

// ---------------------------------------------------------------------------
// Wreath morphisms

std::string WreathMorphism::text() const {
  std::string s = base.text() + "{";
  for (size_t i = 0; i < components.size(); ++i) {
    if (i) s += ";";
    for (size_t j = 0; j < components[i].size(); ++j) {
      if (j) s += ",";
      s += components[i][j].text();
    }
  }
  s += "}";
  return s;
}

bool WreathMorphism::operator==(const WreathMorphism& o) const {
  if (base.images != o.base.images || base.target_arity != o.base.target_arity) return false;
  if (components.size() != o.components.size()) return false;
  for (size_t i = 0; i < components.size(); ++i) {
    if (components[i].size() != o.components[i].size()) return false;
    for (size_t j = 0; j < components[i].size(); ++j)
      if (!(components[i][j] == o.components[i][j])) return false;
  }
  return true;
}

bool wreath_is_inert(const WreathMorphism& w) {
  if (!w.base.is_interval_inclusion()) return false;
  for (const auto& group : w.components)
    for (const auto& c : group)
      if (!wreath_is_inert(c)) return false;
  return true;
}

bool wreath_is_active(const WreathMorphism& w) {
  if (!w.base.is_endpoint_preserving()) return false;
  for (const auto& group : w.components)
    for (const auto& c : group)
      if (!wreath_is_active(c)) return false;
  return true;
}

Diagnostics validate_wreath(const WreathMorphism& w, const LevelTree& s, const LevelTree& t) {
  Diagnostics out;
  int m = int(s.children.size()), n = int(t.children.size());
  if (w.base.source_arity() != m || w.base.target_arity != n) {
    out.push_back("base arity mismatch");
    return out;
  }
  if (!w.base.monotone()) out.push_back("base not monotone");
  if (int(w.components.size()) != m) {
    out.push_back("component group count mismatch");
    return out;
  }
  for (int i = 1; i <= m; ++i) {
    int expect = w.base.images[i] - w.base.images[i - 1];
    if (int(w.components[i - 1].size()) != expect) {
      out.push_back("component count mismatch at branch " + std::to_string(i));
      continue;
    }
    for (int j = w.base.images[i - 1] + 1; j <= w.base.images[i]; ++j) {
      auto sub = validate_wreath(w.components[i - 1][j - w.base.images[i - 1] - 1],
                                 s.children[i - 1], t.children[j - 1]);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  return out;
}

std::vector<WreathMorphism> theta_hom(const LevelTree& s, const LevelTree& t, MorClass cls) {
  static std::map<std::tuple<std::string, std::string, int>, std::vector<WreathMorphism>> cache;
  static std::mutex mtx;
  std::tuple<std::string, std::string, int> key{s.text(), t.text(), int(cls)};
  {
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  int m = int(s.children.size()), n = int(t.children.size());
  std::vector<WreathMorphism> out;
  for (const auto& base : enumerate_monotone(m, n)) {
    if (cls == MorClass::inert && !base.is_interval_inclusion()) continue;
    if (cls == MorClass::active && !base.is_endpoint_preserving()) continue;
    // per-slot component choices
    std::vector<std::vector<std::vector<WreathMorphism>>> choices(m);
    bool feasible = true;
    for (int i = 1; i <= m && feasible; ++i) {
      for (int j = base.images[i - 1] + 1; j <= base.images[i]; ++j) {
        auto sub = theta_hom(s.children[i - 1], t.children[j - 1], cls);
        if (sub.empty()) feasible = false;
        choices[i - 1].push_back(std::move(sub));
      }
    }
    if (!feasible) continue;
    WreathMorphism w;
    w.base = base;
    w.components.assign(m, {});
    std::function<void(int, int)> rec = [&](int i, int j) {
      if (i == m) {
        out.push_back(w);
        return;
      }
      if (j == int(choices[i].size())) {
        rec(i + 1, 0);
        return;
      }
      for (const auto& c : choices[i][j]) {
        w.components[i].push_back(c);
        rec(i, j + 1);
        w.components[i].pop_back();
      }
    };
    rec(0, 0);
  }
  std::sort(out.begin(), out.end(),
            [](const WreathMorphism& a, const WreathMorphism& b) { return a.text() < b.text(); });
  {
    std::lock_guard<std::mutex> lk(mtx);
    cache[key] = out;
  }
  return out;
}

WreathMorphism wreath_identity(const LevelTree& t) {
  WreathMorphism w;
  int n = int(t.children.size());
  w.base.target_arity = n;
  for (int i = 0; i <= n; ++i) w.base.images.push_back(i);
  for (int i = 1; i <= n; ++i) w.components.push_back({wreath_identity(t.children[i - 1])});
  return w;
}

WreathMorphism compose_wreath(const WreathMorphism& second, const WreathMorphism& first) {
  WreathMorphism out;
  out.base = compose_simplex(second.base, first.base);
  int m = first.base.source_arity();
  out.components.assign(m, {});
  const auto& phi = first.base.images;
  const auto& psi = second.base.images;
  for (int i = 1; i <= m; ++i) {
    for (int k = out.base.images[i - 1] + 1; k <= out.base.images[i]; ++k) {
      // find j with phi(i-1) < j <= phi(i) and psi(j-1) < k <= psi(j)
      int jfound = -1;
      for (int j = phi[i - 1] + 1; j <= phi[i]; ++j)
        if (psi[j - 1] < k && k <= psi[j]) jfound = j;
      if (jfound < 0) throw input_error("wreath composition: slot mismatch");
      const WreathMorphism& f = first.components[i - 1][jfound - phi[i - 1] - 1];
      const WreathMorphism& g = second.components[jfound - 1][k - psi[jfound - 1] - 1];
      out.components[i - 1].push_back(compose_wreath(g, f));
    }
  }
  return out;
}

LevelTree wreath_image(const WreathMorphism& f, const LevelTree& s, const LevelTree& t) {
  LevelTree m;
  int lo = f.base.images.front(), hi = f.base.images.back();
  int msize = int(f.base.images.size()) - 1;
  for (int j = lo + 1; j <= hi; ++j) {
    int ifound = -1;
    for (int i = 1; i <= msize; ++i)
      if (f.base.images[i - 1] < j && j <= f.base.images[i]) ifound = i;
    const WreathMorphism& c = f.components[ifound - 1][j - f.base.images[ifound - 1] - 1];
    m.children.push_back(wreath_image(c, s.children[ifound - 1], t.children[j - 1]));
  }
  return m;
}

std::pair<WreathMorphism, WreathMorphism> theta_factorize(const WreathMorphism& f,
                                                          const LevelTree& s,
                                                          const LevelTree& t) {
  int lo = f.base.images.front(), hi = f.base.images.back();
  int m = f.base.source_arity();
  WreathMorphism active, inert;
  active.base.target_arity = hi - lo;
  for (int v : f.base.images) active.base.images.push_back(v - lo);
  inert.base.target_arity = f.base.target_arity;
  for (int v = lo; v <= hi; ++v) inert.base.images.push_back(v);
  active.components.assign(m, {});
  inert.components.assign(hi - lo, {});
  for (int j = lo + 1; j <= hi; ++j) {
    int ifound = -1;
    for (int i = 1; i <= m; ++i)
      if (f.base.images[i - 1] < j && j <= f.base.images[i]) ifound = i;
    const WreathMorphism& c = f.components[ifound - 1][j - f.base.images[ifound - 1] - 1];
    auto [ca, ci] = theta_factorize(c, s.children[ifound - 1], t.children[j - 1]);
    active.components[ifound - 1].push_back(ca);
    inert.components[j - lo - 1].push_back(ci);
  }
  return {active, inert};
}

namespace {

// parse helpers for the wreath notation "[a0,...]{g1;g2;...}" with groups
// of comma-separated sub-wreaths
size_t matching_brace(const std::string& s, size_t open) {
  int depth = 0;
  for (size_t i = open; i < s.size(); ++i) {
    if (s[i] == '{') depth++;
    if (s[i] == '}') {
      depth--;
      if (depth == 0) return i;
    }
  }
  throw input_error("unbalanced '{' in wreath notation");
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '{' || c == '[') depth++;
    if (c == '}' || c == ']') depth--;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else
      cur += c;
  }
  out.push_back(cur);
  return out;
}

}  // namespace

WreathMorphism parse_wreath(const std::string& text, const LevelTree& s, const LevelTree& t) {
  size_t brace = text.find('{');
  if (brace == std::string::npos || text.back() != '}')
    throw input_error("bad wreath notation: " + text);
  WreathMorphism w;
  w.base = SimplexMap::parse(text.substr(0, brace), int(t.children.size()));
  if (w.base.source_arity() != int(s.children.size()))
    throw input_error("wreath base arity mismatch");
  std::string body = text.substr(brace + 1, text.size() - brace - 2);
  std::vector<std::string> groups =
      body.empty() ? std::vector<std::string>{} : split_top(body, ';');
  int m = int(s.children.size());
  if (body.empty()) groups.assign(m, "");
  if (int(groups.size()) != m && m > 0) throw input_error("wreath group count mismatch");
  w.components.assign(m, {});
  for (int i = 1; i <= m; ++i) {
    std::string g = groups[i - 1];
    std::vector<std::string> items =
        g.empty() ? std::vector<std::string>{} : split_top(g, ',');
    int expect = w.base.images[i] - w.base.images[i - 1];
    if (int(items.size()) != expect) throw input_error("wreath component count mismatch");
    for (int j = w.base.images[i - 1] + 1; j <= w.base.images[i]; ++j)
      w.components[i - 1].push_back(
          parse_wreath(items[j - w.base.images[i - 1] - 1], s.children[i - 1], t.children[j - 1]));
  }
  auto diag = validate_wreath(w, s, t);
  if (!diag.empty()) throw input_error("invalid wreath morphism: " + diag.front());
  return w;
}

// ---------------------------------------------------------------------------

FinCat theta_elementary_slice(const LevelTree& t) {
  GlobularSet g = sectors(t);
  int L = g.dim();
  // base category: opposite globe category, arrows m -> k for m > k with a
  // sign; composite keeps the sign of the lower segment.
  std::vector<std::string> objs;
  std::vector<std::tuple<std::string, std::string, std::string>> mors, comps;
  std::vector<std::pair<std::string, std::string>> ids;
  auto nm = [](int m, int k, char sg) {
    return std::string(1, sg) + std::to_string(m) + ">" + std::to_string(k);
  };
  for (int k = 0; k <= L; ++k) {
    objs.push_back(std::to_string(k));
    mors.push_back({"id" + std::to_string(k), std::to_string(k), std::to_string(k)});
    ids.push_back({std::to_string(k), "id" + std::to_string(k)});
    comps.push_back({"id" + std::to_string(k), "id" + std::to_string(k), "id" + std::to_string(k)});
  }
  for (int m2 = 0; m2 <= L; ++m2)
    for (int k = 0; k < m2; ++k)
      for (char sg : {'+', '-'}) {
        mors.push_back({nm(m2, k, sg), std::to_string(m2), std::to_string(k)});
        comps.push_back({nm(m2, k, sg), "id" + std::to_string(m2), nm(m2, k, sg)});
        comps.push_back({"id" + std::to_string(k), nm(m2, k, sg), nm(m2, k, sg)});
      }
  // compose: (k -> j) ∘ (m -> k): sign of the second (lower) arrow wins
  for (int m2 = 0; m2 <= L; ++m2)
    for (int k = 0; k < m2; ++k)
      for (int j = 0; j < k; ++j)
        for (char s1 : {'+', '-'})
          for (char s2 : {'+', '-'}) comps.push_back({nm(k, j, s2), nm(m2, k, s1), nm(m2, j, s2)});
  SetDiagram d;
  d.base = make_fincat(objs, mors, comps, ids);
  d.covariant = true;
  d.values.resize(d.base.objects.size());
  for (int k = 0; k <= L; ++k) d.values[d.base.obj_index(std::to_string(k))] = g.cells[k];
  d.maps.resize(d.base.mors.size());
  for (size_t m2 = 0; m2 < d.base.mors.size(); ++m2) {
    const auto& mor = d.base.mors[m2];
    int from = std::stoi(d.base.objects[mor.src]);
    int to = std::stoi(d.base.objects[mor.dst]);
    if (from == to) {
      for (size_t v = 0; v < d.values[mor.src].size(); ++v) d.maps[m2].push_back(int(v));
      continue;
    }
    char sg = mor.id[0];
    for (size_t v = 0; v < g.cells[from].size(); ++v) {
      int cur = int(v);
      for (int k = from; k > to; --k) {
        if (k == to + 1)
          cur = (sg == '-') ? g.src[k][cur] : g.tgt[k][cur];
        else
          cur = g.src[k][cur];
      }
      d.maps[m2].push_back(cur);
    }
  }
  return category_of_elements(d).cat;
}

std::vector<int> globular_sum_decomposition(const LevelTree& t) {
  // leaf depths in planar order, interleaved with meet levels
  std::vector<std::vector<int>> leaf_paths;
  std::function<void(const LevelTree&, std::vector<int>&)> rec = [&](const LevelTree& n,
                                                                     std::vector<int>& path) {
    if (n.children.empty()) {
      leaf_paths.push_back(path);
      return;
    }
    for (size_t i = 0; i < n.children.size(); ++i) {
      path.push_back(int(i));
      rec(n.children[i], path);
      path.pop_back();
    }
  };
  std::vector<int> path;
  rec(t, path);
  std::vector<int> out;
  for (size_t k = 0; k < leaf_paths.size(); ++k) {
    out.push_back(int(leaf_paths[k].size()));
    if (k + 1 < leaf_paths.size()) {
      size_t common = 0;
      while (common < leaf_paths[k].size() && common < leaf_paths[k + 1].size() &&
             leaf_paths[k][common] == leaf_paths[k + 1][common])
        ++common;
      out.push_back(int(common));
    }
  }
  return out;
}

LevelTree tree_from_decomposition(const std::vector<int>& d) {
  if (d.empty() || d.size() % 2 == 0) throw input_error("bad decomposition list");
  LevelTree t = globe(d[0]);
  for (size_t k = 1; k < d.size(); k += 2) {
    int meet = d[k], depth = d[k + 1];
    if (depth <= meet) throw input_error("decomposition: leaf depth must exceed meet level");
    // walk down the rightmost branch to the meet level, then attach a chain
    LevelTree* cur = &t;
    for (int lev = 0; lev < meet; ++lev) cur = &cur->children.back();
    cur->children.push_back(globe(depth - meet - 1));
  }
  return t;
}

std::vector<LevelTree> enumerate_trees(int max_nodes, int max_height) {
  // all planar trees with node_count <= max_nodes, height <= max_height
  std::vector<LevelTree> out;
  std::function<std::vector<LevelTree>(int, int)> gen = [&](int nodes, int height) {
    // trees using exactly `nodes` nodes with height <= height
    std::vector<LevelTree> res;
    if (nodes <= 0) return res;
    if (nodes == 1) {
      res.push_back(LevelTree{});
      return res;
    }
    if (height == 0) return res;
    // distribute nodes-1 among an ordered list of child trees
    std::function<void(int, std::vector<LevelTree>&)> fill = [&](int remaining,
                                                                 std::vector<LevelTree>& acc) {
      if (remaining == 0) {
        LevelTree t;
        t.children = acc;
        res.push_back(t);
        return;
      }
      for (int take = 1; take <= remaining; ++take)
        for (const auto& c : gen(take, height - 1)) {
          acc.push_back(c);
          fill(remaining - take, acc);
          acc.pop_back();
        }
    };
    std::vector<LevelTree> acc;
    fill(nodes - 1, acc);
    return res;
  };
  for (int n = 1; n <= max_nodes; ++n) {
    auto batch = gen(n, max_height);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Pattern adapter (pattern-side = opposite of the theta-direct encoding)

std::vector<std::string> ThetaPattern::objects() const {
  if (!curated_.empty()) {
    auto out = curated_;
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<std::string> out;
  for (const auto& t : enumerate_trees(node_bound_, level_)) out.push_back(t.text());
  std::sort(out.begin(), out.end());
  return out;
}

bool ThetaPattern::is_elementary(const std::string& o) const {
  return parse_tree(o).linear();
}

std::vector<PatMor> ThetaPattern::hom(const std::string& x, const std::string& y) const {
  LevelTree s = parse_tree(x), t = parse_tree(y);
  std::vector<PatMor> out;
  for (const auto& w : theta_hom(t, s)) out.push_back(PatMor{x, w.text(), y});
  std::sort(out.begin(), out.end());
  return out;
}

namespace theta_cache {

const LevelTree& tree(const std::string& text) {
  static std::map<std::string, LevelTree> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lk(mtx);
  auto it = cache.find(text);
  if (it != cache.end()) return it->second;
  return cache.emplace(text, parse_tree(text)).first->second;
}

const WreathMorphism& wreath(const PatMor& f) {
  static std::map<std::string, WreathMorphism> cache;
  static std::mutex mtx;
  std::string uid = f.uid();
  std::lock_guard<std::mutex> lk(mtx);
  auto it = cache.find(uid);
  if (it != cache.end()) return it->second;
  WreathMorphism w = parse_wreath(f.key, tree(f.dst), tree(f.src));
  return cache.emplace(uid, std::move(w)).first->second;
}

}  // namespace theta_cache

PatMor ThetaPattern::identity(const std::string& x) const {
  return PatMor{x, wreath_identity(theta_cache::tree(x)).text(), x};
}

PatMor ThetaPattern::compose(const PatMor& g, const PatMor& f) const {
  if (f.dst != g.src) throw input_error("theta: morphisms not composable");
  static std::map<std::string, PatMor> cache;
  static std::mutex mtx;
  std::string key = f.uid() + "$" + g.uid();
  {
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const WreathMorphism& wf = theta_cache::wreath(f);
  const WreathMorphism& wg = theta_cache::wreath(g);
  PatMor out{f.src, compose_wreath(wf, wg).text(), g.dst};
  std::lock_guard<std::mutex> lk(mtx);
  cache.emplace(key, out);
  return out;
}

bool ThetaPattern::is_inert(const PatMor& f) const {
  return wreath_is_inert(theta_cache::wreath(f));
}

bool ThetaPattern::is_active(const PatMor& f) const {
  return wreath_is_active(theta_cache::wreath(f));
}

std::pair<PatMor, PatMor> ThetaPattern::factorize(const PatMor& f) const {
  static std::map<std::string, std::pair<PatMor, PatMor>> cache;
  static std::mutex mtx;
  std::string uid = f.uid();
  {
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(uid);
    if (it != cache.end()) return it->second;
  }
  const LevelTree& s = theta_cache::tree(f.src);
  const LevelTree& t = theta_cache::tree(f.dst);
  const WreathMorphism& w = theta_cache::wreath(f);  // theta-direct t -> s
  auto [a, i] = theta_factorize(w, t, s);
  LevelTree mid = wreath_image(w, t, s);
  std::pair<PatMor, PatMor> out{PatMor{f.src, i.text(), mid.text()},
                                PatMor{mid.text(), a.text(), f.dst}};
  std::lock_guard<std::mutex> lk(mtx);
  cache.emplace(uid, out);
  return out;
}

}  // namespace patspan
