#ifndef PATSPAN_TEST_HELPERS_HPP
#define PATSPAN_TEST_HELPERS_HPP

#include <random>

#include "patspan/monad.hpp"
#include "patspan/segal.hpp"
#include "patspan/simplex.hpp"

namespace patspan::testing {

/// Random finite-set fiber on the elementary slice of `base`. Non-identity
/// slice actions are filled independently; callers should stick to bases
/// whose slices have no composable non-identity pairs (the span shapes) or
/// validate afterwards.
inline FiberObject random_fiber(const Pattern& p, const std::string& base, std::mt19937& rng,
                                int max_card, int min_card = 1) {
  FiberObject f;
  f.base = base;
  f.slice = elementary_slice(p, base);
  for (size_t t = 0; t < f.slice.labels.size(); ++t) {
    int n = min_card + int(rng() % (max_card - min_card + 1));
    FinSet s;
    for (int i = 0; i < n; ++i) s.elems.push_back("v" + std::to_string(i));
    f.value.push_back(s);
  }
  f.action.resize(f.slice.cat.mors.size());
  for (size_t m = 0; m < f.slice.cat.mors.size(); ++m) {
    int src = f.slice.cat.mors[m].src, dst = f.slice.cat.mors[m].dst;
    f.action[m].resize(f.value[src].elems.size());
    if (f.slice.cat.is_identity(int(m)))
      for (size_t v = 0; v < f.action[m].size(); ++v) f.action[m][v] = int(v);
    else
      for (size_t v = 0; v < f.action[m].size(); ++v)
        f.action[m][v] = int(rng() % f.value[dst].elems.size());
  }
  return f;
}

/// Graph with value sets of the given sizes per elementary and constant
/// non-identity actions (enough for patterns whose elementaries below the
/// top are singletons).
inline PGraph make_graph(std::shared_ptr<const Pattern> p,
                         const std::map<std::string, int>& sizes) {
  PGraph g;
  g.pattern = p;
  g.els = p->elementaries();
  for (const auto& e : g.els) {
    int n = sizes.count(e) ? sizes.at(e) : 1;
    FinSet s;
    for (int i = 0; i < n; ++i) s.elems.push_back("m" + std::to_string(i));
    g.value[e] = s;
  }
  for (const auto& a : g.els)
    for (const auto& b : g.els)
      for (const auto& w : p->hom(a, b))
        if (p->is_inert(w)) {
          std::vector<int> fun(g.value[a].elems.size(), 0);
          if (w == p->identity(a))
            for (size_t i = 0; i < fun.size(); ++i) fun[i] = int(i);
          g.action[w.uid()] = fun;
        }
  return g;
}

/// The nerve of a monoid table on [0..n) as a truncated Segal functor on
/// the delta pattern, up to the given simplex bound.
inline TruncatedFunctor monoid_nerve(std::shared_ptr<const Pattern> p, int n,
                                     const std::vector<std::vector<int>>& table, int bound) {
  TruncatedFunctor x;
  x.pattern = p;
  for (int k = 0; k <= bound; ++k) x.objs.push_back("[" + std::to_string(k) + "]");
  std::sort(x.objs.begin(), x.objs.end());
  // X[k] = n^k tuples
  auto tuple_name = [&](const std::vector<int>& t) {
    std::string s = "<";
    for (size_t i = 0; i < t.size(); ++i) s += (i ? "." : "") + std::to_string(t[i]);
    return s + ">";
  };
  std::map<std::string, std::vector<std::vector<int>>> tuples;
  for (int k = 0; k <= bound; ++k) {
    std::vector<std::vector<int>> ts;
    std::vector<int> cur(k, 0);
    while (true) {
      ts.push_back(cur);
      int i = 0;
      for (; i < k; ++i) {
        if (cur[i] + 1 < n) {
          cur[i]++;
          for (int j = 0; j < i; ++j) cur[j] = 0;
          break;
        }
      }
      if (i == k) break;
    }
    std::string obj = "[" + std::to_string(k) + "]";
    tuples[obj] = ts;
    FinSet s;
    for (const auto& t : ts) s.elems.push_back(tuple_name(t));
    std::sort(s.elems.begin(), s.elems.end());
    x.value[obj] = s;
  }
  auto mult = [&](int a, int b) { return table[a][b]; };
  for (const auto& a : x.objs)
    for (const auto& b : x.objs)
      for (const auto& f : p->hom(a, b)) {
        // pattern f: [ka] -> [kb] with delta-side map u: [kb] -> [ka]
        int ka = std::stoi(a.substr(1, a.size() - 2));
        int kb = std::stoi(b.substr(1, b.size() - 2));
        SimplexMap u = SimplexMap::parse(f.key, ka);
        std::vector<int> fun(x.value.at(a).elems.size());
        for (const auto& t : tuples[a]) {
          std::vector<int> img(kb);
          for (int j = 1; j <= kb; ++j) {
            // product of t over the delta-side interval (u(j-1), u(j)]
            int acc = -1;
            for (int pos = u.images[j - 1] + 1; pos <= u.images[j]; ++pos)
              acc = acc < 0 ? t[pos - 1] : mult(acc, t[pos - 1]);
            if (acc < 0) {
              // empty product: the unit (index of the unit element)
              int unit = -1;
              for (int e = 0; e < n; ++e) {
                bool isunit = true;
                for (int v = 0; v < n; ++v)
                  if (mult(e, v) != v || mult(v, e) != v) isunit = false;
                if (isunit) unit = e;
              }
              acc = unit;
            }
            img[j - 1] = acc;
          }
          int from = x.value.at(a).index_of(tuple_name(t));
          int to = x.value.at(b).index_of(tuple_name(img));
          fun[from] = to;
        }
        x.action[f.uid()] = fun;
      }
  return x;
}

}  // namespace patspan::testing

#endif
