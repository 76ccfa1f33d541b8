#include "patspan/saturation.hpp"

#include <algorithm>
#include <map>

namespace patspan {

namespace {

FinCat opposite(const FinCat& c) {
  FinCat o = c;
  for (auto& m : o.mors) std::swap(m.src, m.dst);
  std::map<std::pair<int, int>, int> comp;
  for (const auto& [k, v] : c.comp) comp[{k.second, k.first}] = v;
  o.comp = comp;
  return o;
}

}  // namespace

SaturationReport check_global_saturation(const Pattern& p, const std::string& p0,
                                         const ColimitOptions& opts) {
  SaturationReport rep;
  rep.object = p0;
  Slice s = elementary_slice(p, p0);
  rep.slice_objects = int(s.cat.objects.size());
  if (!is_gaunt(s.cat)) {
    rep.failure = "elementary slice is not gaunt";
    return rep;
  }
  GauntColimitInput in;
  in.index = opposite(s.cat);
  std::vector<Slice> slices;
  for (size_t o = 0; o < s.labels.size(); ++o) {
    Slice so = elementary_slice(p, s.labels[o].dst);
    if (!is_gaunt(so.cat)) {
      rep.failure = "slice of " + s.labels[o].dst + " is not gaunt";
      return rep;
    }
    slices.push_back(std::move(so));
  }
  for (const auto& sl : slices) in.diagram.push_back(sl.cat);
  // transition along the opposite of a slice morphism m: o1 -> o2 with
  // witness g: E1 -> E2 is precomposition slice(E2) -> slice(E1)
  for (size_t m = 0; m < s.cat.mors.size(); ++m) {
    if (s.cat.is_identity(int(m))) continue;
    int o1 = s.cat.mors[m].src, o2 = s.cat.mors[m].dst;
    const PatMor& g = s.mor_witness[m];
    Functor f;
    f.source = slices[o2].cat;
    f.target = slices[o1].cat;
    for (size_t e = 0; e < slices[o2].labels.size(); ++e) {
      PatMor comp = p.compose(slices[o2].labels[e], g);
      int idx = slices[o1].index_of(comp);
      if (idx < 0) {
        rep.failure = "transition image missing in slice of " + s.labels[o1].dst;
        return rep;
      }
      f.omap.push_back(idx);
    }
    for (size_t mm = 0; mm < slices[o2].cat.mors.size(); ++mm) {
      const auto& sm = slices[o2].cat.mors[mm];
      const PatMor& h = slices[o2].mor_witness[mm];
      int found = -1;
      for (size_t k = 0; k < slices[o1].cat.mors.size(); ++k)
        if (slices[o1].cat.mors[k].src == f.omap[sm.src] &&
            slices[o1].cat.mors[k].dst == f.omap[sm.dst] && slices[o1].mor_witness[k] == h)
          found = int(k);
      if (found < 0) {
        rep.failure = "transition morphism missing in slice of " + s.labels[o1].dst;
        return rep;
      }
      f.mmap.push_back(found);
    }
    in.transitions[int(m)] = std::move(f);
  }
  ColimitResult col;
  try {
    col = colimit_of_gaunt_categories(in, opts);
  } catch (const std::exception& e) {
    rep.failure = e.what();
    return rep;
  }
  rep.colimit_objects = int(col.colimit.objects.size());
  // canonical comparison functor colim -> slice(p0): on the image of the
  // cocone it is postcomposition with the slice labels
  Functor cmp;
  cmp.source = col.colimit;
  cmp.target = s.cat;
  cmp.omap.assign(col.colimit.objects.size(), -1);
  cmp.mmap.assign(col.colimit.mors.size(), -1);
  for (size_t i = 0; i < slices.size(); ++i) {
    for (size_t e = 0; e < slices[i].labels.size(); ++e) {
      PatMor comp = p.compose(slices[i].labels[e], s.labels[i]);
      int target = s.index_of(comp);
      if (target < 0) {
        rep.failure = "comparison object missing in the slice";
        return rep;
      }
      int c = col.cocone[i].omap[e];
      if (cmp.omap[c] >= 0 && cmp.omap[c] != target) {
        rep.failure = "comparison functor ill-defined on objects";
        return rep;
      }
      cmp.omap[c] = target;
    }
    for (size_t mm = 0; mm < slices[i].cat.mors.size(); ++mm) {
      const auto& sm = slices[i].cat.mors[mm];
      const PatMor& h = slices[i].mor_witness[mm];
      int src = cmp.omap[col.cocone[i].omap[sm.src]];
      int dst = cmp.omap[col.cocone[i].omap[sm.dst]];
      int found = -1;
      for (size_t k = 0; k < s.cat.mors.size(); ++k)
        if (s.cat.mors[k].src == src && s.cat.mors[k].dst == dst && s.mor_witness[k] == h)
          found = int(k);
      if (found < 0) {
        rep.failure = "comparison morphism missing in the slice";
        return rep;
      }
      int c = col.cocone[i].mmap[mm];
      if (cmp.mmap[c] >= 0 && cmp.mmap[c] != found) {
        rep.failure = "comparison functor ill-defined on morphisms";
        return rep;
      }
      cmp.mmap[c] = found;
    }
  }
  for (size_t o = 0; o < cmp.omap.size(); ++o)
    if (cmp.omap[o] < 0) {
      rep.failure = "colimit object outside the cocone image";
      return rep;
    }
  // extend to formal composites
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t m = 0; m < cmp.mmap.size(); ++m) {
      if (cmp.mmap[m] >= 0) continue;
      for (const auto& [k, v] : col.colimit.comp) {
        if (v != int(m)) continue;
        if (cmp.mmap[k.first] < 0 || cmp.mmap[k.second] < 0) continue;
        int composed = s.cat.compose(cmp.mmap[k.first], cmp.mmap[k.second]);
        if (composed < 0) continue;
        cmp.mmap[m] = composed;
        progress = true;
        break;
      }
    }
  }
  for (size_t m = 0; m < cmp.mmap.size(); ++m)
    if (cmp.mmap[m] < 0) {
      rep.failure = "colimit morphism outside the generated image";
      return rep;
    }
  Diagnostics d = validate_functor(cmp);
  if (!d.empty()) {
    rep.failure = "comparison is not a functor: " + d.front();
    return rep;
  }
  if (!is_isomorphism(cmp)) {
    rep.failure = "comparison functor is not an isomorphism";
    return rep;
  }
  rep.saturated = true;
  return rep;
}

std::vector<SaturationReport> saturation_sweep(const Pattern& p, const ColimitOptions& opts) {
  std::vector<SaturationReport> out;
  for (const auto& o : p.objects()) out.push_back(check_global_saturation(p, o, opts));
  return out;
}

}  // namespace patspan
