#include "patspan/simplex.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace patspan {

bool SimplexMap::monotone() const {
  for (size_t i = 0; i + 1 < images.size(); ++i)
    if (images[i] > images[i + 1]) return false;
  for (int a : images)
    if (a < 0 || a > target_arity) return false;
  return !images.empty();
}

bool SimplexMap::is_interval_inclusion() const {
  for (size_t i = 0; i + 1 < images.size(); ++i)
    if (images[i + 1] != images[i] + 1) return false;
  return monotone();
}

bool SimplexMap::is_endpoint_preserving() const {
  return monotone() && images.front() == 0 && images.back() == target_arity;
}

std::string SimplexMap::text() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < images.size(); ++i) {
    if (i) os << ",";
    os << images[i];
  }
  os << "]";
  return os.str();
}

SimplexMap SimplexMap::parse(const std::string& s, int target_arity) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw input_error("bad simplex map notation: " + s);
  SimplexMap u;
  u.target_arity = target_arity;
  std::string body = s.substr(1, s.size() - 2);
  std::istringstream is(body);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      u.images.push_back(std::stoi(tok));
    } catch (...) {
      throw input_error("bad simplex map entry: " + tok);
    }
  }
  if (!u.monotone()) throw input_error("simplex map not monotone or out of range: " + s);
  return u;
}

SimplexMap compose_simplex(const SimplexMap& second, const SimplexMap& first) {
  if (first.target_arity != second.source_arity())
    throw input_error("simplex maps not composable");
  SimplexMap r;
  r.target_arity = second.target_arity;
  for (int a : first.images) r.images.push_back(second.images[a]);
  return r;
}

std::vector<SimplexMap> enumerate_monotone(int m, int n) {
  std::vector<SimplexMap> out;
  SimplexMap u;
  u.target_arity = n;
  u.images.assign(m + 1, 0);
  std::function<void(int, int)> rec = [&](int i, int lo) {
    if (i == m + 1) {
      out.push_back(u);
      return;
    }
    for (int v = lo; v <= n; ++v) {
      u.images[i] = v;
      rec(i + 1, v);
    }
  };
  rec(0, 0);
  return out;
}

int DeltaPattern::arity(const std::string& o) {
  if (o.size() < 3 || o.front() != '[' || o.back() != ']')
    throw input_error("bad simplex object: " + o);
  try {
    return std::stoi(o.substr(1, o.size() - 2));
  } catch (...) {
    throw input_error("bad simplex object: " + o);
  }
}

std::string DeltaPattern::obj(int n) { return "[" + std::to_string(n) + "]"; }

SimplexMap DeltaPattern::rep(const PatMor& f) {
  // pattern morphism [n] -> [m] is the Delta map [m] -> [n]
  return SimplexMap::parse(f.key, arity(f.src));
}

PatMor DeltaPattern::mor(const SimplexMap& u) {
  return PatMor{obj(u.target_arity), u.text(), obj(u.source_arity())};
}

std::vector<std::string> DeltaPattern::objects() const {
  std::vector<std::string> out;
  for (int n = 0; n <= bound_; ++n) out.push_back(obj(n));
  return out;
}

bool DeltaPattern::is_elementary(const std::string& o) const {
  int n = arity(o);
  return natural_ ? (n == 0 || n == 1) : (n == 1);
}

std::vector<PatMor> DeltaPattern::hom(const std::string& x, const std::string& y) const {
  int n = arity(x), m = arity(y);
  if (n > bound_ || m > bound_) throw resource_error("delta: object beyond bound");
  std::vector<PatMor> out;
  for (const auto& u : enumerate_monotone(m, n)) out.push_back(mor(u));
  return out;
}

PatMor DeltaPattern::identity(const std::string& x) const {
  int n = arity(x);
  SimplexMap u;
  u.target_arity = n;
  for (int i = 0; i <= n; ++i) u.images.push_back(i);
  return mor(u);
}

PatMor DeltaPattern::compose(const PatMor& g, const PatMor& f) const {
  if (f.dst != g.src) throw input_error("delta: morphisms not composable");
  // rep(g∘f) = rep(f) ∘ rep(g)
  return mor(compose_simplex(rep(f), rep(g)));
}

bool DeltaPattern::is_inert(const PatMor& f) const { return rep(f).is_interval_inclusion(); }

bool DeltaPattern::is_active(const PatMor& f) const { return rep(f).is_endpoint_preserving(); }

std::pair<PatMor, PatMor> DeltaPattern::factorize(const PatMor& f) const {
  // Delta side: u = iota ∘ alpha with alpha endpoint-preserving onto the
  // image interval and iota the interval inclusion.
  SimplexMap u = rep(f);
  int lo = u.images.front(), hi = u.images.back();
  SimplexMap alpha;
  alpha.target_arity = hi - lo;
  for (int a : u.images) alpha.images.push_back(a - lo);
  SimplexMap iota;
  iota.target_arity = u.target_arity;
  for (int v = lo; v <= hi; ++v) iota.images.push_back(v);
  // pattern-side: inert part has rep iota, active part has rep alpha
  return {mor(iota), mor(alpha)};
}

}  // namespace patspan
