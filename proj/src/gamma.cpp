#include "patspan/gamma.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace patspan {

bool PointedMap::is_inert() const {
  std::vector<int> count(target_size + 1, 0);
  for (int a : images) {
    if (a < 0 || a > target_size) return false;
    count[a]++;
  }
  for (int i = 1; i <= target_size; ++i)
    if (count[i] != 1) return false;
  return true;
}

bool PointedMap::is_active() const {
  for (int a : images)
    if (a == 0) return false;
  for (int a : images)
    if (a < 0 || a > target_size) return false;
  return true;
}

std::string PointedMap::text() const {
  std::ostringstream os;
  os << "<";
  for (size_t i = 0; i < images.size(); ++i) {
    if (i) os << ",";
    os << images[i];
  }
  os << ">";
  return os.str();
}

PointedMap PointedMap::parse(const std::string& s, int target_size) {
  if (s.size() < 2 || s.front() != '<' || s.back() != '>')
    throw input_error("bad pointed map notation: " + s);
  PointedMap u;
  u.target_size = target_size;
  std::string body = s.substr(1, s.size() - 2);
  if (!body.empty()) {
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        u.images.push_back(std::stoi(tok));
      } catch (...) {
        throw input_error("bad pointed map entry: " + tok);
      }
    }
  }
  for (int a : u.images)
    if (a < 0 || a > target_size) throw input_error("pointed map image out of range: " + s);
  return u;
}

PointedMap compose_pointed(const PointedMap& second, const PointedMap& first) {
  if (first.target_size != second.source_size())
    throw input_error("pointed maps not composable");
  PointedMap r;
  r.target_size = second.target_size;
  for (int a : first.images) r.images.push_back(a == 0 ? 0 : second.images[a - 1]);
  return r;
}

int GammaPattern::size_of(const std::string& o) {
  if (o.size() < 3 || o.front() != '<' || o.back() != '>')
    throw input_error("bad gamma object: " + o);
  try {
    return std::stoi(o.substr(1, o.size() - 2));
  } catch (...) {
    throw input_error("bad gamma object: " + o);
  }
}

std::string GammaPattern::obj(int n) { return "<" + std::to_string(n) + ">"; }

PointedMap GammaPattern::rep(const PatMor& f) {
  return PointedMap::parse(f.key, size_of(f.dst));
}

PatMor GammaPattern::mor(const PointedMap& u) {
  return PatMor{obj(u.source_size()), u.text(), obj(u.target_size)};
}

std::vector<std::string> GammaPattern::objects() const {
  std::vector<std::string> out;
  for (int n = 0; n <= bound_; ++n) out.push_back(obj(n));
  return out;
}

bool GammaPattern::is_elementary(const std::string& o) const {
  int n = size_of(o);
  return natural_ ? true : (n == 1);
}

std::vector<PatMor> GammaPattern::hom(const std::string& x, const std::string& y) const {
  int m = size_of(x), n = size_of(y);
  if (m > bound_ || n > bound_) throw resource_error("gamma: object beyond bound");
  std::vector<PatMor> out;
  PointedMap u;
  u.target_size = n;
  u.images.assign(m, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      out.push_back(mor(u));
      return;
    }
    for (int v = 0; v <= n; ++v) {
      u.images[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

PatMor GammaPattern::identity(const std::string& x) const {
  int n = size_of(x);
  PointedMap u;
  u.target_size = n;
  for (int i = 1; i <= n; ++i) u.images.push_back(i);
  return mor(u);
}

PatMor GammaPattern::compose(const PatMor& g, const PatMor& f) const {
  if (f.dst != g.src) throw input_error("gamma: morphisms not composable");
  return mor(compose_pointed(rep(g), rep(f)));
}

bool GammaPattern::is_inert(const PatMor& f) const { return rep(f).is_inert(); }

bool GammaPattern::is_active(const PatMor& f) const { return rep(f).is_active(); }

std::pair<PatMor, PatMor> GammaPattern::factorize(const PatMor& f) const {
  // support restriction: inert part reindexes the support order-preservingly,
  // active part carries the values.
  PointedMap u = rep(f);
  std::vector<int> support;
  for (size_t i = 0; i < u.images.size(); ++i)
    if (u.images[i] != 0) support.push_back(int(i));
  PointedMap inert;
  inert.target_size = int(support.size());
  inert.images.assign(u.images.size(), 0);
  for (size_t k = 0; k < support.size(); ++k) inert.images[support[k]] = int(k) + 1;
  PointedMap active;
  active.target_size = u.target_size;
  for (int i : support) active.images.push_back(u.images[i]);
  return {mor(inert), mor(active)};
}

}  // namespace patspan
