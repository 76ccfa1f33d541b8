#ifndef PATSPAN_SIMPLEX_HPP
#define PATSPAN_SIMPLEX_HPP

#include "patspan/pattern.hpp"

namespace patspan {

/// A monotone map [m] -> [n], stored as the list of n... of m+1 images.
/// This is the Delta-side presentation; the pattern category is the
/// opposite of Delta, so the pattern morphism [n] -> [m] is stored as the
/// Delta map [m] -> [n].
struct SimplexMap {
  int target_arity = 0;          // n
  std::vector<int> images;       // size m+1, values in 0..n, monotone
  int source_arity() const { return int(images.size()) - 1; }
  bool monotone() const;
  bool is_interval_inclusion() const;   // inert on the pattern side
  bool is_endpoint_preserving() const;  // active on the pattern side
  std::string text() const;             // "[a0,a1,...]"
  static SimplexMap parse(const std::string& s, int target_arity);
};

SimplexMap compose_simplex(const SimplexMap& second, const SimplexMap& first);
std::vector<SimplexMap> enumerate_monotone(int m, int n);

/// The pattern op(Delta) with inert = subinterval inclusions and active =
/// endpoint-preserving maps (Delta-side). `natural` selects elementaries
/// {[0],[1]}; the flat variant has only [1].
class DeltaPattern : public Pattern {
 public:
  explicit DeltaPattern(bool natural, int bound = 6) : natural_(natural), bound_(bound) {}
  std::string name() const override { return natural_ ? "delta-natural" : "delta-flat"; }
  std::vector<std::string> objects() const override;
  bool is_elementary(const std::string& o) const override;
  std::vector<PatMor> hom(const std::string& x, const std::string& y) const override;
  PatMor identity(const std::string& x) const override;
  PatMor compose(const PatMor& g, const PatMor& f) const override;
  bool is_inert(const PatMor& f) const override;
  bool is_active(const PatMor& f) const override;
  std::pair<PatMor, PatMor> factorize(const PatMor& f) const override;

  static int arity(const std::string& o);  // "[n]" -> n
  static std::string obj(int n);
  /// Delta-side map underlying the pattern morphism f
  static SimplexMap rep(const PatMor& f);
  static PatMor mor(const SimplexMap& u);  // pattern morphism [n]->[m] for u:[m]->[n]

  int bound() const { return bound_; }

 private:
  bool natural_;
  int bound_;
};

}  // namespace patspan

#endif
