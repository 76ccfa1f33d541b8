#ifndef PATSPAN_GAMMA_HPP
#define PATSPAN_GAMMA_HPP

#include "patspan/pattern.hpp"

namespace patspan {

/// Pointed map <m> -> <n>: images[i-1] in 0..n is the image of i; the
/// basepoint 0 is fixed implicitly. Inert iff every i != 0 has a singleton
/// preimage; active iff only 0 maps to 0.
struct PointedMap {
  int target_size = 0;       // n
  std::vector<int> images;   // size m
  int source_size() const { return int(images.size()); }
  bool is_inert() const;
  bool is_active() const;
  std::string text() const;  // "<a1,...,am>"
  static PointedMap parse(const std::string& s, int target_size);
};

PointedMap compose_pointed(const PointedMap& second, const PointedMap& first);

/// The pattern op(Gamma) = pointed finite sets. The flat variant has <1>
/// as its only elementary; the natural variant treats every object as
/// elementary, so that the elementary slice at <n> is the opposite
/// powerset poset.
class GammaPattern : public Pattern {
 public:
  explicit GammaPattern(bool natural, int bound = 6) : natural_(natural), bound_(bound) {}
  std::string name() const override { return natural_ ? "gamma-natural" : "gamma-flat"; }
  std::vector<std::string> objects() const override;
  bool is_elementary(const std::string& o) const override;
  std::vector<PatMor> hom(const std::string& x, const std::string& y) const override;
  PatMor identity(const std::string& x) const override;
  PatMor compose(const PatMor& g, const PatMor& f) const override;
  bool is_inert(const PatMor& f) const override;
  bool is_active(const PatMor& f) const override;
  std::pair<PatMor, PatMor> factorize(const PatMor& f) const override;

  static int size_of(const std::string& o);  // "<n>" -> n
  static std::string obj(int n);
  static PointedMap rep(const PatMor& f);
  static PatMor mor(const PointedMap& u);

  int bound() const { return bound_; }

 private:
  bool natural_;
  int bound_;
};

}  // namespace patspan

#endif
