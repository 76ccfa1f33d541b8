#ifndef PATSPAN_PATTERN_HPP
#define PATSPAN_PATTERN_HPP

#include <memory>
#include <string>
#include <vector>

#include "patspan/fincat.hpp"

namespace patspan {

/// Pattern-side morphism handle. `key` is a canonical text form whose
/// meaning is pattern-specific; (src, key, dst) identifies the morphism.
struct PatMor {
  std::string src;
  std::string key;
  std::string dst;
  bool operator==(const PatMor& o) const {
    return src == o.src && key == o.key && dst == o.dst;
  }
  bool operator<(const PatMor& o) const {
    if (src != o.src) return src < o.src;
    if (dst != o.dst) return dst < o.dst;
    return key < o.key;
  }
  std::string uid() const { return src + "|" + key + "|" + dst; }
};

/// A category with an inert-active factorization system and a chosen class
/// of elementary objects, enumerable within a size bound. All morphisms at
/// this interface are pattern-side (opposite categories are handled inside
/// the instances).
class Pattern {
 public:
  virtual ~Pattern() = default;
  virtual std::string name() const = 0;
  /// all objects within the configured bound, canonical order
  virtual std::vector<std::string> objects() const = 0;
  virtual bool is_object(const std::string& o) const;
  virtual bool is_elementary(const std::string& o) const = 0;
  virtual std::vector<PatMor> hom(const std::string& x, const std::string& y) const = 0;
  virtual PatMor identity(const std::string& x) const = 0;
  virtual PatMor compose(const PatMor& g, const PatMor& f) const = 0;  // g∘f
  virtual bool is_inert(const PatMor& f) const = 0;
  virtual bool is_active(const PatMor& f) const = 0;
  /// (i, a) with f = a∘i, i inert, a active
  virtual std::pair<PatMor, PatMor> factorize(const PatMor& f) const = 0;

  std::vector<std::string> elementaries() const;
};

/// One object, one morphism; the unit for pattern products.
class TerminalPattern : public Pattern {
 public:
  std::string name() const override { return "terminal"; }
  std::vector<std::string> objects() const override { return {"*"}; }
  bool is_elementary(const std::string&) const override { return true; }
  std::vector<PatMor> hom(const std::string& x, const std::string& y) const override;
  PatMor identity(const std::string& x) const override;
  PatMor compose(const PatMor& g, const PatMor& f) const override;
  bool is_inert(const PatMor&) const override { return true; }
  bool is_active(const PatMor&) const override { return true; }
  std::pair<PatMor, PatMor> factorize(const PatMor& f) const override;
};

/// Product pattern: objects and morphisms are pairs, all structure
/// componentwise.
class ProductPattern : public Pattern {
 public:
  ProductPattern(std::shared_ptr<const Pattern> p, std::shared_ptr<const Pattern> q)
      : p_(std::move(p)), q_(std::move(q)) {}
  std::string name() const override { return p_->name() + "*" + q_->name(); }
  std::vector<std::string> objects() const override;
  bool is_elementary(const std::string& o) const override;
  std::vector<PatMor> hom(const std::string& x, const std::string& y) const override;
  PatMor identity(const std::string& x) const override;
  PatMor compose(const PatMor& g, const PatMor& f) const override;
  bool is_inert(const PatMor& f) const override;
  bool is_active(const PatMor& f) const override;
  std::pair<PatMor, PatMor> factorize(const PatMor& f) const override;

  static std::pair<std::string, std::string> split_obj(const std::string& o);
  static std::pair<std::string, std::string> split_key(const std::string& k);

 private:
  std::shared_ptr<const Pattern> p_, q_;
};

/// Elementary slice of X: objects are the inert maps from X to elementary
/// objects, morphisms the inert maps between elementaries under X.
/// Slice objects are ordered by (elementary codomain, morphism key).
struct Slice {
  std::string base;
  FinCat cat;
  std::vector<PatMor> labels;       // per slice object: the inert map X >-> E
  std::vector<PatMor> mor_witness;  // per slice morphism: the pattern map E1 >-> E2
  int index_of(const PatMor& e) const;
};

Slice elementary_slice(const Pattern& p, const std::string& x);

/// The action of f: X -> Y on elementary-slice objects of Y: e |-> the
/// factorization (inrt(e∘f), act(e∘f)). The assignment extends to a
/// functor from the elementary slice of Y into the inert slice of X;
/// mor_map records the induced inert map between middles along each slice
/// morphism.
struct SliceAction {
  PatMor f;
  std::vector<PatMor> inert_part;  // per slice(Y) object: inert X >-> M_e
  std::vector<PatMor> act;         // per slice(Y) object: active M_e ~> E
  std::vector<PatMor> mor_map;     // per slice(Y) morphism: inrt(h ∘ act(e1))
};

SliceAction slice_action(const Pattern& p, const PatMor& f, const Slice& sy);

/// All (i, a) factorization pairs of f found by exhaustive search through
/// every object within bound. Test oracle for factorization uniqueness.
std::vector<std::pair<PatMor, PatMor>> factorization_pairs(const Pattern& p, const PatMor& f);

/// Groups factorization pairs modulo middle-object isomorphisms (an iso u
/// with i2 = u∘i1 and a1 = a2∘u). In gaunt patterns each orbit is a single
/// pair; in Gamma the permutations of the support collapse.
int factorization_orbit_count(const Pattern& p, const PatMor& f,
                              const std::vector<std::pair<PatMor, PatMor>>& pairs);

std::shared_ptr<const Pattern> pattern_by_id(const std::string& id);

}  // namespace patspan

#endif
