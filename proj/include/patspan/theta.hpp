#ifndef PATSPAN_THETA_HPP
#define PATSPAN_THETA_HPP

#include "patspan/pattern.hpp"
#include "patspan/simplex.hpp"

namespace patspan {

/// Planar level tree; planar order of children is significant.
struct LevelTree {
  std::vector<LevelTree> children;
  int height() const;
  int node_count() const;
  int leaf_count() const;
  bool linear() const;  // globes are exactly the linear trees
  std::string text() const;
  bool operator==(const LevelTree& o) const { return text() == o.text(); }
  bool operator<(const LevelTree& o) const { return text() < o.text(); }
};

/// Bracket notation: a tree is the concatenation of its children, each
/// wrapped in parentheses; the empty string is the 0-globe.
LevelTree parse_tree(const std::string& s);
std::string print_tree(const LevelTree& t);
LevelTree globe(int n);  // linear tree of height n

/// Graded finite sets with source/target maps satisfying the globular
/// identities.
struct GlobularSet {
  std::vector<std::vector<std::string>> cells;  // per dimension
  std::vector<std::vector<int>> src;            // src[k][i] for k >= 1
  std::vector<std::vector<int>> tgt;
  int dim() const { return int(cells.size()) - 1; }
  int total_cells() const;
};

Diagnostics validate_globular(const GlobularSet& g);

/// Sector globular set of a tree: one k-cell per gap around a node at
/// level k; boundaries are the flanking sectors at the parent node.
GlobularSet sectors(const LevelTree& t);

std::string globular_to_json(const GlobularSet& g);

/// Number of globular-set maps a -> b (independent brute-force enumerator,
/// the anchor for the wreath encoding of inert morphisms).
long long count_globular_maps(const GlobularSet& a, const GlobularSet& b);

/// Morphism in the iterated wreath encoding: a Delta-side base map between
/// the root arities plus one component per covered child slot.
struct WreathMorphism {
  SimplexMap base;
  std::vector<std::vector<WreathMorphism>> components;  // per i in 1..m
  std::string text() const;
  bool operator==(const WreathMorphism& o) const;
};

enum class MorClass { all, inert, active };

/// Theta-direct enumeration of Hom(s, t); a wreath morphism is inert iff
/// its base and all components are inert in Delta, active likewise.
std::vector<WreathMorphism> theta_hom(const LevelTree& s, const LevelTree& t,
                                      MorClass cls = MorClass::all);
bool wreath_is_inert(const WreathMorphism& w);
bool wreath_is_active(const WreathMorphism& w);
Diagnostics validate_wreath(const WreathMorphism& w, const LevelTree& s, const LevelTree& t);
WreathMorphism compose_wreath(const WreathMorphism& second, const WreathMorphism& first);
WreathMorphism wreath_identity(const LevelTree& t);
WreathMorphism parse_wreath(const std::string& text, const LevelTree& s, const LevelTree& t);

/// Theta-direct factorization f = i ∘ a with a active and i inert; unique.
std::pair<WreathMorphism, WreathMorphism> theta_factorize(const WreathMorphism& f,
                                                          const LevelTree& s,
                                                          const LevelTree& t);
/// middle object of the factorization
LevelTree wreath_image(const WreathMorphism& f, const LevelTree& s, const LevelTree& t);

/// Category of elements of sectors(t) over the truncated globe category,
/// oriented pattern-side: one morphism from each cell to each of its
/// iterated boundaries.
FinCat theta_elementary_slice(const LevelTree& t);

/// T = D_{i1} glued along D_{i'1} with D_{i2}, ... ; entries alternate
/// leaf depths and meet levels.
std::vector<int> globular_sum_decomposition(const LevelTree& t);
LevelTree tree_from_decomposition(const std::vector<int>& d);

std::vector<LevelTree> enumerate_trees(int max_nodes, int max_height);

/// The cell pattern op(Theta_l); elementaries are the globes.
class ThetaPattern : public Pattern {
 public:
  explicit ThetaPattern(int level, int node_bound = 6)
      : level_(level), node_bound_(node_bound) {}
  ThetaPattern(int level, std::vector<std::string> curated)
      : level_(level), node_bound_(-1), curated_(std::move(curated)) {}
  std::string name() const override { return "theta-" + std::to_string(level_); }
  std::vector<std::string> objects() const override;
  bool is_elementary(const std::string& o) const override;
  std::vector<PatMor> hom(const std::string& x, const std::string& y) const override;
  PatMor identity(const std::string& x) const override;
  PatMor compose(const PatMor& g, const PatMor& f) const override;
  bool is_inert(const PatMor& f) const override;
  bool is_active(const PatMor& f) const override;
  std::pair<PatMor, PatMor> factorize(const PatMor& f) const override;

  int level() const { return level_; }

 private:
  int level_;
  int node_bound_;
  std::vector<std::string> curated_;
};

namespace theta_cache {
const LevelTree& tree(const std::string& text);
const WreathMorphism& wreath(const PatMor& f);
}  // namespace theta_cache

}  // namespace patspan

#endif
