#ifndef PATSPAN_OMEGA_HPP
#define PATSPAN_OMEGA_HPP

#include "patspan/pattern.hpp"

namespace patspan {

/// Planar rooted tree for the dendroidal pattern. Every subtree hangs off
/// its root edge; `has_vertex == false` is the nodeless edge eta.
struct PlanarTree {
  bool has_vertex = false;
  std::vector<PlanarTree> inputs;
  int vertex_count() const;
  int edge_count() const;
  int leaf_count() const;  // eta counts its single edge as a leaf
  std::string text() const;
  bool operator==(const PlanarTree& o) const { return text() == o.text(); }
  bool operator<(const PlanarTree& o) const { return text() < o.text(); }
};

/// Notation: `e` is eta, `*a` the a-corolla, `(v: c1 c2 ...)` a vertex with
/// the given input subtrees.
PlanarTree parse_planar_tree(const std::string& s);
PlanarTree corolla(int a);

/// Morphism of planar trees recorded by its edge assignment (edges are
/// indexed in DFS order, root first).
struct OmegaMor {
  std::vector<int> edge_map;
  std::string text() const;
  bool operator==(const OmegaMor& o) const { return edge_map == o.edge_map; }
};

/// All planar sub-dendrex embeddings of s into t.
std::vector<OmegaMor> inert_inclusions(const PlanarTree& s, const PlanarTree& t);

/// All planar boundary-preserving (active) maps s -> t: the root goes to
/// the root, the leaves onto the leaves in planar order, and each vertex
/// of s covers a region of t.
std::vector<OmegaMor> active_maps(const PlanarTree& s, const PlanarTree& t);

/// The unique active map from the corolla on t's leaves to t; for the
/// vertexless tree it returns the identity on eta (degenerate case).
OmegaMor corolla_active(const PlanarTree& t);

/// Multicospan-shaped elementary slice in the dendroidal orientation: one
/// object per edge and per vertex, one arrow from each incident edge
/// object into its vertex object.
FinCat omega_elementary_slice(const PlanarTree& t);

std::vector<PlanarTree> enumerate_planar_trees(int max_vertices, int max_arity);

/// Pattern op(Omega_planar): inerts are sub-dendrex inclusions (reversed),
/// actives the boundary-preserving maps; elementaries are eta and the
/// corollas.
class OmegaPattern : public Pattern {
 public:
  explicit OmegaPattern(int vertex_bound = 5, int arity_bound = 3)
      : vertex_bound_(vertex_bound), arity_bound_(arity_bound) {}
  explicit OmegaPattern(std::vector<std::string> curated)
      : vertex_bound_(-1), arity_bound_(-1), curated_(std::move(curated)) {}
  std::string name() const override { return "omega-planar"; }
  std::vector<std::string> objects() const override;
  bool is_elementary(const std::string& o) const override;
  std::vector<PatMor> hom(const std::string& x, const std::string& y) const override;
  PatMor identity(const std::string& x) const override;
  PatMor compose(const PatMor& g, const PatMor& f) const override;
  bool is_inert(const PatMor& f) const override;
  bool is_active(const PatMor& f) const override;
  std::pair<PatMor, PatMor> factorize(const PatMor& f) const override;

 private:
  int vertex_bound_;
  int arity_bound_;
  std::vector<std::string> curated_;
};

}  // namespace patspan

#endif
