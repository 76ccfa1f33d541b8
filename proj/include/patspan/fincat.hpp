#ifndef PATSPAN_FINCAT_HPP
#define PATSPAN_FINCAT_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace patspan {

// Thrown on malformed user input (CLI exit code 2).
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a configurable size/path cap is exceeded (CLI exit code 3).
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Diagnostics = std::vector<std::string>;

/// Explicit finite category: object list, flat morphism table, total
/// composition table on composable pairs, identity per object.
/// Objects and morphisms are kept in lexicographic order of their string
/// identifiers so every enumeration downstream is reproducible.
struct FinCat {
  struct Mor {
    std::string id;
    int src = -1;
    int dst = -1;
  };

  std::vector<std::string> objects;
  std::vector<Mor> mors;
  std::vector<int> identity;          // object index -> morphism index
  std::map<std::pair<int, int>, int> comp;  // (g,f) -> g∘f

  int obj_index(const std::string& o) const;
  int mor_index(const std::string& m) const;
  // returns -1 when the pair is not composable
  int compose(int g, int f) const;
  bool is_identity(int m) const;

  /// Sorts objects/morphisms lexicographically and remaps all tables.
  void canonicalize();
};

/// Builds a FinCat from raw pieces and canonicalizes it. Composition is
/// given as triples (g, f, gf) by identifier.
FinCat make_fincat(std::vector<std::string> objects,
                   std::vector<std::tuple<std::string, std::string, std::string>> mors,
                   std::vector<std::tuple<std::string, std::string, std::string>> compose,
                   std::vector<std::pair<std::string, std::string>> identities);

/// Empty diagnostics iff all category axioms hold; each violation names
/// the offending pair/triple.
Diagnostics validate_category(const FinCat& c);

bool is_gaunt(const FinCat& c);

/// Poset presented by a reflexive-transitive "leq" relation; one morphism
/// x->y per related pair.
FinCat fincat_from_poset(const std::vector<std::string>& elems,
                         const std::vector<std::pair<std::string, std::string>>& leq);

struct Functor {
  FinCat source;
  FinCat target;
  std::vector<int> omap;  // source object index -> target object index
  std::vector<int> mmap;  // source morphism index -> target morphism index
};

Diagnostics validate_functor(const Functor& f);

/// True iff F is bijective on objects and on every hom set.
/// Both categories must be gaunt; rejects non-gaunt input.
bool is_isomorphism(const Functor& f);

/// Brute-force isomorphism search between two gaunt finite categories.
std::optional<Functor> find_isomorphism(const FinCat& a, const FinCat& b);

/// Finite-set-valued diagram on a finite base category.
/// Covariant: maps[m] sends value(src) to value(dst).
/// Contravariant: maps[m] sends value(dst) to value(src) (presheaf).
struct SetDiagram {
  FinCat base;
  bool covariant = true;
  std::vector<std::vector<std::string>> values;  // per object, sorted
  std::vector<std::vector<int>> maps;            // per morphism
};

Diagnostics validate_diagram(const SetDiagram& d);

/// Limit of a covariant diagram: all compatible families, lex order.
/// families[k][o] is the value index at object o.
struct LimitResult {
  std::vector<std::vector<int>> families;
};
LimitResult limit_of_set_diagram(const SetDiagram& d);

/// Category of elements. For covariant D the morphisms (o,x) -> (o',x')
/// are base arrows g: o -> o' with D(g)(x) = x'.  For contravariant D the
/// presheaf convention is used: a morphism (n,y) -> (m,z) is a base arrow
/// g: n -> m with D(g)(z) = y.
struct ElementsResult {
  FinCat cat;
  std::vector<std::pair<int, int>> labels;  // per object: (base obj, value idx)
};
ElementsResult category_of_elements(const SetDiagram& d);

struct ColimitOptions {
  int path_cap = 16;
  int morphism_cap = 200000;
};

/// Strict colimit of a diagram of gaunt finite categories.
/// diagram[i] is the category at index object i; transitions[m] is the
/// functor along index morphism m (identities may be omitted).
/// All transition functors must be injective on objects.
struct GauntColimitInput {
  FinCat index;
  std::vector<FinCat> diagram;
  std::map<int, Functor> transitions;
};
struct ColimitResult {
  FinCat colimit;
  std::vector<Functor> cocone;  // per index object: diagram[i] -> colimit
};
ColimitResult colimit_of_gaunt_categories(const GauntColimitInput& in,
                                          const ColimitOptions& opts = {});

/// Independent binary-pushout oracle: glues B <- A -> C directly, closing
/// under formal path composition. Used to cross-check the general colimit.
struct PushoutResult {
  FinCat cat;
  Functor from_b;
  Functor from_c;
};
PushoutResult pushout_of_span_oracle(const FinCat& a, const FinCat& b, const FinCat& c,
                                     const Functor& f_ab, const Functor& f_ac,
                                     const ColimitOptions& opts = {});

// JSON (nlohmann) serialization and a DOT emitter (one node per object,
// one edge per non-identity generator).
std::string fincat_to_json(const FinCat& c);
FinCat fincat_from_json(const std::string& text);
std::string functor_to_json(const Functor& f);
std::string diagram_to_json(const SetDiagram& d);
SetDiagram diagram_from_json(const std::string& text);
std::string fincat_to_dot(const FinCat& c);

}  // namespace patspan

#endif
