#ifndef PATSPAN_MONAD_HPP
#define PATSPAN_MONAD_HPP

#include "patspan/segal.hpp"

namespace patspan {

/// Finite-set values on the elementary objects plus functions along the
/// inert morphisms between them: the shape data without algebra.
struct PGraph {
  std::shared_ptr<const Pattern> pattern;
  std::vector<std::string> els;                    // sorted elementary objects
  std::map<std::string, FinSet> value;             // per elementary
  std::map<std::string, std::vector<int>> action;  // per inert el->el morphism uid
};

Diagnostics validate_pgraph(const PGraph& g);
PGraph graph_of(const TruncatedFunctor& x);

/// Monad section of Span_P over a finite truncation. Components over a
/// morphism f: P -> Q at a slice object e: Q >-> E are functions from the
/// graph fiber over the middle object of e∘f into graph(E); all of them
/// are determined by the core components over the active morphisms with
/// elementary target, which is what is stored.
struct MonadSection {
  PGraph graph;
  std::vector<std::string> objs;             // bound objects, sorted
  std::map<std::string, std::vector<int>> core;  // active-to-elementary uid -> function
};

struct MonadReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Exhaustive law checker: naturality of the components in the elementary
/// slice, inert unitality, and functoriality over the composable pairs
/// within bound.
MonadReport validate_monad(const MonadSection& m);

/// Restriction along the Segal bijections: graph = X on elementaries, core
/// component at a: M ~> E is X(a) composed with the inverse of the
/// canonical comparison X(M) -> lim. Requires check_segal to pass.
MonadSection segal_to_monad(const TruncatedFunctor& x);

/// Nerve construction: X(P) is the graph fiber over P, actions are
/// assembled from the components through the limit cones.
TruncatedFunctor monad_to_segal(const MonadSection& m);

struct EnumerateResult {
  std::vector<MonadSection> monads;  // canonical representatives
  long long raw_count = 0;           // before dedup by value relabeling
  long long candidates = 0;
  std::vector<std::string> seeds;    // the freely enumerated component slots
};

struct EnumerateOptions {
  long long candidate_cap = 2000000;
  bool dedup = true;
};

EnumerateResult enumerate_monads(std::shared_ptr<const Pattern> p, const PGraph& graph,
                                 const std::vector<std::string>& objs,
                                 const EnumerateOptions& opts = {});

/// Componentwise comparison along the canonical limit identifications.
bool segal_equivalent(const TruncatedFunctor& x, const TruncatedFunctor& y,
                      std::string* why = nullptr);
bool monad_equivalent(const MonadSection& a, const MonadSection& b, std::string* why = nullptr);

/// Default truncations adequate for the monad laws: associativity objects
/// for delta/gamma, the interchange pasting for theta-2, two-level trees
/// for omega.
std::vector<std::string> default_monad_truncation(const std::string& pattern_id);
std::shared_ptr<const Pattern> monad_pattern_instance(const std::string& pattern_id);

std::string pgraph_to_json(const PGraph& g);
PGraph pgraph_from_json(const std::string& text, std::shared_ptr<const Pattern> pattern);
std::string monad_to_json(const MonadSection& m);
MonadSection monad_from_json(const std::string& text, std::shared_ptr<const Pattern> pattern);

}  // namespace patspan

#endif
