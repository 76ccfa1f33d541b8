#ifndef PATSPAN_SEGAL_HPP
#define PATSPAN_SEGAL_HPP

#include <memory>

#include "patspan/pattern.hpp"

namespace patspan {

struct FinSet {
  std::vector<std::string> elems;  // sorted, duplicate-free
  int index_of(const std::string& e) const;
};

/// Finite-set-valued functor on a finite truncation of a pattern.
struct TruncatedFunctor {
  std::shared_ptr<const Pattern> pattern;
  std::vector<std::string> objs;                   // the truncation, sorted
  std::map<std::string, FinSet> value;             // per object
  std::map<std::string, std::vector<int>> action;  // per morphism uid
};

Diagnostics validate_truncated(const TruncatedFunctor& x);

struct SegalReport {
  std::string object;
  long long value_card = 0;
  long long limit_card = 0;
  bool bijective = false;
};

/// Per-object Segal check: the canonical map X(P) -> lim over the
/// elementary slice must be a bijection. Throws input_error when the
/// functor itself is invalid.
std::vector<SegalReport> check_segal(const TruncatedFunctor& x);
bool segal_passes(const std::vector<SegalReport>& reports);

/// Finite-set-valued functor on the elementary slice of one object: the
/// fiber of a pattern-shaped span diagram.
struct FiberObject {
  std::string base;
  Slice slice;
  std::vector<FinSet> value;             // per slice object
  std::vector<std::vector<int>> action;  // per slice morphism
};

Diagnostics validate_fiber(const FiberObject& f);

/// Right-Kan-extension evaluation: the limit over the elementary slice of
/// R of e |-> F(e ∘ g) for inert g: P >-> R.
struct EvalResult {
  Slice target_slice;                      // elementary slice of R
  std::vector<int> obj_to_src;             // slice(R) object -> slice(P) object
  std::vector<std::vector<int>> families;  // per family: value index per slice(R) object
  int index_of(const std::vector<int>& fam) const;
};

EvalResult eval_fiber(const Pattern& p, const FiberObject& f, const PatMor& g);

/// Sigma^{f,*}: G(e) = eval_fiber(F, inrt(e∘f)), with the slice actions
/// induced through the inert-active factorization.
FiberObject pushforward(const Pattern& p, const FiberObject& f, const PatMor& m);

struct Span {
  FinSet left, apex, right;
  std::vector<int> left_leg, right_leg;
};

/// A <- S -> B and B <- T -> C compose to A <- S x_B T -> C.
Span compose_binary_spans(const Span& s, const Span& t);

/// Checks pushforward along g∘f against the two-step pushforward via the
/// canonical limit identifications; exact bijection per slice object.
bool check_pushforward_functoriality(const Pattern& p, const FiberObject& f0, const PatMor& f,
                                     const PatMor& g, std::string* why = nullptr);

struct MonoidalReport {
  std::string object;
  bool determined = true;
  std::vector<std::string> cardinalities;
  std::string failure;
};

/// Verifies that each test fiber at p0 is determined by its restrictions
/// along the elementary-slice objects (reconstruction oracle).
MonoidalReport check_span_monoidal(const Pattern& p, const std::string& p0,
                                   const std::vector<FiberObject>& tests);

std::string truncated_to_json(const TruncatedFunctor& x);
TruncatedFunctor truncated_from_json(const std::string& text,
                                     std::shared_ptr<const Pattern> pattern);
std::string span_to_json(const Span& s);
Span span_from_json(const std::string& text);

}  // namespace patspan

#endif
