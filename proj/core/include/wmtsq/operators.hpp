#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "wmtsq/distance.hpp"
#include "wmtsq/model.hpp"

namespace wmtsq {

/// Synchronized label sum: undefined across distinct actions, otherwise
/// intervals add componentwise in extended arithmetic.
std::optional<SpecLabel> label_plus(const SpecLabel& k1, const SpecLabel& k2);

/// Adjoint of label_plus: largest label whose sum with k2 refines k1.
/// Undefined across actions or when the difference interval is empty.
std::optional<SpecLabel> label_minus(const SpecLabel& k1, const SpecLabel& k2);

/// Partial label conjunction: interval intersection, undefined when disjoint.
std::optional<SpecLabel> label_conj(const SpecLabel& k1, const SpecLabel& k2);

/// Every interval grown by delta on both ends; the graph is unchanged.
Wmts widen(const Wmts& s, long long delta);

/// s_relaxed is an eps-relaxation of s: d_m(s, s_relaxed) = 0 and
/// d_m(s_relaxed, s) <= eps, both tolerance-inclusive.
bool is_relaxation(const Wmts& s, const Wmts& s_relaxed, double eps,
                   DiscountFactor lambda = DiscountFactor(kDefaultLambda),
                   double tol = kDefaultTolerance);

struct InconsistentSet {
  std::set<std::string> states;
};

/// Removes bad states and everything that must-reaches them; nullopt when
/// the initial state itself is removed.
std::optional<Wmts> prune(const Wmts& s, const InconsistentSet& bad);

/// Pluggable synchronizer seam for structural composition; the shipped
/// instance is interval addition (label_plus).
using LabelSynchronizer =
    std::function<std::optional<SpecLabel>(const SpecLabel&, const SpecLabel&)>;

/// CSP-style synchronized product over the common alphabet: may with may,
/// must with must, labels combined by the synchronizer. Restricted to
/// product states reachable from the initial pair.
Wmts compose(const Wmts& s1, const Wmts& s2,
             const LabelSynchronizer& sync = label_plus);

/// Quotient of s1 by a deterministic s2: the maximal specification whose
/// composition with s2 refines s1. Product-plus-universal-state rules with
/// label_minus, then pruning of the generated inconsistent set. nullopt when
/// the initial pair is pruned; throws std::invalid_argument when s2 is not
/// deterministic.
std::optional<Wmts> quotient(const Wmts& s1, const Wmts& s2);

/// Name of the universal state introduced by quotient.
inline constexpr const char* kUniversalState = "u";

/// Powerset determinization: same-action branches merge under the interval
/// hull; a must appears when every member state contributes one.
Wmts determinize(const Wmts& s);

/// Pruned conjunction of two deterministic systems under label_conj.
/// nullopt when the initial pair is inconsistent; throws
/// std::invalid_argument on non-deterministic input.
std::optional<Wmts> conjoin(const Wmts& s1, const Wmts& s2);

}  // namespace wmtsq
