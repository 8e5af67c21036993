#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wmtsq/extreal.hpp"
#include "wmtsq/model.hpp"

namespace wmtsq {

using StatePair = std::pair<std::string, std::string>;

/// Distance on implementation labels: |x1 - x2| for equal actions, inf
/// otherwise.
ExtReal impl_label_dist(const ImplLabel& k, const ImplLabel& l);

/// Asymmetric distance on specification labels. For equal actions this is
/// max(l.lo - k.lo, k.hi - l.hi, 0) in extended arithmetic: a positive gap
/// against an infinite bound is inf, and two bounds at the same infinity
/// contribute nothing.
ExtReal label_dist(const SpecLabel& k, const SpecLabel& l);

/// Converged fixed-point table for one ordered pair of systems. Entries
/// outside the finite-pairs relation are exactly inf; finite entries are
/// within `tolerance` of the least fixed point (value iteration from zero
/// plus the contraction stopping rule).
struct DistTable {
  std::map<StatePair, ExtReal> entries;
  double lambda = kDefaultLambda;
  double tolerance = kDefaultTolerance;
  /// lambda/(1-lambda) * (last sup-norm change); <= tolerance on return.
  double certified_error = 0.0;

  ExtReal at(const std::string& a, const std::string& b) const;
};

struct DistResult {
  ExtReal value;
  DistTable table;
};

/// Largest relation R such that (s1,s2) in R iff every may step of s1 has a
/// may step of s2 with finite label distance into R, and every must step of
/// s2 has a must step of s1 with finite label distance into R. Pairs outside
/// R have modal distance inf; pairs inside are bounded by
/// (max finite label distance)/(1-lambda).
std::set<StatePair> finite_pairs(const Wmts& s1, const Wmts& s2);

/// Modal refinement distance from s1 to s2, least fixed point of the
/// sup-inf equations over may (forward) and must (backward) transitions.
DistResult modal_dist(const Wmts& s1, const Wmts& s2,
                      DiscountFactor lambda = DiscountFactor(kDefaultLambda),
                      double tol = kDefaultTolerance);

/// Symmetric implementation distance; rejects inputs that are not
/// implementations.
DistResult impl_dist(const Wmts& i1, const Wmts& i2,
                     DiscountFactor lambda = DiscountFactor(kDefaultLambda),
                     double tol = kDefaultTolerance);

/// d_m(s1,s2) <= eps, tolerance-inclusive.
bool refines_eps(const Wmts& s1, const Wmts& s2, double eps,
                 DiscountFactor lambda = DiscountFactor(kDefaultLambda),
                 double tol = kDefaultTolerance);

/// A family of relations indexed by distance thresholds, upward closed.
struct RefinementFamily {
  /// Ascending thresholds; each relation must contain every earlier one.
  std::vector<std::pair<double, std::set<StatePair>>> levels;
};

/// Derives the canonical family R_eps = { pairs with table value <= eps }
/// from a converged table.
RefinementFamily family_from_table(const DistTable& table);

/// Verifies the two matching conditions of a modal refinement family and
/// that the initial pair is a member; diagnostics pinpoint the first
/// violated obligation. `slack` absorbs float rounding in user-supplied
/// thresholds.
Diagnostics check_refinement_family(const RefinementFamily& fam, const Wmts& s1,
                                    const Wmts& s2, DiscountFactor lambda,
                                    double slack = 1e-9);

}  // namespace wmtsq
