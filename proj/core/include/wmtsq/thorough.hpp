#pragma once

#include <stdexcept>
#include <vector>

#include "wmtsq/distance.hpp"
#include "wmtsq/extreal.hpp"
#include "wmtsq/model.hpp"

namespace wmtsq {

/// Enumeration limits. The depth bounds the unrolling; max_weight_choices
/// bounds the integer point count of any reachable interval.
struct UnrollBudget {
  int depth = 6;
  long long max_weight_choices = 16;
};

/// Raised when enumeration would be unbounded or oversized.
class EnumerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-sided estimate of the thorough refinement distance. The point value
/// is the sup-inf over the enumerated implementation sets of the truncated
/// distance; slack is the lambda^depth * B / (1-lambda) truncation bound,
/// applied on both sides.
struct DistEstimate {
  ExtReal lower;
  ExtReal upper;
  ExtReal point;
  double slack = 0.0;
};

/// Every depth-bounded tree implementation obtainable by choosing, at each
/// unrolling step, a subset of the may steps that still covers all must
/// steps, with one integer weight per chosen step. Deterministic
/// lexicographic generation order.
std::vector<Wmts> enum_implementations(const Wmts& s, const UnrollBudget& budget);

/// sup over implementations of s1 of the inf over implementations of s2 of
/// the depth-truncated implementation distance, widened by the truncation
/// bound. The estimate is exactly infinite when some enumerated
/// implementation of s1 has no action-structure match at all.
DistEstimate thorough_dist_approx(const Wmts& s1, const Wmts& s2,
                                  DiscountFactor lambda, const UnrollBudget& budget);

/// Membership in the eps-extended implementation semantics of s:
/// d_m(i, s) <= eps, tolerance-inclusive. Rejects non-implementations.
bool in_extended_semantics(const Wmts& i, const Wmts& s, double eps,
                           DiscountFactor lambda = DiscountFactor(kDefaultLambda),
                           double tol = kDefaultTolerance);

}  // namespace wmtsq
