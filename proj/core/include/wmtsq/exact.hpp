#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "wmtsq/model.hpp"

namespace wmtsq {

using Rational = boost::multiprecision::cpp_rational;

/// Parses a plain decimal literal ("0.9", "-1.25e-3") into an exact rational.
std::optional<Rational> parse_decimal_rational(std::string_view text);

/// Rounded decimal rendering with the given number of fraction digits.
std::string rational_to_decimal(const Rational& r, int digits);

struct ExactDist {
  bool is_infinite = false;
  Rational value;  // meaningful when finite
};

/// Exact modal refinement distance for a rational discounting factor.
/// Discounted fixed points with rational lambda are rational; this runs
/// strategy iteration (greedy challenge/response choices, functional-graph
/// evaluation in exact arithmetic) until the Bellman equations hold exactly.
ExactDist exact_modal_dist(const Wmts& s1, const Wmts& s2,
                           const Rational& lambda);

/// Exact implementation distance; rejects non-implementations.
ExactDist exact_impl_dist(const Wmts& i1, const Wmts& i2,
                          const Rational& lambda);

}  // namespace wmtsq
