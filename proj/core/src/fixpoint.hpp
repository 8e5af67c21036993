#pragma once

// Internal pair-indexed fixed-point machinery shared by the float solver
// (distance.cpp) and the rational post-solve (exact.cpp).

#include <map>
#include <string>
#include <vector>

#include "wmtsq/distance.hpp"
#include "wmtsq/model.hpp"

namespace wmtsq::detail {

struct Indexed {
  std::vector<std::string> states;  // index -> name, sorted
  std::map<std::string, int> index;
  std::vector<std::vector<std::pair<SpecLabel, int>>> may;   // per state
  std::vector<std::vector<std::pair<SpecLabel, int>>> must;  // per state
};

/// Throws std::invalid_argument on unknown initial state or endpoints.
Indexed index_system(const Wmts& s, const char* who);

struct Option {
  double cost;            // finite label distance of the response
  int next;               // pair index of the successor pair
  int resp_state;         // responding transition target (tie-break)
  const SpecLabel* resp_label;
};

struct Challenge {
  std::vector<Option> options;  // sorted by (response target name, label)
  int ch_state;                 // challenge transition target
  const SpecLabel* ch_label;
  bool may_side;  // true: may challenge of s1 (refiner side); false: must of s2
};

struct PairProblem {
  Indexed a, b;
  int n1 = 0, n2 = 0;
  int start = 0;                                   // pair index
  std::vector<char> finite;                        // in the finite-pairs GFP
  std::vector<std::vector<Challenge>> challenges;  // populated on finite pairs

  int pidx(int i, int j) const { return i * n2 + j; }
};

/// Builds the challenge/response structure of the modal-distance equations:
/// direction one challenges with the may steps of s1 (answered by the may
/// steps of s2), direction two with the must steps of s2 (answered by the
/// must steps of s1). Options keep only finite label distances into the
/// finite-pairs relation.
PairProblem build_pair_problem(const Wmts& s1, const Wmts& s2, const char* who);

/// Boolean greatest fixed point backing finite_pairs; entry per pair index.
std::vector<char> finite_pairs_bits(const Indexed& a, const Indexed& b);

}  // namespace wmtsq::detail
