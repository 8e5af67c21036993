#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wmtsq/distance.hpp"
#include "wmtsq/extreal.hpp"
#include "wmtsq/model.hpp"

namespace wmtsq {

/// Bipartite weighted game graph. Player 1 maximizes, Player 2 minimizes;
/// edges alternate between the partitions. Escape edges introduced by the
/// reduction carry infinite weight, which keeps every vertex non-blocking
/// while making unanswerable challenges detectable in the solved values.
struct GameGraph {
  struct Edge {
    int target;      // index in the opposite partition
    ExtReal weight;  // response cost; inf only on escape edges
  };

  /// Player-1 vertex: a pair of system states (or the sink).
  struct V1 {
    std::string s1, s2;
    bool sink = false;
  };
  /// Player-2 vertex: a pending challenge (or the sink).
  struct V2 {
    std::string s1, s2;  // refiner successor / abstractor state for may,
                         // refiner state / abstractor successor for must
    SpecLabel label;
    bool may_challenge = true;
    bool sink = false;
  };

  std::vector<V1> v1;
  std::vector<V2> v2;
  std::vector<std::vector<Edge>> v1_edges;  // per v1 vertex
  std::vector<std::vector<Edge>> v2_edges;  // per v2 vertex
  int start = 0;                            // index into v1

  std::string v1_name(int i) const;
  std::string v2_name(int i) const;
};

/// Positional strategy: one outgoing edge per own vertex.
struct Strategy {
  int player = 1;
  std::vector<int> choice;  // edge index per vertex; -1 when unused
};

struct GameSolution {
  std::vector<ExtReal> v1_values;
  std::vector<ExtReal> v2_values;
  Strategy p1, p2;
  double certified_error = 0.0;
};

/// Discounted value of every vertex together with mutually optimal
/// positional strategies (ties broken by target name then weight).
GameSolution discounted_value(const GameGraph& g, DiscountFactor lambda_game,
                              double tol = kDefaultTolerance);

/// Discounted series of the play determined by both strategies from v0,
/// summed until the tail bound drops below tol. Test hook for strategy
/// verification.
ExtReal replay_value(const GameGraph& g, const GameSolution& sol, int v0,
                     DiscountFactor lambda_game, double tol = kDefaultTolerance);

/// Polynomial reduction from a pair of systems to a weighted game:
/// Player 1 picks a may step of s1 or a must step of s2 (weight 0),
/// Player 2 answers with a matching step of the other system (weight =
/// label distance). Vertices are materialized from the start pair only.
GameGraph reduce_to_game(const Wmts& s1, const Wmts& s2);

/// Modal refinement distance through the game route: solve with
/// discounting sqrt(lambda), then divide the start value by sqrt(lambda).
/// The rescaling is fixed empirically against modal_dist; see the tests.
ExtReal modal_dist_via_game(const Wmts& s1, const Wmts& s2,
                            DiscountFactor lambda = DiscountFactor(kDefaultLambda),
                            double tol = kDefaultTolerance);

}  // namespace wmtsq
