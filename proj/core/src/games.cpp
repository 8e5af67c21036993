#include "wmtsq/games.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

#include "fixpoint.hpp"

namespace wmtsq {

std::string GameGraph::v1_name(int i) const {
  const V1& v = v1[i];
  if (v.sink) return "<sink1>";
  return "(" + v.s1 + "," + v.s2 + ")";
}

std::string GameGraph::v2_name(int i) const {
  const V2& v = v2[i];
  if (v.sink) return "<sink2>";
  return std::string(v.may_challenge ? "may" : "must") + "(" + v.s1 + "," +
         v.s2 + "," + to_string(v.label) + ")";
}

GameGraph reduce_to_game(const Wmts& s1, const Wmts& s2) {
  detail::Indexed a = detail::index_system(s1, "reduce_to_game");
  detail::Indexed b = detail::index_system(s2, "reduce_to_game");

  GameGraph g;
  std::map<std::pair<int, int>, int> v1_index;
  std::deque<std::pair<int, int>> queue;
  int sink1 = -1, sink2 = -1;

  auto ensure_sinks = [&]() {
    if (sink1 >= 0) return;
    sink1 = static_cast<int>(g.v1.size());
    g.v1.push_back({"", "", true});
    g.v1_edges.emplace_back();
    sink2 = static_cast<int>(g.v2.size());
    g.v2.push_back({"", "", SpecLabel{}, true, true});
    g.v2_edges.emplace_back();
    g.v1_edges[sink1].push_back({sink2, ExtReal(0.0)});
    g.v2_edges[sink2].push_back({sink1, ExtReal(0.0)});
  };

  auto intern_pair = [&](int i, int j) {
    auto it = v1_index.find({i, j});
    if (it != v1_index.end()) return it->second;
    int id = static_cast<int>(g.v1.size());
    g.v1.push_back({a.states[i], b.states[j], false});
    g.v1_edges.emplace_back();
    v1_index[{i, j}] = id;
    queue.emplace_back(i, j);
    return id;
  };

  g.start = intern_pair(a.index.at(s1.initial), b.index.at(s2.initial));

  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    int self = v1_index.at({i, j});

    auto add_challenge = [&](const SpecLabel& kc, int succ, bool may_side) {
      GameGraph::V2 vert;
      vert.label = kc;
      vert.may_challenge = may_side;
      if (may_side) {
        vert.s1 = a.states[succ];
        vert.s2 = b.states[j];
      } else {
        vert.s1 = a.states[i];
        vert.s2 = b.states[succ];
      }
      int vid = static_cast<int>(g.v2.size());
      g.v2.push_back(vert);
      g.v2_edges.emplace_back();
      g.v1_edges[self].push_back({vid, ExtReal(0.0)});

      std::vector<std::tuple<std::string, SpecLabel, int, double>> responses;
      if (may_side) {
        for (const auto& [k2, t2] : b.may[j]) {
          ExtReal d = label_dist(kc, k2);
          if (d.is_finite())
            responses.emplace_back(b.states[t2], k2, intern_pair(succ, t2),
                                   d.value());
        }
      } else {
        for (const auto& [k1, t1] : a.must[i]) {
          ExtReal d = label_dist(k1, kc);
          if (d.is_finite())
            responses.emplace_back(a.states[t1], k1, intern_pair(t1, succ),
                                   d.value());
        }
      }
      std::sort(responses.begin(), responses.end(),
                [](const auto& x, const auto& y) {
                  if (std::get<0>(x) != std::get<0>(y))
                    return std::get<0>(x) < std::get<0>(y);
                  return std::get<1>(x) < std::get<1>(y);
                });
      for (const auto& [name, lab, target, cost] : responses)
        g.v2_edges[vid].push_back({target, ExtReal(cost)});
      if (g.v2_edges[vid].empty()) {
        // Unanswerable challenge: non-blocking escape worth infinity.
        ensure_sinks();
        g.v2_edges[vid].push_back({sink1, ExtReal::infinity()});
      }
    };

    for (const auto& [k1, t1] : a.may[i]) add_challenge(k1, t1, true);
    for (const auto& [k2, t2] : b.must[j]) add_challenge(k2, t2, false);

    if (g.v1_edges[self].empty()) {
      // No challenge at all: the pair is trivially matched, value zero.
      ensure_sinks();
      g.v1_edges[self].push_back({sink2, ExtReal(0.0)});
    }
  }
  return g;
}

GameSolution discounted_value(const GameGraph& g, DiscountFactor lambda_game,
                              double tol) {
  const double lg = lambda_game.value();
  const double stop = tol * (1.0 - lg) / lg;
  std::vector<ExtReal> v1(g.v1.size(), ExtReal(0.0));
  std::vector<ExtReal> v2(g.v2.size(), ExtReal(0.0));
  std::vector<ExtReal> n1(g.v1.size()), n2(g.v2.size());

  for (;;) {
    bool inf_changed = false;
    double delta = 0.0;
    for (size_t i = 0; i < g.v2.size(); ++i) {
      ExtReal best = ExtReal::infinity();
      for (const auto& e : g.v2_edges[i])
        best = ext_min(best, e.weight + lg * v1[e.target]);
      n2[i] = best;
      if (best.is_infinite() != v2[i].is_infinite()) inf_changed = true;
      if (best.is_finite() && v2[i].is_finite())
        delta = std::max(delta, std::abs(best.value() - v2[i].value()));
    }
    for (size_t i = 0; i < g.v1.size(); ++i) {
      ExtReal best(0.0);
      bool first = true;
      for (const auto& e : g.v1_edges[i]) {
        ExtReal cand = e.weight + lg * n2[e.target];
        best = first ? cand : ext_max(best, cand);
        first = false;
      }
      n1[i] = best;
      if (best.is_infinite() != v1[i].is_infinite()) inf_changed = true;
      if (best.is_finite() && v1[i].is_finite())
        delta = std::max(delta, std::abs(best.value() - v1[i].value()));
    }
    v1.swap(n1);
    v2.swap(n2);
    if (!inf_changed && delta <= stop) {
      GameSolution sol;
      sol.v1_values = std::move(v1);
      sol.v2_values = std::move(v2);
      sol.certified_error = lg * delta / (1.0 - lg);
      sol.p1.player = 1;
      sol.p2.player = 2;
      sol.p1.choice.assign(g.v1.size(), -1);
      sol.p2.choice.assign(g.v2.size(), -1);
      for (size_t i = 0; i < g.v1.size(); ++i) {
        for (size_t e = 0; e < g.v1_edges[i].size(); ++e) {
          const auto& edge = g.v1_edges[i][e];
          ExtReal cand = edge.weight + lg * sol.v2_values[edge.target];
          if (sol.p1.choice[i] < 0) {
            sol.p1.choice[i] = static_cast<int>(e);
            continue;
          }
          const auto& cur = g.v1_edges[i][sol.p1.choice[i]];
          ExtReal curv = cur.weight + lg * sol.v2_values[cur.target];
          if (cand > curv) sol.p1.choice[i] = static_cast<int>(e);
        }
      }
      for (size_t i = 0; i < g.v2.size(); ++i) {
        for (size_t e = 0; e < g.v2_edges[i].size(); ++e) {
          const auto& edge = g.v2_edges[i][e];
          ExtReal cand = edge.weight + lg * sol.v1_values[edge.target];
          if (sol.p2.choice[i] < 0) {
            sol.p2.choice[i] = static_cast<int>(e);
            continue;
          }
          const auto& cur = g.v2_edges[i][sol.p2.choice[i]];
          ExtReal curv = cur.weight + lg * sol.v1_values[cur.target];
          if (cand < curv) sol.p2.choice[i] = static_cast<int>(e);
        }
      }
      return sol;
    }
  }
}

ExtReal replay_value(const GameGraph& g, const GameSolution& sol, int v0,
                     DiscountFactor lambda_game, double tol) {
  const double lg = lambda_game.value();
  double acc = 0.0;
  double discount = 1.0;
  int cur = v0;
  bool at_p1 = true;
  // Enough steps that the discounted tail is below tol for finite plays.
  double max_w = 1.0;
  for (const auto& edges : g.v2_edges)
    for (const auto& e : edges)
      if (e.weight.is_finite()) max_w = std::max(max_w, e.weight.value());
  int steps = static_cast<int>(
      std::ceil(std::log(tol * (1.0 - lg) / max_w) / std::log(lg)));
  steps = std::max(steps, 8);
  for (int s = 0; s < steps; ++s) {
    const auto& edges = at_p1 ? g.v1_edges[cur] : g.v2_edges[cur];
    int pick = at_p1 ? sol.p1.choice[cur] : sol.p2.choice[cur];
    if (pick < 0 || pick >= static_cast<int>(edges.size()))
      throw std::invalid_argument("replay_value: strategy has no choice here");
    const auto& e = edges[pick];
    if (e.weight.is_infinite()) return ExtReal::infinity();
    acc += discount * e.weight.value();
    discount *= lg;
    cur = e.target;
    at_p1 = !at_p1;
  }
  return ExtReal(acc);
}

ExtReal modal_dist_via_game(const Wmts& s1, const Wmts& s2,
                            DiscountFactor lambda, double tol) {
  GameGraph g = reduce_to_game(s1, s2);
  DiscountFactor lg(std::sqrt(lambda.value()));
  GameSolution sol = discounted_value(g, lg, tol);
  ExtReal start = sol.v1_values[g.start];
  if (start.is_infinite()) return start;
  return ExtReal(start.value() / lg.value());
}

}  // namespace wmtsq
