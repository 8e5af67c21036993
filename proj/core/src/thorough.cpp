#include "wmtsq/thorough.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>

namespace wmtsq {

namespace {

constexpr size_t kMaxTreesPerSet = 20000;
constexpr size_t kMaxArenaNodes = 400000;
constexpr size_t kMaxDistancePairs = 2000000;

using TreeEdge = std::tuple<std::string, long long, int>;  // action, weight, child

struct Arena {
  std::vector<std::vector<TreeEdge>> nodes;
  std::map<std::vector<TreeEdge>, int> interned;

  int intern(std::vector<TreeEdge> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    auto it = interned.find(edges);
    if (it != interned.end()) return it->second;
    if (nodes.size() >= kMaxArenaNodes) {
      throw EnumerationError(
          "enumeration budget exceeded: too many distinct subtrees");
    }
    int id = static_cast<int>(nodes.size());
    nodes.push_back(edges);
    interned.emplace(std::move(edges), id);
    return id;
  }
};

struct Enumerator {
  const Wmts& s;
  UnrollBudget budget;
  Arena& arena;
  std::map<std::string, std::vector<Transition>> may, must;
  std::map<std::pair<std::string, int>, std::vector<int>> memo;

  Enumerator(const Wmts& sys, const UnrollBudget& b, Arena& a)
      : s(sys), budget(b), arena(a) {
    for (const auto& st : s.states) {
      may[st];
      must[st];
    }
    for (const auto& t : s.may) may[t.src].push_back(t);
    for (const auto& t : s.must) must[t.src].push_back(t);
    for (auto& [st, ts] : may) std::sort(ts.begin(), ts.end());
    for (auto& [st, ts] : must) std::sort(ts.begin(), ts.end());
  }

  void check_enumerable() const {
    std::set<std::string> seen{s.initial};
    std::deque<std::string> queue{s.initial};
    while (!queue.empty()) {
      std::string st = queue.front();
      queue.pop_front();
      for (const auto& t : may.at(st)) {
        auto count = t.label.interval.point_count();
        if (!count) {
          throw EnumerationError("cannot enumerate: unbounded interval " +
                                 to_string(t.label) + " reachable at " + st);
        }
        if (*count > budget.max_weight_choices) {
          throw EnumerationError(
              "cannot enumerate: interval " + to_string(t.label) + " at " + st +
              " has " + std::to_string(*count) + " weight choices (budget " +
              std::to_string(budget.max_weight_choices) + ")");
        }
        if (!seen.count(t.dst)) {
          seen.insert(t.dst);
          queue.push_back(t.dst);
        }
      }
    }
  }

  std::vector<int> enumerate(const std::string& state, int depth) {
    auto key = std::make_pair(state, depth);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;

    std::vector<int> result;
    if (depth == 0) {
      result.push_back(arena.intern({}));
      memo.emplace(key, result);
      return result;
    }

    const auto& edges = may.at(state);
    const auto& obligations = must.at(state);

    // Per-edge choice lists: entry -1 is "skip", otherwise (weight, subtree).
    std::vector<std::vector<std::pair<long long, int>>> choices(edges.size());
    for (size_t e = 0; e < edges.size(); ++e) {
      const auto& iv = edges[e].label.interval;
      std::vector<int> subs = enumerate(edges[e].dst, depth - 1);
      for (long long w = iv.lo().finite_value(); w <= iv.hi().finite_value();
           ++w) {
        for (int sub : subs) choices[e].emplace_back(w, sub);
      }
    }

    std::set<int> distinct;
    std::vector<TreeEdge> current;
    std::vector<std::pair<size_t, long long>> picked;  // (edge index, weight)

    auto covered = [&]() {
      for (const auto& m : obligations) {
        bool ok = false;
        for (const auto& [e, w] : picked) {
          if (edges[e].label.action == m.label.action && edges[e].dst == m.dst &&
              m.label.interval.contains(w)) {
            ok = true;
            break;
          }
        }
        if (!ok) return false;
      }
      return true;
    };

    auto emit = [&]() {
      if (!covered()) return;
      int id = arena.intern(current);
      if (distinct.insert(id).second && distinct.size() > kMaxTreesPerSet) {
        throw EnumerationError(
            "enumeration budget exceeded: too many implementations");
      }
    };

    std::function<void(size_t)> walk = [&](size_t e) {
      if (e == edges.size()) {
        emit();
        return;
      }
      walk(e + 1);  // skip this edge
      for (const auto& [w, sub] : choices[e]) {
        current.emplace_back(edges[e].label.action, w, sub);
        picked.emplace_back(e, w);
        walk(e + 1);
        picked.pop_back();
        current.pop_back();
      }
    };
    walk(0);

    result.assign(distinct.begin(), distinct.end());
    memo.emplace(key, result);
    return result;
  }
};

Wmts tree_to_wmts(const Arena& arena, int root) {
  Wmts out;
  std::map<int, std::vector<std::string>> names;  // arena node -> copies
  std::deque<std::pair<int, std::string>> queue;
  int counter = 0;
  auto fresh = [&](int node) {
    std::string name = "n" + std::to_string(counter++);
    out.states.push_back(name);
    queue.emplace_back(node, name);
    return name;
  };
  out.initial = fresh(root);
  while (!queue.empty()) {
    auto [node, name] = queue.front();
    queue.pop_front();
    for (const auto& [action, w, child] : arena.nodes[node]) {
      std::string cname = fresh(child);
      Transition t{name, SpecLabel{action, WeightInterval::point(w)}, cname};
      out.may.push_back(t);
      out.must.push_back(t);
    }
  }
  out.normalize();
  return out;
}

// Truncated implementation distance between two arena trees.
ExtReal tree_dist(const Arena& a1, const Arena& a2, int u, int v, double lambda,
                  std::map<std::pair<int, int>, ExtReal>& memo) {
  auto key = std::make_pair(u, v);
  auto hit = memo.find(key);
  if (hit != memo.end()) return hit->second;

  ExtReal dir1(0.0);
  for (const auto& [a, w, c] : a1.nodes[u]) {
    ExtReal best = ExtReal::infinity();
    for (const auto& [a2, w2, c2] : a2.nodes[v]) {
      if (a != a2) continue;
      ExtReal cand = ExtReal(static_cast<double>(std::llabs(w - w2))) +
                     lambda * tree_dist(a1, a2, c, c2, lambda, memo);
      best = ext_min(best, cand);
    }
    dir1 = ext_max(dir1, best);
  }
  ExtReal dir2(0.0);
  for (const auto& [a2, w2, c2] : a2.nodes[v]) {
    ExtReal best = ExtReal::infinity();
    for (const auto& [a, w, c] : a1.nodes[u]) {
      if (a != a2) continue;
      ExtReal cand = ExtReal(static_cast<double>(std::llabs(w - w2))) +
                     lambda * tree_dist(a1, a2, c, c2, lambda, memo);
      best = ext_min(best, cand);
    }
    dir2 = ext_max(dir2, best);
  }
  ExtReal d = ext_max(dir1, dir2);
  memo.emplace(key, d);
  return d;
}

double max_finite_label_gap(const Wmts& s1, const Wmts& s2) {
  std::vector<SpecLabel> l1, l2;
  for (const auto& t : s1.may) l1.push_back(t.label);
  for (const auto& t : s1.must) l1.push_back(t.label);
  for (const auto& t : s2.may) l2.push_back(t.label);
  for (const auto& t : s2.must) l2.push_back(t.label);
  double best = 0.0;
  for (const auto& a : l1) {
    for (const auto& b : l2) {
      ExtReal f = label_dist(a, b), g = label_dist(b, a);
      if (f.is_finite()) best = std::max(best, f.value());
      if (g.is_finite()) best = std::max(best, g.value());
    }
  }
  return best;
}

}  // namespace

std::vector<Wmts> enum_implementations(const Wmts& s, const UnrollBudget& budget) {
  if (budget.depth < 1)
    throw std::invalid_argument("enum_implementations: depth must be >= 1");
  if (budget.max_weight_choices < 1)
    throw std::invalid_argument(
        "enum_implementations: max_weight_choices must be >= 1");
  ensure_valid(s, "enum_implementations");
  Arena arena;
  Enumerator en(s, budget, arena);
  en.check_enumerable();
  std::vector<int> roots = en.enumerate(s.initial, budget.depth);
  std::vector<Wmts> out;
  out.reserve(roots.size());
  for (int r : roots) out.push_back(tree_to_wmts(arena, r));
  return out;
}

DistEstimate thorough_dist_approx(const Wmts& s1, const Wmts& s2,
                                  DiscountFactor lambda,
                                  const UnrollBudget& budget) {
  if (budget.depth < 1)
    throw std::invalid_argument("thorough_dist_approx: depth must be >= 1");
  ensure_valid(s1, "thorough_dist_approx");
  ensure_valid(s2, "thorough_dist_approx");

  Arena a1, a2;
  Enumerator e1(s1, budget, a1), e2(s2, budget, a2);
  e1.check_enumerable();
  e2.check_enumerable();
  std::vector<int> set1 = e1.enumerate(s1.initial, budget.depth);
  std::vector<int> set2 = e2.enumerate(s2.initial, budget.depth);
  if (set1.size() * set2.size() > kMaxDistancePairs) {
    throw EnumerationError("thorough budget exceeded: " +
                           std::to_string(set1.size()) + " x " +
                           std::to_string(set2.size()) + " implementation pairs");
  }

  std::map<std::pair<int, int>, ExtReal> memo;
  ExtReal sup(0.0);
  for (int t1 : set1) {
    ExtReal inner = ExtReal::infinity();
    for (int t2 : set2) {
      inner = ext_min(inner,
                      tree_dist(a1, a2, t1, t2, lambda.value(), memo));
      if (inner == ExtReal(0.0)) break;
    }
    sup = ext_max(sup, inner);
  }

  double bound = max_finite_label_gap(s1, s2);
  double slack =
      std::pow(lambda.value(), budget.depth) * bound / (1.0 - lambda.value());

  DistEstimate est;
  est.point = sup;
  est.slack = slack;
  if (sup.is_infinite()) {
    est.lower = ExtReal::infinity();
    est.upper = ExtReal::infinity();
  } else {
    est.lower = ExtReal(std::max(0.0, sup.value() - slack));
    est.upper = ExtReal(sup.value() + slack);
  }
  return est;
}

bool in_extended_semantics(const Wmts& i, const Wmts& s, double eps,
                           DiscountFactor lambda, double tol) {
  if (eps < 0.0)
    throw std::invalid_argument("in_extended_semantics: eps must be nonnegative");
  if (!is_implementation(i)) {
    throw std::invalid_argument(
        "in_extended_semantics: first argument must be an implementation");
  }
  return modal_dist(i, s, lambda, tol).value <= ExtReal(eps + tol);
}

}  // namespace wmtsq
