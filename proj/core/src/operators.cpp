#include "wmtsq/operators.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace wmtsq {

namespace {

Bound add_lo(const Bound& a, const Bound& b) {
  if (a.is_neg_infinity() || b.is_neg_infinity()) return Bound::neg_infinity();
  return Bound::finite(a.finite_value() + b.finite_value());
}

Bound add_hi(const Bound& a, const Bound& b) {
  if (a.is_pos_infinity() || b.is_pos_infinity()) return Bound::pos_infinity();
  return Bound::finite(a.finite_value() + b.finite_value());
}

// Lower bound of the difference interval; nullopt forces undefined
// (no weight can compensate a finite demand against an unbounded divisor).
std::optional<Bound> sub_lo(const Bound& a, const Bound& b) {
  if (a.is_neg_infinity()) return Bound::neg_infinity();
  if (b.is_neg_infinity()) return std::nullopt;
  return Bound::finite(a.finite_value() - b.finite_value());
}

std::optional<Bound> sub_hi(const Bound& a, const Bound& b) {
  if (a.is_pos_infinity()) return Bound::pos_infinity();
  if (b.is_pos_infinity()) return std::nullopt;
  return Bound::finite(a.finite_value() - b.finite_value());
}

std::string pair_name(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

}  // namespace

std::optional<SpecLabel> label_plus(const SpecLabel& k1, const SpecLabel& k2) {
  if (k1.action != k2.action) return std::nullopt;
  return SpecLabel{k1.action,
                   WeightInterval(add_lo(k1.interval.lo(), k2.interval.lo()),
                                  add_hi(k1.interval.hi(), k2.interval.hi()))};
}

std::optional<SpecLabel> label_minus(const SpecLabel& k1, const SpecLabel& k2) {
  if (k1.action != k2.action) return std::nullopt;
  auto lo = sub_lo(k1.interval.lo(), k2.interval.lo());
  auto hi = sub_hi(k1.interval.hi(), k2.interval.hi());
  if (!lo || !hi) return std::nullopt;
  auto interval = WeightInterval::make(*lo, *hi);
  if (!interval) return std::nullopt;
  return SpecLabel{k1.action, *interval};
}

std::optional<SpecLabel> label_conj(const SpecLabel& k1, const SpecLabel& k2) {
  if (k1.action != k2.action) return std::nullopt;
  auto interval = WeightInterval::make(std::max(k1.interval.lo(), k2.interval.lo()),
                                       std::min(k1.interval.hi(), k2.interval.hi()));
  if (!interval) return std::nullopt;
  return SpecLabel{k1.action, *interval};
}

Wmts widen(const Wmts& s, long long delta) {
  if (delta < 0) throw std::invalid_argument("widen: delta must be nonnegative");
  ensure_valid(s, "widen");
  Wmts out = s;
  for (auto& t : out.may) t.label.interval = t.label.interval.widened(delta);
  for (auto& t : out.must) t.label.interval = t.label.interval.widened(delta);
  out.normalize();
  return out;
}

bool is_relaxation(const Wmts& s, const Wmts& s_relaxed, double eps,
                   DiscountFactor lambda, double tol) {
  if (eps < 0.0)
    throw std::invalid_argument("is_relaxation: eps must be nonnegative");
  ExtReal forward = modal_dist(s, s_relaxed, lambda, tol).value;
  if (!(forward <= ExtReal(tol))) return false;
  ExtReal back = modal_dist(s_relaxed, s, lambda, tol).value;
  return back <= ExtReal(eps + tol);
}

namespace {

// Shared by the public operation and by quotient/conjoin, whose raw product
// is pruned before it is a fully formed system.
std::optional<Wmts> prune_impl(const Wmts& s, const InconsistentSet& bad) {
  // pre*(bad) over must edges.
  std::set<std::string> removed = bad.states;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : s.must) {
      if (removed.count(t.dst) && removed.insert(t.src).second) changed = true;
    }
  }
  if (removed.count(s.initial)) return std::nullopt;

  Wmts out;
  out.initial = s.initial;
  for (const auto& st : s.states)
    if (!removed.count(st)) out.states.push_back(st);
  auto keep = [&](const Transition& t) {
    return !removed.count(t.src) && !removed.count(t.dst);
  };
  for (const auto& t : s.may)
    if (keep(t)) out.may.push_back(t);
  for (const auto& t : s.must)
    if (keep(t)) out.must.push_back(t);
  out.normalize();
  return out;
}

}  // namespace

std::optional<Wmts> prune(const Wmts& s, const InconsistentSet& bad) {
  ensure_valid(s, "prune");
  std::set<std::string> known(s.states.begin(), s.states.end());
  for (const auto& b : bad.states) {
    if (!known.count(b)) {
      throw std::invalid_argument("prune: inconsistent state " + b +
                                  " is not a state of the system");
    }
  }
  return prune_impl(s, bad);
}

namespace {

struct Outgoing {
  std::vector<Transition> may, must;
};

std::map<std::string, Outgoing> adjacency(const Wmts& s) {
  std::map<std::string, Outgoing> adj;
  for (const auto& st : s.states) adj[st];
  for (const auto& t : s.may) adj[t.src].may.push_back(t);
  for (const auto& t : s.must) adj[t.src].must.push_back(t);
  return adj;
}

}  // namespace

Wmts compose(const Wmts& s1, const Wmts& s2, const LabelSynchronizer& sync) {
  ensure_valid(s1, "compose");
  ensure_valid(s2, "compose");
  auto adj1 = adjacency(s1);
  auto adj2 = adjacency(s2);

  Wmts out;
  out.initial = pair_name(s1.initial, s2.initial);
  std::set<std::pair<std::string, std::string>> seen;
  std::deque<std::pair<std::string, std::string>> queue;
  seen.insert({s1.initial, s2.initial});
  queue.push_back({s1.initial, s2.initial});

  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    out.states.push_back(pair_name(p, q));
    auto emit = [&](const std::vector<Transition>& lhs,
                    const std::vector<Transition>& rhs,
                    std::vector<Transition>& into) {
      for (const auto& t1 : lhs) {
        for (const auto& t2 : rhs) {
          auto k = sync(t1.label, t2.label);
          if (!k) continue;
          into.push_back({pair_name(p, q), *k, pair_name(t1.dst, t2.dst)});
          if (seen.insert({t1.dst, t2.dst}).second)
            queue.push_back({t1.dst, t2.dst});
        }
      }
    };
    emit(adj1.at(p).may, adj2.at(q).may, out.may);
    emit(adj1.at(p).must, adj2.at(q).must, out.must);
  }
  out.normalize();
  return out;
}

std::optional<Wmts> quotient(const Wmts& s1, const Wmts& s2) {
  ensure_valid(s1, "quotient");
  ensure_valid(s2, "quotient");
  if (!is_deterministic(s2)) {
    throw std::invalid_argument("quotient: the divisor must be deterministic");
  }
  auto adj1 = adjacency(s1);
  auto adj2 = adjacency(s2);

  std::vector<std::string> alphabet;
  {
    std::set<std::string> acts;
    for (const auto& a : actions_of(s1)) acts.insert(a);
    for (const auto& a : actions_of(s2)) acts.insert(a);
    alphabet.assign(acts.begin(), acts.end());
  }

  Wmts out;
  out.initial = pair_name(s1.initial, s2.initial);
  InconsistentSet lightning;
  bool use_u = false;

  std::set<std::pair<std::string, std::string>> seen;
  std::deque<std::pair<std::string, std::string>> queue;
  seen.insert({s1.initial, s2.initial});
  queue.push_back({s1.initial, s2.initial});

  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    std::string here = pair_name(p, q);
    out.states.push_back(here);
    const auto& o1 = adj1.at(p);
    const auto& o2 = adj2.at(q);

    for (const auto& t1 : o1.may) {
      for (const auto& t2 : o2.may) {
        auto k = label_minus(t1.label, t2.label);
        if (!k) continue;
        out.may.push_back({here, *k, pair_name(t1.dst, t2.dst)});
        if (seen.insert({t1.dst, t2.dst}).second)
          queue.push_back({t1.dst, t2.dst});
      }
    }
    for (const auto& t1 : o1.must) {
      bool matched = false;
      for (const auto& t2 : o2.must) {
        auto k = label_minus(t1.label, t2.label);
        if (!k) continue;
        matched = true;
        out.must.push_back({here, *k, pair_name(t1.dst, t2.dst)});
        if (seen.insert({t1.dst, t2.dst}).second)
          queue.push_back({t1.dst, t2.dst});
      }
      if (!matched) lightning.states.insert(here);
    }
    // Universal escape: actions the divisor cannot synchronize on at all.
    for (const auto& a : alphabet) {
      bool sync_possible = false;
      for (const auto& t2 : o2.may) {
        if (t2.label.action == a) {
          sync_possible = true;
          break;
        }
      }
      if (!sync_possible) {
        out.may.push_back(
            {here, SpecLabel{a, WeightInterval::universal()}, kUniversalState});
        use_u = true;
      }
    }
  }

  if (use_u) {
    out.states.push_back(kUniversalState);
    for (const auto& a : alphabet) {
      out.may.push_back({kUniversalState,
                         SpecLabel{a, WeightInterval::universal()},
                         kUniversalState});
    }
  }
  out.normalize();
  return prune_impl(out, lightning);
}

Wmts determinize(const Wmts& s) {
  ensure_valid(s, "determinize");
  auto adj = adjacency(s);

  auto subset_name = [](const std::set<std::string>& subset) {
    std::string name = "{";
    bool first = true;
    for (const auto& st : subset) {
      if (!first) name += ",";
      name += st;
      first = false;
    }
    return name + "}";
  };

  Wmts out;
  std::set<std::string> start{s.initial};
  out.initial = subset_name(start);
  std::set<std::set<std::string>> seen{start};
  std::deque<std::set<std::string>> queue{start};

  while (!queue.empty()) {
    std::set<std::string> subset = queue.front();
    queue.pop_front();
    out.states.push_back(subset_name(subset));

    // L_a: every interval on an a-labeled may step out of the subset.
    std::map<std::string, std::vector<WeightInterval>> intervals;
    std::map<std::string, std::set<std::string>> targets;
    for (const auto& st : subset) {
      for (const auto& t : adj.at(st).may) {
        intervals[t.label.action].push_back(t.label.interval);
        targets[t.label.action].insert(t.dst);
      }
    }
    for (const auto& [action, ivs] : intervals) {
      WeightInterval hull = ivs.front();
      for (const auto& iv : ivs) hull = WeightInterval::hull(hull, iv);
      const auto& succ = targets.at(action);
      std::string dst = subset_name(succ);
      out.may.push_back({subset_name(subset), SpecLabel{action, hull}, dst});

      bool all_must = true;
      for (const auto& st : subset) {
        bool has = false;
        for (const auto& t : adj.at(st).must) {
          if (t.label.action == action && succ.count(t.dst) &&
              hull.includes(t.label.interval)) {
            has = true;
            break;
          }
        }
        if (!has) {
          all_must = false;
          break;
        }
      }
      if (all_must) {
        out.must.push_back({subset_name(subset), SpecLabel{action, hull}, dst});
      }
      if (seen.insert(succ).second) queue.push_back(succ);
    }
  }
  out.normalize();
  return out;
}

std::optional<Wmts> conjoin(const Wmts& s1, const Wmts& s2) {
  ensure_valid(s1, "conjoin");
  ensure_valid(s2, "conjoin");
  if (!is_deterministic(s1) || !is_deterministic(s2)) {
    throw std::invalid_argument("conjoin: both arguments must be deterministic");
  }
  auto adj1 = adjacency(s1);
  auto adj2 = adjacency(s2);

  Wmts out;
  out.initial = pair_name(s1.initial, s2.initial);
  InconsistentSet lightning;
  std::set<std::pair<std::string, std::string>> seen;
  std::deque<std::pair<std::string, std::string>> queue;
  seen.insert({s1.initial, s2.initial});
  queue.push_back({s1.initial, s2.initial});

  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    std::string here = pair_name(p, q);
    out.states.push_back(here);
    const auto& o1 = adj1.at(p);
    const auto& o2 = adj2.at(q);

    auto visit = [&](const std::string& d1, const std::string& d2) {
      if (seen.insert({d1, d2}).second) queue.push_back({d1, d2});
    };
    for (const auto& t1 : o1.must) {
      bool matched = false;
      for (const auto& t2 : o2.may) {
        auto k = label_conj(t1.label, t2.label);
        if (!k) continue;
        matched = true;
        out.must.push_back({here, *k, pair_name(t1.dst, t2.dst)});
        visit(t1.dst, t2.dst);
      }
      if (!matched) lightning.states.insert(here);
    }
    for (const auto& t2 : o2.must) {
      bool matched = false;
      for (const auto& t1 : o1.may) {
        auto k = label_conj(t1.label, t2.label);
        if (!k) continue;
        matched = true;
        out.must.push_back({here, *k, pair_name(t1.dst, t2.dst)});
        visit(t1.dst, t2.dst);
      }
      if (!matched) lightning.states.insert(here);
    }
    for (const auto& t1 : o1.may) {
      for (const auto& t2 : o2.may) {
        auto k = label_conj(t1.label, t2.label);
        if (!k) continue;
        out.may.push_back({here, *k, pair_name(t1.dst, t2.dst)});
        visit(t1.dst, t2.dst);
      }
    }
  }
  out.normalize();
  return prune_impl(out, lightning);
}

}  // namespace wmtsq
