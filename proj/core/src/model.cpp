#include "wmtsq/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wmtsq {

std::string to_string(const Bound& b) {
  switch (b.kind()) {
    case Bound::Kind::kNegInf:
      return "-inf";
    case Bound::Kind::kPosInf:
      return "inf";
    case Bound::Kind::kFinite:
      return std::to_string(b.finite_value());
  }
  return "?";
}

WeightInterval::WeightInterval(Bound lo, Bound hi) : lo_(lo), hi_(hi) {
  if (lo.is_pos_infinity() || hi.is_neg_infinity() || hi < lo) {
    throw std::invalid_argument("malformed interval [" + to_string(lo) + "," +
                                to_string(hi) + "]");
  }
}

std::optional<WeightInterval> WeightInterval::make(Bound lo, Bound hi) {
  if (lo.is_pos_infinity() || hi.is_neg_infinity() || hi < lo) return std::nullopt;
  return WeightInterval(lo, hi);
}

bool WeightInterval::contains(long long w) const {
  Bound b = Bound::finite(w);
  return lo_ <= b && b <= hi_;
}

bool WeightInterval::includes(const WeightInterval& other) const {
  return lo_ <= other.lo_ && other.hi_ <= hi_;
}

WeightInterval WeightInterval::widened(long long delta) const {
  Bound lo = lo_.is_finite() ? Bound::finite(lo_.finite_value() - delta) : lo_;
  Bound hi = hi_.is_finite() ? Bound::finite(hi_.finite_value() + delta) : hi_;
  return WeightInterval(lo, hi);
}

WeightInterval WeightInterval::hull(const WeightInterval& a,
                                    const WeightInterval& b) {
  return WeightInterval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

std::optional<long long> WeightInterval::point_count() const {
  if (!lo_.is_finite() || !hi_.is_finite()) return std::nullopt;
  return hi_.finite_value() - lo_.finite_value() + 1;
}

std::string to_string(const WeightInterval& i) {
  return "[" + to_string(i.lo()) + "," + to_string(i.hi()) + "]";
}

std::string to_string(const SpecLabel& l) {
  return l.action + to_string(l.interval);
}

bool label_refines(const SpecLabel& k, const SpecLabel& l) {
  return k.action == l.action && l.interval.includes(k.interval);
}

void Wmts::normalize() {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  auto dedup = [](std::vector<Transition>& ts) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  };
  dedup(may);
  dedup(must);
}

Wmts Wmts::make(std::vector<std::string> states, std::string initial,
                std::vector<Transition> may, std::vector<Transition> must) {
  Wmts s{std::move(states), std::move(initial), std::move(may), std::move(must)};
  s.normalize();
  return s;
}

std::string Diagnostics::summary() const {
  std::ostringstream out;
  for (const auto& e : errors)
    out << "error " << e.code << " at " << e.where << ": " << e.message << "\n";
  for (const auto& w : warnings)
    out << "warning " << w.code << " at " << w.where << ": " << w.message << "\n";
  return out.str();
}

namespace {

std::string transition_ref(const Transition& t) {
  return t.src + " --" + to_string(t.label) + "--> " + t.dst;
}

}  // namespace

Diagnostics validate(const Wmts& s) {
  Diagnostics d;
  std::set<std::string> known(s.states.begin(), s.states.end());

  if (s.states.empty()) {
    d.errors.push_back({"empty-states", "<system>", "state set is empty"});
  }
  if (!known.count(s.initial)) {
    d.errors.push_back(
        {"unknown-initial", s.initial, "initial state is not a member of the state set"});
  }
  auto check_endpoints = [&](const std::vector<Transition>& ts, const char* rel) {
    for (const auto& t : ts) {
      if (!known.count(t.src) || !known.count(t.dst)) {
        d.errors.push_back({"unknown-endpoint", transition_ref(t),
                            std::string(rel) + " transition endpoint is not a state"});
      }
      if (t.label.action.empty()) {
        d.errors.push_back({"empty-action", transition_ref(t),
                            "transition action name is empty"});
      }
    }
  };
  check_endpoints(s.may, "may");
  check_endpoints(s.must, "must");

  // Covering condition: every must lies below a may with the same endpoints.
  for (const auto& m : s.must) {
    bool covered = false;
    for (const auto& t : s.may) {
      if (t.src == m.src && t.dst == m.dst && label_refines(m.label, t.label)) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      d.errors.push_back({"uncovered-must", transition_ref(m),
                          "must transition has no covering may transition"});
    }
  }

  // Reachability is not an invariant; report unreachable states as warnings.
  if (d.errors.empty()) {
    std::set<std::string> seen{s.initial};
    std::vector<std::string> stack{s.initial};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const auto& t : s.may) {
        if (t.src == cur && seen.insert(t.dst).second) stack.push_back(t.dst);
      }
    }
    for (const auto& st : s.states) {
      if (!seen.count(st)) {
        d.warnings.push_back({"unreachable-state", st,
                              "state is unreachable from the initial state"});
      }
    }
  }
  return d;
}

void ensure_valid(const Wmts& s, const char* who) {
  Diagnostics d = validate(s);
  if (!d.ok()) {
    throw std::invalid_argument(std::string(who) + ": invalid system\n" +
                                d.summary());
  }
}

bool is_deterministic(const Wmts& s) {
  std::map<std::pair<std::string, std::string>,
           std::pair<WeightInterval, std::string>>
      seen;
  for (const auto& t : s.may) {
    auto key = std::make_pair(t.src, t.label.action);
    auto val = std::make_pair(t.label.interval, t.dst);
    auto [it, inserted] = seen.emplace(key, val);
    if (!inserted && it->second != val) return false;
  }
  return true;
}

bool is_implementation(const Wmts& s) {
  Wmts copy = s;
  copy.normalize();
  if (copy.may != copy.must) return false;
  for (const auto& t : copy.may) {
    if (!t.label.interval.is_point() || !t.label.interval.lo().is_finite())
      return false;
  }
  return true;
}

std::vector<std::string> actions_of(const Wmts& s) {
  std::set<std::string> acts;
  for (const auto& t : s.may) acts.insert(t.label.action);
  for (const auto& t : s.must) acts.insert(t.label.action);
  return {acts.begin(), acts.end()};
}

}  // namespace wmtsq
