#include "wmtsq/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fixpoint.hpp"

namespace wmtsq {

std::string format_ext(ExtReal v) {
  if (v.is_infinite()) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v.value());
  return buf;
}

DiscountFactor::DiscountFactor(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    throw std::invalid_argument("discounting factor must lie strictly in (0,1)");
  }
}

ExtReal impl_label_dist(const ImplLabel& k, const ImplLabel& l) {
  if (k.action != l.action) return ExtReal::infinity();
  return ExtReal(static_cast<double>(std::llabs(k.weight - l.weight)));
}

namespace {

// Contribution of a bound difference x - y to the label-distance max.
// Same infinities cancel to zero; a positive gap against an infinity is inf;
// negative-infinite differences never contribute.
ExtReal bound_gap(const Bound& x, const Bound& y) {
  if (x.kind() == y.kind() && !x.is_finite()) return ExtReal(0.0);
  if (x.is_pos_infinity() || y.is_neg_infinity()) return ExtReal::infinity();
  if (x.is_neg_infinity() || y.is_pos_infinity()) return ExtReal(0.0);
  double diff = static_cast<double>(x.finite_value() - y.finite_value());
  return ExtReal(diff < 0.0 ? 0.0 : diff);
}

}  // namespace

ExtReal label_dist(const SpecLabel& k, const SpecLabel& l) {
  if (k.action != l.action) return ExtReal::infinity();
  ExtReal low = bound_gap(l.interval.lo(), k.interval.lo());
  ExtReal high = bound_gap(k.interval.hi(), l.interval.hi());
  return ext_max(low, high);
}

ExtReal DistTable::at(const std::string& a, const std::string& b) const {
  auto it = entries.find({a, b});
  if (it == entries.end()) return ExtReal::infinity();
  return it->second;
}

namespace detail {

Indexed index_system(const Wmts& s, const char* who) {
  Indexed ix;
  ix.states = s.states;
  std::sort(ix.states.begin(), ix.states.end());
  ix.states.erase(std::unique(ix.states.begin(), ix.states.end()),
                  ix.states.end());
  for (int i = 0; i < static_cast<int>(ix.states.size()); ++i)
    ix.index[ix.states[i]] = i;
  if (!ix.index.count(s.initial)) {
    throw std::invalid_argument(std::string(who) + ": unknown initial state " +
                                s.initial);
  }
  ix.may.resize(ix.states.size());
  ix.must.resize(ix.states.size());
  auto fill = [&](const std::vector<Transition>& ts, auto& adj) {
    for (const auto& t : ts) {
      auto si = ix.index.find(t.src);
      auto di = ix.index.find(t.dst);
      if (si == ix.index.end() || di == ix.index.end()) {
        throw std::invalid_argument(std::string(who) +
                                    ": transition endpoint is not a state: " +
                                    t.src + " -> " + t.dst);
      }
      adj[si->second].emplace_back(t.label, di->second);
    }
    for (auto& row : adj) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
  };
  fill(s.may, ix.may);
  fill(s.must, ix.must);
  return ix;
}

std::vector<char> finite_pairs_bits(const Indexed& a, const Indexed& b) {
  const int n1 = static_cast<int>(a.states.size());
  const int n2 = static_cast<int>(b.states.size());
  std::vector<char> in(static_cast<size_t>(n1) * n2, 1);
  auto pidx = [n2](int i, int j) { return i * n2 + j; };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        if (!in[pidx(i, j)]) continue;
        bool ok = true;
        for (const auto& [k1, t1] : a.may[i]) {
          bool matched = false;
          for (const auto& [k2, t2] : b.may[j]) {
            if (label_dist(k1, k2).is_finite() && in[pidx(t1, t2)]) {
              matched = true;
              break;
            }
          }
          if (!matched) {
            ok = false;
            break;
          }
        }
        if (ok) {
          for (const auto& [k2, t2] : b.must[j]) {
            bool matched = false;
            for (const auto& [k1, t1] : a.must[i]) {
              if (label_dist(k1, k2).is_finite() && in[pidx(t1, t2)]) {
                matched = true;
                break;
              }
            }
            if (!matched) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) {
          in[pidx(i, j)] = 0;
          changed = true;
        }
      }
    }
  }
  return in;
}

namespace {

// Deterministic option order: (response target name, label).
void sort_options(std::vector<Option>& opts, const Indexed& responder) {
  std::sort(opts.begin(), opts.end(), [&](const Option& x, const Option& y) {
    if (responder.states[x.resp_state] != responder.states[y.resp_state])
      return responder.states[x.resp_state] < responder.states[y.resp_state];
    return *x.resp_label < *y.resp_label;
  });
}

}  // namespace

PairProblem build_pair_problem(const Wmts& s1, const Wmts& s2, const char* who) {
  PairProblem p;
  p.a = index_system(s1, who);
  p.b = index_system(s2, who);
  p.n1 = static_cast<int>(p.a.states.size());
  p.n2 = static_cast<int>(p.b.states.size());
  p.start = p.pidx(p.a.index.at(s1.initial), p.b.index.at(s2.initial));
  p.finite = finite_pairs_bits(p.a, p.b);
  p.challenges.resize(p.finite.size());

  for (int i = 0; i < p.n1; ++i) {
    for (int j = 0; j < p.n2; ++j) {
      if (!p.finite[p.pidx(i, j)]) continue;
      auto& out = p.challenges[p.pidx(i, j)];
      for (const auto& [k1, t1] : p.a.may[i]) {
        Challenge c{{}, t1, &k1, true};
        for (const auto& [k2, t2] : p.b.may[j]) {
          ExtReal d = label_dist(k1, k2);
          if (d.is_finite() && p.finite[p.pidx(t1, t2)])
            c.options.push_back({d.value(), p.pidx(t1, t2), t2, &k2});
        }
        sort_options(c.options, p.b);
        out.push_back(std::move(c));
      }
      for (const auto& [k2, t2] : p.b.must[j]) {
        Challenge c{{}, t2, &k2, false};
        for (const auto& [k1, t1] : p.a.must[i]) {
          ExtReal d = label_dist(k1, k2);
          if (d.is_finite() && p.finite[p.pidx(t1, t2)])
            c.options.push_back({d.value(), p.pidx(t1, t2), t1, &k1});
        }
        sort_options(c.options, p.a);
        out.push_back(std::move(c));
      }
    }
  }
  return p;
}

}  // namespace detail

namespace {

DistResult solve_pair_problem(const detail::PairProblem& p, double lambda,
                              double tol) {
  const size_t n = p.finite.size();
  std::vector<double> v(n, 0.0), nv(n, 0.0);
  const double stop = tol * (1.0 - lambda) / lambda;
  double delta = 0.0;

  for (;;) {
    delta = 0.0;
    for (size_t q = 0; q < n; ++q) {
      if (!p.finite[q]) continue;
      double best = 0.0;  // empty sup
      for (const auto& c : p.challenges[q]) {
        double inner = std::numeric_limits<double>::infinity();  // empty inf
        for (const auto& o : c.options)
          inner = std::min(inner, o.cost + lambda * v[o.next]);
        best = std::max(best, inner);
      }
      nv[q] = best;
      delta = std::max(delta, std::abs(nv[q] - v[q]));
    }
    v.swap(nv);
    if (delta <= stop) break;
  }

  DistResult r;
  r.table.lambda = lambda;
  r.table.tolerance = tol;
  r.table.certified_error = lambda * delta / (1.0 - lambda);
  for (int i = 0; i < p.n1; ++i) {
    for (int j = 0; j < p.n2; ++j) {
      size_t q = p.pidx(i, j);
      ExtReal val = p.finite[q] ? ExtReal(v[q]) : ExtReal::infinity();
      r.table.entries[{p.a.states[i], p.b.states[j]}] = val;
    }
  }
  r.value = p.finite[p.start] ? ExtReal(v[p.start]) : ExtReal::infinity();
  return r;
}

}  // namespace

std::set<StatePair> finite_pairs(const Wmts& s1, const Wmts& s2) {
  detail::Indexed a = detail::index_system(s1, "finite_pairs");
  detail::Indexed b = detail::index_system(s2, "finite_pairs");
  std::vector<char> bits = detail::finite_pairs_bits(a, b);
  std::set<StatePair> r;
  for (size_t i = 0; i < a.states.size(); ++i) {
    for (size_t j = 0; j < b.states.size(); ++j) {
      if (bits[i * b.states.size() + j]) r.insert({a.states[i], b.states[j]});
    }
  }
  return r;
}

DistResult modal_dist(const Wmts& s1, const Wmts& s2, DiscountFactor lambda,
                      double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("modal_dist: tolerance must be positive");
  detail::PairProblem p = detail::build_pair_problem(s1, s2, "modal_dist");
  return solve_pair_problem(p, lambda.value(), tol);
}

DistResult impl_dist(const Wmts& i1, const Wmts& i2, DiscountFactor lambda,
                     double tol) {
  if (!is_implementation(i1) || !is_implementation(i2)) {
    throw std::invalid_argument("impl_dist: both arguments must be implementations");
  }
  // On implementations (may = must, point labels) the modal equations
  // coincide with the symmetrized implementation distance.
  detail::PairProblem p = detail::build_pair_problem(i1, i2, "impl_dist");
  return solve_pair_problem(p, lambda.value(), tol);
}

bool refines_eps(const Wmts& s1, const Wmts& s2, double eps,
                 DiscountFactor lambda, double tol) {
  if (eps < 0.0) throw std::invalid_argument("refines_eps: eps must be nonnegative");
  ExtReal d = modal_dist(s1, s2, lambda, tol).value;
  return d <= ExtReal(eps + tol);
}

RefinementFamily family_from_table(const DistTable& table) {
  std::set<double> thresholds;
  for (const auto& [pair, v] : table.entries) {
    if (v.is_finite()) thresholds.insert(v.value());
  }
  RefinementFamily fam;
  for (double t : thresholds) {
    std::set<StatePair> rel;
    for (const auto& [pair, v] : table.entries) {
      if (v <= ExtReal(t)) rel.insert(pair);
    }
    fam.levels.emplace_back(t, std::move(rel));
  }
  return fam;
}

namespace {

// Smallest family threshold whose relation contains the pair.
std::optional<double> min_threshold(const RefinementFamily& fam,
                                    const StatePair& pr) {
  for (const auto& [eps, rel] : fam.levels) {
    if (rel.count(pr)) return eps;
  }
  return std::nullopt;
}

}  // namespace

Diagnostics check_refinement_family(const RefinementFamily& fam, const Wmts& s1,
                                    const Wmts& s2, DiscountFactor lambda,
                                    double slack) {
  Diagnostics d;
  detail::Indexed a = detail::index_system(s1, "check_refinement_family");
  detail::Indexed b = detail::index_system(s2, "check_refinement_family");

  // Structure of the family itself: ascending thresholds, upward closed.
  for (size_t i = 0; i + 1 < fam.levels.size(); ++i) {
    if (fam.levels[i].first > fam.levels[i + 1].first) {
      d.errors.push_back({"family-order", "levels",
                          "thresholds are not ascending"});
      return d;
    }
    for (const auto& pr : fam.levels[i].second) {
      if (!fam.levels[i + 1].second.count(pr)) {
        d.errors.push_back({"family-not-upward-closed",
                            "(" + pr.first + "," + pr.second + ")",
                            "pair missing from a higher threshold"});
        return d;
      }
    }
  }

  auto obligation = [&](double eps, const StatePair& pr, bool may_side) -> bool {
    int i = a.index.at(pr.first), j = b.index.at(pr.second);
    const auto& moves = may_side ? a.may[i] : b.must[j];
    const auto& answers = may_side ? b.may[j] : a.must[i];
    for (const auto& [k, t] : moves) {
      bool matched = false;
      for (const auto& [k2, t2] : answers) {
        ExtReal dk = may_side ? label_dist(k, k2) : label_dist(k2, k);
        if (dk.is_infinite() || dk.value() > eps + slack) continue;
        StatePair next = may_side
                             ? StatePair{a.states[t], b.states[t2]}
                             : StatePair{a.states[t2], b.states[t]};
        auto mt = min_threshold(fam, next);
        if (mt &&
            *mt <= (eps - dk.value()) / lambda.value() + slack) {
          matched = true;
          break;
        }
      }
      if (!matched) {
        d.errors.push_back(
            {may_side ? "unmatched-may" : "unmatched-must",
             "(" + pr.first + "," + pr.second + ") at eps=" + std::to_string(eps),
             std::string(may_side ? "may" : "must") + " step " +
                 to_string(k) + " to " +
                 (may_side ? a.states[t] : b.states[t]) +
                 " has no admissible match"});
        return false;
      }
    }
    return true;
  };

  for (const auto& [eps, rel] : fam.levels) {
    for (const auto& pr : rel) {
      if (!a.index.count(pr.first) || !b.index.count(pr.second)) {
        d.errors.push_back({"unknown-pair", "(" + pr.first + "," + pr.second + ")",
                            "family pair references unknown states"});
        return d;
      }
      if (!obligation(eps, pr, true)) return d;
      if (!obligation(eps, pr, false)) return d;
    }
  }

  auto initial = min_threshold(fam, {s1.initial, s2.initial});
  if (!initial) {
    d.errors.push_back({"initial-missing",
                        "(" + s1.initial + "," + s2.initial + ")",
                        "initial pair is not a member of any level"});
  }
  return d;
}

}  // namespace wmtsq
