#include "wmtsq/exact.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <vector>

#include "fixpoint.hpp"

namespace wmtsq {

using Integer = boost::multiprecision::cpp_int;

std::optional<Rational> parse_decimal_rational(std::string_view text) {
  size_t pos = 0;
  auto peek = [&]() -> int { return pos < text.size() ? text[pos] : -1; };
  bool negative = false;
  if (peek() == '+' || peek() == '-') negative = text[pos++] == '-';

  Integer mantissa = 0;
  long long frac_digits = 0;
  bool any_digit = false;
  while (std::isdigit(peek())) {
    mantissa = mantissa * 10 + (text[pos++] - '0');
    any_digit = true;
  }
  if (peek() == '.') {
    ++pos;
    while (std::isdigit(peek())) {
      mantissa = mantissa * 10 + (text[pos++] - '0');
      ++frac_digits;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;

  long long exponent = 0;
  if (peek() == 'e' || peek() == 'E') {
    ++pos;
    bool eneg = false;
    if (peek() == '+' || peek() == '-') eneg = text[pos++] == '-';
    if (!std::isdigit(peek())) return std::nullopt;
    while (std::isdigit(peek())) exponent = exponent * 10 + (text[pos++] - '0');
    if (eneg) exponent = -exponent;
  }
  if (pos != text.size()) return std::nullopt;

  Rational r(mantissa, 1);
  long long shift = exponent - frac_digits;
  Integer pow10 = 1;
  for (long long i = 0; i < std::llabs(shift); ++i) pow10 *= 10;
  if (shift >= 0)
    r *= Rational(pow10, 1);
  else
    r /= Rational(pow10, 1);
  if (negative) r = -r;
  return r;
}

std::string rational_to_decimal(const Rational& r, int digits) {
  Rational v = r;
  bool negative = v < 0;
  if (negative) v = -v;
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Integer num = boost::multiprecision::numerator(v) * scale * 2 +
                boost::multiprecision::denominator(v);
  Integer scaled = num / (boost::multiprecision::denominator(v) * 2);
  Integer whole = scaled / scale;
  Integer frac = scaled % scale;
  std::string fs = frac.str();
  fs.insert(fs.begin(), digits - fs.size(), '0');
  return (negative ? "-" : "") + whole.str() + "." + fs;
}

namespace {

// Exact label distance for an admissible (finite) option.
Integer exact_cost(const SpecLabel& refiner, const SpecLabel& abstractor) {
  Integer best = 0;
  const auto& k = refiner.interval;
  const auto& l = abstractor.interval;
  if (l.lo().is_finite() && k.lo().is_finite()) {
    Integer gap = Integer(l.lo().finite_value()) - Integer(k.lo().finite_value());
    best = std::max(best, gap);
  }
  if (k.hi().is_finite() && l.hi().is_finite()) {
    Integer gap = Integer(k.hi().finite_value()) - Integer(l.hi().finite_value());
    best = std::max(best, gap);
  }
  return best;
}

struct ExactProblem {
  // Per finite pair: challenges, each with options (cost, next pair).
  struct Opt {
    Rational cost;
    int next;
  };
  std::vector<std::vector<std::vector<Opt>>> challenges;
  std::vector<char> finite;
  std::vector<int> order;  // finite pair indices
  int start = 0;
};

ExactProblem lift(const detail::PairProblem& p) {
  ExactProblem e;
  e.finite = p.finite;
  e.start = p.start;
  e.challenges.resize(p.finite.size());
  for (size_t q = 0; q < p.finite.size(); ++q) {
    if (!p.finite[q]) continue;
    e.order.push_back(static_cast<int>(q));
    for (const auto& c : p.challenges[q]) {
      std::vector<ExactProblem::Opt> opts;
      opts.reserve(c.options.size());
      for (const auto& o : c.options) {
        // May challenges carry the refiner label; must challenges answer
        // with it.
        Integer cost = c.may_side ? exact_cost(*c.ch_label, *o.resp_label)
                                  : exact_cost(*o.resp_label, *c.ch_label);
        opts.push_back({Rational(cost, 1), o.next});
      }
      e.challenges[q].push_back(std::move(opts));
    }
  }
  return e;
}

// Value of a full positional profile via its functional graph.
std::vector<Rational> evaluate_profile(const ExactProblem& e,
                                       const std::vector<int>& chal,
                                       const std::vector<int>& resp,
                                       const Rational& lambda) {
  const size_t n = e.finite.size();
  std::vector<Rational> v(n, Rational(0));
  std::vector<int> state(n, 0);  // 0 unseen, 1 on path, 2 done
  for (int root : e.order) {
    if (state[root] == 2) continue;
    std::vector<int> path;
    int cur = root;
    while (true) {
      if (e.challenges[cur].empty()) {  // terminal: value 0
        state[cur] = 2;
        break;
      }
      if (state[cur] == 2) break;
      if (state[cur] == 1) {
        // Cycle: cur appears on the path; fold the discounted loop.
        size_t k = path.size();
        size_t begin = 0;
        while (path[begin] != cur) ++begin;
        size_t len = k - begin;
        Rational sum(0), pow(1);
        for (size_t i = begin; i < k; ++i) {
          int q = path[i];
          const auto& o = e.challenges[q][chal[q]][resp[q]];
          sum += pow * o.cost;
          pow *= lambda;
        }
        Rational lpow(1);
        for (size_t i = 0; i < len; ++i) lpow *= lambda;
        v[cur] = sum / (Rational(1) - lpow);
        state[cur] = 2;
        break;
      }
      state[cur] = 1;
      path.push_back(cur);
      cur = e.challenges[cur][chal[cur]][resp[cur]].next;
    }
    // Unwind the path backwards from the resolved node.
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      int q = *it;
      if (state[q] == 2) continue;
      const auto& o = e.challenges[q][chal[q]][resp[q]];
      v[q] = o.cost + lambda * v[o.next];
      state[q] = 2;
    }
  }
  return v;
}

Rational response_value(const ExactProblem& e, const std::vector<Rational>& v,
                        int q, int c, int r, const Rational& lambda) {
  const auto& o = e.challenges[q][c][r];
  return o.cost + lambda * v[o.next];
}

}  // namespace

namespace {

ExactDist solve_exact(const detail::PairProblem& p, const Rational& lambda) {
  if (!(lambda > 0 && lambda < 1)) {
    throw std::invalid_argument("exact solve: lambda must lie strictly in (0,1)");
  }
  ExactProblem e = lift(p);
  if (!e.finite[e.start]) return {true, Rational(0)};

  const size_t n = e.finite.size();
  std::vector<int> chal(n, 0), resp(n, 0);

  // Strategy iteration: exact minimizer best response per challenger
  // strategy, then greedy challenger improvement; stable profiles satisfy
  // the Bellman equations exactly.
  for (int outer = 0; outer < 100000; ++outer) {
    // Minimizer policy iteration on the chosen challenges.
    for (int inner = 0;; ++inner) {
      if (inner > 100000)
        throw std::runtime_error("exact solve: response iteration diverged");
      std::vector<Rational> v = evaluate_profile(e, chal, resp, lambda);
      bool changed = false;
      for (int q : e.order) {
        if (e.challenges[q].empty()) continue;
        int c = chal[q];
        int best = resp[q];
        Rational bestv = response_value(e, v, q, c, best, lambda);
        for (size_t r = 0; r < e.challenges[q][c].size(); ++r) {
          Rational rv = response_value(e, v, q, c, static_cast<int>(r), lambda);
          if (rv < bestv) {
            bestv = rv;
            best = static_cast<int>(r);
          }
        }
        if (best != resp[q]) {
          resp[q] = best;
          changed = true;
        }
      }
      if (!changed) break;
    }

    std::vector<Rational> v = evaluate_profile(e, chal, resp, lambda);
    bool changed = false;
    for (int q : e.order) {
      if (e.challenges[q].empty()) continue;
      int bestc = chal[q];
      Rational bestv = Rational(-1);
      for (size_t c = 0; c < e.challenges[q].size(); ++c) {
        Rational inner;
        bool first = true;
        for (size_t r = 0; r < e.challenges[q][c].size(); ++r) {
          Rational rv = response_value(e, v, q, static_cast<int>(c),
                                       static_cast<int>(r), lambda);
          if (first || rv < inner) {
            inner = rv;
            first = false;
          }
        }
        if (bestv < 0 || inner > bestv) {
          bestv = inner;
          bestc = static_cast<int>(c);
        }
      }
      if (bestc != chal[q]) {
        chal[q] = bestc;
        resp[q] = 0;
        changed = true;
      }
    }
    if (!changed) {
      return {false, v[e.start]};
    }
  }
  throw std::runtime_error("exact solve: challenge iteration diverged");
}

}  // namespace

ExactDist exact_modal_dist(const Wmts& s1, const Wmts& s2,
                           const Rational& lambda) {
  detail::PairProblem p = detail::build_pair_problem(s1, s2, "exact_modal_dist");
  return solve_exact(p, lambda);
}

ExactDist exact_impl_dist(const Wmts& i1, const Wmts& i2,
                          const Rational& lambda) {
  if (!is_implementation(i1) || !is_implementation(i2)) {
    throw std::invalid_argument(
        "exact_impl_dist: both arguments must be implementations");
  }
  detail::PairProblem p = detail::build_pair_problem(i1, i2, "exact_impl_dist");
  return solve_exact(p, lambda);
}

}  // namespace wmtsq
