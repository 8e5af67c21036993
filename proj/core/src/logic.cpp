#include "wmtsq/logic.hpp"

#include <algorithm>
#include <cctype>

#include "fixpoint.hpp"

namespace wmtsq {

FormulaPtr Formula::tt() {
  return std::make_shared<Formula>(Formula{Kind::kTrue, {}, nullptr, nullptr});
}
FormulaPtr Formula::ff() {
  return std::make_shared<Formula>(Formula{Kind::kFalse, {}, nullptr, nullptr});
}
FormulaPtr Formula::diamond(SpecLabel l, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{Kind::kDiamond, std::move(l), std::move(body), nullptr});
}
FormulaPtr Formula::box(SpecLabel l, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{Kind::kBox, std::move(l), std::move(body), nullptr});
}
FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(
      Formula{Kind::kAnd, {}, std::move(a), std::move(b)});
}
FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(
      Formula{Kind::kOr, {}, std::move(a), std::move(b)});
}

bool is_disjunction_free(const Formula& phi) {
  switch (phi.kind) {
    case Formula::Kind::kOr:
      return false;
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return true;
    case Formula::Kind::kDiamond:
    case Formula::Kind::kBox:
      return is_disjunction_free(*phi.left);
    case Formula::Kind::kAnd:
      return is_disjunction_free(*phi.left) && is_disjunction_free(*phi.right);
  }
  return true;
}

int modal_depth(const Formula& phi) {
  switch (phi.kind) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return 0;
    case Formula::Kind::kDiamond:
    case Formula::Kind::kBox:
      return 1 + modal_depth(*phi.left);
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
      return std::max(modal_depth(*phi.left), modal_depth(*phi.right));
  }
  return 0;
}

namespace {

ExtReal eval_node(const Formula& phi, const detail::Indexed& ix, int state,
                  double lambda,
                  std::map<std::pair<const Formula*, int>, ExtReal>& memo) {
  auto key = std::make_pair(&phi, state);
  auto hit = memo.find(key);
  if (hit != memo.end()) return hit->second;

  ExtReal v(0.0);
  switch (phi.kind) {
    case Formula::Kind::kTrue:
      v = ExtReal(0.0);
      break;
    case Formula::Kind::kFalse:
      v = ExtReal::infinity();
      break;
    case Formula::Kind::kAnd:
      v = ext_max(eval_node(*phi.left, ix, state, lambda, memo),
                  eval_node(*phi.right, ix, state, lambda, memo));
      break;
    case Formula::Kind::kOr:
      v = ext_min(eval_node(*phi.left, ix, state, lambda, memo),
                  eval_node(*phi.right, ix, state, lambda, memo));
      break;
    case Formula::Kind::kDiamond: {
      v = ExtReal::infinity();  // empty inf
      for (const auto& [k, t] : ix.must[state]) {
        ExtReal d = label_dist(k, phi.label);
        if (d.is_infinite()) continue;
        v = ext_min(v, d + lambda * eval_node(*phi.left, ix, t, lambda, memo));
      }
      break;
    }
    case Formula::Kind::kBox: {
      v = ExtReal(0.0);  // empty sup
      for (const auto& [k, t] : ix.may[state]) {
        ExtReal d = label_dist(k, phi.label);
        if (d.is_infinite()) continue;
        v = ext_max(v, d + lambda * eval_node(*phi.left, ix, t, lambda, memo));
      }
      break;
    }
  }
  memo.emplace(key, v);
  return v;
}

}  // namespace

std::map<std::string, ExtReal> eval(const Formula& phi, const Wmts& s,
                                    DiscountFactor lambda) {
  detail::Indexed ix = detail::index_system(s, "eval");
  std::map<std::pair<const Formula*, int>, ExtReal> memo;
  std::map<std::string, ExtReal> out;
  for (size_t i = 0; i < ix.states.size(); ++i) {
    out[ix.states[i]] =
        eval_node(phi, ix, static_cast<int>(i), lambda.value(), memo);
  }
  return out;
}

ExtReal eval_at_initial(const Formula& phi, const Wmts& s,
                        DiscountFactor lambda) {
  detail::Indexed ix = detail::index_system(s, "eval");
  std::map<std::pair<const Formula*, int>, ExtReal> memo;
  return eval_node(phi, ix, ix.index.at(s.initial), lambda.value(), memo);
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw FormulaParseError(line, col, what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  int peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : -1;
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (eat('|')) f = Formula::disj(f, parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (eat('&')) f = Formula::conj(f, parse_unary());
    return f;
  }

  std::string parse_action() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '.' || text_[pos_] == '-')) {
      // A '-' only belongs to the action if it is not the start of a bound.
      if (text_[pos_] == '-') break;
      ++pos_;
    }
    if (pos_ == start) fail("expected an action name");
    return std::string(text_.substr(start, pos_ - start));
  }

  Bound parse_bound(bool is_lo) {
    skip_ws();
    size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (text_.substr(pos_, 3) == "inf") {
      pos_ += 3;
      if (negative) return Bound::neg_infinity();
      return Bound::pos_infinity();
    }
    long long v = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      any = true;
      ++pos_;
    }
    if (!any) {
      pos_ = start;
      fail(is_lo ? "expected a lower bound" : "expected an upper bound");
    }
    return Bound::finite(negative ? -v : v);
  }

  SpecLabel parse_label() {
    std::string action = parse_action();
    expect('[', "to open the interval");
    Bound lo = parse_bound(true);
    expect(',', "between interval bounds");
    Bound hi = parse_bound(false);
    expect(']', "to close the interval");
    auto interval = WeightInterval::make(lo, hi);
    if (!interval) fail("malformed interval");
    return SpecLabel{std::move(action), *interval};
  }

  FormulaPtr parse_unary() {
    int c = peek();
    if (c == '<') {
      ++pos_;
      SpecLabel l = parse_label();
      expect('>', "to close the diamond");
      return Formula::diamond(std::move(l), parse_unary());
    }
    if (c == '[') {
      ++pos_;
      SpecLabel l = parse_label();
      expect(']', "to close the box");
      return Formula::box(std::move(l), parse_unary());
    }
    if (c == '(') {
      ++pos_;
      FormulaPtr f = parse_or();
      expect(')', "to close the group");
      return f;
    }
    skip_ws();
    if (text_.substr(pos_, 2) == "tt") {
      pos_ += 2;
      return Formula::tt();
    }
    if (text_.substr(pos_, 2) == "ff") {
      pos_ += 2;
      return Formula::ff();
    }
    fail("expected a formula");
  }
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Formula& phi) {
  // Modality bodies are unary in the grammar; binary bodies need parentheses.
  auto body = [](const Formula& f) {
    std::string s = to_string(f);
    if (f.kind == Formula::Kind::kAnd || f.kind == Formula::Kind::kOr)
      return "(" + s + ")";
    return s;
  };
  switch (phi.kind) {
    case Formula::Kind::kTrue:
      return "tt";
    case Formula::Kind::kFalse:
      return "ff";
    case Formula::Kind::kDiamond:
      return "<" + to_string(phi.label) + "> " + body(*phi.left);
    case Formula::Kind::kBox:
      return "[" + to_string(phi.label) + "] " + body(*phi.left);
    case Formula::Kind::kAnd: {
      auto wrap = [](const Formula& f) {
        std::string s = to_string(f);
        return f.kind == Formula::Kind::kOr ? "(" + s + ")" : s;
      };
      return wrap(*phi.left) + " & " + wrap(*phi.right);
    }
    case Formula::Kind::kOr:
      return to_string(*phi.left) + " | " + to_string(*phi.right);
  }
  return "";
}

}  // namespace wmtsq
