#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wmtsq/distance.hpp"
#include "wmtsq/extreal.hpp"
#include "wmtsq/model.hpp"

namespace wmtsq {

/// Quantitative Hennessy-Milner formula. Immutable tree, shared subterms.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { kTrue, kFalse, kDiamond, kBox, kAnd, kOr };

  Kind kind;
  SpecLabel label;        // diamond/box only
  FormulaPtr left, right; // modality body in left; binary operands in both

  static FormulaPtr tt();
  static FormulaPtr ff();
  static FormulaPtr diamond(SpecLabel l, FormulaPtr body);
  static FormulaPtr box(SpecLabel l, FormulaPtr body);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
};

bool is_disjunction_free(const Formula& phi);

/// Maximum nesting depth of modalities.
int modal_depth(const Formula& phi);

/// Real-valued semantics per state: true is 0, false is inf, conjunction is
/// max, disjunction is min; diamond takes the inf over must steps with
/// finite label distance to the formula label, box the sup over may steps.
std::map<std::string, ExtReal> eval(const Formula& phi, const Wmts& s,
                                    DiscountFactor lambda = DiscountFactor(kDefaultLambda));

ExtReal eval_at_initial(const Formula& phi, const Wmts& s,
                        DiscountFactor lambda = DiscountFactor(kDefaultLambda));

class FormulaParseError : public std::runtime_error {
 public:
  FormulaParseError(int line, int column, const std::string& what)
      : std::runtime_error("formula parse error at " + std::to_string(line) +
                           ":" + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

/// Grammar: tt | ff | <ACTION[LO,HI]> F | [ACTION[LO,HI]] F | F & F | F | F
/// with parentheses; & binds tighter than |, modalities bind tightest;
/// LO/HI are integers or -inf/inf.
FormulaPtr parse_formula(std::string_view text);

/// Round-trips with parse_formula.
std::string to_string(const Formula& phi);

}  // namespace wmtsq
