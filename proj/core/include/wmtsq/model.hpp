#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wmtsq {

/// One endpoint of a weight interval: an integer or an explicit infinity.
/// Infinities are enumerated values, never sentinel integers, so widening
/// and label arithmetic cannot overflow into them by accident.
class Bound {
 public:
  enum class Kind : std::uint8_t { kNegInf = 0, kFinite = 1, kPosInf = 2 };

  constexpr Bound() = default;
  static constexpr Bound finite(long long v) { return Bound(Kind::kFinite, v); }
  static constexpr Bound neg_infinity() { return Bound(Kind::kNegInf, 0); }
  static constexpr Bound pos_infinity() { return Bound(Kind::kPosInf, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_neg_infinity() const { return kind_ == Kind::kNegInf; }
  constexpr bool is_pos_infinity() const { return kind_ == Kind::kPosInf; }
  /// Finite value; only meaningful when is_finite().
  constexpr long long finite_value() const { return value_; }

  friend constexpr bool operator==(const Bound&, const Bound&) = default;
  friend constexpr std::strong_ordering operator<=>(const Bound& a,
                                                    const Bound& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (a.kind_ == Kind::kFinite) return a.value_ <=> b.value_;
    return std::strong_ordering::equal;
  }

 private:
  constexpr Bound(Kind k, long long v) : kind_(k), value_(v) {}
  Kind kind_ = Kind::kFinite;
  long long value_ = 0;
};

std::string to_string(const Bound& b);

/// Closed extended-integer interval [lo, hi] with lo <= hi,
/// lo != +inf and hi != -inf.
class WeightInterval {
 public:
  WeightInterval() : lo_(Bound::finite(0)), hi_(Bound::finite(0)) {}
  /// Throws std::invalid_argument on a malformed pair of bounds.
  WeightInterval(Bound lo, Bound hi);
  static WeightInterval point(long long w) {
    return WeightInterval(Bound::finite(w), Bound::finite(w));
  }
  static WeightInterval universal() {
    return WeightInterval(Bound::neg_infinity(), Bound::pos_infinity());
  }
  /// nullopt instead of throwing; used by parsers.
  static std::optional<WeightInterval> make(Bound lo, Bound hi);

  const Bound& lo() const { return lo_; }
  const Bound& hi() const { return hi_; }

  bool contains(long long w) const;
  /// Interval-inclusion order: other ⊑ this.
  bool includes(const WeightInterval& other) const;
  bool is_point() const { return lo_ == hi_; }

  /// [lo - delta, hi + delta]; infinite endpoints are unchanged.
  WeightInterval widened(long long delta) const;
  /// Smallest interval containing both.
  static WeightInterval hull(const WeightInterval& a, const WeightInterval& b);

  /// Number of integer points, when both endpoints are finite.
  std::optional<long long> point_count() const;

  friend bool operator==(const WeightInterval&, const WeightInterval&) = default;
  friend std::strong_ordering operator<=>(const WeightInterval& a,
                                          const WeightInterval& b) {
    if (auto c = a.lo_ <=> b.lo_; c != 0) return c;
    return a.hi_ <=> b.hi_;
  }

 private:
  Bound lo_, hi_;
};

std::string to_string(const WeightInterval& i);

/// Specification label: an action paired with a weight interval.
struct SpecLabel {
  std::string action;
  WeightInterval interval;

  friend bool operator==(const SpecLabel&, const SpecLabel&) = default;
  friend std::strong_ordering operator<=>(const SpecLabel& a,
                                          const SpecLabel& b) {
    if (auto c = a.action <=> b.action; c != 0) return c;
    return a.interval <=> b.interval;
  }
};

std::string to_string(const SpecLabel& l);

/// Implementation label: an action with a single integer weight.
struct ImplLabel {
  std::string action;
  long long weight = 0;

  SpecLabel to_spec() const {
    return SpecLabel{action, WeightInterval::point(weight)};
  }
  friend bool operator==(const ImplLabel&, const ImplLabel&) = default;
};

/// Label refinement order: same action, interval inclusion.
bool label_refines(const SpecLabel& k, const SpecLabel& l);

struct Transition {
  std::string src;
  SpecLabel label;
  std::string dst;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend std::strong_ordering operator<=>(const Transition& a,
                                          const Transition& b) {
    if (auto c = a.src <=> b.src; c != 0) return c;
    if (auto c = a.label <=> b.label; c != 0) return c;
    return a.dst <=> b.dst;
  }
};

/// A finite weighted modal transition system. Plain data; `normalize` sorts
/// and deduplicates (the relations are sets), `validate` reports every
/// violated invariant rather than repairing it.
struct Wmts {
  std::vector<std::string> states;
  std::string initial;
  std::vector<Transition> may;
  std::vector<Transition> must;

  void normalize();
  static Wmts make(std::vector<std::string> states, std::string initial,
                   std::vector<Transition> may, std::vector<Transition> must);

  friend bool operator==(const Wmts&, const Wmts&) = default;
};

struct Diagnostic {
  std::string code;
  std::string where;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
  bool ok() const { return errors.empty(); }
  std::string summary() const;
};

/// Checks every structural invariant: known initial state, known transition
/// endpoints, non-empty actions, and the covering condition (each must
/// transition lies below a may transition with the same endpoints).
Diagnostics validate(const Wmts& s);

/// Throws std::invalid_argument when validate(s) reports errors.
void ensure_valid(const Wmts& s, const char* who);

/// At most one outgoing may transition per action in every state.
bool is_deterministic(const Wmts& s);

/// may = must and every label is a point with finite weight.
bool is_implementation(const Wmts& s);

/// Sorted set of action names appearing on any transition.
std::vector<std::string> actions_of(const Wmts& s);

}  // namespace wmtsq
