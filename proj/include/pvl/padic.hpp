#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pvl/rational.hpp"

namespace pvl {

// Valuation of a finite-precision scalar: either an exact integer, or
// AtLeast(t) when every stored digit is zero and the true valuation is
// indistinguishable from +infinity at the stored precision.
class Valuation {
public:
    static Valuation exactly(std::int64_t v) { return Valuation(v, false); }
    static Valuation at_least(std::int64_t t) { return Valuation(t, true); }

    bool is_exact() const { return !at_least_; }
    bool is_at_least() const { return at_least_; }

    // The exact value; only meaningful when is_exact().
    std::int64_t value() const;

    // Best provable lower bound in both cases.
    std::int64_t lower_bound() const { return bound_; }

    bool definitely_ge(std::int64_t g) const { return bound_ >= g; }
    bool definitely_lt(std::int64_t g) const { return !at_least_ && bound_ < g; }

    bool operator==(const Valuation&) const = default;

    // Representation order: by lower bound, exact before at-least on ties.
    bool operator<(const Valuation& o) const {
        if (bound_ != o.bound_) return bound_ < o.bound_;
        return !at_least_ && o.at_least_;
    }

    // Whether the two judgments can describe the same underlying scalar.
    bool consistent_with(const Valuation& o) const;

    std::string to_string() const;
    static Valuation parse(std::string_view text);

    friend Valuation operator+(const Valuation& a, const Valuation& b);

private:
    Valuation(std::int64_t b, bool al) : bound_(b), at_least_(al) {}
    std::int64_t bound_;
    bool at_least_;
};

// Sound lower approximation of min: when one side is only a bound and the
// other is exact but larger, all we can assert is the bound.
Valuation val_min(const Valuation& a, const Valuation& b);

// A p-adic scalar at finite precision: value p^{-shift} * u where u is
// known modulo p^m through m base-p digits, least significant first.
// Values are immutable; all operations are pure.
//
// Precision discipline: addition aligns both operands to the larger shift
// and truncates to the overlapping digit window; multiplication factors
// out the stored unit parts and keeps as many digits of their product as
// both operands support. Results never claim more digits than the inputs
// determine. Digit vectors are capped at 64.
class PadicApprox {
public:
    static constexpr std::size_t kMaxPrecision = 64;

    PadicApprox(std::int64_t p, std::int64_t shift, std::vector<std::uint32_t> digits);

    static PadicApprox zero(std::int64_t p, std::size_t precision, std::int64_t shift = 0);
    // Reduces an integer (possibly negative) mod p^precision, shift 0.
    static PadicApprox from_integer(std::int64_t p, const BigInt& value, std::size_t precision);

    std::int64_t prime() const { return p_; }
    std::int64_t shift() const { return shift_; }
    const std::vector<std::uint32_t>& digits() const { return digits_; }
    std::size_t precision() const { return digits_.size(); }

    bool is_zero_at_precision() const;

    // Canonical form: while the lowest digit is zero and shift > 0, trades
    // one unit of shift for one digit of precision. All-zero vectors are
    // legal and stay as they are.
    PadicApprox normalized() const;

    Valuation val() const;

    // The stored unit part as an integer in [0, p^m).
    BigInt unit_as_integer() const;

    // Equality requires identical (p, shift, precision) and digits; values
    // at different declared precisions never compare equal.
    bool operator==(const PadicApprox& o) const = default;

    // Text form `p^k * (d0 + d1*p + d2*p^2 + ...) [prec m]` with k = -shift.
    std::string to_text() const;
    static PadicApprox parse_text(std::string_view text);

private:
    std::int64_t p_;
    std::int64_t shift_;
    std::vector<std::uint32_t> digits_;
};

PadicApprox add(const PadicApprox& x, const PadicApprox& y);
PadicApprox neg(const PadicApprox& x);
PadicApprox sub(const PadicApprox& x, const PadicApprox& y);
PadicApprox mul(const PadicApprox& x, const PadicApprox& y);

// Inverse of a unit-times-p^{-shift}: requires the lowest digit to be
// nonzero. Digit-by-digit Hensel lift of the inverse of the unit part.
PadicApprox inv_unit(const PadicApprox& x);

// The set {x : v(x - center) >= radius}.
struct Ball {
    PadicApprox center;
    std::int64_t radius;
};

// Decidable only when the aligned difference carries at least `radius`
// digits past its shift; otherwise throws "insufficient precision".
bool ball_contains(const Ball& ball, const PadicApprox& x);

}  // namespace pvl
