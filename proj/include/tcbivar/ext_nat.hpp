#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace tcb {

/// ℕ ∪ {∞}. Arithmetic saturates at ∞.
class ExtNat {
public:
    constexpr ExtNat() = default;
    constexpr ExtNat(std::uint64_t n) : v_(n < kInf ? n : kInf) {}  // NOLINT(implicit)

    static constexpr ExtNat inf() { return ExtNat{kInf}; }

    constexpr bool is_inf() const { return v_ == kInf; }
    constexpr std::uint64_t value() const { return v_; }

    friend constexpr auto operator<=>(ExtNat, ExtNat) = default;

    friend constexpr ExtNat operator+(ExtNat a, ExtNat b)
    {
        if (a.is_inf() || b.is_inf() || a.v_ > kInf - 1 - b.v_)
            return inf();
        return ExtNat{a.v_ + b.v_};
    }

    /// a - b clamped at 0; ∞ - finite = ∞. Undefined for b = ∞ (returns 0).
    friend constexpr ExtNat monus(ExtNat a, ExtNat b)
    {
        if (b.is_inf())
            return ExtNat{0};
        if (a.is_inf())
            return inf();
        return ExtNat{a.v_ > b.v_ ? a.v_ - b.v_ : 0};
    }

    std::string str() const { return is_inf() ? "inf" : std::to_string(v_); }
    static std::optional<ExtNat> parse(std::string_view s);

private:
    static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t v_ = 0;
};

/// (a+1)(b+1) - 1.
ExtNat product_bound(ExtNat a, ExtNat b);

/// Smallest x with (x+1)(b+1) >= a+1, i.e. ceil((a+1)/(b+1)) - 1.
/// ∞ over finite is ∞; anything over ∞ is 0.
ExtNat ceil_quotient_bound(ExtNat a, ExtNat b);

struct Interval {
    ExtNat lo{0};
    ExtNat hi = ExtNat::inf();

    static Interval exactly(ExtNat v) { return {v, v}; }
    static Interval unknown() { return {}; }

    bool empty() const { return lo > hi; }
    bool is_unknown() const { return lo == ExtNat{0} && hi.is_inf(); }
    bool is_point() const { return lo == hi; }
    bool contains(ExtNat v) const { return lo <= v && v <= hi; }
    Interval meet(const Interval& o) const { return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi}; }

    friend bool operator==(const Interval&, const Interval&) = default;
    std::string str() const { return "[" + lo.str() + "," + hi.str() + "]"; }
};

}  // namespace tcb
