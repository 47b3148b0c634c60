#include "tcbivar/ext_nat.hpp"

#include <charconv>

namespace tcb {

std::optional<ExtNat> ExtNat::parse(std::string_view s)
{
    if (s == "inf" || s == "∞")
        return inf();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || v == kInf)
        return std::nullopt;
    return ExtNat{v};
}

ExtNat product_bound(ExtNat a, ExtNat b)
{
    if (a.is_inf() || b.is_inf())
        return ExtNat::inf();
    unsigned __int128 p = static_cast<unsigned __int128>(a.value() + 1) * (b.value() + 1) - 1;
    if (p >= std::numeric_limits<std::uint64_t>::max())
        return ExtNat::inf();
    return ExtNat{static_cast<std::uint64_t>(p)};
}

ExtNat ceil_quotient_bound(ExtNat a, ExtNat b)
{
    if (b.is_inf())
        return ExtNat{0};
    if (a.is_inf())
        return ExtNat::inf();
    std::uint64_t num = a.value() + 1, den = b.value() + 1;
    return ExtNat{(num + den - 1) / den - 1};
}

}  // namespace tcb
