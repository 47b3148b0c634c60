#include "tcbivar/engine.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

namespace tcb {

const std::vector<RuleInfo>& rule_table()
{
    static const std::vector<RuleInfo> table = {
        {"R1", "TC(f,g) = TC(g,f) and TCH(f,g) = TCH(g,f)"},
        {"R2", "(TC(f,g)+1)(sec(f×g)+1) >= TC(Z)+1"},
        {"R3", "sec(f×g) <= sec(f)+sec(g) over a normal product; sec(f×g) = 0 when f, g have strict sections"},
        {"R4", "TC(f,g) >= TC(Z) when f and g have strict global sections"},
        {"R5", "TC(f×f',g×g') <= TC(f,g)+TC(f',g') over normal domains"},
        {"R6", "TC(f×f',g×g') >= max(TC(f,g),TC(f',g'))"},
        {"R7", "TC(w∘f,w∘g) <= TC(f,g), with equality when w has a retraction"},
        {"R8",
         "(TC(f∘u,g∘v)+1)(sec(u×v)+1) >= TC(f,g)+1; TC(f∘u,g∘v) <= TC(f,g) for fibrations u, v; equality when "
         "they also have sections"},
        {"R9", "TC(f,g) >= lcp and TCH(f,g) >= lcp of the bar generators"},
        {"R10", "TC(f,g) <= TC(f) when g is a surjective fibration"},
        {"R11", "TCH(f,g) <= TC(f,g), with equality when f and g are fibrations"},
        {"R12", "D(f,g) <= TCH(f,g) <= D(f,g)+TC(X), the upper bound for normal X×X"},
        {"R13", "TCH(f,g) <= min(TCH(f),TCH(g))"},
        {"R14", "TCH(f,g) <= TC(Z); max(cat(f),cat(g)) <= TCH(f,g) <= cat(f×g) for path-connected Z"},
        {"R15", "TCH(f,g) = 0 iff f and g are nullhomotopic, for path-connected Z"},
        {"R16", "TCH(f,g) = cat(g) when f is nullhomotopic and Z is path-connected, and symmetrically"},
        {"R17", "TCH(f∘u,g∘v) <= TCH(f,g) and TCH(w∘f,w∘g) <= TCH(f,g)"},
        {"R18", "TCH(f,g) = TC(Z) when f and g have right homotopy inverses"},
        {"R19", "TCH(f,g) = cat(δ_{f,g}) for a path-connected H-group Z"},
        {"R20", "TC(f,g) >= 1 unless f and g are both nullhomotopic"},
        {"R21", "TC(f,g) = inf for a non-synchronizable pair; synchronizability from images, surjections and fibrations"},
        {"R22", "secat(f) <= sec(f), with equality for a fibration"},
        {"R23", "TC(f) = TC(f,id_Z), TCH(f) = TCH(f,id_Z) and TCH(f) <= TC(f)"},
        {"R24", "TC(f×f',g×g') = TC(f,g) when TC(f',g') = 0"},
        {"R25", "TCH(f,g) = TCH(f',g') when f ≃ f' and g ≃ g'"},
        {"R26", "TCH(f,g) <= TCH(f,h)+TCH(h,g) for a common normal domain"},
        {"R27", "TC(f,g) = TC(f) when g is a fibration with a global section"},
        {"R28", "TC(f,g) >= TC(g) when g is a fibration and f has a homotopy section; equality if f is a fibration"},
        {"R29", "TC(f,g) = TC(f',g) when f, f' are fibrewise equivalent and g is a fibration"},
    };
    return table;
}

std::string_view rule_anchor(std::string_view id)
{
    for (const auto& r : rule_table())
        if (id == r.id)
            return r.anchor;
    return {};
}

namespace {

enum class Target : std::uint8_t { Pair, Map, Product };

struct Instance {
    int rule;
    Target target;
    std::uint32_t node;
};

using Conds = std::vector<std::string>;

// One rule application context: every helper attempts a single tightening
// and reports whether it happened.
class Rules {
public:
    explicit Rules(ProblemGraph& g) : g_(g) {}

    bool fire(const Instance& inst)
    {
        rule_ = fmt::format("R{}", inst.rule);
        anchor_ = std::string(rule_anchor(rule_));
        if (inst.target == Target::Map)
            return inst.rule == 22 ? r22(inst.node) : r23_map(inst.node);
        if (inst.target == Target::Product)
            return r3(inst.node);
        const std::uint32_t p = inst.node;
        switch (inst.rule) {
        case 1: return r1(p);
        case 2: return r2(p);
        case 4: return r4(p);
        case 5: return r5(p);
        case 6: return r6(p);
        case 7: return r7(p);
        case 8: return r8(p);
        case 9: return r9(p);
        case 10: return r10(p);
        case 11: return r11(p);
        case 12: return r12(p);
        case 13: return r13(p);
        case 14: return r14(p);
        case 15: return r15(p);
        case 16: return r16(p);
        case 17: return r17(p);
        case 18: return r18(p);
        case 19: return r19(p);
        case 20: return r20(p);
        case 21: return r21(p);
        case 23: return r23_pair(p);
        case 24: return r24(p);
        case 25: return r25(p);
        case 26: return r26(p);
        case 27: return r27(p);
        case 28: return r28(p);
        case 29: return r29(p);
        default: return false;
        }
    }

private:
    // slots

    const Interval& v(SlotId s) const { return g_.value(s); }
    Premise lo(SlotId s) const { return {s, Side::Lo, v(s)}; }
    Premise hi(SlotId s) const { return {s, Side::Hi, v(s)}; }

    SlotId space_q(std::uint32_t s, Quantity q) const { return g_.require_slot(NodeKind::Space, s, q); }
    SlotId map_q(std::uint32_t m, Quantity q) const { return g_.require_slot(NodeKind::Map, m, q); }
    SlotId pair_q(std::uint32_t p, Quantity q) const { return g_.require_slot(NodeKind::Pair, p, q); }
    SlotId prod_q(std::uint32_t a, std::uint32_t b, Quantity q) const
    {
        return g_.require_slot(NodeKind::Product, *g_.find_product(a, b), q);
    }

    const MapNode& mp(std::uint32_t m) const { return g_.map(m); }
    const SpaceNode& sp(std::uint32_t s) const { return g_.space(s); }
    const PairNode& pr(std::uint32_t p) const { return g_.pair(p); }
    std::string id(std::uint32_t m) const { return mp(m).id; }
    std::uint32_t codomain(std::uint32_t p) const { return mp(pr(p).f).codomain; }

    // tightening primitives

    bool lower(SlotId s, ExtNat x, std::vector<Premise> prem, Conds conds = {})
    {
        if (x <= v(s).lo)
            return false;
        return g_.tighten(s, {x, ExtNat::inf()}, rule_, anchor_, std::move(prem), std::move(conds));
    }

    bool upper(SlotId s, ExtNat x, std::vector<Premise> prem, Conds conds = {})
    {
        if (x >= v(s).hi)
            return false;
        return g_.tighten(s, {ExtNat{0}, x}, rule_, anchor_, std::move(prem), std::move(conds));
    }

    // a <= b
    bool le(SlotId a, SlotId b, const Conds& conds = {})
    {
        return upper(a, v(b).hi, {hi(b)}, conds) || lower(b, v(a).lo, {lo(a)}, conds);
    }

    bool eq(SlotId a, SlotId b, const Conds& conds = {}) { return le(a, b, conds) || le(b, a, conds); }

    // a <= b + c
    bool le_sum(SlotId a, SlotId b, SlotId c, const Conds& conds = {})
    {
        if (upper(a, v(b).hi + v(c).hi, {hi(b), hi(c)}, conds))
            return true;
        if (!v(c).hi.is_inf() && lower(b, monus(v(a).lo, v(c).hi), {lo(a), hi(c)}, conds))
            return true;
        return !v(b).hi.is_inf() && lower(c, monus(v(a).lo, v(b).hi), {lo(a), hi(b)}, conds);
    }

    // (a+1)(b+1) >= c+1
    bool prod_ge(SlotId a, SlotId b, SlotId c, const Conds& conds = {})
    {
        return lower(a, ceil_quotient_bound(v(c).lo, v(b).hi), {lo(c), hi(b)}, conds) ||
               lower(b, ceil_quotient_bound(v(c).lo, v(a).hi), {lo(c), hi(a)}, conds) ||
               upper(c, product_bound(v(a).hi, v(b).hi), {hi(a), hi(b)}, conds);
    }

    // nullhomotopy status

    bool is_null(std::uint32_t m) const { return v(map_q(m, Quantity::Cat)).hi == ExtNat{0}; }

    /// Reason f is known not nullhomotopic, if any.
    std::optional<std::string> not_null(std::uint32_t m, std::vector<Premise>& prem) const
    {
        const MapNode& n = mp(m);
        if (n.flags.not_nullhomotopic)
            return fmt::format("{} declared not nullhomotopic", n.id);
        if (n.hom && !n.hom->vanishes_in_positive_degrees())
            return fmt::format("{}* is nonzero in positive degree", n.id);
        SlotId cat = map_q(m, Quantity::Cat);
        if (v(cat).lo >= ExtNat{1}) {
            prem.push_back(lo(cat));
            return fmt::format("cat({}) >= 1", n.id);
        }
        return std::nullopt;
    }

    bool path_connected_target(std::uint32_t p) const { return sp(codomain(p)).flags.path_connected; }

    // rules

    bool r1(std::uint32_t p)
    {
        auto q = g_.find_pair(pr(p).g, pr(p).f);
        if (!q || *q == p)
            return false;
        Conds c{fmt::format("{} is ({},{}) swapped", pr(*q).id, id(pr(p).f), id(pr(p).g))};
        return eq(pair_q(p, Quantity::TC), pair_q(*q, Quantity::TC), c) ||
               eq(pair_q(p, Quantity::TCH), pair_q(*q, Quantity::TCH), c);
    }

    bool r2(std::uint32_t p)
    {
        return prod_ge(pair_q(p, Quantity::TC), prod_q(pr(p).f, pr(p).g, Quantity::Sec),
                       space_q(codomain(p), Quantity::TC));
    }

    bool r3(std::uint32_t n)
    {
        const ProductNode& node = g_.products()[n];
        const MapNode& a = mp(node.a);
        const MapNode& b = mp(node.b);
        SlotId s = g_.require_slot(NodeKind::Product, n, Quantity::Sec);
        if (a.flags.strict_section && b.flags.strict_section &&
            upper(s, 0, {}, {fmt::format("{} and {} have strict global sections", a.id, b.id)}))
            return true;
        if (!sp(a.codomain).flags.normal || !sp(b.codomain).flags.normal)
            return false;
        return le_sum(s, map_q(node.a, Quantity::Sec), map_q(node.b, Quantity::Sec),
                      {fmt::format("{}×{} is normal", sp(a.codomain).id, sp(b.codomain).id)});
    }

    bool r4(std::uint32_t p)
    {
        const auto& f = mp(pr(p).f);
        const auto& g = mp(pr(p).g);
        if (!f.flags.strict_section || !g.flags.strict_section)
            return false;
        return le(space_q(codomain(p), Quantity::TC), pair_q(p, Quantity::TC),
                  {fmt::format("{} and {} have strict global sections", f.id, g.id)});
    }

    // Q = (f×f', g×g') with P = (f,g), P' = (f',g') declared
    std::optional<std::pair<std::uint32_t, std::uint32_t>> product_factors(std::uint32_t q) const
    {
        const auto& fp = mp(pr(q).f).product;
        const auto& gp = mp(pr(q).g).product;
        if (!fp || !gp)
            return std::nullopt;
        auto p1 = g_.find_pair(fp->first, gp->first);
        auto p2 = g_.find_pair(fp->second, gp->second);
        if (!p1 || !p2)
            return std::nullopt;
        return std::pair{*p1, *p2};
    }

    bool normal_domains(std::uint32_t p) const
    {
        return sp(mp(pr(p).f).domain).flags.normal && sp(mp(pr(p).g).domain).flags.normal;
    }

    bool r5(std::uint32_t q)
    {
        auto fac = product_factors(q);
        if (!fac || !normal_domains(fac->first) || !normal_domains(fac->second))
            return false;
        return le_sum(pair_q(q, Quantity::TC), pair_q(fac->first, Quantity::TC), pair_q(fac->second, Quantity::TC),
                      {"domains are normal"});
    }

    bool r6(std::uint32_t q)
    {
        auto fac = product_factors(q);
        if (!fac)
            return false;
        return le(pair_q(fac->first, Quantity::TC), pair_q(q, Quantity::TC)) ||
               le(pair_q(fac->second, Quantity::TC), pair_q(q, Quantity::TC));
    }

    bool r24(std::uint32_t q)
    {
        auto fac = product_factors(q);
        if (!fac || !normal_domains(fac->first) || !normal_domains(fac->second))
            return false;
        SlotId tq = pair_q(q, Quantity::TC);
        for (auto [keep, zero] : {std::pair{fac->first, fac->second}, std::pair{fac->second, fac->first}}) {
            SlotId tz = pair_q(zero, Quantity::TC);
            if (v(tz).hi != ExtNat{0})
                continue;
            Conds c{fmt::format("TC({}) = 0", pr(zero).id)};
            SlotId tk = pair_q(keep, Quantity::TC);
            if (upper(tq, v(tk).hi, {hi(tk), hi(tz)}, c) || lower(tk, v(tq).lo, {lo(tq), hi(tz)}, c))
                return true;
        }
        return false;
    }

    // P' = (w∘f, w∘g): returns P = (f,g) and w
    std::optional<std::pair<std::uint32_t, std::uint32_t>> post_composed(std::uint32_t p) const
    {
        const auto& fc = mp(pr(p).f).composition;
        const auto& gc = mp(pr(p).g).composition;
        if (!fc || !gc || fc->first != gc->first)
            return std::nullopt;
        auto base = g_.find_pair(fc->second, gc->second);
        if (!base)
            return std::nullopt;
        return std::pair{*base, fc->first};
    }

    // P' = (f∘u, g∘v): returns P = (f,g)
    std::optional<std::uint32_t> pre_composed(std::uint32_t p) const
    {
        const auto& fc = mp(pr(p).f).composition;
        const auto& gc = mp(pr(p).g).composition;
        if (!fc || !gc)
            return std::nullopt;
        return g_.find_pair(fc->first, gc->first);
    }

    bool r7(std::uint32_t p)
    {
        auto pc = post_composed(p);
        if (!pc)
            return false;
        auto [base, w] = *pc;
        Conds c{fmt::format("{} = ({}∘{}, {}∘{})", pr(p).id, id(w), id(pr(base).f), id(w), id(pr(base).g))};
        if (le(pair_q(p, Quantity::TC), pair_q(base, Quantity::TC), c))
            return true;
        if (!mp(w).flags.retraction)
            return false;
        c.push_back(fmt::format("{} has a retraction", id(w)));
        return le(pair_q(base, Quantity::TC), pair_q(p, Quantity::TC), c);
    }

    bool r8(std::uint32_t p)
    {
        auto base = pre_composed(p);
        if (!base)
            return false;
        std::uint32_t u = mp(pr(p).f).composition->second;
        std::uint32_t w = mp(pr(p).g).composition->second;
        Conds c{fmt::format("{} = ({}∘{}, {}∘{})", pr(p).id, id(pr(*base).f), id(u), id(pr(*base).g), id(w))};
        SlotId tp = pair_q(p, Quantity::TC);
        SlotId tb = pair_q(*base, Quantity::TC);
        if (prod_ge(tp, prod_q(u, w, Quantity::Sec), tb, c))
            return true;
        if (!mp(u).flags.fibration || !mp(w).flags.fibration)
            return false;
        c.push_back(fmt::format("{} and {} are fibrations", id(u), id(w)));
        if (le(tp, tb, c))
            return true;
        if (!mp(u).flags.homotopy_section || !mp(w).flags.homotopy_section)
            return false;
        c.push_back("both have sections");
        return le(tb, tp, c);
    }

    bool r9(std::uint32_t p)
    {
        auto res = g_.pair_lcp(p);
        if (!res || res->value == 0)
            return false;
        Conds c{fmt::format("lcp of the bar generators of {} is {}", pr(p).id, res->value)};
        return lower(pair_q(p, Quantity::TC), res->value, {}, c) ||
               lower(pair_q(p, Quantity::TCH), res->value, {}, c);
    }

    bool r10(std::uint32_t p)
    {
        const auto& g = mp(pr(p).g);
        if (!g.flags.surjective || !g.flags.fibration)
            return false;
        return le(pair_q(p, Quantity::TC), map_q(pr(p).f, Quantity::TC),
                  {fmt::format("{} is a surjective fibration", g.id)});
    }

    bool r11(std::uint32_t p)
    {
        SlotId tc = pair_q(p, Quantity::TC), th = pair_q(p, Quantity::TCH);
        if (le(th, tc))
            return true;
        if (!mp(pr(p).f).flags.fibration || !mp(pr(p).g).flags.fibration)
            return false;
        return le(tc, th, {fmt::format("{} and {} are fibrations", id(pr(p).f), id(pr(p).g))});
    }

    bool r12(std::uint32_t p)
    {
        auto d = g_.slot(NodeKind::Pair, p, Quantity::D);
        if (!d)
            return false;
        SlotId th = pair_q(p, Quantity::TCH);
        if (le(*d, th))
            return true;
        std::uint32_t x = mp(pr(p).f).domain;
        if (!sp(x).flags.normal)
            return false;
        return le_sum(th, *d, space_q(x, Quantity::TC), {fmt::format("{}×{} is normal", sp(x).id, sp(x).id)});
    }

    bool r13(std::uint32_t p)
    {
        SlotId th = pair_q(p, Quantity::TCH);
        return le(th, map_q(pr(p).f, Quantity::TCH)) || le(th, map_q(pr(p).g, Quantity::TCH));
    }

    bool r14(std::uint32_t p)
    {
        SlotId th = pair_q(p, Quantity::TCH);
        if (le(th, space_q(codomain(p), Quantity::TC)))
            return true;
        if (!path_connected_target(p))
            return false;
        Conds c{fmt::format("{} is path-connected", sp(codomain(p)).id)};
        return le(map_q(pr(p).f, Quantity::Cat), th, c) || le(map_q(pr(p).g, Quantity::Cat), th, c) ||
               le(th, prod_q(pr(p).f, pr(p).g, Quantity::Cat), c);
    }

    bool r15(std::uint32_t p)
    {
        if (!path_connected_target(p))
            return false;
        const std::uint32_t f = pr(p).f, g = pr(p).g;
        SlotId th = pair_q(p, Quantity::TCH);
        SlotId cf = map_q(f, Quantity::Cat), cg = map_q(g, Quantity::Cat);
        Conds pc{fmt::format("{} is path-connected", sp(codomain(p)).id)};
        if (is_null(f) && is_null(g)) {
            Conds c = pc;
            c.push_back(fmt::format("{} and {} are nullhomotopic", id(f), id(g)));
            if (upper(th, 0, {hi(cf), hi(cg)}, c))
                return true;
        }
        if (v(th).hi == ExtNat{0}) {
            if (upper(cf, 0, {hi(th)}, pc) || upper(cg, 0, {hi(th)}, pc))
                return true;
        }
        for (std::uint32_t m : {f, g}) {
            std::vector<Premise> prem;
            if (auto why = not_null(m, prem)) {
                Conds c = pc;
                c.push_back(*why);
                if (lower(th, 1, prem, c))
                    return true;
            }
        }
        if (v(th).lo >= ExtNat{1}) {
            for (auto [a, b] : {std::pair{f, g}, std::pair{g, f}}) {
                if (!is_null(a))
                    continue;
                SlotId cb = map_q(b, Quantity::Cat);
                if (lower(cb, 1, {lo(th), hi(map_q(a, Quantity::Cat))}, pc))
                    return true;
            }
        }
        return false;
    }

    bool r16(std::uint32_t p)
    {
        if (!path_connected_target(p))
            return false;
        SlotId th = pair_q(p, Quantity::TCH);
        for (auto [a, b] : {std::pair{pr(p).f, pr(p).g}, std::pair{pr(p).g, pr(p).f}}) {
            if (!is_null(a))
                continue;
            SlotId ca = map_q(a, Quantity::Cat), cb = map_q(b, Quantity::Cat);
            Conds c{fmt::format("{} is nullhomotopic", id(a)), fmt::format("{} is path-connected", sp(codomain(p)).id)};
            if (upper(th, v(cb).hi, {hi(cb), hi(ca)}, c) || lower(cb, v(th).lo, {lo(th), hi(ca)}, c) ||
                upper(cb, v(th).hi, {hi(th), hi(ca)}, c) || lower(th, v(cb).lo, {lo(cb), hi(ca)}, c))
                return true;
        }
        return false;
    }

    bool r17(std::uint32_t p)
    {
        SlotId th = pair_q(p, Quantity::TCH);
        if (auto pc = post_composed(p)) {
            if (le(th, pair_q(pc->first, Quantity::TCH),
                   {fmt::format("{} is post-composed from {}", pr(p).id, pr(pc->first).id)}))
                return true;
        }
        if (auto base = pre_composed(p)) {
            if (le(th, pair_q(*base, Quantity::TCH),
                   {fmt::format("{} is pre-composed from {}", pr(p).id, pr(*base).id)}))
                return true;
        }
        return false;
    }

    bool r18(std::uint32_t p)
    {
        const auto& f = mp(pr(p).f);
        const auto& g = mp(pr(p).g);
        if (!f.flags.right_homotopy_inverse || !g.flags.right_homotopy_inverse)
            return false;
        return eq(pair_q(p, Quantity::TCH), space_q(codomain(p), Quantity::TC),
                  {fmt::format("{} and {} have right homotopy inverses", f.id, g.id)});
    }

    bool r19(std::uint32_t p)
    {
        const auto& z = sp(codomain(p));
        if (!z.flags.h_group || !z.flags.path_connected)
            return false;
        return eq(pair_q(p, Quantity::TCH), pair_q(p, Quantity::CatDelta),
                  {fmt::format("{} is a path-connected H-group", z.id)});
    }

    bool r20(std::uint32_t p)
    {
        SlotId tc = pair_q(p, Quantity::TC);
        for (std::uint32_t m : {pr(p).f, pr(p).g}) {
            std::vector<Premise> prem;
            if (auto why = not_null(m, prem))
                if (lower(tc, 1, prem, {*why}))
                    return true;
        }
        if (v(tc).hi == ExtNat{0})
            return upper(map_q(pr(p).f, Quantity::Cat), 0, {hi(tc)}) ||
                   upper(map_q(pr(p).g, Quantity::Cat), 0, {hi(tc)});
        return false;
    }

    bool r21(std::uint32_t p)
    {
        const std::uint32_t f = pr(p).f, g = pr(p).g;
        SlotId sync = pair_q(p, Quantity::Sync), tc = pair_q(p, Quantity::TC);
        if (v(sync).hi == ExtNat{0} && lower(tc, ExtNat::inf(), {hi(sync)}, {"pair is not synchronizable"}))
            return true;
        if (!v(tc).hi.is_inf() && lower(sync, 1, {hi(tc)}, {"TC finite forces synchronizability"}))
            return true;
        if (g_.disjoint_images(f, g) &&
            upper(sync, 0, {}, {fmt::format("{} and {} have disjoint images", id(f), id(g))}))
            return true;
        for (auto [a, b] : {std::pair{f, g}, std::pair{g, f}}) {
            const auto& ma = mp(a);
            const auto& mb = mp(b);
            if (!ma.flags.surjective || !sp(ma.domain).flags.path_connected)
                continue;
            Conds c{fmt::format("{} is surjective with path-connected domain", ma.id)};
            if (mb.flags.identity) {
                c.push_back(fmt::format("{} is an identity", mb.id));
                if (lower(sync, 1, {}, c))
                    return true;
            } else if (mb.flags.surjective && mb.flags.fibration) {
                c.push_back(fmt::format("{} is a surjective fibration", mb.id));
                if (lower(sync, 1, {}, c))
                    return true;
            }
        }
        const auto& fc = mp(f).composition;
        const auto& gc = mp(g).composition;
        if (fc && gc && fc->first == gc->first) {
            const auto& i = mp(fc->first);
            if (i.flags.inclusion && sp(i.domain).flags.path_connected) {
                if (auto inner = g_.find_pair(fc->second, gc->second)) {
                    SlotId s2 = pair_q(*inner, Quantity::Sync);
                    if (v(s2).lo >= ExtNat{1} &&
                        lower(sync, 1, {lo(s2)},
                              {fmt::format("{} and {} factor through the inclusion {} of a path-connected subspace",
                                           id(f), id(g), i.id)}))
                        return true;
                }
            }
        }
        return false;
    }

    bool r22(std::uint32_t m)
    {
        SlotId sec = map_q(m, Quantity::Sec), secat = map_q(m, Quantity::Secat);
        if (le(secat, sec))
            return true;
        return mp(m).flags.fibration && le(sec, secat, {fmt::format("{} is a fibration", id(m))});
    }

    bool r23_map(std::uint32_t m)
    {
        SlotId tc = map_q(m, Quantity::TC), th = map_q(m, Quantity::TCH);
        if (le(th, tc))
            return true;
        if (!mp(m).flags.identity)
            return false;
        SlotId tz = space_q(mp(m).codomain, Quantity::TC);
        Conds c{fmt::format("{} is an identity", id(m))};
        return eq(tc, tz, c) || eq(th, tz, c);
    }

    bool r23_pair(std::uint32_t p)
    {
        const std::uint32_t f = pr(p).f, g = pr(p).g;
        SlotId tc = pair_q(p, Quantity::TC), th = pair_q(p, Quantity::TCH);
        for (auto [other, ident] : {std::pair{f, g}, std::pair{g, f}}) {
            if (!mp(ident).flags.identity)
                continue;
            Conds c{fmt::format("{} is the identity of the common codomain", id(ident))};
            if (eq(tc, map_q(other, Quantity::TC), c) || eq(th, map_q(other, Quantity::TCH), c))
                return true;
        }
        return false;
    }

    bool r25(std::uint32_t p)
    {
        for (std::uint32_t q = 0; q < g_.pairs().size(); ++q) {
            if (q == p || !g_.homotopic(pr(p).f, pr(q).f) || !g_.homotopic(pr(p).g, pr(q).g))
                continue;
            if (pr(p).f == pr(q).f && pr(p).g == pr(q).g)
                continue;
            if (eq(pair_q(p, Quantity::TCH), pair_q(q, Quantity::TCH),
                   {fmt::format("{} and {} have homotopic legs", pr(p).id, pr(q).id)}))
                return true;
        }
        return false;
    }

    bool r26(std::uint32_t p)
    {
        const std::uint32_t f = pr(p).f, g = pr(p).g;
        const std::uint32_t x = mp(f).domain;
        if (mp(g).domain != x || !sp(x).flags.normal)
            return false;
        for (std::uint32_t h = 0; h < g_.maps().size(); ++h) {
            if (mp(h).domain != x)
                continue;
            auto fh = g_.find_pair(f, h);
            auto hg = g_.find_pair(h, g);
            if (!fh || !hg || *fh == p || *hg == p)
                continue;
            if (le_sum(pair_q(p, Quantity::TCH), pair_q(*fh, Quantity::TCH), pair_q(*hg, Quantity::TCH),
                       {fmt::format("common domain {} with {}×{} normal", sp(x).id, sp(x).id, sp(x).id)}))
                return true;
        }
        return false;
    }

    bool r27(std::uint32_t p)
    {
        const auto& g = mp(pr(p).g);
        if (!g.flags.fibration || !g.flags.strict_section)
            return false;
        return eq(pair_q(p, Quantity::TC), map_q(pr(p).f, Quantity::TC),
                  {fmt::format("{} is a fibration with a global section", g.id)});
    }

    bool r28(std::uint32_t p)
    {
        const auto& f = mp(pr(p).f);
        const auto& g = mp(pr(p).g);
        if (!g.flags.fibration || !f.flags.homotopy_section)
            return false;
        Conds c{fmt::format("{} is a fibration", g.id), fmt::format("{} has a homotopy section", f.id)};
        SlotId tc = pair_q(p, Quantity::TC), tg = map_q(pr(p).g, Quantity::TC);
        if (le(tg, tc, c))
            return true;
        if (!f.flags.fibration)
            return false;
        c.push_back(fmt::format("{} is a fibration", f.id));
        return le(tc, tg, c);
    }

    bool r29(std::uint32_t p)
    {
        const std::uint32_t f = pr(p).f, g = pr(p).g;
        if (!mp(g).flags.fibration)
            return false;
        for (std::uint32_t q = 0; q < g_.pairs().size(); ++q) {
            if (q == p || pr(q).g != g || pr(q).f == f || !g_.fibrewise_equivalent(f, pr(q).f))
                continue;
            if (eq(pair_q(p, Quantity::TC), pair_q(q, Quantity::TC),
                   {fmt::format("{} and {} are fibrewise equivalent", id(f), id(pr(q).f)),
                    fmt::format("{} is a fibration", id(g))}))
                return true;
        }
        return false;
    }

    ProblemGraph& g_;
    std::string rule_, anchor_;
};

std::vector<Instance> instances(const ProblemGraph& g)
{
    std::vector<Instance> out;
    const auto np = static_cast<std::uint32_t>(g.pairs().size());
    const auto nm = static_cast<std::uint32_t>(g.maps().size());
    const auto nx = static_cast<std::uint32_t>(g.products().size());
    for (int r = 1; r <= 29; ++r) {
        if (r == 9)
            continue;
        if (r == 3) {
            for (std::uint32_t i = 0; i < nx; ++i)
                out.push_back({r, Target::Product, i});
            continue;
        }
        if (r == 22 || r == 23)
            for (std::uint32_t i = 0; i < nm; ++i)
                out.push_back({r, Target::Map, i});
        if (r != 22)
            for (std::uint32_t i = 0; i < np; ++i)
                out.push_back({r, Target::Pair, i});
    }
    // the cohomological bound is the one expensive rule; it runs only once
    // the cheap rules are saturated
    for (std::uint32_t i = 0; i < np; ++i)
        out.push_back({9, Target::Pair, i});
    return out;
}

}  // namespace

std::vector<DerivationStep> propagate(ProblemGraph& graph, const PropagateOptions& options)
{
    auto order = instances(graph);
    if (options.shuffle_seed) {
        std::mt19937_64 rng(*options.shuffle_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    const std::size_t start = graph.trace().size();
    Rules rules(graph);
    std::size_t iterations = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Instance& inst : order) {
            if (rules.fire(inst)) {
                if (++iterations > options.max_iterations)
                    throw IterationLimitExceeded(
                        fmt::format("no fixpoint within {} iterations", options.max_iterations));
                changed = true;
                break;
            }
        }
    }
    return {graph.trace().begin() + static_cast<std::ptrdiff_t>(start), graph.trace().end()};
}

std::vector<DerivationStep> bound_from_cohomology(ProblemGraph& graph, std::uint32_t pair)
{
    const std::size_t start = graph.trace().size();
    Rules rules(graph);
    while (rules.fire({9, Target::Pair, pair})) {
    }
    return {graph.trace().begin() + static_cast<std::ptrdiff_t>(start), graph.trace().end()};
}

std::vector<DerivationStep> explain(const ProblemGraph& graph, SlotId slot)
{
    const auto& trace = graph.trace();
    std::set<std::size_t> chosen;
    std::vector<std::tuple<SlotId, Side, std::size_t>> work{{slot, Side::Lo, trace.size()},
                                                            {slot, Side::Hi, trace.size()}};
    std::set<std::tuple<SlotId, Side, std::size_t>> seen;
    while (!work.empty()) {
        auto item = work.back();
        work.pop_back();
        if (!seen.insert(item).second)
            continue;
        auto [s, side, before] = item;
        for (std::size_t k = before; k-- > 0;) {
            const auto& st = trace[k];
            if (st.slot != s)
                continue;
            bool moved = side == Side::Lo ? st.before.lo != st.after.lo : st.before.hi != st.after.hi;
            if (!moved)
                continue;
            if (chosen.insert(k).second)
                for (const Premise& p : st.premises)
                    work.emplace_back(p.slot, p.side, k);
            break;
        }
    }
    std::vector<DerivationStep> out;
    for (std::size_t k : chosen)
        out.push_back(trace[k]);
    return out;
}

std::vector<DerivationStep> explain(const ProblemGraph& graph, const std::string& quantity)
{
    auto s = graph.find_slot(quantity);
    if (!s)
        throw GraphError(fmt::format("unknown quantity '{}'", quantity));
    return explain(graph, *s);
}

std::vector<std::string> check_consistency(const ProblemGraph& graph)
{
    std::vector<std::string> bad;
    if (graph.characteristic() != 0 && !is_prime(graph.characteristic()))
        bad.push_back(fmt::format("{} is not prime", graph.characteristic()));

    for (SlotId s = 0; s < graph.slot_count(); ++s) {
        const Interval& v = graph.value(s);
        if (v.empty())
            bad.push_back(fmt::format("{} is empty: {}", graph.slot_name(s), v.str()));
        if (graph.slot_quantity(s) == Quantity::Sync && ExtNat{1} < v.hi)
            bad.push_back(fmt::format("{} leaves {{0,1}}", graph.slot_name(s)));
    }

    for (const auto& sp : graph.spaces()) {
        if (sp.cohomology) {
            if (graph.characteristic() != sp.cohomology->field().characteristic())
                bad.push_back(fmt::format("H*({}) is over {}, not the declared field", sp.id,
                                          sp.cohomology->field().name()));
            for (const auto& msg : sp.cohomology->check_invariants(VerifyMode::Sampled, 500))
                bad.push_back(fmt::format("H*({}): {}", sp.id, msg));
        }
        if (sp.flags.contractible) {
            for (Quantity q : {Quantity::Cat, Quantity::TC}) {
                SlotId s = *graph.slot(NodeKind::Space, static_cast<std::uint32_t>(&sp - graph.spaces().data()), q);
                if (!(graph.value(s) == Interval::exactly(0)))
                    bad.push_back(fmt::format("{} is contractible but {} = {}", sp.id, graph.slot_name(s),
                                              graph.value(s).str()));
            }
        }
    }

    for (std::uint32_t m = 0; m < graph.maps().size(); ++m) {
        const auto& mp = graph.map(m);
        const auto& fl = mp.flags;
        if (fl.identity && (!fl.fibration || !fl.surjective || !fl.strict_section))
            bad.push_back(fmt::format("identity {} lacks its implied flags", mp.id));
        SlotId cat = *graph.slot(NodeKind::Map, m, Quantity::Cat);
        if (fl.nullhomotopic && graph.value(cat).hi != ExtNat{0})
            bad.push_back(fmt::format("{} is nullhomotopic but cat({}) = {}", mp.id, mp.id, graph.value(cat).str()));
        if (fl.nullhomotopic && mp.hom && !mp.hom->vanishes_in_positive_degrees())
            bad.push_back(fmt::format("{} is declared nullhomotopic but {}* is nonzero", mp.id, mp.id));
        if (mp.hom) {
            const auto& dom = graph.space(mp.domain).cohomology;
            const auto& cod = graph.space(mp.codomain).cohomology;
            if (!same_algebra(mp.hom->source(), cod) || !same_algebra(mp.hom->target(), dom))
                bad.push_back(fmt::format("{}* does not run H*({}) -> H*({})", mp.id, graph.space(mp.codomain).id,
                                          graph.space(mp.domain).id));
        }
    }

    for (std::uint32_t p = 0; p < graph.pairs().size(); ++p) {
        const auto& pr = graph.pair(p);
        if (graph.map(pr.f).codomain != graph.map(pr.g).codomain)
            bad.push_back(fmt::format("pair {} has legs with different codomains", pr.id));
        const Interval& sync = graph.value(*graph.slot(NodeKind::Pair, p, Quantity::Sync));
        const Interval& tc = graph.value(*graph.slot(NodeKind::Pair, p, Quantity::TC));
        if (sync.hi == ExtNat{0} && !tc.hi.is_inf())
            bad.push_back(fmt::format("pair {} is not synchronizable but TC({}) <= {}", pr.id, pr.id, tc.hi.str()));
    }
    return bad;
}

}  // namespace tcb
