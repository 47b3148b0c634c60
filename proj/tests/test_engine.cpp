#include "random_graphs.hpp"

#include "tcbivar/catalog.hpp"
#include "tcbivar/engine.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace tcb;

namespace {

Problem& instance(std::vector<PaperInstance>& all, const std::string& name)
{
    for (auto& i : all)
        if (i.name == name)
            return i.problem;
    throw std::out_of_range(name);
}

bool subset(const Interval& a, const Interval& b)
{
    return a.lo >= b.lo && a.hi <= b.hi;
}

Interval initial(const ProblemGraph& g, SlotId s)
{
    return g.slot_quantity(s) == Quantity::Sync ? Interval{0, 1} : Interval::unknown();
}

// Replays the trace from the initial intervals; every step must start where
// the previous one on that slot ended and cite premise values that held then.
void check_trace(const ProblemGraph& g)
{
    std::vector<Interval> cur;
    for (SlotId s = 0; s < g.slot_count(); ++s)
        cur.push_back(initial(g, s));
    for (std::size_t i = 0; i < g.trace().size(); ++i) {
        const auto& s = g.trace()[i];
        CHECK(s.index == i);
        CHECK(s.before == cur[s.slot]);
        CHECK(subset(s.after, s.before));
        CHECK_FALSE(s.after == s.before);
        CHECK_FALSE(s.after.empty());
        for (const auto& p : s.premises)
            CHECK(p.value == cur[p.slot]);
        if (s.rule != "input")
            CHECK(rule_anchor(s.rule) == s.anchor);
        cur[s.slot] = s.after;
    }
    CHECK(cur == g.values());
}

enum class Outcome { Fixpoint, Contradiction };

Outcome settle(ProblemGraph& g, std::optional<std::uint64_t> seed)
{
    try {
        propagate(g, {10000, seed});
        return Outcome::Fixpoint;
    } catch (const ContradictionDetected&) {
        return Outcome::Contradiction;
    }
}

}  // namespace

TEST_CASE("extended naturals")
{
    const ExtNat inf = ExtNat::inf();
    CHECK(ExtNat(2) + ExtNat(3) == ExtNat(5));
    CHECK(ExtNat(2) + inf == inf);
    CHECK(monus(ExtNat(2), ExtNat(5)) == ExtNat(0));
    CHECK(monus(inf, ExtNat(5)) == inf);
    CHECK(product_bound(2, 3) == ExtNat(11));
    CHECK(product_bound(0, inf) == inf);
    CHECK(ceil_quotient_bound(11, 3) == ExtNat(2));
    CHECK(ceil_quotient_bound(12, 3) == ExtNat(3));
    CHECK(ceil_quotient_bound(inf, 3) == inf);
    CHECK(ceil_quotient_bound(5, inf) == ExtNat(0));
    CHECK(ExtNat::parse("inf") == inf);
    CHECK(ExtNat::parse("17") == ExtNat(17));
    CHECK_FALSE(ExtNat::parse("-1").has_value());
    CHECK(Interval{2, inf}.str() == "[2,inf]");
    CHECK(Interval{3, 1}.empty());
    CHECK(Interval{1, 4}.meet({2, inf}) == Interval{2, 4});
}

TEST_CASE("rule table")
{
    const auto& rules = rule_table();
    REQUIRE(rules.size() == 29);
    for (std::size_t i = 0; i < rules.size(); ++i) {
        CHECK(std::string(rules[i].id) == "R" + std::to_string(i + 1));
        CHECK_FALSE(std::string(rules[i].anchor).empty());
    }
    CHECK(rule_anchor("R99").empty());
}

TEST_CASE("built-in instances reach their values without contradiction")
{
    auto all = load_paper_instances();
    for (auto& inst : all) {
        CAPTURE(inst.name);
        auto& g = inst.problem.graph();
        CHECK_NOTHROW(propagate(g));
        CHECK(check_consistency(g).empty());
        check_trace(g);
    }
    auto v = [&](const std::string& name, const std::string& q) {
        const auto& g = instance(all, name).graph();
        return g.value(*g.find_slot(q));
    };
    const ExtNat inf = ExtNat::inf();
    CHECK(v("sphere-deg-2-3", "TC(P)") == Interval{2, inf});
    CHECK(v("sphere-deg-2-3", "TCH(P)") == Interval{2, 2});
    CHECK(v("torus-5-mixed", "TC(P)") == Interval{5, 5});
    CHECK(v("torus-5-mixed", "TCH(P)") == Interval{5, 5});
    CHECK(v("iconic-circle", "TC(P)") == Interval{1, 1});
    CHECK(v("iconic-circle", "TCH(P)") == Interval{0, 0});
    CHECK(v("constant-distinct", "TC(P)") == Interval{inf, inf});
    CHECK(v("constant-distinct", "TCH(P)") == Interval{0, 0});
    CHECK(v("collaboration-s2", "TC(P)") == Interval{1, 1});
    CHECK(v("collaboration-s2", "TC(f)") == Interval{2, 2});
    CHECK(v("wedge-nonsync", "TC(P)") == Interval{inf, inf});
    CHECK(v("sphere-in-r3", "TC(P)") == Interval{2, 2});
    CHECK(v("sphere-in-r3", "TCH(P)") == Interval{0, 0});
}

TEST_CASE("collaboration derivation")
{
    auto all = load_paper_instances();
    auto& g = instance(all, "collaboration-s2").graph();
    propagate(g);
    const auto tc = *g.find_slot("TC(P)");
    const auto steps = explain(g, tc);
    bool upper = false, lower = false;
    for (const auto& s : steps) {
        if ((s.rule == "R11" || s.rule == "R13") && s.after.hi == ExtNat(1))
            upper = true;
        if ((s.rule == "R15" || s.rule == "R20") && s.after.lo == ExtNat(1))
            lower = true;
    }
    CHECK(upper);
    CHECK(lower);
    CHECK(std::is_sorted(steps.begin(), steps.end(),
                         [](const DerivationStep& a, const DerivationStep& b) { return a.index < b.index; }));
    CHECK(explain(g, std::string("TC(P)")) == steps);
    CHECK_THROWS_AS(explain(g, std::string("TC(nope)")), GraphError);
}

TEST_CASE("derived versus fact-backed values")
{
    auto all = load_paper_instances();
    auto last_on = [](const ProblemGraph& g, SlotId s) {
        const DerivationStep* out = nullptr;
        for (const auto& st : g.trace())
            if (st.slot == s)
                out = &st;
        return out;
    };
    for (const char* name : {"iconic-circle", "sphere-in-r3", "constant-distinct"}) {
        CAPTURE(name);
        auto& g = instance(all, name).graph();
        propagate(g);
        const auto tch = *g.find_slot("TCH(P)");
        REQUIRE(last_on(g, tch));
        CHECK(last_on(g, tch)->rule != "input");
    }
    for (const char* name : {"iconic-circle", "sphere-in-r3"}) {
        auto& g = instance(all, name).graph();
        const auto tc = *g.find_slot("TC(P)");
        const auto steps = explain(g, tc);
        CHECK(std::any_of(steps.begin(), steps.end(),
                          [&](const DerivationStep& s) { return s.slot == tc && s.rule == "input"; }));
    }
}

TEST_CASE("identity pair on T5 stays within the catalog value")
{
    Problem p(Field::rationals());
    p.space("T5", SpaceSpec::torus(5));
    p.map("id", "T5", "T5", MapSpec::of(MapSpec::Kind::Identity));
    const auto pair = p.pair("P", "id", "id");
    propagate(p.graph());
    const auto& g = p.graph();
    CHECK(g.pair_lcp(pair)->value == 5);
    CHECK(g.value(*g.find_slot("TC(T5)")) == Interval{5, 5});
    CHECK(g.value(*g.find_slot("TC(P)")) == Interval{5, 5});
}

TEST_CASE("random graphs: monotone, confluent, idempotent")
{
    std::size_t fixpoints = 0, contradictions = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        CAPTURE(seed);
        auto base = random_graphs::make(seed);
        const Outcome want = settle(base->graph(), std::nullopt);
        if (want == Outcome::Fixpoint) {
            ++fixpoints;
            check_trace(base->graph());
            CHECK(check_consistency(base->graph()).empty());
            CHECK(propagate(base->graph()).empty());
        } else {
            ++contradictions;
        }
        for (std::uint64_t order = 0; order < 10; ++order) {
            auto again = random_graphs::make(seed);
            const Outcome got = settle(again->graph(), seed * 100 + order);
            CHECK(got == want);
            if (got == Outcome::Fixpoint && want == Outcome::Fixpoint) {
                CHECK(again->graph().values() == base->graph().values());
                CHECK(propagate(again->graph(), {10000, order}).empty());
            }
        }
    }
    CHECK(fixpoints >= 50);
    MESSAGE(fixpoints << " fixpoints, " << contradictions << " contradictions");
}

TEST_CASE("explain covers every tightened slot")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto p = random_graphs::make(seed);
        auto& g = p->graph();
        if (settle(g, std::nullopt) != Outcome::Fixpoint)
            continue;
        for (SlotId s = 0; s < g.slot_count(); ++s) {
            const auto steps = explain(g, s);
            CHECK(steps.empty() == (g.value(s) == initial(g, s)));
            std::set<std::size_t> seen;
            for (const auto& st : steps) {
                CHECK(g.trace().at(st.index) == st);
                seen.insert(st.index);
            }
            CHECK(seen.size() == steps.size());
        }
    }
}

TEST_CASE("contradictions and limits")
{
    Problem p(Field::rationals());
    p.space("S2", SpaceSpec::sphere(2));
    p.map("f", "S2", "S2", MapSpec::of(MapSpec::Kind::Degree, 2));
    p.map("g", "S2", "S2", MapSpec::of(MapSpec::Kind::Degree, 3));
    p.pair("P", "f", "g");
    p.fact("TC(P)", {0, 1}, FactSource::Reference, "upper");
    try {
        propagate(p.graph());
        FAIL("no contradiction");
    } catch (const ContradictionDetected& e) {
        CHECK_FALSE(e.trace().empty());
        CHECK(e.trace().back().after.empty());
    }

    auto all = load_paper_instances();
    CHECK_THROWS_AS(propagate(instance(all, "collaboration-s2").graph(), {1, std::nullopt}),
                    IterationLimitExceeded);

    ProblemGraph bad(4);
    CHECK(check_consistency(bad) == std::vector<std::string>{"4 is not prime"});
}

TEST_CASE("R9 by itself")
{
    auto all = load_paper_instances();
    auto& p = instance(all, "sphere-deg-2-3");
    auto& g = p.graph();
    const auto pair = *g.find_pair("P");
    const auto steps = bound_from_cohomology(g, pair);
    REQUIRE_FALSE(steps.empty());
    for (const auto& s : steps)
        CHECK(s.rule == "R9");
    CHECK(g.value(*g.find_slot("TC(P)")).lo == ExtNat(2));
    CHECK(bound_from_cohomology(g, pair).empty());
}
