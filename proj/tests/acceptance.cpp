// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include "axioms.hpp"
#include "oracle.hpp"
#include "random_graphs.hpp"

#include "tcbivar/catalog.hpp"
#include "tcbivar/cup_length.hpp"
#include "tcbivar/dsl.hpp"
#include "tcbivar/engine.hpp"
#include "tcbivar/report.hpp"
#include "tcbivar/selftest.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

using namespace tcb;
namespace fs = std::filesystem;

namespace {

// wall-clock limits, milliseconds
constexpr double kSphereMs = 10;
constexpr double kTorusMs = 2000;
constexpr double kDerivationMs = 100;
constexpr double kOracleMs = 30000;
constexpr std::size_t kOracleInstances = 200;
constexpr std::size_t kAxiomTriples = 500;
constexpr std::size_t kRandomGraphs = 50;
constexpr std::size_t kOrderings = 10;

struct Verdict {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

template <class Fn>
double time_ms(Fn&& fn)
{
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Built {
    std::unique_ptr<Problem> problem;
    std::uint32_t pair = 0;
};

Built sphere_pair(const Field& k)
{
    Built b{std::make_unique<Problem>(k), 0};
    b.problem->space("S2", SpaceSpec::sphere(2));
    b.problem->map("f", "S2", "S2", MapSpec::of(MapSpec::Kind::Degree, 2));
    b.problem->map("g", "S2", "S2", MapSpec::of(MapSpec::Kind::Degree, 3));
    b.pair = b.problem->pair("P", "f", "g");
    return b;
}

PaperInstance& find(std::vector<PaperInstance>& all, const std::string& name)
{
    return *std::find_if(all.begin(), all.end(), [&](const PaperInstance& i) { return i.name == name; });
}

Verdict criterion1()
{
    Verdict v;
    auto b = sphere_pair(Field::rationals());
    auto gens = b.problem->graph().pair_generators(b.pair);
    LcpResult res;
    const double ms = time_ms([&] { res = lcp_subspace_iteration(*gens); });
    const auto a2 = gens->generators.at(0) * gens->generators.at(0);
    v.require(res.value == 2, fmt::format("lcp = {}", res.value));
    v.require(coefficient_of(a2, "u⊗u").str() == "-12", "A^2 = " + a2.str());
    v.require((a2 * gens->generators[0]).is_zero() && res.level_dims.back() == 0, "A^3 != 0");
    v.require(ms < kSphereMs, fmt::format("{:.2f} ms", ms));
    v.notes.push_back(fmt::format("lcp 2, A^2 = {}, A^3 = 0, {:.2f} ms", a2.str(), ms));
    return v;
}

Verdict criterion2()
{
    Verdict v;
    Problem p(Field::rationals());
    p.space("T5", SpaceSpec::torus(5));
    auto f = MapSpec::of(MapSpec::Kind::Powers), g = MapSpec::of(MapSpec::Kind::Powers);
    f.exponents = {2, 3, 2, 4, 1};
    g.exponents = {1, 2, 3, 1, 4};
    p.map("f", "T5", "T5", f);
    p.map("g", "T5", "T5", g);
    auto gens = p.graph().pair_generators(p.pair("P", "f", "g"));
    LcpResult res;
    const double ms = time_ms([&] { res = lcp_subspace_iteration(*gens); });
    std::vector<std::size_t> ubar;
    for (int i = 1; i <= 5; ++i)
        ubar.push_back(static_cast<std::size_t>(
            std::find(gens->sources.begin(), gens->sources.end(), fmt::format("u{}", i)) - gens->sources.begin()));
    const auto prod = product_of(*gens, ubar);
    const auto left = coefficient_of(prod, "(u1u2u3u4u5)⊗1");
    const auto right = coefficient_of(prod, "1⊗(u1u2u3u4u5)");

    // 6-fold products of all generators, up to reordering
    bool six_zero = true;
    std::function<void(std::size_t, std::size_t, const AlgebraElement&)> rec = [&](std::size_t from, std::size_t len,
                                                                                   const AlgebraElement& acc) {
        if (acc.is_zero() || !six_zero)
            return;
        if (len == 6) {
            six_zero = false;
            return;
        }
        for (std::size_t i = from; i < gens->generators.size(); ++i)
            rec(i, len + 1, acc * gens->generators[i]);
    };
    rec(0, 0, AlgebraElement::one(gens->ambient));

    v.require(gens->ambient->dim() == 1024, "ambient dimension");
    v.require(res.value == 5, fmt::format("lcp = {}", res.value));
    v.require(left.str() == "48", "coefficient on (u1u2u3u4u5)⊗1 is " + left.str());
    v.require(abs(right.value()) == 24, "coefficient on 1⊗(u1u2u3u4u5) is " + right.str());
    v.require(six_zero, "a 6-fold product is nonzero");
    v.require(ms < kTorusMs, fmt::format("{:.1f} ms", ms));
    v.notes.push_back(fmt::format("lcp 5, coefficients {} and {}, {:.1f} ms", left.str(), right.str(), ms));
    return v;
}

Verdict criterion3()
{
    Verdict v;
    const ExtNat inf = ExtNat::inf();
    struct Want {
        const char* name;
        Interval tc, tch;
    };
    const Want wants[] = {{"collaboration-s2", {1, 1}, {1, 1}},
                          {"constant-distinct", {inf, inf}, {0, 0}},
                          {"iconic-circle", {1, 1}, {0, 0}},
                          {"sphere-in-r3", {2, 2}, {0, 0}}};
    double worst = 0;
    for (const Want& w : wants) {
        std::vector<PaperInstance> all;
        const double ms = time_ms([&] {
            all = load_paper_instances();
            propagate(find(all, w.name).problem.graph());
        });
        worst = std::max(worst, ms);
        const auto& g = find(all, w.name).problem.graph();
        const SlotId tc = *g.find_slot("TC(P)"), tch = *g.find_slot("TCH(P)");
        v.require(g.value(tc) == w.tc, fmt::format("{}: TC = {}", w.name, g.value(tc).str()));
        v.require(g.value(tch) == w.tch, fmt::format("{}: TCH = {}", w.name, g.value(tch).str()));
        v.require(ms < kDerivationMs, fmt::format("{}: {:.1f} ms", w.name, ms));

        const auto steps = explain(g, tc);
        auto any = [&](auto pred) { return std::any_of(steps.begin(), steps.end(), pred); };
        if (std::string(w.name) == "collaboration-s2") {
            v.require(any([](const DerivationStep& s) {
                          return (s.rule == "R11" || s.rule == "R13") && s.after.hi == ExtNat(1);
                      }),
                      "no R11/R13 upper bound in the derivation");
            v.require(any([](const DerivationStep& s) {
                          return (s.rule == "R15" || s.rule == "R20") && s.after.lo == ExtNat(1);
                      }),
                      "no R15/R20 lower bound in the derivation");
        }
        if (std::string(w.name) == "iconic-circle" || std::string(w.name) == "sphere-in-r3") {
            v.require(any([&](const DerivationStep& s) { return s.slot == tc && s.rule == "input"; }),
                      fmt::format("{}: TC not fact-backed", w.name));
            const auto dsteps = explain(g, tch);
            v.require(!dsteps.empty() && std::none_of(dsteps.begin(), dsteps.end(),
                                                      [&](const DerivationStep& s) { return s.slot == tch && s.rule == "input"; }),
                      fmt::format("{}: TCH not derived", w.name));
        }
    }
    v.notes.push_back(fmt::format("4 derivations, slowest {:.1f} ms", worst));
    return v;
}

Verdict criterion4()
{
    Verdict v;
    std::size_t agree = 0, q = 0, f2 = 0;
    const double ms = time_ms([&] {
        std::mt19937_64 rng(20261015);
        for (std::size_t i = 0; i < kOracleInstances; ++i) {
            const Field k = i % 2 ? Field::prime(2) : Field::rationals();
            (k.is_rational() ? q : f2)++;
            const int n = 1 + static_cast<int>(i % 4);
            auto gens = random_bar_set(k, n, rng);
            const auto fast = lcp_subspace_iteration(gens).value;
            const auto slow = lcp_bruteforce(gens, static_cast<std::size_t>(2 * n));
            if (fast == slow)
                ++agree;
            else
                v.require(false, fmt::format("instance {}: {} vs {}", i, fast, slow));
        }
    });
    v.require(ms < kOracleMs, fmt::format("{:.0f} ms", ms));
    v.notes.push_back(fmt::format("{}/{} agree ({} over Q, {} over F2), {:.0f} ms", agree, kOracleInstances, q, f2, ms));
    return v;
}

Verdict criterion5()
{
    Verdict v;
    auto qb = sphere_pair(Field::rationals());
    auto fb = sphere_pair(Field::prime(2));
    const auto lq = lcp_subspace_iteration(*qb.problem->graph().pair_generators(qb.pair)).value;
    const auto lf = lcp_subspace_iteration(*fb.problem->graph().pair_generators(fb.pair)).value;
    v.require(lq == 2, fmt::format("Q: {}", lq));
    v.require(lf == 1, fmt::format("F2: {}", lf));
    v.notes.push_back(fmt::format("Q {} vs F2 {}", lq, lf));
    return v;
}

Verdict criterion6()
{
    Verdict v;
    axioms::Stats st;
    axioms::Mutations tables, homs;
    std::uint64_t seed = 1;
    std::size_t algebras = 0;
    for (const Field& k : {Field::rationals(), Field::prime(2)}) {
        std::vector<std::pair<std::string, AlgebraPtr>> algs;
        for (auto spec : {SpaceSpec::sphere(1), SpaceSpec::sphere(2), SpaceSpec::torus(5), SpaceSpec::wedge_circles(2),
                          SpaceSpec::product(SpaceSpec::sphere(2), SpaceSpec::sphere(1)), SpaceSpec::contractible()})
            algs.emplace_back(describe(spec), instantiate_space(spec, k).algebra);
        const auto s2 = algs[1].second, s1 = algs[0].second;
        algs.emplace_back("S2⊗S2", tensor_product(s2, s2));
        algs.emplace_back("S1⊗S1", tensor_product(s1, s1));
        algs.emplace_back("T5⊗T5", tensor_product(algs[2].second, algs[2].second));
        for (const auto& [name, alg] : algs) {
            axioms::check(k.name() + " " + name, alg, alg->dim() > 64 ? 20 : 60, seed++, st);
            if (alg->is_tensor())
                axioms::check_koszul(k.name() + " " + name, alg, st);
            if (alg->dim() <= 16)
                axioms::mutate_table(k.name() + " " + name, alg, tables);
            ++algebras;
        }
    }
    for (auto& inst : load_paper_instances())
        for (const auto& m : inst.problem.graph().maps())
            if (m.hom && m.hom->source()->dim() > 1)
                axioms::mutate_hom(inst.name + " " + m.id, *m.hom, homs);

    v.require(st.triples >= kAxiomTriples, fmt::format("only {} triples", st.triples));
    v.require(st.failures.empty(), st.failures.empty() ? "" : st.failures.front());
    v.notes.push_back(fmt::format("axioms: {} triples on {} algebras, {} failures", st.triples, algebras,
                                  st.failures.size()));
    v.notes.push_back(fmt::format("structure-constant mutations rejected {}/{}", tables.rejected, tables.tried));
    v.notes.push_back(fmt::format("hom-image mutations rejected {}/{}", homs.rejected, homs.tried));
    v.require(tables.survivors.empty() && homs.survivors.empty(),
              "surviving mutations are themselves valid algebras or homs, e.g. " +
                  (homs.survivors.empty() ? tables.survivors.front() : homs.survivors.front()));
    return v;
}

Verdict criterion7()
{
    Verdict v;
    std::size_t fixpoints = 0, contradictions = 0, steps = 0;
    for (std::uint64_t seed = 1; fixpoints < kRandomGraphs && seed < 10 * kRandomGraphs; ++seed) {
        auto base = random_graphs::make(seed);
        bool contra = false;
        try {
            propagate(base->graph());
        } catch (const ContradictionDetected&) {
            contra = true;
        }
        contradictions += contra;
        fixpoints += !contra;
        for (const auto& s : base->graph().trace()) {
            ++steps;
            v.require(s.after.lo >= s.before.lo && s.after.hi <= s.before.hi && !(s.after == s.before),
                      fmt::format("graph {} step {} is not a tightening", seed, s.index));
        }
        if (!contra)
            v.require(propagate(base->graph()).empty(), fmt::format("graph {} not idempotent", seed));
        for (std::uint64_t k = 0; k < kOrderings; ++k) {
            auto other = random_graphs::make(seed);
            bool c2 = false;
            try {
                propagate(other->graph(), {10000, seed * 1000 + k});
            } catch (const ContradictionDetected&) {
                c2 = true;
            }
            v.require(c2 == contra && (contra || other->graph().values() == base->graph().values()),
                      fmt::format("graph {} ordering {} reaches a different fixpoint", seed, k));
        }
    }
    v.require(fixpoints >= kRandomGraphs, fmt::format("only {} graphs reached a fixpoint", fixpoints));

    for (auto& inst : load_paper_instances()) {
        try {
            propagate(inst.problem.graph());
        } catch (const ContradictionDetected& e) {
            v.require(false, inst.name + ": " + e.what());
        }
    }

    Problem p(Field::rationals());
    p.space("T5", SpaceSpec::torus(5));
    p.map("id", "T5", "T5", MapSpec::of(MapSpec::Kind::Identity));
    const auto pair = p.pair("P", "id", "id");
    propagate(p.graph());
    const auto l = p.graph().pair_lcp(pair)->value;
    const auto tc = p.graph().value(*p.graph().find_slot("TC(T5)"));
    v.require(l == 5 && ExtNat(l) <= tc.hi && tc == Interval::exactly(5),
              fmt::format("lcp(id,id) = {}, TC(T5) = {}", l, tc.str()));
    v.notes.push_back(fmt::format("{} fixpoint graphs (+{} contradicting) x {} orderings, {} steps, lcp(id,id) on T5 = {}",
                                  fixpoints, contradictions, kOrderings, steps, l));
    return v;
}

Verdict criterion8(const fs::path& root)
{
    Verdict v;
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(root / "fixtures/paper")) {
        if (e.path().extension() != ".tcb")
            continue;
        ++n;
        const auto name = e.path().filename().string();
        try {
            const std::string text = slurp(e.path());
            const auto a = run(dsl::parse(text)), b = run(dsl::parse(text));
            v.require(exit_code(a) == kExitOk, name + ": exit " + std::to_string(exit_code(a)));
            for (Format f : {Format::Text, Format::Structured})
                v.require(render(a, f) == render(b, f), name + ": output differs between runs");
            v.require(parse_structured(render(a, Format::Structured)) == a, name + ": structured round-trip");
            v.require(dsl::parse(dsl::print(dsl::parse(text))) == dsl::parse(text), name + ": AST round-trip");
        } catch (const std::exception& ex) {
            v.require(false, name + ": " + ex.what());
        }
    }
    v.require(n == 7, fmt::format("{} fixtures", n));
    const auto rep = run(dsl::parse(slurp(root / "fixtures/contradiction.tcb")));
    v.require(exit_code(rep) == kExitContradiction, "contradiction fixture exit " + std::to_string(exit_code(rep)));
    v.require(!rep.trace.empty(), "contradiction trace is empty");
    v.notes.push_back(fmt::format("{} fixtures stable, contradiction exit {} with {} trace steps", n, exit_code(rep),
                                  rep.trace.size()));
    return v;
}

}  // namespace

int main(int argc, char** argv)
{
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path(TCBIVAR_SOURCE_DIR);
    const std::vector<std::function<Verdict()>> criteria = {
        criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7,
        [&] { return criterion8(root); },
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v.require(false, std::string("threw: ") + e.what());
        }
        std::string detail;
        for (const auto& n : v.notes)
            detail += (detail.empty() ? "" : "; ") + n;
        fmt::print("criterion {}: {}  {}\n", i + 1, v.ok ? "PASS" : "FAIL", detail);
        failed += !v.ok;
    }
    return failed ? 1 : 0;
}
