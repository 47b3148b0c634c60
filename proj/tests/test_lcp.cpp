#include "oracle.hpp"

#include "tcbivar/catalog.hpp"
#include "tcbivar/cup_length.hpp"
#include "tcbivar/selftest.hpp"

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>

using namespace tcb;

namespace {

std::shared_ptr<const ZeroDivisorSet> sphere_pair(const Field& k)
{
    static std::vector<std::unique_ptr<Problem>> keep;
    auto p = std::make_unique<Problem>(k);
    p->space("S2", SpaceSpec::sphere(2));
    p->map("f", "S2", "S2", MapSpec::of(MapSpec::Kind::Degree, 2));
    p->map("g", "S2", "S2", MapSpec::of(MapSpec::Kind::Degree, 3));
    const auto pair = p->pair("P", "f", "g");
    auto gens = p->graph().pair_generators(pair);
    keep.push_back(std::move(p));
    return gens;
}

// f = (z1^2, z2^3, z3^2, z4^4, z5), g = (z1, z2^2, z3^3, z4, z5^4)
const std::vector<std::int64_t> kF{2, 3, 2, 4, 1}, kG{1, 2, 3, 1, 4};

std::shared_ptr<const ZeroDivisorSet> torus_pair()
{
    static Problem p(Field::rationals());
    static std::uint32_t pair = [] {
        p.space("T5", SpaceSpec::torus(5));
        auto f = MapSpec::of(MapSpec::Kind::Powers);
        f.exponents = kF;
        auto g = MapSpec::of(MapSpec::Kind::Powers);
        g.exponents = kG;
        p.map("f", "T5", "T5", f);
        p.map("g", "T5", "T5", g);
        return p.pair("P", "f", "g");
    }();
    return p.graph().pair_generators(pair);
}

oracle::Tensor to_oracle(const AlgebraElement& x)
{
    const auto& t = x.algebra();
    const std::size_t d = t->right_factor()->dim();
    oracle::Tensor out;
    for (const Term& term : x.terms())
        out.add(oracle::parse_mono(t->left_factor()->basis(term.index / d).label),
                oracle::parse_mono(t->right_factor()->basis(term.index % d).label), term.coeff.value());
    return out;
}

// largest m with a nonzero m-fold product, by enumerating multisets in the
// reference arithmetic
std::size_t oracle_lcp(const std::vector<oracle::Tensor>& gens, std::size_t cap)
{
    std::size_t best = 0;
    std::function<void(std::size_t, std::size_t, const oracle::Tensor&)> rec =
        [&](std::size_t from, std::size_t len, const oracle::Tensor& acc) {
            if (len > best)
                best = len;
            if (len == cap)
                return;
            for (std::size_t i = from; i < gens.size(); ++i) {
                auto next = oracle::mul(acc, gens[i]);
                if (!next.zero())
                    rec(i, len + 1, next);
            }
        };
    oracle::Tensor one;
    one.add(0, 0, 1);
    rec(0, 0, one);
    return best;
}

}  // namespace

TEST_CASE("S2 degrees 2 and 3 over Q")
{
    auto gens = sphere_pair(Field::rationals());
    REQUIRE(gens->generators.size() == 1);
    const auto& g = gens->generators[0];
    CHECK(g.str() == "-3*1⊗u + 2*u⊗1");

    // (2u⊗1 - 1⊗3u)^2 = -(2u⊗1)(1⊗3u) - (1⊗3u)(2u⊗1) = -6 u⊗u - 6 u⊗u, |u| even
    const auto sq = g * g;
    CHECK(coefficient_of(sq, "u⊗u").str() == "-12");
    CHECK(sq.size() == 1);
    CHECK((sq * g).is_zero());

    const auto res = lcp_subspace_iteration(*gens);
    CHECK(res.value == 2);
    CHECK(res.witness == std::vector<std::size_t>{0, 0});
    CHECK(res.witness_product == sq);
    CHECK(res.level_dims == std::vector<std::size_t>{1, 1, 0});
    CHECK(lcp_bruteforce(*gens, 4) == 2);
}

TEST_CASE("S2 degrees 2 and 3 over F2")
{
    auto gens = sphere_pair(Field::prime(2));
    REQUIRE(gens->generators.size() == 1);
    // degree 2 vanishes mod 2, so the generator is 1⊗u and squares to zero
    CHECK(gens->generators[0].str() == "1⊗u");
    CHECK(lcp_subspace_iteration(*gens).value == 1);
    CHECK(lcp_bruteforce(*gens, 4) == 1);

    auto f3 = sphere_pair(Field::prime(3));
    CHECK(f3->generators[0].str() == "2*u⊗1");
    CHECK(lcp_subspace_iteration(*f3).value == 1);
}

TEST_CASE("T5 mixed powers")
{
    auto gens = torus_pair();
    // one class per positive-degree basis element of H*(T5)
    CHECK(gens->generators.size() == 31);
    CHECK(gens->ambient->dim() == 1024);
    std::vector<std::size_t> ubar;
    for (int i = 1; i <= 5; ++i) {
        auto it = std::find(gens->sources.begin(), gens->sources.end(), "u" + std::to_string(i));
        REQUIRE(it != gens->sources.end());
        ubar.push_back(static_cast<std::size_t>(it - gens->sources.begin()));
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto res = lcp_subspace_iteration(*gens);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    CHECK(res.value == 5);
    CHECK(res.witness.size() == 5);
    CHECK(ms < 2000);

    const auto prod = product_of(*gens, ubar);
    CHECK(coefficient_of(prod, "(u1u2u3u4u5)⊗1").str() == "48");
    const auto right = coefficient_of(prod, "1⊗(u1u2u3u4u5)").value();
    CHECK(abs(right) == 24);

    // reference product of the same classes
    std::vector<oracle::Tensor> ref;
    for (std::size_t i = 0; i < 5; ++i) {
        std::vector<std::int64_t> a(5, 0), b(5, 0);
        a[i] = kF[i];
        b[i] = kG[i];
        ref.push_back(oracle::bar(a, b));
        CHECK(to_oracle(gens->generators[ubar[i]]).c == ref.back().c);
    }
    auto acc = ref[0];
    for (std::size_t i = 1; i < 5; ++i)
        acc = oracle::mul(acc, ref[i]);
    CHECK(to_oracle(prod).c == acc.c);
    CHECK(acc.at(31, 0) == 48);
    CHECK(acc.at(0, 31) == -24);

    // every 6-fold product vanishes
    std::size_t words = 0;
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = a; b < 5; ++b)
            for (std::size_t c = b; c < 5; ++c)
                for (std::size_t d = c; d < 5; ++d)
                    for (std::size_t e = d; e < 5; ++e)
                        for (std::size_t f = e; f < 5; ++f) {
                            CHECK(product_of(*gens, {ubar[a], ubar[b], ubar[c], ubar[d], ubar[e], ubar[f]})
                                      .is_zero());
                            ++words;
                        }
    CHECK(words == 210);
}

TEST_CASE("identity pair on T5 recovers the zero-divisor cup-length")
{
    Problem p(Field::rationals());
    p.space("T5", SpaceSpec::torus(5));
    p.map("id", "T5", "T5", MapSpec::of(MapSpec::Kind::Identity));
    auto gens = p.graph().pair_generators(p.pair("P", "id", "id"));
    CHECK(lcp_subspace_iteration(*gens).value == 5);

    auto t5 = exterior_algebra(Field::rationals(), {1, 1, 1, 1, 1});
    auto zd = zero_divisor_generators(t5, tensor_product(t5, t5));
    CHECK(zd.generators.size() == 31);
    CHECK(lcp_subspace_iteration(zd).value == 5);
}

TEST_CASE("subspace iteration matches brute force and the reference search")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        const int n = 1 + i % 3;
        const Field k = i % 2 ? Field::prime(2) : Field::rationals();
        auto gens = random_bar_set(k, n, rng);
        const std::size_t fast = lcp_subspace_iteration(gens).value;
        CHECK(fast == lcp_bruteforce(gens, static_cast<std::size_t>(2 * n)));
        if (k.is_rational()) {
            std::vector<oracle::Tensor> ref;
            for (const auto& g : gens.generators)
                ref.push_back(to_oracle(g));
            CHECK(fast == oracle_lcp(ref, static_cast<std::size_t>(2 * n)));
        }
    }
}

TEST_CASE("lcp input validation")
{
    auto s1 = exterior_algebra(Field::rationals(), {1});
    auto t = tensor_product(s1, s1);
    ZeroDivisorSet bad{t, {AlgebraElement::one(t)}, {"1"}};
    CHECK_THROWS_AS(lcp_subspace_iteration(bad), LcpError);
    ZeroDivisorSet mixed{t, {AlgebraElement::basis(t, 1) + AlgebraElement::basis(t, 3)}, {"x"}};
    CHECK_THROWS_AS(lcp_subspace_iteration(mixed), LcpError);
    ZeroDivisorSet empty{t, {}, {}};
    CHECK(lcp_subspace_iteration(empty).value == 0);
    CHECK_THROWS(coefficient_of(AlgebraElement(t), "nope"));
}

TEST_CASE("hom verification")
{
    const Field q = Field::rationals();
    auto t2 = exterior_algebra(q, {1, 1});
    auto s2 = square_zero_algebra(q, {2});
    auto e = [&](const AlgebraPtr& a, const char* l) { return AlgebraElement::basis(a, a->index_of(l)); };
    auto id = identity_hom(t2);
    CHECK(id(e(t2, "u1u2")) == e(t2, "u1u2"));

    // swap u1 and u2: u1u2 goes to -u1u2
    std::vector<AlgebraElement> swap{AlgebraElement::one(t2), e(t2, "u2"), e(t2, "u1"), -e(t2, "u1u2")};
    auto sw = make_hom(t2, t2, swap);
    CHECK(compose(sw, sw)(e(t2, "u1u2")) == e(t2, "u1u2"));

    auto expect_code = [](auto&& fn, HomErrorCode code) {
        try {
            fn();
            FAIL("accepted");
        } catch (const HomError& err) {
            CHECK(err.code() == code);
        }
    };
    auto bad = swap;
    bad[3] = e(t2, "u1u2");
    expect_code([&] { make_hom(t2, t2, bad); }, HomErrorCode::NotMultiplicative);
    bad = swap;
    bad[0] = AlgebraElement(t2);
    expect_code([&] { make_hom(t2, t2, bad); }, HomErrorCode::UnitNotPreserved);
    bad = swap;
    bad[1] = e(t2, "u1u2");
    expect_code([&] { make_hom(t2, t2, bad); }, HomErrorCode::DegreeViolation);
    expect_code([&] { make_hom(t2, t2, {AlgebraElement::one(t2)}); }, HomErrorCode::ShapeMismatch);

    auto zero = make_hom(s2, s2, {AlgebraElement::one(s2), AlgebraElement(s2)});
    CHECK(zero.vanishes_in_positive_degrees());
    CHECK_FALSE(id.vanishes_in_positive_degrees());

    auto ss = tensor_product(s2, s2);
    auto two = make_hom(s2, s2, {AlgebraElement::one(s2), q.from_int(2) * e(s2, "u")});
    auto th = tensor_hom(two, zero, ss, ss);
    CHECK(th(e(ss, "u⊗1")) == q.from_int(2) * e(ss, "u⊗1"));
    CHECK(th(e(ss, "1⊗u")).is_zero());

    auto zd = zero_divisor_generators(s2, ss);
    REQUIRE(zd.generators.size() == 1);
    CHECK(zd.generators[0].str() == "-1⊗u + u⊗1");
}
