#include "axioms.hpp"
#include "oracle.hpp"

#include "tcbivar/graded_algebra.hpp"

#include <doctest.h>

#include <random>

using namespace tcb;

TEST_CASE("scalar arithmetic")
{
    const Field q = Field::rationals();
    const Field f5 = Field::prime(5);
    CHECK(q.from_fraction(6, -4).str() == "-3/2");
    CHECK((f5.from_int(3) * f5.from_int(4)).str() == "2");
    CHECK(f5.from_int(-1).str() == "4");
    CHECK((f5.from_int(2).inverse() * f5.from_int(2)).is_one());
    CHECK_THROWS_AS(f5.from_int(5).inverse(), std::domain_error);
    CHECK_THROWS_AS(q.from_fraction(1, 0), std::domain_error);
    CHECK_THROWS_AS(f5.from_fraction(1, 10), std::domain_error);
    CHECK_THROWS_AS(Field::prime(4), std::invalid_argument);
    CHECK_THROWS_AS(Field::prime(1), std::invalid_argument);
    CHECK(is_prime(2));
    CHECK(is_prime(65537));
    CHECK_FALSE(is_prime(91));
}

TEST_CASE("constructor shapes")
{
    const Field q = Field::rationals();
    auto s2 = square_zero_algebra(q, {2});
    CHECK(s2->dim() == 2);
    CHECK(s2->top_degree() == 2);
    CHECK(s2->basis(1).label == "u");

    auto t5 = exterior_algebra(q, {1, 1, 1, 1, 1});
    CHECK(t5->dim() == 32);
    CHECK(t5->component(2).size() == 10);
    CHECK(t5->find("u₁u₃") == t5->find("u1u3"));
    CHECK(t5->find("u1u3").has_value());
    CHECK_FALSE(t5->find("u3u1").has_value());

    auto poly = truncated_polynomial(q, 2, 3);
    CHECK(poly->dim() == 4);
    CHECK(poly->top_degree() == 6);
    CHECK_THROWS_AS(truncated_polynomial(q, 3, 2), AlgebraError);
    CHECK_THROWS_AS(exterior_algebra(q, {2}), AlgebraError);

    auto tt = tensor_product(t5, t5);
    CHECK(tt->dim() == 1024);
    CHECK(tt->find("(u1u2u3u4u5)⊗1").has_value());
    CHECK(tt->find("1⊗(u1u2u3u4u5)").has_value());

    CHECK(trivial_algebra(q)->dim() == 1);
}

TEST_CASE("tensor product agrees with the reference sign rules")
{
    for (int n = 1; n <= 3; ++n) {
        auto lam = exterior_algebra(Field::rationals(), std::vector<int>(static_cast<std::size_t>(n), 1));
        auto t = tensor_product(lam, lam);
        const std::size_t d = lam->dim();
        for (std::size_t x = 0; x < t->dim(); ++x)
            for (std::size_t y = 0; y < t->dim(); ++y) {
                oracle::Tensor a, b;
                a.add(oracle::parse_mono(lam->basis(x / d).label), oracle::parse_mono(lam->basis(x % d).label), 1);
                b.add(oracle::parse_mono(lam->basis(y / d).label), oracle::parse_mono(lam->basis(y % d).label), 1);
                const auto want = oracle::mul(a, b);
                const auto got = AlgebraElement::basis(t, x) * AlgebraElement::basis(t, y);
                std::size_t nonzero = 0;
                for (std::size_t z = 0; z < t->dim(); ++z) {
                    const auto c = got.coefficient(z).value();
                    const auto w = want.at(oracle::parse_mono(lam->basis(z / d).label),
                                           oracle::parse_mono(lam->basis(z % d).label));
                    CHECK(c == w);
                    nonzero += w != 0;
                }
                CHECK(nonzero == want.c.size());
            }
    }
}

TEST_CASE("axioms hold on every constructor output")
{
    axioms::Stats st;
    for (const Field& k : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
        const auto tag = k.name();
        auto s1 = exterior_algebra(k, {1});
        auto s2 = square_zero_algebra(k, {2});
        auto t3 = exterior_algebra(k, {1, 1, 1});
        auto mixed = exterior_algebra(k, {1, 3});
        auto wedge = square_zero_algebra(k, {1, 1});
        auto poly = truncated_polynomial(k, 2, 3);
        axioms::check(tag + " S1", s1, 50, 1, st);
        axioms::check(tag + " S2", s2, 50, 2, st);
        axioms::check(tag + " T3", t3, 100, 3, st);
        axioms::check(tag + " Λ(1,3)", mixed, 50, 4, st);
        axioms::check(tag + " wedge", wedge, 50, 5, st);
        axioms::check(tag + " poly", poly, 50, 6, st);
        axioms::check(tag + " S2⊗S2", tensor_product(s2, s2), 100, 7, st);
        axioms::check(tag + " T3⊗T3", tensor_product(t3, t3), 100, 8, st);
        axioms::check(tag + " poly⊗S1", tensor_product(poly, s1), 100, 9, st);
        axioms::check_koszul(tag + " S2⊗S2", tensor_product(s2, s2), st);
        axioms::check_koszul(tag + " T3⊗T3", tensor_product(t3, t3), st);
        axioms::check_koszul(tag + " poly⊗Λ(1,3)", tensor_product(poly, mixed), st);
        CHECK(tensor_product(t3, t3)->check_invariants().empty());
    }
    CHECK(st.triples >= 500);
    for (const auto& f : st.failures)
        FAIL_CHECK(f);
}

TEST_CASE("validating constructor rejects broken tables")
{
    const Field q = Field::rationals();
    auto t2 = exterior_algebra(q, {1, 1});
    auto table = t2->table();
    const std::size_t n = t2->dim();
    const auto u1 = t2->index_of("u1"), u2 = t2->index_of("u2"), u12 = t2->index_of("u1u2");

    SUBCASE("commutativity")
    {
        table[u2 * n + u1] = {{static_cast<std::uint32_t>(u12), q.one()}};
        CHECK_THROWS_AS(GradedAlgebra::from_table(q, t2->basis(), table), AlgebraError);
    }
    SUBCASE("degree")
    {
        table[u1 * n + u2].push_back({static_cast<std::uint32_t>(u1), q.one()});
        CHECK_THROWS_AS(GradedAlgebra::from_table(q, t2->basis(), table), AlgebraError);
    }
    SUBCASE("unit")
    {
        table[0 * n + u1] = {{static_cast<std::uint32_t>(u2), q.one()}};
        CHECK_THROWS_AS(GradedAlgebra::from_table(q, t2->basis(), table), AlgebraError);
    }
    SUBCASE("odd square over Q")
    {
        auto lam = exterior_algebra(q, {1, 1});
        auto bad = lam->table();
        bad[u1 * n + u1] = {{static_cast<std::uint32_t>(u12), q.one()}};
        CHECK_THROWS_AS(GradedAlgebra::from_table(q, lam->basis(), bad), AlgebraError);
    }
    SUBCASE("intact table round-trips")
    {
        auto again = GradedAlgebra::from_table(q, t2->basis(), table);
        CHECK(same_algebra(*again, *t2));
    }
}

TEST_CASE("single structure-constant corruptions")
{
    const Field q = Field::rationals();
    SUBCASE("exterior algebras reject every corruption")
    {
        axioms::Mutations m;
        axioms::mutate_table("Λ(u1,u2,u3)", exterior_algebra(q, {1, 1, 1}), m);
        axioms::mutate_table("S1⊗S1", tensor_product(exterior_algebra(q, {1}), exterior_algebra(q, {1})), m);
        CHECK(m.tried > 500);
        CHECK(m.survivors.empty());
    }
    SUBCASE("S2⊗S2 accepts exactly the corruptions that are still algebras")
    {
        auto s2 = square_zero_algebra(q, {2});
        auto zz = tensor_product(s2, s2);
        axioms::Mutations m;
        axioms::mutate_table("S2⊗S2", zz, m);
        // squaring a degree-2 class into u⊗u keeps every axiom
        CHECK(m.survivors == std::vector<std::string>{"S2⊗S2: 1⊗u*1⊗u += u⊗u", "S2⊗S2: u⊗1*u⊗1 += u⊗u"});
        auto table = zz->table();
        const auto i = zz->index_of("u⊗1"), k = zz->index_of("u⊗u");
        table[i * zz->dim() + i] = {{static_cast<std::uint32_t>(k), q.one()}};
        auto alt = GradedAlgebra::from_table(q, zz->basis(), table);
        CHECK(alt->check_invariants().empty());
        CHECK_FALSE(same_algebra(*alt, *zz));
    }
}

TEST_CASE("element printing and labels")
{
    const Field q = Field::rationals();
    auto s2 = square_zero_algebra(q, {2});
    auto zz = tensor_product(s2, s2);
    auto u = AlgebraElement::basis(s2, 1);
    auto x = embed_left(q.from_int(2) * u, zz) - embed_right(q.from_int(3) * u, zz);
    CHECK(x.str() == "-3*1⊗u + 2*u⊗1");
    CHECK(AlgebraElement(zz).str() == "0");
    CHECK(x.degree() == 2);
    CHECK(ascii_label("u₁u₂") == "u1u2");
}
