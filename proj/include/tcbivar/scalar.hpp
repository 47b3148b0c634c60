#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tcb {

class Scalar;

/// Coefficient field: the rationals or a prime field F_p.
class Field {
public:
    static Field rationals() { return Field{0}; }
    /// Throws std::invalid_argument unless p is prime.
    static Field prime(std::uint64_t p);

    bool is_rational() const { return p_ == 0; }
    std::uint64_t characteristic() const { return p_; }

    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(long value) const;
    /// Throws std::domain_error when the denominator vanishes in this field.
    Scalar from_fraction(const mpz_class& num, const mpz_class& den) const;

    std::string name() const;

    friend bool operator==(const Field&, const Field&) = default;

private:
    friend class Scalar;
    explicit Field(std::uint64_t p) : p_(p) {}
    std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

/// Exact field element. Rationals are kept canonical (reduced, positive
/// denominator); residues live in [0, p) stored as integral rationals.
class Scalar {
public:
    Scalar() = default;

    Field field() const { return Field{p_}; }
    std::uint64_t modulus() const { return p_; }
    const mpq_class& value() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    /// Throws std::domain_error on division by zero.
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.p_ == b.p_ && a.q_ == b.q_; }

    Scalar inverse() const;
    std::string str() const;

private:
    friend class Field;
    Scalar(mpq_class q, std::uint64_t p) : q_(std::move(q)), p_(p) { normalize(); }

    void normalize();
    void check_same_field(const Scalar& o) const;

    mpq_class q_{0};
    std::uint64_t p_ = 0;
};

}  // namespace tcb
