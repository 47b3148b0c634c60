#include "tcbivar/scalar.hpp"

#include <fmt/core.h>

namespace tcb {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Field Field::prime(std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument(fmt::format("{} is not prime", p));
    return Field{p};
}

Scalar Field::zero() const { return Scalar{mpq_class(0), p_}; }
Scalar Field::one() const { return Scalar{mpq_class(1), p_}; }
Scalar Field::from_int(long value) const { return Scalar{mpq_class(value), p_}; }

Scalar Field::from_fraction(const mpz_class& num, const mpz_class& den) const
{
    if (p_ == 0) {
        if (den == 0)
            throw std::domain_error("zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar{q, 0};
    }
    Scalar n{mpq_class(num), p_};
    Scalar d{mpq_class(den), p_};
    return n / d;
}

std::string Field::name() const { return p_ == 0 ? "Q" : fmt::format("F{}", p_); }

void Scalar::normalize()
{
    if (p_ == 0) {
        q_.canonicalize();
        return;
    }
    // residues are always integral here; reduce into [0, p)
    mpz_class r = q_.get_num();
    mpz_class p(static_cast<unsigned long>(p_));
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
    q_ = mpq_class(r);
}

void Scalar::check_same_field(const Scalar& o) const
{
    if (p_ != o.p_)
        throw std::logic_error("scalar arithmetic across different fields");
}

Scalar Scalar::operator-() const
{
    Scalar r = *this;
    r.q_ = -r.q_;
    r.normalize();
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    check_same_field(o);
    q_ += o.q_;
    if (p_ != 0)
        normalize();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    check_same_field(o);
    q_ -= o.q_;
    if (p_ != 0)
        normalize();
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    check_same_field(o);
    q_ *= o.q_;
    if (p_ != 0)
        normalize();
    return *this;
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw std::domain_error("division by zero");
    if (p_ == 0)
        return Scalar{1 / q_, 0};
    mpz_class inv;
    mpz_class p(static_cast<unsigned long>(p_));
    mpz_class v = q_.get_num();
    mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    return Scalar{mpq_class(inv), p_};
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    check_same_field(o);
    return *this *= o.inverse();
}

std::string Scalar::str() const { return q_.get_str(); }

}  // namespace tcb
