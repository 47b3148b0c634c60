#pragma once

#include "tcbivar/scalar.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tcb {

/// Input that violates an algebra invariant (bad constructor arguments,
/// a structure table that is not graded-commutative, ...).
class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands that live in different algebras. Always a caller bug.
class AlgebraMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Term {
    std::uint32_t index;
    Scalar coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

struct BasisElement {
    std::string label;
    int degree = 0;
    // products and tensor labels get parenthesised inside tensor labels
    bool compound = false;
};

class GradedAlgebra;
using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

class AlgebraElement {
public:
    AlgebraElement() = default;
    explicit AlgebraElement(AlgebraPtr alg) : alg_(std::move(alg)) {}

    static AlgebraElement basis(AlgebraPtr alg, std::size_t i);
    static AlgebraElement one(AlgebraPtr alg) { return basis(std::move(alg), 0); }
    /// Terms need not be sorted; duplicates are summed and zeros dropped.
    static AlgebraElement from_terms(AlgebraPtr alg, std::vector<Term> terms);

    const AlgebraPtr& algebra() const { return alg_; }
    std::span<const Term> terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Degree of a nonzero homogeneous element.
    std::optional<int> degree() const;
    /// Zero counts as homogeneous (of every degree).
    bool is_homogeneous() const;

    Scalar coefficient(std::size_t index) const;

    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    AlgebraElement& operator*=(const Scalar& s);

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator-(AlgebraElement a) { return a *= -a.field_one(); }
    friend AlgebraElement operator*(const Scalar& s, AlgebraElement a) { return a *= s; }
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

    /// e.g. "2*u⊗1 - 3*1⊗u"; "0" for the zero element.
    std::string str() const;

private:
    friend class GradedAlgebra;
    friend AlgebraElement multiply(const AlgebraElement&, const AlgebraElement&);
    Scalar field_one() const;
    void add_scaled(const AlgebraElement& o, const Scalar& s);

    AlgebraPtr alg_;
    std::vector<Term> terms_;  // sorted by index, no zero coefficients
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);

/// Full-table structure constants, entry i*n+j holds the terms of b_i*b_j.
using StructureTable = std::vector<std::vector<Term>>;

enum class VerifyMode { Exhaustive, Sampled };

/// Finite-dimensional connected graded-commutative algebra, stored as a
/// basis plus a sparse structure table in CSR form. Immutable.
class GradedAlgebra : public std::enable_shared_from_this<GradedAlgebra> {
    struct Private {};

public:
    GradedAlgebra(Private, Field field, std::vector<BasisElement> basis);

    /// Validating constructor: throws AlgebraError naming the first violated
    /// invariant. Associativity is checked on every triple.
    static AlgebraPtr from_table(Field field, std::vector<BasisElement> basis, const StructureTable& table);

    const Field& field() const { return field_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const BasisElement& basis(std::size_t i) const { return basis_.at(i); }
    int degree(std::size_t i) const { return basis_[i].degree; }
    int top_degree() const { return top_degree_; }
    /// Basis indices of the given degree, ascending.
    std::span<const std::uint32_t> component(int degree) const;

    std::span<const Term> product(std::size_t i, std::size_t j) const
    {
        const std::size_t k = i * basis_.size() + j;
        return {pool_.data() + offsets_[k], pool_.data() + offsets_[k + 1]};
    }

    /// Accepts ASCII or Unicode subscript digits ("u₁" == "u1").
    std::optional<std::size_t> find(std::string_view label) const;
    std::size_t index_of(std::string_view label) const;

    StructureTable table() const;

    /// Factors this algebra was built from by tensor_product, if any.
    const AlgebraPtr& left_factor() const { return left_; }
    const AlgebraPtr& right_factor() const { return right_; }
    bool is_tensor() const { return left_ != nullptr; }

    /// Returns one message per violated invariant (empty on success).
    /// Sampled mode checks associativity on `samples` random triples.
    std::vector<std::string> check_invariants(VerifyMode mode = VerifyMode::Exhaustive,
                                              std::size_t samples = 2000,
                                              std::uint64_t seed = 1) const;

    friend bool same_algebra(const GradedAlgebra& a, const GradedAlgebra& b);

private:
    friend AlgebraPtr exterior_algebra(const Field&, const std::vector<int>&, const std::string&);
    friend AlgebraPtr truncated_polynomial(const Field&, int, int, const std::string&);
    friend AlgebraPtr square_zero_algebra(const Field&, const std::vector<int>&, const std::string&);
    friend AlgebraPtr tensor_product(const AlgebraPtr&, const AlgebraPtr&);

    template <class Fn>
    void fill_table(Fn&& fn);
    void index_basis();

    Field field_;
    std::vector<BasisElement> basis_;
    std::vector<std::uint32_t> offsets_;
    std::vector<Term> pool_;
    std::vector<std::vector<std::uint32_t>> components_;
    std::unordered_map<std::string, std::uint32_t> by_label_;
    int top_degree_ = 0;
    AlgebraPtr left_, right_;
};

bool same_algebra(const GradedAlgebra& a, const GradedAlgebra& b);
inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b)
{
    return a == b || (a && b && same_algebra(*a, *b));
}

/// Λ(u₁..uₙ) with odd generator degrees. Labels are "u" for a single
/// generator and "u1", "u1u2", ... otherwise.
AlgebraPtr exterior_algebra(const Field& field, const std::vector<int>& degrees, const std::string& name = "u");
/// k[u]/(u^{height+1}) with |u| even.
AlgebraPtr truncated_polynomial(const Field& field, int degree, int height, const std::string& name = "u");
/// The unit plus the given classes, all products of positive-degree classes
/// zero (a wedge of spheres). Labels "u1".."uk", or "u" when k = 1.
AlgebraPtr square_zero_algebra(const Field& field, const std::vector<int>& degrees, const std::string& name = "u");
/// The ground field in degree 0.
AlgebraPtr trivial_algebra(const Field& field);
/// Koszul-signed tensor product, basis row-major in (left, right).
AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);

AlgebraElement embed_left(const AlgebraElement& a, const AlgebraPtr& tensor);
AlgebraElement embed_right(const AlgebraElement& b, const AlgebraPtr& tensor);

/// "u₁u₂" -> "u1u2".
std::string ascii_label(std::string_view label);

}  // namespace tcb
