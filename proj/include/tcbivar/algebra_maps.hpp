#pragma once

#include "tcbivar/graded_algebra.hpp"

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcb {

enum class HomErrorCode { ShapeMismatch, UnitNotPreserved, DegreeViolation, NotMultiplicative };

const char* to_string(HomErrorCode code);

class HomError : public std::runtime_error {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    HomError(HomErrorCode code, const std::string& what, std::size_t i = npos, std::size_t j = npos)
        : std::runtime_error(what), code_(code), i_(i), j_(j)
    {
    }

    HomErrorCode code() const { return code_; }
    /// Offending source basis indices; j is npos for single-element failures.
    std::size_t first() const { return i_; }
    std::size_t second() const { return j_; }

private:
    HomErrorCode code_;
    std::size_t i_, j_;
};

/// Degree-preserving unital multiplicative map, given by the images of the
/// full source basis.
class GradedHom {
public:
    GradedHom() = default;

    const AlgebraPtr& source() const { return source_; }
    const AlgebraPtr& target() const { return target_; }
    const std::vector<AlgebraElement>& images() const { return images_; }
    const AlgebraElement& image(std::size_t i) const { return images_.at(i); }

    AlgebraElement operator()(const AlgebraElement& x) const;

    /// True when every positive-degree basis element maps to zero.
    bool vanishes_in_positive_degrees() const;

    friend GradedHom make_hom(AlgebraPtr, AlgebraPtr, std::vector<AlgebraElement>);

private:
    AlgebraPtr source_, target_;
    std::vector<AlgebraElement> images_;
};

/// Verifies unit, degree and multiplicativity on every basis pair; throws
/// HomError with the first failure.
GradedHom make_hom(AlgebraPtr source, AlgebraPtr target, std::vector<AlgebraElement> images);

GradedHom identity_hom(const AlgebraPtr& alg);
/// outer ∘ inner.
GradedHom compose(const GradedHom& outer, const GradedHom& inner);
/// b_i⊗b_j ↦ f(b_i)⊗g(b_j). No Koszul sign: factors never get transposed.
GradedHom tensor_hom(const GradedHom& f, const GradedHom& g, const AlgebraPtr& source_tensor,
                     const AlgebraPtr& target_tensor);

struct ZeroDivisorSet {
    AlgebraPtr ambient;
    std::vector<AlgebraElement> generators;
    /// Label of the basis element u of H*(Z) each generator comes from.
    std::vector<std::string> sources;
};

/// u⊗1 - 1⊗u for every positive-degree basis element u.
ZeroDivisorSet zero_divisor_generators(const AlgebraPtr& z, const AlgebraPtr& zz);
/// f*(u)⊗1 - 1⊗g*(u) in H*(X)⊗H*(Y); zero generators are dropped.
ZeroDivisorSet bar_generators(const GradedHom& fstar, const GradedHom& gstar, const AlgebraPtr& xy);

}  // namespace tcb
