#include "tcbivar/algebra_maps.hpp"

#include <fmt/core.h>

namespace tcb {

const char* to_string(HomErrorCode code)
{
    switch (code) {
    case HomErrorCode::ShapeMismatch:
        return "shape-mismatch";
    case HomErrorCode::UnitNotPreserved:
        return "unit-not-preserved";
    case HomErrorCode::DegreeViolation:
        return "degree-violation";
    case HomErrorCode::NotMultiplicative:
        return "not-multiplicative";
    }
    return "?";
}

AlgebraElement GradedHom::operator()(const AlgebraElement& x) const
{
    if (!same_algebra(x.algebra(), source_))
        throw AlgebraMismatch("hom applied to an element outside its source");
    AlgebraElement out(target_);
    for (const Term& t : x.terms())
        out += t.coeff * images_[t.index];
    return out;
}

bool GradedHom::vanishes_in_positive_degrees() const
{
    for (std::size_t i = 1; i < images_.size(); ++i)
        if (!images_[i].is_zero())
            return false;
    return true;
}

GradedHom make_hom(AlgebraPtr source, AlgebraPtr target, std::vector<AlgebraElement> images)
{
    if (!source || !target)
        throw HomError(HomErrorCode::ShapeMismatch, "hom with a null source or target");
    const GradedAlgebra& src = *source;
    if (images.size() != src.dim())
        throw HomError(HomErrorCode::ShapeMismatch,
                       fmt::format("{} images given for a source of dimension {}", images.size(), src.dim()));
    if (src.field() != target->field())
        throw HomError(HomErrorCode::ShapeMismatch, "source and target over different fields");
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!images[i].algebra())
            images[i] = AlgebraElement(target);
        else if (!same_algebra(images[i].algebra(), target))
            throw HomError(HomErrorCode::ShapeMismatch,
                           fmt::format("image of '{}' lies outside the target", src.basis(i).label), i);
    }

    if (!(images[0] == AlgebraElement::one(target)))
        throw HomError(HomErrorCode::UnitNotPreserved, fmt::format("1 maps to {}", images[0].str()), 0);

    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& im = images[i];
        if (im.is_zero())
            continue;
        if (!im.is_homogeneous() || *im.degree() != src.degree(i))
            throw HomError(HomErrorCode::DegreeViolation,
                           fmt::format("'{}' has degree {} but maps to {}", src.basis(i).label, src.degree(i),
                                       im.str()),
                           i);
    }

    for (std::size_t i = 1; i < src.dim(); ++i)
        for (std::size_t j = 1; j < src.dim(); ++j) {
            AlgebraElement lhs(target);
            for (const Term& t : src.product(i, j))
                lhs += t.coeff * images[t.index];
            if (!(lhs == images[i] * images[j]))
                throw HomError(HomErrorCode::NotMultiplicative,
                               fmt::format("image of '{}'*'{}' differs from the product of images",
                                           src.basis(i).label, src.basis(j).label),
                               i, j);
        }

    GradedHom h;
    h.source_ = std::move(source);
    h.target_ = std::move(target);
    h.images_ = std::move(images);
    return h;
}

GradedHom identity_hom(const AlgebraPtr& alg)
{
    std::vector<AlgebraElement> images;
    for (std::size_t i = 0; i < alg->dim(); ++i)
        images.push_back(AlgebraElement::basis(alg, i));
    return make_hom(alg, alg, std::move(images));
}

GradedHom compose(const GradedHom& outer, const GradedHom& inner)
{
    if (!same_algebra(inner.target(), outer.source()))
        throw AlgebraMismatch("composing homs whose algebras do not match");
    std::vector<AlgebraElement> images;
    for (const auto& im : inner.images())
        images.push_back(outer(im));
    return make_hom(inner.source(), outer.target(), std::move(images));
}

GradedHom tensor_hom(const GradedHom& f, const GradedHom& g, const AlgebraPtr& source_tensor,
                     const AlgebraPtr& target_tensor)
{
    if (!source_tensor || !source_tensor->is_tensor() || !same_algebra(source_tensor->left_factor(), f.source()) ||
        !same_algebra(source_tensor->right_factor(), g.source()))
        throw AlgebraMismatch("source tensor does not match the factor homs");
    if (!target_tensor || !target_tensor->is_tensor() || !same_algebra(target_tensor->left_factor(), f.target()) ||
        !same_algebra(target_tensor->right_factor(), g.target()))
        throw AlgebraMismatch("target tensor does not match the factor homs");
    const std::size_t nb = g.source()->dim();
    const std::size_t ny = g.target()->dim();
    std::vector<AlgebraElement> images;
    images.reserve(source_tensor->dim());
    for (std::size_t x = 0; x < source_tensor->dim(); ++x) {
        const auto& a = f.image(x / nb);
        const auto& b = g.image(x % nb);
        std::vector<Term> terms;
        for (const Term& s : a.terms())
            for (const Term& t : b.terms())
                terms.push_back({static_cast<std::uint32_t>(s.index * ny + t.index), s.coeff * t.coeff});
        images.push_back(AlgebraElement::from_terms(target_tensor, std::move(terms)));
    }
    return make_hom(source_tensor, target_tensor, std::move(images));
}

ZeroDivisorSet zero_divisor_generators(const AlgebraPtr& z, const AlgebraPtr& zz)
{
    if (!zz || !zz->is_tensor() || !same_algebra(zz->left_factor(), z) || !same_algebra(zz->right_factor(), z))
        throw AlgebraMismatch("ambient algebra is not the square tensor of Z");
    ZeroDivisorSet set{zz, {}, {}};
    for (std::size_t i = 1; i < z->dim(); ++i) {
        auto u = AlgebraElement::basis(z, i);
        set.generators.push_back(embed_left(u, zz) - embed_right(u, zz));
        set.sources.push_back(z->basis(i).label);
    }
    return set;
}

ZeroDivisorSet bar_generators(const GradedHom& fstar, const GradedHom& gstar, const AlgebraPtr& xy)
{
    if (!same_algebra(fstar.source(), gstar.source()))
        throw AlgebraMismatch("f* and g* have different sources");
    if (!xy || !xy->is_tensor() || !same_algebra(xy->left_factor(), fstar.target()) ||
        !same_algebra(xy->right_factor(), gstar.target()))
        throw AlgebraMismatch("ambient algebra is not H*(X)⊗H*(Y) for these homs");
    const GradedAlgebra& z = *fstar.source();
    ZeroDivisorSet set{xy, {}, {}};
    for (std::size_t i = 1; i < z.dim(); ++i) {
        auto bar = embed_left(fstar.image(i), xy) - embed_right(gstar.image(i), xy);
        if (bar.is_zero())
            continue;
        set.generators.push_back(std::move(bar));
        set.sources.push_back(z.basis(i).label);
    }
    return set;
}

}  // namespace tcb
