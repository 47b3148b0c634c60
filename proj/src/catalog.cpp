#include "tcbivar/catalog.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <numeric>

namespace tcb {

namespace {

std::string gen_label(int count, int i)
{
    return count == 1 ? std::string("u") : fmt::format("u{}", i);
}

bool is_circle(const SpaceSpec& s)
{
    using K = SpaceSpec::Kind;
    return (s.kind == K::Sphere || s.kind == K::Torus || s.kind == K::Wedge) && s.n == 1;
}

void validate(const SpaceSpec& s)
{
    using K = SpaceSpec::Kind;
    switch (s.kind) {
    case K::Sphere:
    case K::Torus:
        if (s.n < 1)
            throw CatalogError(fmt::format("{} needs n >= 1", describe(s)));
        break;
    case K::Wedge:
        if (s.n < 1)
            throw CatalogError(fmt::format("{} needs k >= 1", describe(s)));
        break;
    case K::PathSpace:
        if (s.parts.size() != 1)
            throw CatalogError("pathspace needs exactly one base");
        validate(s.parts[0]);
        break;
    case K::Product:
        if (s.parts.size() != 2)
            throw CatalogError("product needs exactly two factors");
        validate(s.parts[0]);
        validate(s.parts[1]);
        break;
    default:
        break;
    }
}

AlgebraElement scaled_basis(const AlgebraPtr& alg, std::size_t i, std::int64_t c)
{
    return alg->field().from_int(static_cast<long>(c)) * AlgebraElement::basis(alg, i);
}

GradedHom hom_or_throw(const AlgebraPtr& source, const AlgebraPtr& target,
                       const std::vector<std::optional<AlgebraElement>>& given)
{
    try {
        return extend_multiplicatively(source, target, given);
    } catch (const HomError& e) {
        throw CatalogError(fmt::format("induced map is not a graded algebra map ({}): {}", to_string(e.code()),
                                       e.what()));
    }
}

GradedHom zero_hom(const AlgebraPtr& source, const AlgebraPtr& target)
{
    return hom_or_throw(source, target, std::vector<std::optional<AlgebraElement>>(source->dim()));
}

}  // namespace

std::string describe(const SpaceSpec& s)
{
    using K = SpaceSpec::Kind;
    switch (s.kind) {
    case K::Point: return "point";
    case K::Contractible: return "contractible";
    case K::Sphere: return fmt::format("sphere({})", s.n);
    case K::Torus: return fmt::format("torus({})", s.n);
    case K::Wedge: return fmt::format("wedge_circles({})", s.n);
    case K::PathSpace: return fmt::format("pathspace({})", s.parts.empty() ? "?" : describe(s.parts[0]));
    case K::Product:
        return s.parts.size() == 2 ? fmt::format("product({}, {})", describe(s.parts[0]), describe(s.parts[1]))
                                   : "product(?)";
    }
    return "?";
}

const char* to_string(FactSource s)
{
    switch (s) {
    case FactSource::Reference: return "reference";
    case FactSource::Literature: return "literature";
    case FactSource::Derived: return "derived";
    }
    return "?";
}

SpaceFlags catalog_flags(const SpaceSpec& s)
{
    using K = SpaceSpec::Kind;
    SpaceFlags f;
    switch (s.kind) {
    case K::Point:
    case K::Contractible:
    case K::PathSpace:
        f.contractible = true;
        f.h_group = true;
        break;
    case K::Sphere:
        f.h_group = s.n == 1 || s.n == 3;
        break;
    case K::Torus:
        f.h_group = true;
        break;
    case K::Wedge:
        f.h_group = false;
        break;
    case K::Product:
        f.h_group = catalog_flags(s.parts.at(0)).h_group && catalog_flags(s.parts.at(1)).h_group;
        f.contractible = catalog_flags(s.parts[0]).contractible && catalog_flags(s.parts[1]).contractible;
        break;
    }
    return f;
}

CatalogSpace instantiate_space(const SpaceSpec& spec, const Field& field)
{
    using K = SpaceSpec::Kind;
    validate(spec);
    CatalogSpace out;
    out.flags = catalog_flags(spec);
    auto lit = [&](Quantity q, ExtNat v, std::string why) {
        out.facts.push_back({"", q, Interval::exactly(v), FactSource::Literature, std::move(why)});
    };
    auto ref = [&](Quantity q, ExtNat v, std::string why) {
        out.facts.push_back({"", q, Interval::exactly(v), FactSource::Reference, std::move(why)});
    };
    auto circle_facts = [&] {
        lit(Quantity::Cat, 1, "cat(S^1) = 1 (Lusternik-Schnirelmann)");
        ref(Quantity::TC, 1, "TC(S^1) = 1");
    };

    switch (spec.kind) {
    case K::Point:
    case K::Contractible:
    case K::PathSpace:
        out.algebra = trivial_algebra(field);
        break;
    case K::Sphere:
        out.algebra = spec.n % 2 ? exterior_algebra(field, {spec.n}) : truncated_polynomial(field, spec.n, 1);
        if (spec.n == 1) {
            circle_facts();
        } else {
            lit(Quantity::Cat, 1, fmt::format("cat(S^{}) = 1 (Lusternik-Schnirelmann)", spec.n));
            if (spec.n == 2)
                ref(Quantity::TC, 2, "TC(S^2) = 2");
            else
                lit(Quantity::TC, spec.n % 2 ? 1 : 2,
                    fmt::format("TC(S^{}) = {} (Farber: 1 for odd spheres, 2 for even)", spec.n, spec.n % 2 ? 1 : 2));
        }
        break;
    case K::Torus: {
        if (spec.n > 12)
            throw CatalogError(fmt::format("torus({}) is too large (at most 12 factors)", spec.n));
        out.algebra = exterior_algebra(field, std::vector<int>(static_cast<std::size_t>(spec.n), 1));
        if (spec.n == 1) {
            circle_facts();
        } else {
            lit(Quantity::Cat, static_cast<std::uint64_t>(spec.n), fmt::format("cat(T^{0}) = {0}", spec.n));
            lit(Quantity::TC, static_cast<std::uint64_t>(spec.n), fmt::format("TC(T^{0}) = {0} (Farber)", spec.n));
        }
        break;
    }
    case K::Wedge:
        out.algebra = square_zero_algebra(field, std::vector<int>(static_cast<std::size_t>(spec.n), 1));
        if (spec.n == 1) {
            circle_facts();
        } else {
            lit(Quantity::Cat, 1, "cat of a wedge of circles is 1");
            lit(Quantity::TC, 2, "TC of a wedge of k >= 2 circles is 2 (Farber)");
        }
        break;
    case K::Product: {
        auto a = instantiate_space(spec.parts[0], field);
        auto b = instantiate_space(spec.parts[1], field);
        if (a.algebra->dim() * b.algebra->dim() > 4096)
            throw CatalogError(fmt::format("{} has a cohomology ring that is too large", describe(spec)));
        out.algebra = tensor_product(a.algebra, b.algebra);
        break;
    }
    }
    return out;
}

GradedHom extend_multiplicatively(const AlgebraPtr& source, const AlgebraPtr& target,
                                  const std::vector<std::optional<AlgebraElement>>& given)
{
    const std::size_t n = source->dim();
    std::vector<std::optional<AlgebraElement>> img(n);
    img[0] = AlgebraElement::one(target);
    if (!given.empty() && given[0])
        img[0] = given[0];
    std::vector<std::uint32_t> generators;

    auto decompose = [&](std::uint32_t i, const std::vector<std::uint32_t>& left) -> std::optional<AlgebraElement> {
        const int d = source->degree(i);
        for (std::uint32_t j : left) {
            const int dj = source->degree(j);
            if (dj <= 0 || dj >= d)
                continue;
            for (std::uint32_t k : source->component(d - dj)) {
                auto p = source->product(j, k);
                if (p.size() == 1 && p[0].index == i && img[j] && img[k]) {
                    auto inv = source->field().one();
                    inv /= p[0].coeff;
                    return inv * (*img[j] * *img[k]);
                }
            }
        }
        return std::nullopt;
    };

    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    for (int d = 1; d <= source->top_degree(); ++d) {
        for (std::uint32_t i : source->component(d)) {
            if (i < given.size() && given[i]) {
                img[i] = given[i];
                if (!decompose(i, generators))
                    generators.push_back(i);
                continue;
            }
            auto e = decompose(i, generators);
            if (!e && n <= 64)
                e = decompose(i, all);
            if (e) {
                img[i] = *e;
            } else {
                img[i] = AlgebraElement(target);
                generators.push_back(i);
            }
        }
    }
    std::vector<AlgebraElement> images;
    images.reserve(n);
    for (auto& e : img)
        images.push_back(e ? *e : AlgebraElement(target));
    return make_hom(source, target, std::move(images));
}

CatalogMap instantiate_map(const MapSpec& spec, const SpaceSpec& domain, const CatalogSpace& dom,
                           const SpaceSpec& codomain, const CatalogSpace& cod)
{
    using K = MapSpec::Kind;
    using SK = SpaceSpec::Kind;
    const AlgebraPtr& src = cod.algebra;
    const AlgebraPtr& tgt = dom.algebra;
    const Field& field = src->field();
    std::vector<std::optional<AlgebraElement>> given(src->dim());
    CatalogMap out;

    switch (spec.kind) {
    case K::Identity:
        if (!(domain == codomain))
            throw CatalogError(fmt::format("identity needs equal domain and codomain, got {} -> {}",
                                           describe(domain), describe(codomain)));
        out.flags.identity = true;
        for (std::size_t i = 0; i < src->dim(); ++i)
            given[i] = AlgebraElement::basis(tgt, i);
        out.hom = hom_or_throw(src, tgt, given);
        break;

    case K::Constant:
        out.flags.nullhomotopic = true;
        out.constant_point = spec.point;
        out.hom = zero_hom(src, tgt);
        break;

    case K::Degree: {
        if (domain.kind != SK::Sphere || !(domain == codomain))
            throw CatalogError(fmt::format("degree maps are defined only on a sphere, got {} -> {}",
                                           describe(domain), describe(codomain)));
        if (spec.k == 0) {
            out.flags.nullhomotopic = true;
        } else {
            out.flags.surjective = true;
            // z -> z^k on the circle is a covering
            out.flags.fibration = domain.n == 1;
        }
        given[src->index_of("u")] = scaled_basis(tgt, tgt->index_of("u"), spec.k);
        out.hom = hom_or_throw(src, tgt, given);
        break;
    }

    case K::Powers: {
        if (domain.kind != SK::Torus || !(domain == codomain))
            throw CatalogError(fmt::format("coordinate powers are defined only on a torus, got {} -> {}",
                                           describe(domain), describe(codomain)));
        const int n = domain.n;
        if (spec.exponents.size() != static_cast<std::size_t>(n))
            throw CatalogError(fmt::format("powers on torus({}) needs {} exponents, got {}", n, n,
                                           spec.exponents.size()));
        std::vector<int> perm = spec.permutation;
        if (perm.empty()) {
            perm.resize(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 1);
        }
        std::vector<int> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expect(static_cast<std::size_t>(n));
        std::iota(expect.begin(), expect.end(), 1);
        if (sorted != expect)
            throw CatalogError(fmt::format("coordinate permutation must be a permutation of 1..{}", n));
        bool all_nonzero = true, all_zero = true;
        for (int i = 0; i < n; ++i) {
            const std::int64_t e = spec.exponents[static_cast<std::size_t>(i)];
            all_nonzero = all_nonzero && e != 0;
            all_zero = all_zero && e == 0;
            given[src->index_of(gen_label(n, i + 1))] =
                scaled_basis(tgt, tgt->index_of(gen_label(n, perm[static_cast<std::size_t>(i)])), e);
        }
        out.flags.fibration = out.flags.surjective = all_nonzero;
        out.flags.nullhomotopic = all_zero;
        out.hom = hom_or_throw(src, tgt, given);
        break;
    }

    case K::Projection: {
        if (domain.kind != SK::Product || (spec.k != 1 && spec.k != 2))
            throw CatalogError("projection(i) needs a product domain and i in {1,2}");
        const SpaceSpec& factor = domain.parts[static_cast<std::size_t>(spec.k - 1)];
        if (!(factor == codomain))
            throw CatalogError(fmt::format("projection({}) of {} lands in {}, not {}", spec.k, describe(domain),
                                           describe(factor), describe(codomain)));
        out.flags.fibration = out.flags.surjective = out.flags.strict_section = true;
        for (std::size_t i = 0; i < src->dim(); ++i) {
            auto b = AlgebraElement::basis(spec.k == 1 ? tgt->left_factor() : tgt->right_factor(), i);
            given[i] = spec.k == 1 ? embed_left(b, tgt) : embed_right(b, tgt);
        }
        out.hom = hom_or_throw(src, tgt, given);
        break;
    }

    case K::Inclusion: {
        out.flags.inclusion = true;
        if (catalog_flags(codomain).contractible) {
            out.hom = zero_hom(src, tgt);
        } else if (codomain.kind == SK::Wedge && is_circle(domain)) {
            const std::int64_t idx = spec.k == 0 ? 1 : spec.k;
            if (idx < 1 || idx > codomain.n)
                throw CatalogError(fmt::format("wedge_circles({}) has no summand {}", codomain.n, idx));
            out.flags.retraction = true;
            given[src->index_of(gen_label(codomain.n, static_cast<int>(idx)))] =
                AlgebraElement::basis(tgt, tgt->index_of("u"));
            out.hom = hom_or_throw(src, tgt, given);
        } else if (domain == codomain) {
            out.flags.retraction = true;
            for (std::size_t i = 0; i < src->dim(); ++i)
                given[i] = AlgebraElement::basis(tgt, i);
            out.hom = hom_or_throw(src, tgt, given);
        } else {
            throw CatalogError(fmt::format("no catalog inclusion {} -> {}", describe(domain), describe(codomain)));
        }
        break;
    }

    case K::PathFibration:
        if (domain.kind != SK::PathSpace || !(domain.parts.at(0) == codomain))
            throw CatalogError(fmt::format("path_fibration runs pathspace(B) -> B, got {} -> {}", describe(domain),
                                           describe(codomain)));
        out.flags.fibration = out.flags.surjective = out.flags.nullhomotopic = true;
        out.hom = zero_hom(src, tgt);
        break;

    case K::OnBasis: {
        for (const BasisImage& bi : spec.images) {
            auto si = src->find(bi.label);
            if (!si)
                throw CatalogError(fmt::format("'{}' is not a basis element of H*({})", bi.label, describe(codomain)));
            AlgebraElement e(tgt);
            for (const LinearTerm& t : bi.terms) {
                auto ti = tgt->find(t.label);
                if (!ti)
                    throw CatalogError(
                        fmt::format("'{}' is not a basis element of H*({})", t.label, describe(domain)));
                Scalar c;
                try {
                    c = field.from_fraction(t.num, t.den);
                } catch (const std::domain_error&) {
                    throw CatalogError(fmt::format("coefficient {}/{} is undefined over {}", t.num, t.den,
                                                   field.name()));
                }
                e += c * AlgebraElement::basis(tgt, *ti);
            }
            const int want = src->degree(*si);
            if (!e.is_zero() && (!e.is_homogeneous() || *e.degree() != want))
                throw CatalogError(fmt::format("degree mismatch: {} has degree {} but its image {} does not",
                                               bi.label, want, e.str()));
            given[*si] = e;
        }
        out.hom = hom_or_throw(src, tgt, given);
        break;
    }
    }

    if (catalog_flags(codomain).contractible || catalog_flags(domain).contractible)
        out.flags.nullhomotopic = true;
    return out;
}

Problem::Problem(Field field, bool literature)
    : field_(field), literature_(literature), graph_(field.characteristic())
{
}

void Problem::load_fact(SlotId s, const KnownFact& f)
{
    if (f.source == FactSource::Literature) {
        if (!literature_)
            return;
        warnings_.push_back(fmt::format("literature fact used: {} = {} ({})", f.target, f.value.str(), f.citation));
    }
    facts_.push_back(f);
    graph_.assert_bound(s, f.value, fmt::format("{} fact: {}", to_string(f.source), f.citation));
}

std::uint32_t Problem::space(const std::string& id, const SpaceSpec& spec, std::optional<SpaceFlags> flags)
{
    CatalogSpace cs = instantiate_space(spec, field_);
    if (flags)
        cs.flags = *flags;
    const std::uint32_t idx = graph_.add_space(id, cs.flags, cs.algebra);
    for (KnownFact f : cs.facts) {
        f.target = fmt::format("{}({})", to_string(f.quantity), id);
        load_fact(graph_.require_slot(NodeKind::Space, idx, f.quantity), f);
    }
    specs_[id] = spec;
    spaces_[id] = std::move(cs);
    return idx;
}

std::uint32_t Problem::map(const std::string& id, const std::string& domain, const std::string& codomain,
                           const MapSpec& spec, MapFlags extra)
{
    auto d = graph_.find_space(domain);
    auto c = graph_.find_space(codomain);
    if (!d || !c)
        throw GraphError(fmt::format("map '{}' refers to an undeclared space", id));
    CatalogMap cm = instantiate_map(spec, specs_.at(domain), spaces_.at(domain), specs_.at(codomain),
                                    spaces_.at(codomain));
    MapFlags f = cm.flags;
    f.fibration |= extra.fibration;
    f.surjective |= extra.surjective;
    f.nullhomotopic |= extra.nullhomotopic;
    f.not_nullhomotopic |= extra.not_nullhomotopic;
    f.strict_section |= extra.strict_section;
    f.homotopy_section |= extra.homotopy_section;
    f.right_homotopy_inverse |= extra.right_homotopy_inverse;
    f.identity |= extra.identity;
    f.inclusion |= extra.inclusion;
    f.retraction |= extra.retraction;
    if (f.nullhomotopic && f.not_nullhomotopic)
        throw GraphError(fmt::format("map '{}' cannot be both nullhomotopic and not nullhomotopic", id));
    const std::uint32_t idx = graph_.add_map(id, *d, *c, f, std::move(cm.hom));
    if (cm.constant_point)
        graph_.set_constant_point(idx, *cm.constant_point);
    return idx;
}

std::uint32_t Problem::pair(const std::string& id, const std::string& f, const std::string& g)
{
    auto a = graph_.find_map(f);
    auto b = graph_.find_map(g);
    if (!a || !b)
        throw GraphError(fmt::format("pair '{}' refers to an undeclared map", id));
    return graph_.add_pair(id, *a, *b);
}

void Problem::fact(const std::string& quantity, Interval value, FactSource source, const std::string& citation)
{
    auto s = graph_.find_slot(quantity);
    if (!s)
        throw GraphError(fmt::format("unknown quantity '{}'", quantity));
    load_fact(*s, {quantity, graph_.slot_quantity(*s), value, source, citation});
}

std::vector<PaperInstance> load_paper_instances(bool literature)
{
    using MK = MapSpec::Kind;
    std::vector<PaperInstance> out;
    const Field Q = Field::rationals();
    auto add = [&](std::string name) -> Problem& {
        out.push_back({std::move(name), Problem(Q, literature), "P"});
        return out.back().problem;
    };

    {
        Problem& p = add("sphere-deg-2-3");
        p.space("S2", SpaceSpec::sphere(2));
        p.map("f", "S2", "S2", MapSpec::of(MK::Degree, 2));
        p.map("g", "S2", "S2", MapSpec::of(MK::Degree, 3));
        p.pair("P", "f", "g");
    }
    {
        Problem& p = add("torus-5-mixed");
        p.space("T5", SpaceSpec::torus(5));
        auto f = MapSpec::of(MK::Powers);
        f.exponents = {2, 3, 2, 4, 1};
        auto g = MapSpec::of(MK::Powers);
        g.exponents = {1, 2, 3, 1, 4};
        p.map("f", "T5", "T5", f);
        p.map("g", "T5", "T5", g);
        p.pair("P", "f", "g");
    }
    {
        // f(z) = z^2 and g(z) = -z^2 into the plane
        Problem& p = add("iconic-circle");
        p.space("S1", SpaceSpec::sphere(1));
        p.space("C", SpaceSpec::contractible());
        p.map("f", "S1", "C", MapSpec::of(MK::OnBasis));
        p.map("g", "S1", "C", MapSpec::of(MK::OnBasis));
        p.pair("P", "f", "g");
        p.fact("TC(P)", Interval::exactly(1), FactSource::Reference, "TC(z^2, -z^2) = 1 for S^1 -> C");
    }
    {
        Problem& p = add("constant-distinct");
        p.space("X", SpaceSpec::sphere(1));
        p.space("Z", SpaceSpec::sphere(2));
        auto f = MapSpec::of(MK::Constant);
        f.point = "z";
        auto g = MapSpec::of(MK::Constant);
        g.point = "w";
        p.map("f", "X", "Z", f);
        p.map("g", "X", "Z", g);
        p.graph().relate_disjoint_images(*p.graph().find_map("f"), *p.graph().find_map("g"));
        p.pair("P", "f", "g");
    }
    {
        Problem& p = add("collaboration-s2");
        p.space("S2", SpaceSpec::sphere(2));
        p.space("S1", SpaceSpec::sphere(1));
        p.space("X", SpaceSpec::product(SpaceSpec::sphere(2), SpaceSpec::sphere(1)));
        p.space("PS2", SpaceSpec::pathspace(SpaceSpec::sphere(2)));
        p.map("f", "X", "S2", MapSpec::of(MK::Projection, 1));
        p.map("g", "PS2", "S2", MapSpec::of(MK::PathFibration));
        p.pair("P", "f", "g");
        p.fact("TC(f)", Interval::exactly(2), FactSource::Reference, "TC(pr_1: S^2 x S^1 -> S^2) = TC(S^2) = 2");
        p.fact("TC(g)", Interval::exactly(1), FactSource::Reference, "TC(PS^2 -> S^2) = 1");
    }
    {
        Problem& p = add("wedge-nonsync");
        p.space("W", SpaceSpec::wedge_circles(2));
        p.space("S1", SpaceSpec::sphere(1));
        p.map("f", "S1", "W", MapSpec::of(MK::Inclusion, 1));
        p.map("g", "S1", "W", MapSpec::of(MK::Inclusion, 2));
        p.pair("P", "f", "g");
        p.fact("sync(P)", Interval::exactly(0), FactSource::Reference,
               "inclusions of distinct wedge summands meet only at the basepoint, so no synchronized paths leave it");
    }
    {
        Problem& p = add("sphere-in-r3");
        p.space("S2", SpaceSpec::sphere(2));
        p.space("R3", SpaceSpec::contractible());
        p.map("inc", "S2", "R3", MapSpec::of(MK::Inclusion));
        p.pair("P", "inc", "inc");
        p.fact("TC(P)", Interval::exactly(2), FactSource::Reference, "TC(inc, inc) = TC(S^2) = 2");
    }
    return out;
}

}  // namespace tcb
