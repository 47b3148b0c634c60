#include "tcbivar/graded_algebra.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <random>

namespace tcb {

namespace {

void normalize_terms(std::vector<Term>& terms)
{
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        Term t = terms[i++];
        while (i < terms.size() && terms[i].index == t.index)
            t.coeff += terms[i++].coeff;
        if (!t.coeff.is_zero())
            terms[out++] = std::move(t);
    }
    terms.resize(out);
}

void accumulate(std::vector<Term>& out, std::span<const Term> src, const Scalar& s)
{
    for (const Term& t : src)
        out.push_back({t.index, t.coeff * s});
}

std::string wrap(const BasisElement& b) { return b.compound ? "(" + b.label + ")" : b.label; }

std::string gen_name(const std::string& name, std::size_t i, std::size_t n)
{
    return n == 1 ? name : fmt::format("{}{}", name, i + 1);
}

}  // namespace

std::string ascii_label(std::string_view label)
{
    std::string out;
    out.reserve(label.size());
    for (std::size_t i = 0; i < label.size(); ++i) {
        auto c = static_cast<unsigned char>(label[i]);
        if (c == 0xE2 && i + 2 < label.size() && static_cast<unsigned char>(label[i + 1]) == 0x82) {
            auto d = static_cast<unsigned char>(label[i + 2]);
            if (d >= 0x80 && d <= 0x89) {
                out.push_back(static_cast<char>('0' + (d - 0x80)));
                i += 2;
                continue;
            }
        }
        out.push_back(label[i]);
    }
    return out;
}

// AlgebraElement

AlgebraElement AlgebraElement::basis(AlgebraPtr alg, std::size_t i)
{
    if (!alg || i >= alg->dim())
        throw std::out_of_range(fmt::format("basis index {} out of range", i));
    AlgebraElement e(alg);
    e.terms_.push_back({static_cast<std::uint32_t>(i), alg->field().one()});
    return e;
}

AlgebraElement AlgebraElement::from_terms(AlgebraPtr alg, std::vector<Term> terms)
{
    AlgebraElement e(std::move(alg));
    for (const Term& t : terms) {
        if (t.index >= e.alg_->dim())
            throw std::out_of_range(fmt::format("basis index {} out of range", t.index));
        if (t.coeff.field() != e.alg_->field())
            throw AlgebraMismatch("coefficient from a different field");
    }
    normalize_terms(terms);
    e.terms_ = std::move(terms);
    return e;
}

std::optional<int> AlgebraElement::degree() const
{
    if (terms_.empty() || !is_homogeneous())
        return std::nullopt;
    return alg_->degree(terms_.front().index);
}

bool AlgebraElement::is_homogeneous() const
{
    if (terms_.empty())
        return true;
    int d = alg_->degree(terms_.front().index);
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return alg_->degree(t.index) == d; });
}

Scalar AlgebraElement::coefficient(std::size_t index) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const Term& t, std::size_t i) { return t.index < i; });
    if (it != terms_.end() && it->index == index)
        return it->coeff;
    return alg_->field().zero();
}

Scalar AlgebraElement::field_one() const
{
    if (!alg_)
        throw AlgebraMismatch("element without an algebra");
    return alg_->field().one();
}

void AlgebraElement::add_scaled(const AlgebraElement& o, const Scalar& s)
{
    if (!alg_ || !o.alg_)
        throw AlgebraMismatch("element without an algebra");
    if (!same_algebra(alg_, o.alg_))
        throw AlgebraMismatch("elements of different algebras");
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
        if (b == o.terms_.end() || (a != terms_.end() && a->index < b->index)) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->index < a->index) {
            merged.push_back({b->index, b->coeff * s});
            ++b;
        } else {
            Scalar c = a->coeff + b->coeff * s;
            if (!c.is_zero())
                merged.push_back({a->index, std::move(c)});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o)
{
    add_scaled(o, field_one());
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o)
{
    add_scaled(o, -field_one());
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Scalar& s)
{
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (Term& t : terms_)
        t.coeff *= s;
    return *this;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b)
{
    if (!a.algebra() || !b.algebra())
        throw AlgebraMismatch("element without an algebra");
    if (!same_algebra(a.algebra(), b.algebra()))
        throw AlgebraMismatch("cannot multiply elements of different algebras");
    const GradedAlgebra& alg = *a.algebra();
    std::vector<Term> out;
    for (const Term& x : a.terms())
        for (const Term& y : b.terms()) {
            auto p = alg.product(x.index, y.index);
            if (p.empty())
                continue;
            accumulate(out, p, x.coeff * y.coeff);
        }
    normalize_terms(out);
    AlgebraElement r(a.algebra());
    r.terms_ = std::move(out);
    return r;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); }

bool operator==(const AlgebraElement& a, const AlgebraElement& b)
{
    if (a.terms_.empty() && b.terms_.empty())
        return true;
    return same_algebra(a.alg_, b.alg_) && a.terms_ == b.terms_;
}

std::string AlgebraElement::str() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (const Term& t : terms_) {
        const std::string& label = alg_->basis(t.index).label;
        bool neg = alg_->field().is_rational() && sgn(t.coeff.value()) < 0;
        Scalar mag = neg ? -t.coeff : t.coeff;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        if (mag.is_one())
            out += label;
        else
            out += mag.str() + "*" + label;
    }
    return out;
}

// GradedAlgebra

GradedAlgebra::GradedAlgebra(Private, Field field, std::vector<BasisElement> basis)
    : field_(field), basis_(std::move(basis))
{
    index_basis();
}

void GradedAlgebra::index_basis()
{
    top_degree_ = 0;
    for (const auto& b : basis_)
        top_degree_ = std::max(top_degree_, b.degree);
    components_.assign(static_cast<std::size_t>(top_degree_) + 1, {});
    by_label_.clear();
    for (std::uint32_t i = 0; i < basis_.size(); ++i) {
        if (basis_[i].degree >= 0)
            components_[static_cast<std::size_t>(basis_[i].degree)].push_back(i);
        by_label_.emplace(ascii_label(basis_[i].label), i);
    }
}

template <class Fn>
void GradedAlgebra::fill_table(Fn&& fn)
{
    const std::size_t n = basis_.size();
    offsets_.assign(n * n + 1, 0);
    pool_.clear();
    std::vector<Term> scratch;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            scratch.clear();
            fn(i, j, scratch);
            normalize_terms(scratch);
            for (Term& t : scratch)
                pool_.push_back(std::move(t));
            offsets_[i * n + j + 1] = static_cast<std::uint32_t>(pool_.size());
        }
}

std::span<const std::uint32_t> GradedAlgebra::component(int degree) const
{
    if (degree < 0 || static_cast<std::size_t>(degree) >= components_.size())
        return {};
    return components_[static_cast<std::size_t>(degree)];
}

std::optional<std::size_t> GradedAlgebra::find(std::string_view label) const
{
    auto it = by_label_.find(ascii_label(label));
    if (it == by_label_.end())
        return std::nullopt;
    return it->second;
}

std::size_t GradedAlgebra::index_of(std::string_view label) const
{
    if (auto i = find(label))
        return *i;
    throw std::out_of_range(fmt::format("no basis element labelled '{}'", label));
}

StructureTable GradedAlgebra::table() const
{
    const std::size_t n = dim();
    StructureTable t(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto p = product(i, j);
            t[i * n + j].assign(p.begin(), p.end());
        }
    return t;
}

AlgebraPtr GradedAlgebra::from_table(Field field, std::vector<BasisElement> basis, const StructureTable& table)
{
    const std::size_t n = basis.size();
    if (table.size() != n * n)
        throw AlgebraError(fmt::format("structure table has {} entries, expected {}", table.size(), n * n));
    for (const auto& entry : table)
        for (const Term& t : entry) {
            if (t.index >= n)
                throw AlgebraError(fmt::format("structure constant refers to basis index {}", t.index));
            if (t.coeff.field() != field)
                throw AlgebraError("structure constant from a different field");
        }
    auto alg = std::make_shared<GradedAlgebra>(Private{}, field, std::move(basis));
    alg->fill_table([&](std::size_t i, std::size_t j, std::vector<Term>& out) {
        const auto& src = table[i * n + j];
        out.assign(src.begin(), src.end());
    });
    auto violations = alg->check_invariants(VerifyMode::Exhaustive);
    if (!violations.empty())
        throw AlgebraError(violations.front());
    return alg;
}

std::vector<std::string> GradedAlgebra::check_invariants(VerifyMode mode, std::size_t samples,
                                                         std::uint64_t seed) const
{
    std::vector<std::string> bad;
    const std::size_t n = dim();
    if (n == 0) {
        bad.push_back("empty basis");
        return bad;
    }
    if (basis_[0].degree != 0)
        bad.push_back("basis element 0 is not in degree 0");
    for (std::size_t i = 1; i < n; ++i) {
        if (basis_[i].degree < 0)
            bad.push_back(fmt::format("basis element '{}' has negative degree", basis_[i].label));
        else if (basis_[i].degree == 0)
            bad.push_back(fmt::format("degree-0 component is not one-dimensional ('{}')", basis_[i].label));
    }
    if (by_label_.size() != n)
        bad.push_back("basis labels are not unique");
    if (!bad.empty())
        return bad;

    auto lbl = [&](std::size_t i) -> const std::string& { return basis_[i].label; };

    for (std::size_t j = 0; j < n; ++j) {
        for (auto p : {product(0, j), product(j, 0)}) {
            if (p.size() != 1 || p[0].index != j || !p[0].coeff.is_one()) {
                bad.push_back(fmt::format("unit law fails for '{}'", lbl(j)));
                break;
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto p = product(i, j);
            for (const Term& t : p)
                if (degree(t.index) != degree(i) + degree(j)) {
                    bad.push_back(fmt::format("degree additivity fails for '{}'*'{}'", lbl(i), lbl(j)));
                    break;
                }
            if (j < i)
                continue;
            auto q = product(j, i);
            bool odd = (degree(i) * degree(j)) % 2 != 0;
            bool ok = p.size() == q.size();
            for (std::size_t k = 0; ok && k < p.size(); ++k)
                ok = p[k].index == q[k].index && p[k].coeff == (odd ? -q[k].coeff : q[k].coeff);
            if (!ok)
                bad.push_back(fmt::format("graded commutativity fails for '{}','{}'", lbl(i), lbl(j)));
        }

    auto assoc = [&](std::size_t i, std::size_t j, std::size_t k) {
        std::vector<Term> lhs, rhs;
        for (const Term& t : product(i, j))
            accumulate(lhs, product(t.index, k), t.coeff);
        for (const Term& t : product(j, k))
            accumulate(rhs, product(i, t.index), t.coeff);
        normalize_terms(lhs);
        normalize_terms(rhs);
        if (lhs != rhs)
            bad.push_back(fmt::format("associativity fails for '{}','{}','{}'", lbl(i), lbl(j), lbl(k)));
    };
    if (mode == VerifyMode::Exhaustive) {
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j)
                for (std::size_t k = 1; k < n; ++k)
                    assoc(i, j, k);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t s = 0; s < samples; ++s)
            assoc(pick(rng), pick(rng), pick(rng));
    }
    return bad;
}

bool same_algebra(const GradedAlgebra& a, const GradedAlgebra& b)
{
    if (&a == &b)
        return true;
    if (a.field_ != b.field_ || a.basis_.size() != b.basis_.size())
        return false;
    for (std::size_t i = 0; i < a.basis_.size(); ++i)
        if (a.basis_[i].label != b.basis_[i].label || a.basis_[i].degree != b.basis_[i].degree)
            return false;
    return a.offsets_ == b.offsets_ && a.pool_ == b.pool_;
}

// constructors

AlgebraPtr exterior_algebra(const Field& field, const std::vector<int>& degrees, const std::string& name)
{
    const std::size_t n = degrees.size();
    if (n > 12)
        throw AlgebraError(fmt::format("exterior algebra on {} generators is too large", n));
    for (int d : degrees)
        if (d < 1 || d % 2 == 0)
            throw AlgebraError(fmt::format("exterior generator degree {} must be odd and positive", d));

    // monomials as bitmasks, ordered by length then lexicographically
    std::vector<std::uint32_t> masks;
    for (std::size_t len = 0; len <= n; ++len) {
        std::vector<bool> sel(n, false);
        std::fill(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(len), true);
        do {
            std::uint32_t m = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (sel[i])
                    m |= 1u << i;
            masks.push_back(m);
        } while (std::prev_permutation(sel.begin(), sel.end()));
    }
    std::vector<std::uint32_t> pos(1u << n);
    std::vector<BasisElement> basis;
    for (std::size_t k = 0; k < masks.size(); ++k) {
        std::uint32_t m = masks[k];
        pos[m] = static_cast<std::uint32_t>(k);
        BasisElement b;
        int count = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (m & (1u << i)) {
                b.label += gen_name(name, i, n);
                b.degree += degrees[i];
                ++count;
            }
        if (count == 0)
            b.label = "1";
        b.compound = count > 1;
        basis.push_back(std::move(b));
    }

    auto alg = std::make_shared<GradedAlgebra>(GradedAlgebra::Private{}, field, std::move(basis));
    alg->fill_table([&](std::size_t i, std::size_t j, std::vector<Term>& out) {
        std::uint32_t s = masks[i], t = masks[j];
        if (s & t)
            return;
        // sign of sorting s·t: one transposition per (a in s, b in t, a > b)
        int swaps = 0;
        for (std::size_t a = 0; a < n; ++a)
            if (s & (1u << a))
                for (std::size_t b = 0; b < a; ++b)
                    if (t & (1u << b))
                        swaps += degrees[a] * degrees[b];
        Scalar c = field.one();
        if (swaps % 2)
            c = -c;
        out.push_back({pos[s | t], c});
    });
    return alg;
}

AlgebraPtr truncated_polynomial(const Field& field, int degree, int height, const std::string& name)
{
    if (degree < 2 || degree % 2 != 0)
        throw AlgebraError(fmt::format("truncated polynomial generator degree {} must be even and positive", degree));
    if (height < 1)
        throw AlgebraError(fmt::format("truncation height {} must be at least 1", height));
    std::vector<BasisElement> basis;
    for (int k = 0; k <= height; ++k) {
        std::string label = k == 0 ? "1" : k == 1 ? name : fmt::format("{}^{}", name, k);
        basis.push_back({label, k * degree, false});
    }
    auto alg = std::make_shared<GradedAlgebra>(GradedAlgebra::Private{}, field, std::move(basis));
    alg->fill_table([&](std::size_t i, std::size_t j, std::vector<Term>& out) {
        if (i + j <= static_cast<std::size_t>(height))
            out.push_back({static_cast<std::uint32_t>(i + j), field.one()});
    });
    return alg;
}

AlgebraPtr square_zero_algebra(const Field& field, const std::vector<int>& degrees, const std::string& name)
{
    std::vector<BasisElement> basis{{"1", 0, false}};
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 1)
            throw AlgebraError("square-zero classes need positive degree");
        basis.push_back({gen_name(name, i, degrees.size()), degrees[i], false});
    }
    auto alg = std::make_shared<GradedAlgebra>(GradedAlgebra::Private{}, field, std::move(basis));
    alg->fill_table([&](std::size_t i, std::size_t j, std::vector<Term>& out) {
        if (i == 0 || j == 0)
            out.push_back({static_cast<std::uint32_t>(i + j), field.one()});
    });
    return alg;
}

AlgebraPtr trivial_algebra(const Field& field) { return square_zero_algebra(field, {}); }

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b)
{
    if (!a || !b)
        throw AlgebraMismatch("tensor product of a null algebra");
    if (a->field() != b->field())
        throw AlgebraError(fmt::format("tensor product over different fields {} and {}", a->field().name(),
                                       b->field().name()));
    const std::size_t na = a->dim(), nb = b->dim();
    if (na * nb > 4096)
        throw AlgebraError(fmt::format("tensor product of dimension {} is too large", na * nb));
    std::vector<BasisElement> basis;
    basis.reserve(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            basis.push_back({wrap(a->basis(i)) + "⊗" + wrap(b->basis(j)), a->degree(i) + b->degree(j), true});

    auto alg = std::make_shared<GradedAlgebra>(GradedAlgebra::Private{}, a->field(), std::move(basis));
    alg->fill_table([&](std::size_t x, std::size_t y, std::vector<Term>& out) {
        std::size_t i1 = x / nb, j1 = x % nb, i2 = y / nb, j2 = y % nb;
        auto pa = a->product(i1, i2);
        auto pb = b->product(j1, j2);
        if (pa.empty() || pb.empty())
            return;
        bool neg = (b->degree(j1) * a->degree(i2)) % 2 != 0;
        for (const Term& s : pa)
            for (const Term& t : pb) {
                Scalar c = s.coeff * t.coeff;
                out.push_back({static_cast<std::uint32_t>(s.index * nb + t.index), neg ? -c : c});
            }
    });
    alg->left_ = a;
    alg->right_ = b;
    return alg;
}

AlgebraElement embed_left(const AlgebraElement& a, const AlgebraPtr& tensor)
{
    if (!tensor || !tensor->is_tensor() || !same_algebra(tensor->left_factor(), a.algebra()))
        throw AlgebraMismatch("target is not a tensor product with this left factor");
    const std::size_t nb = tensor->right_factor()->dim();
    std::vector<Term> terms;
    for (const Term& t : a.terms())
        terms.push_back({static_cast<std::uint32_t>(t.index * nb), t.coeff});
    return AlgebraElement::from_terms(tensor, std::move(terms));
}

AlgebraElement embed_right(const AlgebraElement& b, const AlgebraPtr& tensor)
{
    if (!tensor || !tensor->is_tensor() || !same_algebra(tensor->right_factor(), b.algebra()))
        throw AlgebraMismatch("target is not a tensor product with this right factor");
    return AlgebraElement::from_terms(tensor, {b.terms().begin(), b.terms().end()});
}

}  // namespace tcb
