#include "tcbivar/cup_length.hpp"

#include <fmt/core.h>

#include <map>

namespace tcb {

namespace {

void validate(const ZeroDivisorSet& gens)
{
    for (std::size_t i = 0; i < gens.generators.size(); ++i) {
        const auto& g = gens.generators[i];
        if (!same_algebra(g.algebra(), gens.ambient))
            throw AlgebraMismatch(fmt::format("generator {} lies outside the ambient algebra", i));
        if (g.is_zero())
            continue;
        if (!g.is_homogeneous())
            throw LcpError(fmt::format("generator {} is not homogeneous", i));
        if (*g.degree() == 0)
            throw LcpError(fmt::format("generator {} has degree 0", i));
    }
}

// Row echelon form of one degree component. Every row has a distinct leading
// (smallest) index.
class Echelon {
public:
    explicit Echelon(std::size_t capacity) : capacity_(capacity) {}

    bool full() const { return rows_.size() == capacity_; }

    /// Adds v if independent; returns whether it was added.
    bool insert(const AlgebraElement& v)
    {
        if (full())
            return false;
        AlgebraElement r = v;
        while (!r.is_zero()) {
            const Term& lead = r.terms().front();
            auto it = pivots_.find(lead.index);
            if (it == pivots_.end()) {
                pivots_.emplace(lead.index, rows_.size());
                rows_.push_back(std::move(r));
                return true;
            }
            const AlgebraElement& row = rows_[it->second];
            Scalar factor = lead.coeff / row.terms().front().coeff;
            r -= factor * row;
        }
        return false;
    }

private:
    std::size_t capacity_;
    std::vector<AlgebraElement> rows_;
    std::map<std::uint32_t, std::size_t> pivots_;
};

struct Spanning {
    std::vector<AlgebraElement> products;
    std::vector<std::vector<std::size_t>> words;
};

}  // namespace

LcpResult lcp_subspace_iteration(const ZeroDivisorSet& gens)
{
    validate(gens);
    LcpResult result;
    const GradedAlgebra* amb = gens.ambient.get();

    auto new_echelons = [&] {
        std::vector<Echelon> e;
        for (int d = 0; d <= amb->top_degree(); ++d)
            e.emplace_back(amb->component(d).size());
        return e;
    };

    Spanning level;
    {
        auto ech = new_echelons();
        for (std::size_t i = 0; i < gens.generators.size(); ++i) {
            const auto& g = gens.generators[i];
            if (!g.is_zero() && ech[static_cast<std::size_t>(*g.degree())].insert(g)) {
                level.products.push_back(g);
                level.words.push_back({i});
            }
        }
    }

    while (!level.products.empty()) {
        result.level_dims.push_back(level.products.size());
        int min_deg = amb->top_degree();
        for (const auto& p : level.products)
            min_deg = std::min(min_deg, *p.degree());
        result.level_min_degree.push_back(min_deg);
        result.value = result.level_dims.size();
        result.witness = level.words.front();
        result.witness_product = level.products.front();

        Spanning next;
        auto ech = new_echelons();
        for (std::size_t k = 0; k < level.products.size(); ++k) {
            const int dv = *level.products[k].degree();
            for (std::size_t i = 0; i < gens.generators.size(); ++i) {
                const auto& g = gens.generators[i];
                if (g.is_zero())
                    continue;
                const int d = dv + *g.degree();
                if (d > amb->top_degree() || ech[static_cast<std::size_t>(d)].full())
                    continue;
                AlgebraElement c = level.products[k] * g;
                if (c.is_zero() || !ech[static_cast<std::size_t>(d)].insert(c))
                    continue;
                next.products.push_back(std::move(c));
                auto w = level.words[k];
                w.push_back(i);
                next.words.push_back(std::move(w));
            }
        }
        level = std::move(next);
    }
    result.level_dims.push_back(0);
    return result;
}

std::size_t lcp_bruteforce(const ZeroDivisorSet& gens, std::size_t cap)
{
    validate(gens);
    if (cap < static_cast<std::size_t>(gens.ambient->top_degree()))
        throw std::invalid_argument(
            fmt::format("cap {} is below the top degree {}", cap, gens.ambient->top_degree()));
    const auto& g = gens.generators;
    std::size_t best = 0;
    // depth-first over nondecreasing index sequences; a zero prefix kills
    // every extension
    auto dfs = [&](auto&& self, const AlgebraElement& prefix, std::size_t from, std::size_t len) -> void {
        best = std::max(best, len);
        if (len == cap)
            return;
        for (std::size_t i = from; i < g.size(); ++i) {
            AlgebraElement p = len == 0 ? g[i] : prefix * g[i];
            if (!p.is_zero())
                self(self, p, i, len + 1);
        }
    };
    dfs(dfs, AlgebraElement(gens.ambient), 0, 0);
    return best;
}

Scalar coefficient_of(const AlgebraElement& x, std::string_view label)
{
    if (!x.algebra())
        throw AlgebraMismatch("element without an algebra");
    return x.coefficient(x.algebra()->index_of(label));
}

AlgebraElement product_of(const ZeroDivisorSet& gens, const std::vector<std::size_t>& word)
{
    AlgebraElement p = AlgebraElement::one(gens.ambient);
    for (std::size_t i : word)
        p = p * gens.generators.at(i);
    return p;
}

}  // namespace tcb
