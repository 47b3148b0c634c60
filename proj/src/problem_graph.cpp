#include "tcbivar/problem_graph.hpp"

#include <fmt/core.h>

#include <algorithm>

namespace tcb {

namespace {

constexpr std::array<const char*, kQuantityCount> kQuantityNames = {"cat", "TC",  "sec",      "secat",
                                                                    "TCH", "D",   "catdelta", "sync"};

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string_view::npos ? std::string{} : std::string(s.substr(b, e - b + 1));
}

}  // namespace

const char* to_string(Quantity q) { return kQuantityNames[static_cast<std::size_t>(q)]; }

std::optional<Quantity> parse_quantity(std::string_view name)
{
    for (std::size_t i = 0; i < kQuantityCount; ++i)
        if (name == kQuantityNames[i])
            return static_cast<Quantity>(i);
    return std::nullopt;
}

ProblemGraph::ProblemGraph(std::uint64_t characteristic) : characteristic_(characteristic) {}

std::array<std::int64_t, kQuantityCount> ProblemGraph::make_slots(NodeKind kind, std::uint32_t node,
                                                                  std::initializer_list<Quantity> qs)
{
    std::array<std::int64_t, kQuantityCount> slots;
    slots.fill(-1);
    for (Quantity q : qs) {
        slots[static_cast<std::size_t>(q)] = static_cast<std::int64_t>(values_.size());
        // sync lives in {0,1}: [0,1] unknown, [1,1] yes, [0,0] no
        values_.push_back(q == Quantity::Sync ? Interval{0, 1} : Interval::unknown());
        owners_.push_back({kind, node, q});
    }
    return slots;
}

std::uint32_t ProblemGraph::add_space(const std::string& id, SpaceFlags flags, AlgebraPtr cohomology)
{
    if (ids_.count(id))
        throw GraphError(fmt::format("identifier '{}' already declared", id));
    auto idx = static_cast<std::uint32_t>(spaces_.size());
    SpaceNode node{id, flags, std::move(cohomology), make_slots(NodeKind::Space, idx, {Quantity::Cat, Quantity::TC})};
    spaces_.push_back(std::move(node));
    ids_.emplace(id, std::pair{NodeKind::Space, idx});
    if (flags.contractible) {
        assert_bound(require_slot(NodeKind::Space, idx, Quantity::Cat), Interval::exactly(0), "space is contractible");
        assert_bound(require_slot(NodeKind::Space, idx, Quantity::TC), Interval::exactly(0), "space is contractible");
    }
    return idx;
}

std::uint32_t ProblemGraph::add_map(const std::string& id, std::uint32_t domain, std::uint32_t codomain,
                                    MapFlags flags, std::optional<GradedHom> hom)
{
    if (ids_.count(id))
        throw GraphError(fmt::format("identifier '{}' already declared", id));
    if (domain >= spaces_.size() || codomain >= spaces_.size())
        throw GraphError(fmt::format("map '{}' refers to an unknown space", id));
    if (flags.identity) {
        if (domain != codomain)
            throw GraphError(fmt::format("identity map '{}' must have equal domain and codomain", id));
        flags.fibration = flags.surjective = flags.strict_section = true;
    }
    if (flags.strict_section)
        flags.homotopy_section = true;
    if (flags.homotopy_section)
        flags.right_homotopy_inverse = true;
    if (flags.right_homotopy_inverse)
        flags.homotopy_section = true;

    auto idx = static_cast<std::uint32_t>(maps_.size());
    MapNode node;
    node.id = id;
    node.domain = domain;
    node.codomain = codomain;
    node.flags = flags;
    node.hom = std::move(hom);
    node.slots = make_slots(NodeKind::Map, idx,
                            {Quantity::Sec, Quantity::Secat, Quantity::Cat, Quantity::TC, Quantity::TCH});
    maps_.push_back(std::move(node));
    ids_.emplace(id, std::pair{NodeKind::Map, idx});
    homotopy_uf_.push_back(idx);
    fibrewise_uf_.push_back(idx);

    SlotId cat = require_slot(NodeKind::Map, idx, Quantity::Cat);
    if (flags.nullhomotopic)
        assert_bound(cat, Interval::exactly(0), "map declared nullhomotopic");
    if (spaces_[codomain].flags.contractible)
        assert_bound(cat, Interval::exactly(0), "codomain is contractible, so the map is nullhomotopic");
    if (spaces_[domain].flags.contractible)
        assert_bound(cat, Interval::exactly(0), "domain is contractible, so the map is nullhomotopic");
    if (flags.not_nullhomotopic)
        assert_bound(cat, {1, ExtNat::inf()}, "map declared not nullhomotopic");
    if (flags.strict_section)
        assert_bound(require_slot(NodeKind::Map, idx, Quantity::Sec), Interval::exactly(0),
                     "map has a strict global section");
    return idx;
}

std::uint32_t ProblemGraph::add_pair(const std::string& id, std::uint32_t f, std::uint32_t g)
{
    if (ids_.count(id))
        throw GraphError(fmt::format("identifier '{}' already declared", id));
    check_map(f);
    check_map(g);
    if (maps_[f].codomain != maps_[g].codomain)
        throw GraphError(fmt::format("pair '{}': '{}' and '{}' have different codomains", id, maps_[f].id,
                                     maps_[g].id));
    auto idx = static_cast<std::uint32_t>(pairs_.size());
    PairNode node{id, f, g, {}};
    if (maps_[f].domain == maps_[g].domain)
        node.slots = make_slots(NodeKind::Pair, idx,
                                {Quantity::TC, Quantity::TCH, Quantity::D, Quantity::CatDelta, Quantity::Sync});
    else
        node.slots =
            make_slots(NodeKind::Pair, idx, {Quantity::TC, Quantity::TCH, Quantity::CatDelta, Quantity::Sync});
    pairs_.push_back(std::move(node));
    ids_.emplace(id, std::pair{NodeKind::Pair, idx});
    product_node(f, g);
    if (maps_[f].composition && maps_[g].composition)
        product_node(maps_[f].composition->second, maps_[g].composition->second);
    cache_ = std::make_shared<Cache>();
    return idx;
}

std::uint32_t ProblemGraph::product_node(std::uint32_t a, std::uint32_t b)
{
    check_map(a);
    check_map(b);
    if (auto p = find_product(a, b))
        return *p;
    auto idx = static_cast<std::uint32_t>(products_.size());
    products_.push_back({a, b, make_slots(NodeKind::Product, idx, {Quantity::Sec, Quantity::Cat})});
    return idx;
}

void ProblemGraph::check_map(std::uint32_t m) const
{
    if (m >= maps_.size())
        throw GraphError(fmt::format("unknown map index {}", m));
}

void ProblemGraph::set_constant_point(std::uint32_t map, std::string point)
{
    check_map(map);
    maps_[map].constant_point = std::move(point);
}

void ProblemGraph::set_composition(std::uint32_t map, std::uint32_t outer, std::uint32_t inner)
{
    check_map(map);
    check_map(outer);
    check_map(inner);
    if (maps_[inner].codomain != maps_[outer].domain || maps_[map].domain != maps_[inner].domain ||
        maps_[map].codomain != maps_[outer].codomain)
        throw GraphError(fmt::format("composition '{}' = '{}'∘'{}' does not type-check", maps_[map].id,
                                     maps_[outer].id, maps_[inner].id));
    maps_[map].composition = std::pair{outer, inner};
}

void ProblemGraph::set_product(std::uint32_t map, std::uint32_t left, std::uint32_t right)
{
    check_map(map);
    check_map(left);
    check_map(right);
    maps_[map].product = std::pair{left, right};
}

std::uint32_t ProblemGraph::find_root(std::vector<std::uint32_t>& uf, std::uint32_t x) const
{
    while (uf[x] != x) {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    return x;
}

void ProblemGraph::relate_homotopic(std::uint32_t a, std::uint32_t b)
{
    check_map(a);
    check_map(b);
    if (maps_[a].domain != maps_[b].domain || maps_[a].codomain != maps_[b].codomain)
        throw GraphError(fmt::format("homotopic maps '{}' and '{}' must share domain and codomain", maps_[a].id,
                                     maps_[b].id));
    homotopy_uf_[find_root(homotopy_uf_, a)] = find_root(homotopy_uf_, b);
}

void ProblemGraph::relate_fibrewise_equivalent(std::uint32_t a, std::uint32_t b)
{
    check_map(a);
    check_map(b);
    if (maps_[a].codomain != maps_[b].codomain)
        throw GraphError(fmt::format("fibrewise equivalent maps '{}' and '{}' must share a codomain", maps_[a].id,
                                     maps_[b].id));
    fibrewise_uf_[find_root(fibrewise_uf_, a)] = find_root(fibrewise_uf_, b);
}

void ProblemGraph::relate_disjoint_images(std::uint32_t a, std::uint32_t b)
{
    check_map(a);
    check_map(b);
    if (maps_[a].codomain != maps_[b].codomain)
        throw GraphError(fmt::format("maps '{}' and '{}' have different codomains", maps_[a].id, maps_[b].id));
    disjoint_.emplace_back(std::min(a, b), std::max(a, b));
}

bool ProblemGraph::homotopic(std::uint32_t a, std::uint32_t b) const
{
    return find_root(homotopy_uf_, a) == find_root(homotopy_uf_, b);
}

bool ProblemGraph::fibrewise_equivalent(std::uint32_t a, std::uint32_t b) const
{
    return find_root(fibrewise_uf_, a) == find_root(fibrewise_uf_, b);
}

bool ProblemGraph::disjoint_images(std::uint32_t a, std::uint32_t b) const
{
    const auto& ma = maps_.at(a);
    const auto& mb = maps_.at(b);
    if (ma.constant_point && mb.constant_point && *ma.constant_point != *mb.constant_point &&
        ma.codomain == mb.codomain)
        return true;
    return std::find(disjoint_.begin(), disjoint_.end(), std::pair{std::min(a, b), std::max(a, b)}) !=
           disjoint_.end();
}

std::optional<std::uint32_t> ProblemGraph::find_space(const std::string& id) const
{
    auto it = ids_.find(id);
    if (it == ids_.end() || it->second.first != NodeKind::Space)
        return std::nullopt;
    return it->second.second;
}

std::optional<std::uint32_t> ProblemGraph::find_map(const std::string& id) const
{
    auto it = ids_.find(id);
    if (it == ids_.end() || it->second.first != NodeKind::Map)
        return std::nullopt;
    return it->second.second;
}

std::optional<std::uint32_t> ProblemGraph::find_pair(const std::string& id) const
{
    auto it = ids_.find(id);
    if (it == ids_.end() || it->second.first != NodeKind::Pair)
        return std::nullopt;
    return it->second.second;
}

std::optional<std::uint32_t> ProblemGraph::find_pair(std::uint32_t f, std::uint32_t g) const
{
    for (std::uint32_t i = 0; i < pairs_.size(); ++i)
        if (pairs_[i].f == f && pairs_[i].g == g)
            return i;
    return std::nullopt;
}

std::optional<std::uint32_t> ProblemGraph::find_product(std::uint32_t a, std::uint32_t b) const
{
    for (std::uint32_t i = 0; i < products_.size(); ++i)
        if (products_[i].a == a && products_[i].b == b)
            return i;
    return std::nullopt;
}

std::optional<SlotId> ProblemGraph::slot(NodeKind kind, std::uint32_t node, Quantity q) const
{
    const std::array<std::int64_t, kQuantityCount>* slots = nullptr;
    switch (kind) {
    case NodeKind::Space:
        if (node < spaces_.size())
            slots = &spaces_[node].slots;
        break;
    case NodeKind::Map:
        if (node < maps_.size())
            slots = &maps_[node].slots;
        break;
    case NodeKind::Pair:
        if (node < pairs_.size())
            slots = &pairs_[node].slots;
        break;
    case NodeKind::Product:
        if (node < products_.size())
            slots = &products_[node].slots;
        break;
    }
    if (!slots || (*slots)[static_cast<std::size_t>(q)] < 0)
        return std::nullopt;
    return static_cast<SlotId>((*slots)[static_cast<std::size_t>(q)]);
}

SlotId ProblemGraph::require_slot(NodeKind kind, std::uint32_t node, Quantity q) const
{
    if (auto s = slot(kind, node, q))
        return *s;
    throw GraphError(fmt::format("node has no quantity {}", to_string(q)));
}

std::string ProblemGraph::slot_name(SlotId s) const
{
    const Owner& o = owners_.at(s);
    const char* q = to_string(o.q);
    switch (o.kind) {
    case NodeKind::Space:
        return fmt::format("{}({})", q, spaces_[o.node].id);
    case NodeKind::Map:
        return fmt::format("{}({})", q, maps_[o.node].id);
    case NodeKind::Pair:
        return fmt::format("{}({})", q, pairs_[o.node].id);
    case NodeKind::Product:
        return fmt::format("{}({},{})", q, maps_[products_[o.node].a].id, maps_[products_[o.node].b].id);
    }
    return "?";
}

std::optional<SlotId> ProblemGraph::find_slot(const std::string& expr) const
{
    auto open = expr.find('(');
    auto close = expr.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open || trim(expr.substr(close + 1)) != "")
        return std::nullopt;
    auto q = parse_quantity(trim(expr.substr(0, open)));
    if (!q)
        return std::nullopt;
    std::string args = expr.substr(open + 1, close - open - 1);
    auto comma = args.find(',');
    if (comma == std::string::npos) {
        auto it = ids_.find(trim(args));
        if (it == ids_.end())
            return std::nullopt;
        return slot(it->second.first, it->second.second, *q);
    }
    auto a = find_map(trim(args.substr(0, comma)));
    auto b = find_map(trim(args.substr(comma + 1)));
    if (!a || !b)
        return std::nullopt;
    if (*q == Quantity::Sec || *q == Quantity::Cat) {
        auto p = find_product(*a, *b);
        return p ? slot(NodeKind::Product, *p, *q) : std::nullopt;
    }
    auto p = find_pair(*a, *b);
    return p ? slot(NodeKind::Pair, *p, *q) : std::nullopt;
}

bool ProblemGraph::assert_bound(SlotId s, Interval bound, const std::string& source)
{
    return tighten(s, bound, "input", source, {}, {});
}

bool ProblemGraph::tighten(SlotId s, Interval bound, std::string rule, std::string anchor,
                           std::vector<Premise> premises, std::vector<std::string> conditions)
{
    const Interval before = values_.at(s);
    const Interval after = before.meet(bound);
    if (after == before)
        return false;
    DerivationStep step;
    step.index = trace_.size();
    step.rule = std::move(rule);
    step.anchor = std::move(anchor);
    step.premises = std::move(premises);
    step.conditions = std::move(conditions);
    step.slot = s;
    step.before = before;
    step.after = after;
    trace_.push_back(std::move(step));
    values_[s] = after;
    if (after.empty())
        throw ContradictionDetected(fmt::format("{} became empty: {} meets {} ({})", slot_name(s), before.str(),
                                                bound.str(), trace_.back().rule),
                                    trace_);
    return true;
}

std::shared_ptr<const ZeroDivisorSet> ProblemGraph::pair_generators(std::uint32_t pair) const
{
    if (auto it = cache_->gens.find(pair); it != cache_->gens.end())
        return it->second;
    const PairNode& p = pairs_.at(pair);
    const MapNode& f = maps_[p.f];
    const MapNode& g = maps_[p.g];
    std::shared_ptr<const ZeroDivisorSet> out;
    if (f.hom && g.hom) {
        auto xy = tensor_product(f.hom->target(), g.hom->target());
        out = std::make_shared<ZeroDivisorSet>(bar_generators(*f.hom, *g.hom, xy));
    }
    cache_->gens[pair] = out;
    return out;
}

std::shared_ptr<const LcpResult> ProblemGraph::pair_lcp(std::uint32_t pair) const
{
    if (auto it = cache_->lcp.find(pair); it != cache_->lcp.end())
        return it->second;
    std::shared_ptr<const LcpResult> out;
    if (auto gens = pair_generators(pair))
        out = std::make_shared<LcpResult>(lcp_subspace_iteration(*gens));
    cache_->lcp[pair] = out;
    return out;
}

}  // namespace tcb
