#pragma once

#include "tcbivar/algebra_maps.hpp"
#include "tcbivar/cup_length.hpp"
#include "tcbivar/ext_nat.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tcb {

enum class NodeKind : std::uint8_t { Space, Map, Pair, Product };

enum class Quantity : std::uint8_t { Cat, TC, Sec, Secat, TCH, D, CatDelta, Sync };
inline constexpr std::size_t kQuantityCount = 8;

const char* to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);

using SlotId = std::uint32_t;

struct SpaceFlags {
    bool path_connected = true;
    bool contractible = false;
    bool h_group = false;
    bool normal = true;
    bool anr = true;
};

struct MapFlags {
    bool fibration = false;
    bool surjective = false;
    bool nullhomotopic = false;
    bool not_nullhomotopic = false;
    bool strict_section = false;
    bool homotopy_section = false;
    bool right_homotopy_inverse = false;
    bool identity = false;
    bool inclusion = false;
    /// Some r satisfies r∘w = id.
    bool retraction = false;
};

struct SpaceNode {
    std::string id;
    SpaceFlags flags;
    AlgebraPtr cohomology;
    std::array<std::int64_t, kQuantityCount> slots;
};

struct MapNode {
    std::string id;
    std::uint32_t domain = 0, codomain = 0;
    MapFlags flags;
    std::optional<GradedHom> hom;
    /// Set for constant maps; distinct labels have disjoint images.
    std::optional<std::string> constant_point;
    /// this = outer ∘ inner
    std::optional<std::pair<std::uint32_t, std::uint32_t>> composition;
    /// this = left × right
    std::optional<std::pair<std::uint32_t, std::uint32_t>> product;
    std::array<std::int64_t, kQuantityCount> slots;
};

struct PairNode {
    std::string id;
    std::uint32_t f = 0, g = 0;
    std::array<std::int64_t, kQuantityCount> slots;
};

/// The product map a×b, for sec(a×b) and cat(a×b).
struct ProductNode {
    std::uint32_t a = 0, b = 0;
    std::array<std::int64_t, kQuantityCount> slots;
};

enum class Side : std::uint8_t { Lo, Hi };

struct Premise {
    SlotId slot;
    Side side;
    Interval value;

    friend bool operator==(const Premise&, const Premise&) = default;
};

struct DerivationStep {
    std::size_t index = 0;
    /// "R1".."R29", or "input" for assertions, facts and flag implications.
    std::string rule;
    std::string anchor;
    std::vector<Premise> premises;
    /// Flag and relation hypotheses used, in words.
    std::vector<std::string> conditions;
    SlotId slot = 0;
    Interval before, after;

    friend bool operator==(const DerivationStep&, const DerivationStep&) = default;
};

class ContradictionDetected : public std::runtime_error {
public:
    ContradictionDetected(const std::string& what, std::vector<DerivationStep> trace)
        : std::runtime_error(what), trace_(std::move(trace))
    {
    }
    const std::vector<DerivationStep>& trace() const { return trace_; }

private:
    std::vector<DerivationStep> trace_;
};

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Spaces, maps, cospan pairs, declared relations, one interval per
/// quantity, and the log of every tightening.
class ProblemGraph {
public:
    explicit ProblemGraph(std::uint64_t characteristic = 0);

    /// Raw declared characteristic (0 = rationals); validated by
    /// check_consistency, not here.
    std::uint64_t characteristic() const { return characteristic_; }

    std::uint32_t add_space(const std::string& id, SpaceFlags flags, AlgebraPtr cohomology);
    std::uint32_t add_map(const std::string& id, std::uint32_t domain, std::uint32_t codomain, MapFlags flags,
                          std::optional<GradedHom> hom);
    std::uint32_t add_pair(const std::string& id, std::uint32_t f, std::uint32_t g);
    /// Returns the node for a×b, creating it on first use.
    std::uint32_t product_node(std::uint32_t a, std::uint32_t b);

    void set_constant_point(std::uint32_t map, std::string point);
    void set_composition(std::uint32_t map, std::uint32_t outer, std::uint32_t inner);
    void set_product(std::uint32_t map, std::uint32_t left, std::uint32_t right);
    void relate_homotopic(std::uint32_t a, std::uint32_t b);
    void relate_fibrewise_equivalent(std::uint32_t a, std::uint32_t b);
    void relate_disjoint_images(std::uint32_t a, std::uint32_t b);

    const std::vector<SpaceNode>& spaces() const { return spaces_; }
    const std::vector<MapNode>& maps() const { return maps_; }
    const std::vector<PairNode>& pairs() const { return pairs_; }
    const std::vector<ProductNode>& products() const { return products_; }
    const SpaceNode& space(std::uint32_t i) const { return spaces_.at(i); }
    const MapNode& map(std::uint32_t i) const { return maps_.at(i); }
    const PairNode& pair(std::uint32_t i) const { return pairs_.at(i); }

    std::optional<std::uint32_t> find_space(const std::string& id) const;
    std::optional<std::uint32_t> find_map(const std::string& id) const;
    std::optional<std::uint32_t> find_pair(const std::string& id) const;
    std::optional<std::uint32_t> find_pair(std::uint32_t f, std::uint32_t g) const;
    std::optional<std::uint32_t> find_product(std::uint32_t a, std::uint32_t b) const;

    bool homotopic(std::uint32_t a, std::uint32_t b) const;
    bool fibrewise_equivalent(std::uint32_t a, std::uint32_t b) const;
    bool disjoint_images(std::uint32_t a, std::uint32_t b) const;

    std::optional<SlotId> slot(NodeKind kind, std::uint32_t node, Quantity q) const;
    SlotId require_slot(NodeKind kind, std::uint32_t node, Quantity q) const;
    std::size_t slot_count() const { return values_.size(); }
    const Interval& value(SlotId s) const { return values_.at(s); }
    /// e.g. "TC(P)", "sec(u,v)", "cat(S2)".
    std::string slot_name(SlotId s) const;
    NodeKind slot_kind(SlotId s) const { return owners_.at(s).kind; }
    Quantity slot_quantity(SlotId s) const { return owners_.at(s).q; }
    std::uint32_t slot_node(SlotId s) const { return owners_.at(s).node; }
    /// Accepts the DSL form: Q(id) or Q(id,id).
    std::optional<SlotId> find_slot(const std::string& expr) const;

    /// Intersects the slot with `bound`, logging an "input" step when it
    /// tightens. Throws ContradictionDetected on an empty result.
    bool assert_bound(SlotId s, Interval bound, const std::string& source);

    /// Applies one tightening and logs it. Returns false when nothing
    /// changed. Throws ContradictionDetected on an empty result.
    bool tighten(SlotId s, Interval bound, std::string rule, std::string anchor, std::vector<Premise> premises,
                 std::vector<std::string> conditions);

    const std::vector<DerivationStep>& trace() const { return trace_; }

    /// Memoised lcp of the bar generators of a pair; nullopt when the pair
    /// lacks cohomology data.
    std::shared_ptr<const LcpResult> pair_lcp(std::uint32_t pair) const;
    std::shared_ptr<const ZeroDivisorSet> pair_generators(std::uint32_t pair) const;

    /// Slots snapshot, for comparing fixpoints.
    const std::vector<Interval>& values() const { return values_; }

private:
    struct Owner {
        NodeKind kind;
        std::uint32_t node;
        Quantity q;
    };

    void check_map(std::uint32_t m) const;
    std::array<std::int64_t, kQuantityCount> make_slots(NodeKind kind, std::uint32_t node,
                                                        std::initializer_list<Quantity> qs);
    std::uint32_t find_root(std::vector<std::uint32_t>& uf, std::uint32_t x) const;

    struct Cache {
        std::map<std::uint32_t, std::shared_ptr<const ZeroDivisorSet>> gens;
        std::map<std::uint32_t, std::shared_ptr<const LcpResult>> lcp;
    };

    std::uint64_t characteristic_;
    std::vector<SpaceNode> spaces_;
    std::vector<MapNode> maps_;
    std::vector<PairNode> pairs_;
    std::vector<ProductNode> products_;
    std::unordered_map<std::string, std::pair<NodeKind, std::uint32_t>> ids_;
    std::vector<Interval> values_;
    std::vector<Owner> owners_;
    mutable std::vector<std::uint32_t> homotopy_uf_, fibrewise_uf_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> disjoint_;
    std::vector<DerivationStep> trace_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace tcb
