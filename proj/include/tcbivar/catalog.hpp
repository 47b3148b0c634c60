#pragma once

#include "tcbivar/problem_graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcb {

/// Bad catalog parameters or a spec/field combination the catalog cannot
/// build (degree map on a torus, exponent vector of the wrong length, ...).
class CatalogError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SpaceSpec {
    enum class Kind { Point, Contractible, Sphere, Torus, Wedge, PathSpace, Product };
    Kind kind = Kind::Point;
    int n = 0;
    /// PathSpace: the base. Product: the two factors.
    std::vector<SpaceSpec> parts;

    static SpaceSpec point() { return {}; }
    static SpaceSpec contractible() { return {Kind::Contractible, 0, {}}; }
    static SpaceSpec sphere(int n) { return {Kind::Sphere, n, {}}; }
    static SpaceSpec torus(int n) { return {Kind::Torus, n, {}}; }
    static SpaceSpec wedge_circles(int k) { return {Kind::Wedge, k, {}}; }
    static SpaceSpec pathspace(SpaceSpec base) { return {Kind::PathSpace, 0, {std::move(base)}}; }
    static SpaceSpec product(SpaceSpec a, SpaceSpec b) { return {Kind::Product, 0, {std::move(a), std::move(b)}}; }

    friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

/// "sphere(2)", "pathspace(sphere(2))", ...
std::string describe(const SpaceSpec& spec);

enum class FactSource { Reference, Literature, Derived };

const char* to_string(FactSource s);

struct KnownFact {
    /// Quantity expression, e.g. "TC(S2)"; empty until attached to a node.
    std::string target;
    Quantity quantity;
    Interval value;
    FactSource source;
    std::string citation;
};

struct CatalogSpace {
    SpaceFlags flags;
    AlgebraPtr algebra;
    std::vector<KnownFact> facts;
};

SpaceFlags catalog_flags(const SpaceSpec& spec);
CatalogSpace instantiate_space(const SpaceSpec& spec, const Field& field);

struct LinearTerm {
    std::int64_t num = 1, den = 1;
    std::string label;

    friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

struct BasisImage {
    std::string label;
    std::vector<LinearTerm> terms;

    friend bool operator==(const BasisImage&, const BasisImage&) = default;
};

struct MapSpec {
    enum class Kind { Identity, Constant, Degree, Powers, Projection, Inclusion, PathFibration, OnBasis };
    Kind kind = Kind::Identity;
    /// Degree: k. Projection: factor 1 or 2. Inclusion: wedge summand (0 = unset).
    std::int64_t k = 0;
    /// Powers: f(z)_i = z_{perm[i]}^{exponents[i]}, perm 1-based and
    /// defaulting to the identity.
    std::vector<std::int64_t> exponents;
    std::vector<int> permutation;
    /// Constant: label of the image point.
    std::string point = "*";
    /// OnBasis: images of H*(codomain) basis elements; unlisted
    /// decomposables extend multiplicatively, other unlisted classes map to 0.
    std::vector<BasisImage> images;

    static MapSpec of(Kind kind, std::int64_t k = 0)
    {
        MapSpec m;
        m.kind = kind;
        m.k = k;
        return m;
    }

    friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

struct CatalogMap {
    MapFlags flags;
    std::optional<GradedHom> hom;
    std::optional<std::string> constant_point;
};

/// The induced hom runs H*(codomain) -> H*(domain).
CatalogMap instantiate_map(const MapSpec& spec, const SpaceSpec& domain, const CatalogSpace& dom,
                           const SpaceSpec& codomain, const CatalogSpace& cod);

/// Extends images of indecomposables multiplicatively. `given[i]`, when set,
/// fixes the image of basis element i; unset indecomposables go to 0.
GradedHom extend_multiplicatively(const AlgebraPtr& source, const AlgebraPtr& target,
                                  const std::vector<std::optional<AlgebraElement>>& given);

/// Graph under construction from catalog pieces, keeping the specs so that
/// maps can be type-checked against them.
class Problem {
public:
    explicit Problem(Field field, bool literature = true);

    const Field& field() const { return field_; }
    ProblemGraph& graph() { return graph_; }
    const ProblemGraph& graph() const { return graph_; }

    /// `flags` replaces the catalog defaults when given.
    std::uint32_t space(const std::string& id, const SpaceSpec& spec, std::optional<SpaceFlags> flags = {});
    /// Flags in `extra` are added to the catalog ones.
    std::uint32_t map(const std::string& id, const std::string& domain, const std::string& codomain,
                      const MapSpec& spec, MapFlags extra = {});
    const SpaceSpec& spec(const std::string& space) const { return specs_.at(space); }
    std::uint32_t pair(const std::string& id, const std::string& f, const std::string& g);

    /// Asserts a fact on a quantity expression like "TC(f)".
    void fact(const std::string& quantity, Interval value, FactSource source, const std::string& citation);

    const std::vector<KnownFact>& facts() const { return facts_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    void load_fact(SlotId s, const KnownFact& f);

    Field field_;
    bool literature_;
    ProblemGraph graph_;
    std::map<std::string, SpaceSpec> specs_;
    std::map<std::string, CatalogSpace> spaces_;
    std::vector<KnownFact> facts_;
    std::vector<std::string> warnings_;
};

struct PaperInstance {
    std::string name;
    Problem problem;
    /// The pair the instance is about.
    std::string pair;
};

std::vector<PaperInstance> load_paper_instances(bool literature = true);

}  // namespace tcb
