#include "tcbivar/report.hpp"

#include <fmt/core.h>

#include <json.hpp>

namespace tcb {

using dsl::SemanticError;
using json = nlohmann::ordered_json;

namespace {

SpaceSpec space_spec(const dsl::SpaceDecl& d, const Problem& prob)
{
    if ((d.kind == "sphere" || d.kind == "torus" || d.kind == "wedge_circles") && (d.n < 1 || d.n > 512))
        throw SemanticError(d.pos, fmt::format("{}({}) needs a parameter between 1 and 512", d.kind, d.n));
    const int n = static_cast<int>(d.n);
    if (d.kind == "sphere")
        return SpaceSpec::sphere(n);
    if (d.kind == "torus")
        return SpaceSpec::torus(n);
    if (d.kind == "wedge_circles")
        return SpaceSpec::wedge_circles(n);
    if (d.kind == "contractible")
        return SpaceSpec::contractible();
    if (d.kind == "pathspace")
        return SpaceSpec::pathspace(prob.spec(d.refs.at(0)));
    if (d.kind == "product")
        return SpaceSpec::product(prob.spec(d.refs.at(0)), prob.spec(d.refs.at(1)));
    return SpaceSpec::point();
}

MapSpec map_spec(const dsl::MapDecl& d)
{
    using K = MapSpec::Kind;
    MapSpec m;
    if (d.kind == "identity") {
        m.kind = K::Identity;
    } else if (d.kind == "constant") {
        m.kind = K::Constant;
        if (!d.point.empty())
            m.point = d.point;
    } else if (d.kind == "degree") {
        m = MapSpec::of(K::Degree, d.ints.at(0));
    } else if (d.kind == "powers") {
        m.kind = K::Powers;
        m.exponents = d.ints;
        for (auto p : d.permutation)
            m.permutation.push_back(static_cast<int>(p));
    } else if (d.kind == "projection") {
        m = MapSpec::of(K::Projection, d.ints.at(0));
    } else if (d.kind == "inclusion") {
        m = MapSpec::of(K::Inclusion, d.ints.empty() ? 0 : d.ints[0]);
    } else if (d.kind == "path_fibration") {
        m.kind = K::PathFibration;
    } else {
        m.kind = K::OnBasis;
        m.images = d.images;
    }
    return m;
}

MapFlags map_flags(const std::vector<std::string>& names)
{
    MapFlags f;
    for (const auto& n : names) {
        if (n == "fibration") f.fibration = true;
        else if (n == "surjective") f.surjective = true;
        else if (n == "nullhomotopic") f.nullhomotopic = true;
        else if (n == "not_nullhomotopic") f.not_nullhomotopic = true;
        else if (n == "strict_section") f.strict_section = true;
        else if (n == "homotopy_section") f.homotopy_section = true;
        else if (n == "right_homotopy_inverse") f.right_homotopy_inverse = true;
        else if (n == "identity") f.identity = true;
        else if (n == "inclusion") f.inclusion = true;
        else if (n == "retraction") f.retraction = true;
    }
    return f;
}

std::optional<SpaceFlags> space_flags(const std::vector<std::string>& names, const SpaceSpec& spec)
{
    if (names.empty())
        return std::nullopt;
    SpaceFlags f = catalog_flags(spec);
    for (const auto& n : names) {
        if (n == "h_group") f.h_group = true;
        else if (n == "not_h_group") f.h_group = false;
        else if (n == "not_normal") f.normal = false;
        else if (n == "not_path_connected") f.path_connected = false;
        else if (n == "not_anr") f.anr = false;
    }
    return f;
}

// Runs fn, turning library rejections into a semantic error at `pos`.
template <class Fn>
void at(dsl::Pos pos, Fn&& fn)
{
    try {
        fn();
    } catch (const ContradictionDetected&) {
        throw;
    } catch (const SemanticError&) {
        throw;
    } catch (const CatalogError& e) {
        throw SemanticError(pos, e.what());
    } catch (const GraphError& e) {
        throw SemanticError(pos, e.what());
    } catch (const AlgebraError& e) {
        throw SemanticError(pos, e.what());
    } catch (const HomError& e) {
        throw SemanticError(pos, e.what());
    } catch (const std::out_of_range& e) {
        throw SemanticError(pos, e.what());
    } catch (const std::invalid_argument& e) {
        throw SemanticError(pos, e.what());
    }
}

SlotId require_quantity(const ProblemGraph& g, const dsl::QuantityRef& q, dsl::Pos pos)
{
    auto s = g.find_slot(q.str());
    if (!s)
        throw SemanticError(pos, fmt::format("{} is not a tracked quantity", q.str()));
    return *s;
}

std::uint32_t map_index(const ProblemGraph& g, const std::string& id) { return *g.find_map(id); }

void build(Problem& prob, const dsl::Statement& st)
{
    ProblemGraph& g = prob.graph();
    if (auto* d = std::get_if<dsl::SpaceDecl>(&st)) {
        at(d->pos, [&] {
            SpaceSpec spec = space_spec(*d, prob);
            prob.space(d->id, spec, space_flags(d->flags, spec));
        });
    } else if (auto* m = std::get_if<dsl::MapDecl>(&st)) {
        at(m->pos, [&] { prob.map(m->id, m->domain, m->codomain, map_spec(*m), map_flags(m->flags)); });
    } else if (auto* p = std::get_if<dsl::PairDecl>(&st)) {
        at(p->pos, [&] { prob.pair(p->id, p->f, p->g); });
    } else if (auto* a = std::get_if<dsl::AssertStmt>(&st)) {
        SlotId s = require_quantity(g, a->target, a->pos);
        Interval bound = a->op == "<=" ? Interval{0, a->value}
                         : a->op == ">=" ? Interval{a->value, ExtNat::inf()}
                                         : Interval::exactly(a->value);
        if (g.slot_quantity(s) == Quantity::Sync && ExtNat{1} < a->value)
            throw SemanticError(a->pos, "sync is 0 or 1");
        g.assert_bound(s, bound, fmt::format("asserted {} {} {}", a->target.str(), a->op, a->value.str()));
    } else if (auto* r = std::get_if<dsl::RelateStmt>(&st)) {
        at(r->pos, [&] {
            std::vector<std::uint32_t> m;
            for (const auto& id : r->args)
                m.push_back(map_index(g, id));
            if (r->kind == "homotopic")
                g.relate_homotopic(m[0], m[1]);
            else if (r->kind == "fibrewise_equivalent")
                g.relate_fibrewise_equivalent(m[0], m[1]);
            else if (r->kind == "disjoint_images")
                g.relate_disjoint_images(m[0], m[1]);
            else if (r->kind == "composition")
                g.set_composition(m[0], m[1], m[2]);
            else
                g.set_product(m[0], m[1], m[2]);
        });
    }
}

QueryResult answer(const Problem& prob, const dsl::QueryStmt& q)
{
    const ProblemGraph& g = prob.graph();
    QueryResult r;
    r.kind = q.kind;
    if (q.kind == "lcp") {
        r.quantity = q.pair;
        const std::uint32_t p = *g.find_pair(q.pair);
        auto res = g.pair_lcp(p);
        auto gens = g.pair_generators(p);
        if (res && gens) {
            r.lcp = res->value;
            for (auto w : res->witness)
                r.witness.push_back(gens->generators.at(w).str());
            r.witness_product = res->witness_product.str();
        }
    } else if (q.kind == "facts") {
        for (const KnownFact& f : prob.facts())
            r.facts.push_back(fmt::format("{} = {} ({}: {})", f.target, f.value.str(), to_string(f.source), f.citation));
    } else {
        SlotId s = require_quantity(g, *q.target, q.pos);
        r.quantity = g.slot_name(s);
        r.interval = g.value(s);
        r.steps = records(g, explain(g, s));
    }
    return r;
}

std::string side_name(Side s) { return s == Side::Lo ? "lo" : "hi"; }

json ext(ExtNat v) { return v.is_inf() ? json("inf") : json(v.value()); }

ExtNat ext_from(const json& j)
{
    if (j.is_string()) {
        auto v = ExtNat::parse(j.get<std::string>());
        if (!v)
            throw std::invalid_argument("bad extended natural " + j.dump());
        return *v;
    }
    return ExtNat{j.get<std::uint64_t>()};
}

json interval_json(const Interval& v) { return json{{"lo", ext(v.lo)}, {"hi", ext(v.hi)}}; }
Interval interval_from(const json& j) { return {ext_from(j.at("lo")), ext_from(j.at("hi"))}; }

json step_json(const StepRecord& s)
{
    json prem = json::array();
    for (const auto& p : s.premises)
        prem.push_back({{"quantity", p.quantity}, {"side", p.side}, {"lo", ext(p.value.lo)}, {"hi", ext(p.value.hi)}});
    return json{{"index", s.index},       {"rule", s.rule},
                {"anchor", s.anchor},     {"quantity", s.quantity},
                {"premises", prem},       {"conditions", s.conditions},
                {"before", interval_json(s.before)}, {"after", interval_json(s.after)}};
}

StepRecord step_from(const json& j)
{
    StepRecord s;
    s.index = j.at("index").get<std::size_t>();
    s.rule = j.at("rule").get<std::string>();
    s.anchor = j.at("anchor").get<std::string>();
    s.quantity = j.at("quantity").get<std::string>();
    for (const auto& p : j.at("premises"))
        s.premises.push_back({p.at("quantity").get<std::string>(), p.at("side").get<std::string>(), interval_from(p)});
    s.conditions = j.at("conditions").get<std::vector<std::string>>();
    s.before = interval_from(j.at("before"));
    s.after = interval_from(j.at("after"));
    return s;
}

json steps_json(const std::vector<StepRecord>& steps)
{
    json out = json::array();
    for (const auto& s : steps)
        out.push_back(step_json(s));
    return out;
}

std::vector<StepRecord> steps_from(const json& j)
{
    std::vector<StepRecord> out;
    for (const auto& s : j)
        out.push_back(step_from(s));
    return out;
}

std::string premise_text(const PremiseRecord& p)
{
    return fmt::format("{}.{} = {}", p.quantity, p.side, (p.side == "lo" ? p.value.lo : p.value.hi).str());
}

void step_text(std::string& out, const StepRecord& s)
{
    out += fmt::format("  #{} {} {}: {} -> {}\n", s.index, s.rule, s.quantity, s.before.str(), s.after.str());
    if (s.rule == "input") {
        out += fmt::format("      source: {}\n", s.anchor);
        return;
    }
    out += fmt::format("      rule: {}\n", s.anchor);
    if (!s.premises.empty()) {
        std::string p;
        for (std::size_t i = 0; i < s.premises.size(); ++i)
            p += (i ? ", " : "") + premise_text(s.premises[i]);
        out += fmt::format("      from: {}\n", p);
    }
    for (const auto& c : s.conditions)
        out += fmt::format("      given: {}\n", c);
}

}  // namespace

std::vector<StepRecord> records(const ProblemGraph& graph, const std::vector<DerivationStep>& steps)
{
    std::vector<StepRecord> out;
    for (const DerivationStep& s : steps) {
        StepRecord r;
        r.index = s.index;
        r.rule = s.rule;
        r.anchor = s.anchor;
        r.quantity = graph.slot_name(s.slot);
        for (const Premise& p : s.premises)
            r.premises.push_back({graph.slot_name(p.slot), side_name(p.side), p.value});
        r.conditions = s.conditions;
        r.before = s.before;
        r.after = s.after;
        out.push_back(std::move(r));
    }
    return out;
}

Report run(const dsl::Document& doc, const RunOptions& options)
{
    const std::uint64_t p = doc.characteristic().value_or(0);
    Problem prob(p == 0 ? Field::rationals() : Field::prime(p), options.literature);
    Report rep;
    try {
        for (const auto& st : doc.statements)
            build(prob, st);
        PropagateOptions po;
        po.max_iterations = options.max_iterations;
        po.shuffle_seed = options.shuffle_seed;
        propagate(prob.graph(), po);
    } catch (const ContradictionDetected& e) {
        rep.status = "contradiction";
        rep.error = e.what();
        rep.warnings = prob.warnings();
        rep.trace = records(prob.graph(), e.trace());
        return rep;
    } catch (const IterationLimitExceeded& e) {
        rep.status = "iteration-limit";
        rep.error = e.what();
        rep.warnings = prob.warnings();
        rep.trace = records(prob.graph(), prob.graph().trace());
        return rep;
    }
    rep.warnings = prob.warnings();
    rep.violations = check_consistency(prob.graph());
    for (const auto& q : doc.queries())
        rep.results.push_back(answer(prob, q));
    return rep;
}

int exit_code(const Report& report)
{
    if (report.status == "contradiction")
        return kExitContradiction;
    if (report.status == "iteration-limit")
        return kExitIterations;
    return kExitOk;
}

std::string render(const Report& report, Format format)
{
    if (format == Format::Structured) {
        json results = json::array();
        for (const auto& r : report.results) {
            json j{{"kind", r.kind}, {"quantity", r.quantity}};
            if (r.interval) {
                j["lo"] = ext(r.interval->lo);
                j["hi"] = ext(r.interval->hi);
            }
            if (r.lcp)
                j["lcp"] = *r.lcp;
            j["witness"] = r.witness;
            j["witness_product"] = r.witness_product;
            j["facts"] = r.facts;
            j["steps"] = steps_json(r.steps);
            results.push_back(std::move(j));
        }
        json out{{"status", report.status},    {"error", report.error},       {"warnings", report.warnings},
                 {"violations", report.violations}, {"results", results}, {"trace", steps_json(report.trace)}};
        return out.dump(2) + "\n";
    }

    std::string out = fmt::format("status: {}\n", report.status);
    if (!report.error.empty())
        out += fmt::format("error: {}\n", report.error);
    for (const auto& w : report.warnings)
        out += fmt::format("warning: {}\n", w);
    for (const auto& v : report.violations)
        out += fmt::format("violation: {}\n", v);
    for (const auto& r : report.results) {
        if (r.kind == "lcp") {
            if (!r.lcp) {
                out += fmt::format("lcp {}: unavailable, the pair carries no cohomology data\n", r.quantity);
                continue;
            }
            out += fmt::format("lcp {}: lcp = {}\n", r.quantity, *r.lcp);
            for (const auto& w : r.witness)
                out += fmt::format("  factor: {}\n", w);
            if (!r.witness.empty())
                out += fmt::format("  product: {}\n", r.witness_product);
        } else if (r.kind == "facts") {
            out += "facts:\n";
            for (const auto& f : r.facts)
                out += fmt::format("  {}\n", f);
        } else {
            out += fmt::format("{} {} = {}\n", r.kind, r.quantity, r.interval ? r.interval->str() : "?");
            if (r.kind == "explain")
                out += fmt::format("  justified by {} step{}\n", r.steps.size(), r.steps.size() == 1 ? "" : "s");
            for (const auto& s : r.steps)
                step_text(out, s);
        }
    }
    if (!report.trace.empty()) {
        out += "trace:\n";
        for (const auto& s : report.trace)
            step_text(out, s);
    }
    return out;
}

Report parse_structured(const std::string& text)
{
    try {
        json j = json::parse(text);
        Report rep;
        rep.status = j.at("status").get<std::string>();
        rep.error = j.at("error").get<std::string>();
        rep.warnings = j.at("warnings").get<std::vector<std::string>>();
        rep.violations = j.at("violations").get<std::vector<std::string>>();
        for (const auto& r : j.at("results")) {
            QueryResult q;
            q.kind = r.at("kind").get<std::string>();
            q.quantity = r.at("quantity").get<std::string>();
            if (r.contains("lo"))
                q.interval = interval_from(r);
            if (r.contains("lcp"))
                q.lcp = r.at("lcp").get<std::uint64_t>();
            q.witness = r.at("witness").get<std::vector<std::string>>();
            q.witness_product = r.at("witness_product").get<std::string>();
            q.facts = r.at("facts").get<std::vector<std::string>>();
            q.steps = steps_from(r.at("steps"));
            rep.results.push_back(std::move(q));
        }
        rep.trace = steps_from(j.at("trace"));
        return rep;
    } catch (const json::exception& e) {
        throw std::invalid_argument(fmt::format("malformed report: {}", e.what()));
    }
}

}  // namespace tcb
