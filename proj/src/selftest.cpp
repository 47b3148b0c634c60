#include "tcbivar/selftest.hpp"

#include "tcbivar/catalog.hpp"
#include "tcbivar/report.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tcb {

ZeroDivisorSet random_bar_set(const Field& field, int n, std::mt19937_64& rng)
{
    auto lam = exterior_algebra(field, std::vector<int>(static_cast<std::size_t>(n), 1));
    auto xy = tensor_product(lam, lam);
    std::uniform_int_distribution<int> coef(-5, 5);
    ZeroDivisorSet out{xy, {}, {}};
    for (int i = 0; i < n; ++i) {
        AlgebraElement left(lam), right(lam);
        for (int j = 1; j <= n; ++j) {
            auto u = AlgebraElement::basis(lam, lam->index_of(n == 1 ? "u" : fmt::format("u{}", j)));
            left += field.from_int(coef(rng)) * u;
            right += field.from_int(coef(rng)) * u;
        }
        auto g = embed_left(left, xy) - embed_right(right, xy);
        if (g.is_zero())
            continue;
        out.generators.push_back(std::move(g));
        out.sources.push_back(n == 1 ? "u" : fmt::format("u{}", i + 1));
    }
    return out;
}

namespace {

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "# expect TC(P) = [1,1]", "# expect lcp P = 2", "# expect exit 1"
std::vector<std::string> expectations(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    const std::string tag = "# expect ";
    while (std::getline(in, line))
        if (line.rfind(tag, 0) == 0)
            out.push_back(line.substr(tag.size()));
    return out;
}

SelfCheck check_fixture(const std::filesystem::path& path)
{
    SelfCheck c{"fixture " + path.filename().string(), false, ""};
    const std::string text = read_file(path);
    dsl::Document doc;
    try {
        doc = dsl::parse(text);
    } catch (const std::exception& e) {
        c.detail = e.what();
        return c;
    }
    Report rep;
    try {
        rep = run(doc);
    } catch (const std::exception& e) {
        c.detail = e.what();
        return c;
    }
    auto exp = expectations(text);
    if (exp.empty()) {
        c.detail = "no expectations";
        return c;
    }
    for (const auto& e : exp) {
        std::istringstream in(e);
        std::string a, b, eq, v;
        in >> a >> b;
        if (a == "exit") {
            if (std::to_string(exit_code(rep)) != b) {
                c.detail = fmt::format("exit {} expected, got {}", b, exit_code(rep));
                return c;
            }
            continue;
        }
        if (a == "lcp") {
            in >> eq >> v;
            auto it = std::find_if(rep.results.begin(), rep.results.end(),
                                   [&](const QueryResult& r) { return r.kind == "lcp" && r.quantity == b; });
            if (it == rep.results.end() || !it->lcp || std::to_string(*it->lcp) != v) {
                c.detail = fmt::format("expected lcp {} = {}", b, v);
                return c;
            }
            continue;
        }
        // quantity = [lo,hi]
        eq = b;
        in >> v;
        auto it = std::find_if(rep.results.begin(), rep.results.end(), [&](const QueryResult& r) {
            return r.interval && (r.quantity == a || r.kind + " " + r.quantity == a);
        });
        if (it == rep.results.end()) {
            c.detail = fmt::format("no bounds query for {}", a);
            return c;
        }
        if (it->interval->str() != v) {
            c.detail = fmt::format("{} = {}, expected {}", a, it->interval->str(), v);
            return c;
        }
    }
    c.ok = true;
    c.detail = fmt::format("{} expectation{}", exp.size(), exp.size() == 1 ? "" : "s");
    return c;
}

}  // namespace

std::vector<SelfCheck> run_selftest(const std::string& fixture_dir, std::size_t oracle_instances)
{
    std::vector<SelfCheck> out;

    struct Want {
        const char* instance;
        const char* quantity;
        Interval value;
    };
    const ExtNat inf = ExtNat::inf();
    const Want wants[] = {
        {"sphere-deg-2-3", "TC(P)", {2, inf}},   {"sphere-deg-2-3", "TCH(P)", {2, 2}},
        {"torus-5-mixed", "TC(P)", {5, 5}},      {"iconic-circle", "TC(P)", {1, 1}},
        {"iconic-circle", "TCH(P)", {0, 0}},     {"constant-distinct", "TC(P)", {inf, inf}},
        {"constant-distinct", "TCH(P)", {0, 0}}, {"collaboration-s2", "TC(P)", {1, 1}},
        {"wedge-nonsync", "TC(P)", {inf, inf}},  {"sphere-in-r3", "TC(P)", {2, 2}},
        {"sphere-in-r3", "TCH(P)", {0, 0}},
    };
    auto instances = load_paper_instances();
    for (auto& inst : instances) {
        SelfCheck c{"instance " + inst.name, true, ""};
        try {
            propagate(inst.problem.graph());
            const ProblemGraph& g = inst.problem.graph();
            for (const Want& w : wants) {
                if (inst.name != w.instance)
                    continue;
                const Interval got = g.value(*g.find_slot(w.quantity));
                if (!(got == w.value)) {
                    c.ok = false;
                    c.detail += fmt::format("{} = {}, expected {}; ", w.quantity, got.str(), w.value.str());
                }
            }
            for (const auto& v : check_consistency(g)) {
                c.ok = false;
                c.detail += v + "; ";
            }
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = e.what();
        }
        if (c.ok)
            c.detail = "values match";
        out.push_back(std::move(c));
    }

    namespace fs = std::filesystem;
    const fs::path paper = fs::path(fixture_dir) / "paper";
    if (!fixture_dir.empty() && fs::is_directory(paper)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(paper))
            if (e.path().extension() == ".tcb")
                files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files)
            out.push_back(check_fixture(f));
    } else {
        out.push_back({"fixtures", false, fmt::format("fixture directory {} not found", paper.string())});
    }

    std::mt19937_64 rng(20260101);
    std::size_t agree = 0, total = 0;
    std::string first_bad;
    for (std::size_t i = 0; i < oracle_instances; ++i) {
        const Field field = i % 2 ? Field::prime(2) : Field::rationals();
        const int n = 1 + static_cast<int>(i % 4);
        auto gens = random_bar_set(field, n, rng);
        const std::size_t fast = lcp_subspace_iteration(gens).value;
        const std::size_t slow = lcp_bruteforce(gens, static_cast<std::size_t>(2 * n));
        ++total;
        if (fast == slow)
            ++agree;
        else if (first_bad.empty())
            first_bad = fmt::format("instance {}: subspace {} vs brute force {}", i, fast, slow);
    }
    out.push_back({"lcp oracle", agree == total,
                   first_bad.empty() ? fmt::format("{}/{} agree", agree, total) : first_bad});
    return out;
}

}  // namespace tcb
