#include "tcbivar/report.hpp"
#include "tcbivar/selftest.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#ifndef TCBIVAR_FIXTURE_DIR
#define TCBIVAR_FIXTURE_DIR ""
#endif

namespace fs = std::filesystem;
using namespace tcb;

namespace {

struct Outcome {
    int code = kExitOk;
    std::string out, err;
};

std::optional<std::string> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// One file through parse, run and render. `edit` may rewrite the queries.
template <class Edit>
Outcome process(const std::string& path, const RunOptions& opts, Format fmt_, Edit&& edit)
{
    Outcome o;
    auto text = slurp(path);
    if (!text) {
        o.code = kExitParse;
        o.err = fmt::format("{}: cannot read file\n", path);
        return o;
    }
    try {
        dsl::Document doc = dsl::parse(*text);
        edit(doc);
        Report rep = run(doc, opts);
        o.out = render(rep, fmt_);
        o.code = exit_code(rep);
    } catch (const dsl::ParseError& e) {
        o.code = kExitParse;
        o.err = fmt::format("{}:{}\n", path, e.what());
    } catch (const dsl::SemanticError& e) {
        o.code = kExitSemantic;
        o.err = fmt::format("{}:{}\n", path, e.what());
    }
    return o;
}

int emit(const Outcome& o)
{
    std::cout << o.out;
    std::cerr << o.err;
    return o.code;
}

void replace_queries(dsl::Document& doc, dsl::QueryStmt q)
{
    auto& st = doc.statements;
    st.erase(std::remove_if(st.begin(), st.end(), [](const dsl::Statement& s) {
                 return std::holds_alternative<dsl::QueryStmt>(s);
             }),
             st.end());
    st.emplace_back(std::move(q));
}

void write_atomically(const fs::path& target, const std::string& content)
{
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
    }
    fs::rename(tmp, target);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tcbivar: interval bounds for bivariate topological complexity"};
    app.require_subcommand(1);

    std::string file, format = "text", pair, quantity, dir, fixtures = TCBIVAR_FIXTURE_DIR;
    bool paper_only = false;
    std::size_t max_iterations = 10000;
    unsigned jobs = 1;
    std::size_t oracle = 200;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
        sub->add_flag("--paper-only", paper_only, "drop literature facts");
        sub->add_option("--max-iterations", max_iterations, "propagation step limit");
    };

    auto* solve = app.add_subcommand("solve", "solve a problem file and answer its queries");
    solve->add_option("FILE", file)->required();
    add_common(solve);

    auto* lcp = app.add_subcommand("lcp", "cup-length lower bound for one pair");
    lcp->add_option("FILE", file)->required();
    lcp->add_option("--pair", pair, "pair id")->required();
    add_common(lcp);

    auto* expl = app.add_subcommand("explain", "derivation chain for one quantity");
    expl->add_option("FILE", file)->required();
    expl->add_option("--quantity", quantity, "e.g. TC(P) or TCH(f,g)")->required();
    add_common(expl);

    auto* self = app.add_subcommand("selftest", "built-in instances, fixtures and oracle checks");
    self->add_option("--fixtures", fixtures, "fixture directory");
    self->add_option("--oracle-instances", oracle, "random lcp oracle instances");

    auto* batch = app.add_subcommand("batch", "solve every .tcb file in a directory");
    batch->add_option("DIR", dir)->required();
    batch->add_option("--jobs", jobs, "files processed concurrently")->check(CLI::Range(1u, 64u));
    add_common(batch);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }

    RunOptions opts;
    opts.literature = !paper_only;
    opts.max_iterations = max_iterations;
    const Format fmt_ = format == "structured" ? Format::Structured : Format::Text;

    if (*solve)
        return emit(process(file, opts, fmt_, [](dsl::Document&) {}));

    if (*lcp) {
        return emit(process(file, opts, fmt_, [&](dsl::Document& doc) {
            dsl::QueryStmt q;
            q.kind = "lcp";
            q.pair = pair;
            replace_queries(doc, q);
            doc = dsl::parse(dsl::print(doc));
        }));
    }

    if (*expl) {
        return emit(process(file, opts, fmt_, [&](dsl::Document& doc) {
            dsl::QueryStmt q;
            q.kind = "explain";
            q.target = dsl::parse_quantity_ref(quantity);
            replace_queries(doc, q);
            doc = dsl::parse(dsl::print(doc));
        }));
    }

    if (*self) {
        bool ok = true;
        for (const auto& c : run_selftest(fixtures, oracle)) {
            std::cout << fmt::format("{} {}: {}\n", c.ok ? "PASS" : "FAIL", c.name, c.detail);
            ok = ok && c.ok;
        }
        return ok ? 0 : 1;
    }

    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.path().extension() == ".tcb")
            files.push_back(e.path());
    if (ec) {
        std::cerr << fmt::format("{}: {}\n", dir, ec.message());
        return kExitParse;
    }
    std::sort(files.begin(), files.end());
    const std::string ext = fmt_ == Format::Structured ? ".json" : ".txt";
    std::vector<Outcome> outcomes(files.size());
    for (std::size_t start = 0; start < files.size(); start += jobs) {
        std::vector<std::future<Outcome>> running;
        for (std::size_t i = start; i < std::min(files.size(), start + jobs); ++i)
            running.push_back(std::async(std::launch::async, [&, i] {
                Outcome o = process(files[i].string(), opts, fmt_, [](dsl::Document&) {});
                fs::path target = files[i];
                target += ext;
                write_atomically(target, o.out.empty() ? o.err : o.out);
                return o;
            }));
        for (std::size_t k = 0; k < running.size(); ++k)
            outcomes[start + k] = running[k].get();
    }
    int worst = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::cout << fmt::format("{}: exit {}\n", files[i].filename().string(), outcomes[i].code);
        worst = std::max(worst, outcomes[i].code);
    }
    return worst;
}
