#pragma once

#include "tcbivar/dsl.hpp"
#include "tcbivar/engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tcb {

struct PremiseRecord {
    std::string quantity;
    std::string side;  // "lo" or "hi"
    Interval value;
    friend bool operator==(const PremiseRecord&, const PremiseRecord&) = default;
};

struct StepRecord {
    std::size_t index = 0;
    std::string rule, anchor, quantity;
    std::vector<PremiseRecord> premises;
    std::vector<std::string> conditions;
    Interval before, after;
    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct QueryResult {
    std::string kind;  // lcp, bounds, explain, facts
    /// Pair id for lcp, quantity expression for bounds and explain.
    std::string quantity;
    std::optional<Interval> interval;
    std::optional<std::uint64_t> lcp;
    std::vector<std::string> witness;
    std::string witness_product;
    std::vector<std::string> facts;
    std::vector<StepRecord> steps;
    friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

struct Report {
    std::string status = "ok";  // ok, contradiction, iteration-limit
    std::string error;
    std::vector<std::string> warnings;
    std::vector<std::string> violations;
    std::vector<QueryResult> results;
    /// Full trace when propagation stopped on an error.
    std::vector<StepRecord> trace;
    friend bool operator==(const Report&, const Report&) = default;
};

struct RunOptions {
    bool literature = true;
    std::size_t max_iterations = 10000;
    std::optional<std::uint64_t> shuffle_seed;
};

/// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitContradiction = 1, kExitParse = 2, kExitSemantic = 3, kExitIterations = 4 };

/// Builds the problem, propagates and answers the queries. Throws
/// dsl::SemanticError for declarations the catalog or graph rejects;
/// contradictions and iteration limits are reported, not thrown.
Report run(const dsl::Document& doc, const RunOptions& options = {});

int exit_code(const Report& report);

std::vector<StepRecord> records(const ProblemGraph& graph, const std::vector<DerivationStep>& steps);

enum class Format { Text, Structured };

std::string render(const Report& report, Format format);
/// Inverse of render(report, Format::Structured). Throws std::invalid_argument
/// on malformed input.
Report parse_structured(const std::string& json);

}  // namespace tcb
