#pragma once

#include "tcbivar/problem_graph.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tcb {

struct RuleInfo {
    const char* id;
    const char* anchor;
};

/// R1..R29 with the inequality each one applies.
const std::vector<RuleInfo>& rule_table();
/// Anchor for a rule id; empty for unknown ids.
std::string_view rule_anchor(std::string_view id);

class IterationLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PropagateOptions {
    std::size_t max_iterations = 10000;
    /// Shuffles the rule-instance order; unset means ascending rule id,
    /// then ascending node id, with R9 after everything else.
    std::optional<std::uint64_t> shuffle_seed;
};

/// Runs every rule to a fixpoint, one tightening at a time, rescanning from
/// the first instance after each. Returns the new steps; the graph keeps the
/// full trace. Throws ContradictionDetected or IterationLimitExceeded.
std::vector<DerivationStep> propagate(ProblemGraph& graph, const PropagateOptions& options = {});

/// R9 for one pair: raises the lower ends of TC and TCH to the lcp of the
/// bar generators. Returns the steps taken (none without cohomology data).
std::vector<DerivationStep> bound_from_cohomology(ProblemGraph& graph, std::uint32_t pair);

/// Steps justifying the current interval of a slot, in trace order.
std::vector<DerivationStep> explain(const ProblemGraph& graph, SlotId slot);
/// Same, addressed as "TC(P)"; throws GraphError for an unknown quantity.
std::vector<DerivationStep> explain(const ProblemGraph& graph, const std::string& quantity);

/// Re-validates invariants and flag implications; empty on success.
std::vector<std::string> check_consistency(const ProblemGraph& graph);

}  // namespace tcb
