#pragma once

#include "tcbivar/cup_length.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tcb {

struct SelfCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Bar-generator style set in Λ(u1..un)⊗Λ(u1..un): n generators
/// Σ a_ij u_j⊗1 - 1⊗Σ b_ij u_j with coefficients drawn from [-5,5].
ZeroDivisorSet random_bar_set(const Field& field, int n, std::mt19937_64& rng);

/// Built-in instances, optional fixture directory, and the lcp oracle
/// comparison on `oracle_instances` random sets.
std::vector<SelfCheck> run_selftest(const std::string& fixture_dir, std::size_t oracle_instances = 200);

}  // namespace tcb
