#pragma once

#include "tcbivar/algebra_maps.hpp"

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace tcb {

class LcpError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LcpResult {
    std::size_t value = 0;
    /// Generator indices whose ordered product is witness_product.
    std::vector<std::size_t> witness;
    AlgebraElement witness_product;
    /// dim V_1, dim V_2, ... up to and including the first zero subspace.
    std::vector<std::size_t> level_dims;
    /// Smallest degree occurring in V_m, per nonzero level.
    std::vector<int> level_min_degree;
};

/// Largest m with some m-fold product from span(gens) nonzero, via
/// V_{m+1} = span{v·g}. Throws LcpError on inhomogeneous or degree-0 input.
LcpResult lcp_subspace_iteration(const ZeroDivisorSet& gens);

/// Exhaustive search over multisets of generators of size <= cap.
/// Requires cap >= top degree of the ambient algebra.
std::size_t lcp_bruteforce(const ZeroDivisorSet& gens, std::size_t cap);

/// Coefficient of the named basis element; throws std::out_of_range on an
/// unknown label.
Scalar coefficient_of(const AlgebraElement& x, std::string_view label);

/// Ordered product of the selected generators.
AlgebraElement product_of(const ZeroDivisorSet& gens, const std::vector<std::size_t>& word);

}  // namespace tcb
