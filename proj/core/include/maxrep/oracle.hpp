#pragma once

#include "maxrep/models.hpp"

#include <cstdint>
#include <vector>

namespace maxrep {

inline constexpr std::uint64_t kMaxEnumerationTerms = 100'000'000;

/// Exact P[M_n(perturbed) <= x, M_n(original) <= y] for an iid discrete
/// marginal and a fixed observation pattern (n = pattern.size() <= 6), by
/// enumerating every path and, in replacing mode, every value of the copy at
/// the unobserved indices. Throws SupportTooLarge past kMaxEnumerationTerms.
double brute_force_joint_cdf(const DiscreteMarginal& marginal,
                             const std::vector<std::uint8_t>& pattern, PerturbationMode mode,
                             double x, double y);

} // namespace maxrep
