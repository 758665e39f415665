#include "maxrep/oracle.hpp"

#include "maxrep/errors.hpp"

#include <algorithm>
#include <limits>

namespace maxrep {

double brute_force_joint_cdf(const DiscreteMarginal& marginal,
                             const std::vector<std::uint8_t>& pattern, PerturbationMode mode,
                             double x, double y) {
  validate(Marginal{marginal});
  const std::size_t n = pattern.size();
  if (n < 1 || n > 6) {
    throw InvalidParameter("enumeration oracle needs 1 <= n <= 6");
  }
  const std::size_t unobserved =
      static_cast<std::size_t>(std::count(pattern.begin(), pattern.end(), std::uint8_t{0}));
  const std::size_t free_slots = n + (mode == PerturbationMode::replacing ? unobserved : 0);
  const std::size_t k = marginal.values.size();
  std::uint64_t terms = 1;
  for (std::size_t i = 0; i < free_slots; ++i) {
    if (terms > kMaxEnumerationTerms / k) {
      throw SupportTooLarge("enumeration would exceed 1e8 terms");
    }
    terms *= k;
  }

  // Slots 0..n-1 hold X; slots n.. hold the copy at unobserved indices, in order.
  std::vector<std::size_t> digit(free_slots, 0);
  double total = 0.0;
  for (std::uint64_t t = 0; t < terms; ++t) {
    double prob = 1.0;
    for (std::size_t s = 0; s < free_slots; ++s) {
      prob *= marginal.probs[digit[s]];
    }
    double original = -std::numeric_limits<double>::infinity();
    double perturbed = -std::numeric_limits<double>::infinity();
    std::size_t copy_slot = n;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = marginal.values[digit[i]];
      original = std::max(original, xi);
      if (pattern[i]) {
        perturbed = std::max(perturbed, xi);
      } else if (mode == PerturbationMode::replacing) {
        perturbed = std::max(perturbed, marginal.values[digit[copy_slot++]]);
      }
    }
    // An empty observed set leaves the perturbed maximum at -infinity.
    if (perturbed <= x && original <= y) {
      total += prob;
    }
    for (std::size_t s = 0; s < free_slots; ++s) {
      if (++digit[s] < k) {
        break;
      }
      digit[s] = 0;
    }
  }
  return total;
}

} // namespace maxrep
