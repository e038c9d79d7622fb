#ifndef CPROB_FREQUENCY_HPP
#define CPROB_FREQUENCY_HPP

#include <vector>

#include "cprob/state_space.hpp"

namespace cprob {

/// A predicted observable frequency: the ratio of summed squared magnitudes
/// over the target states to the sum over the whole space.
struct FrequencyResult {
  double value = 0.0;        // numerator / denominator, in [0,1]
  double numerator = 0.0;    // sum over target states of |v_x|^2
  double denominator = 0.0;  // sum over all states of |v_x|^2
};

inline constexpr double kDenominatorTolerance = 1e-15;

/// Frequency that `target` is found true after evolving `init` through the
/// chain up to the target's time slot. The denominator runs over all of the
/// state space; nothing is post-selected. Throws DegenerateDenominator when
/// the total squared magnitude after evolution is at or below `denom_tol`
/// (no frequency prediction exists for such conditioning information).
FrequencyResult prob(const Eigen::VectorXcd& init, const Proposition& target,
                     const KernelChain& chain,
                     double denom_tol = kDenominatorTolerance);

/// prob applied per cell of a partition of the state space. Cells must be
/// pairwise disjoint, cover the space, and share one time slot; the returned
/// values sum to 1. Throws BadPartition.
std::vector<double> distribution(const Eigen::VectorXcd& init,
                                 const std::vector<Proposition>& partition,
                                 const KernelChain& chain,
                                 double denom_tol = kDenominatorTolerance);

/// Incoherent minus coherent path weight into one endpoint:
///   sum_paths |value|^2  -  |sum_paths value|^2.
/// Zero when the path values neither cancel nor reinforce; positive means
/// destructive interference, negative constructive. Same enumeration caps as
/// enumerate_paths.
double interference_deficit(const KernelChain& chain, const std::string& from,
                            const std::string& to,
                            const PathCaps& caps = PathCaps{});

}  // namespace cprob

#endif  // CPROB_FREQUENCY_HPP
