#include "cprob/frequency.hpp"

#include <cmath>
#include <set>

namespace cprob {

FrequencyResult prob(const Eigen::VectorXcd& init, const Proposition& target,
                     const KernelChain& chain, double denom_tol) {
  if (target.space() != chain.space()) {
    throw Error(ErrorCode::SpaceMismatch,
                "target proposition lives on a different state space");
  }
  const std::size_t t = target.effective_time(chain);
  const Eigen::VectorXcd v = evolve(init, chain.prefix(t));

  double numerator = 0.0;
  double denominator = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double w = std::norm(v(i));
    denominator += w;
    if (target.contains_index(static_cast<std::size_t>(i))) numerator += w;
  }
  if (denominator <= denom_tol) {
    throw Error(ErrorCode::DegenerateDenominator,
                "total squared magnitude " + std::to_string(denominator) +
                    " is below " + std::to_string(denom_tol));
  }
  return FrequencyResult{numerator / denominator, numerator, denominator};
}

std::vector<double> distribution(const Eigen::VectorXcd& init,
                                 const std::vector<Proposition>& partition,
                                 const KernelChain& chain, double denom_tol) {
  if (partition.empty()) {
    throw Error(ErrorCode::BadPartition, "empty partition");
  }
  const StateSpace& space = chain.space();
  std::set<std::size_t> seen;
  std::optional<std::size_t> time;
  for (const auto& cell : partition) {
    if (cell.space() != space) {
      throw Error(ErrorCode::BadPartition,
                  "partition cell lives on a different state space");
    }
    const std::size_t t = cell.effective_time(chain);
    if (time && *time != t) {
      throw Error(ErrorCode::BadPartition,
                  "partition cells refer to different time slots");
    }
    time = t;
    for (std::size_t i : cell.member_indices()) {
      if (!seen.insert(i).second) {
        throw Error(ErrorCode::BadPartition,
                    "state '" + space.label(i) + "' appears in two cells");
      }
    }
  }
  if (seen.size() != space.dimension()) {
    throw Error(ErrorCode::BadPartition,
                "partition covers " + std::to_string(seen.size()) + " of " +
                    std::to_string(space.dimension()) + " states");
  }
  std::vector<double> out;
  out.reserve(partition.size());
  for (const auto& cell : partition) {
    out.push_back(prob(init, cell, chain, denom_tol).value);
  }
  return out;
}

double interference_deficit(const KernelChain& chain, const std::string& from,
                            const std::string& to, const PathCaps& caps) {
  const auto paths = enumerate_paths(chain, from, to, caps);
  double incoherent = 0.0;
  Complex coherent{0.0, 0.0};
  for (const auto& p : paths) {
    incoherent += std::norm(p.value);
    coherent += p.value;
  }
  return incoherent - std::norm(coherent);
}

}  // namespace cprob
