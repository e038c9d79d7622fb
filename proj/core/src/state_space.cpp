#include "cprob/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace cprob {

StateSpace StateSpace::make(std::vector<std::string> labels) {
  if (labels.empty()) {
    throw Error(ErrorCode::EmptySpace, "a state space needs at least one label");
  }
  StateSpace space;
  space.index_.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = space.index_.emplace(labels[i], i);
    if (!inserted) {
      throw Error(ErrorCode::DuplicateLabel,
                  "label '" + labels[i] + "' appears more than once");
    }
  }
  space.labels_ = std::move(labels);
  return space;
}

std::size_t StateSpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownLabel, "no state named '" + label + "'");
  }
  return it->second;
}

bool StateSpace::contains(const std::string& label) const {
  return index_.count(label) != 0;
}

StateSpace product_space(const StateSpace& a, const StateSpace& b) {
  std::vector<std::string> labels;
  labels.reserve(a.dimension() * b.dimension());
  for (const auto& la : a.labels()) {
    for (const auto& lb : b.labels()) {
      labels.push_back(la + "." + lb);
    }
  }
  return StateSpace::make(std::move(labels));
}

Kernel::Kernel(StateSpace space, double step, Eigen::MatrixXcd entries)
    : space_(std::move(space)), step_(step), entries_(std::move(entries)) {
  const auto dim = static_cast<Eigen::Index>(space_.dimension());
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "kernel table is " + std::to_string(entries_.rows()) + "x" +
                    std::to_string(entries_.cols()) + " but the space has " +
                    std::to_string(dim) + " states");
  }
  if (!(step_ > 0.0) || !std::isfinite(step_)) {
    throw Error(ErrorCode::InvalidArgument, "kernel step must be positive");
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "kernel entries must be finite");
  }
}

Kernel Kernel::identity(const StateSpace& space, double step) {
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  return Kernel(space, step, Eigen::MatrixXcd::Identity(dim, dim));
}

ValidationReport validate_kernel(const Kernel& kernel, double tol) {
  ValidationReport report;
  const auto& m = kernel.entries();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Complex sum = m.row(r).sum();
    const double deviation = std::abs(sum - Complex{1.0, 0.0});
    if (deviation > tol) {
      report.issues.push_back(
          {static_cast<std::size_t>(r), sum, deviation});
    }
  }
  return report;
}

Kernel compose(const Kernel& k1, const Kernel& k2) {
  if (k1.space() != k2.space()) {
    throw Error(ErrorCode::SpaceMismatch,
                "cannot compose kernels over different state spaces");
  }
  return Kernel(k1.space(), k1.step() + k2.step(),
                k1.entries() * k2.entries());
}

Kernel tensor(const Kernel& a, const Kernel& b) {
  if (a.step() != b.step()) {
    throw Error(ErrorCode::StepMismatch,
                "tensor factors must share one step duration");
  }
  const auto da = static_cast<Eigen::Index>(a.space().dimension());
  const auto db = static_cast<Eigen::Index>(b.space().dimension());
  Eigen::MatrixXcd out(da * db, da * db);
  for (Eigen::Index xa = 0; xa < da; ++xa) {
    for (Eigen::Index xb = 0; xb < db; ++xb) {
      for (Eigen::Index ya = 0; ya < da; ++ya) {
        for (Eigen::Index yb = 0; yb < db; ++yb) {
          out(xa * db + xb, ya * db + yb) =
              a.entries()(xa, ya) * b.entries()(xb, yb);
        }
      }
    }
  }
  return Kernel(product_space(a.space(), b.space()), a.step(), std::move(out));
}

KernelChain KernelChain::make(StateSpace space, std::vector<Kernel> kernels,
                              double start_time) {
  for (const auto& k : kernels) {
    if (k.space() != space) {
      throw Error(ErrorCode::SpaceMismatch,
                  "every kernel of a chain must share the chain's space");
    }
  }
  KernelChain chain;
  chain.space_ = std::move(space);
  chain.kernels_ = std::move(kernels);
  chain.start_time_ = start_time;
  return chain;
}

KernelChain KernelChain::prefix(std::size_t count) const {
  if (count > kernels_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "prefix of " + std::to_string(count) +
                    " kernels requested from a chain of " +
                    std::to_string(kernels_.size()));
  }
  return make(space_,
              std::vector<Kernel>(kernels_.begin(),
                                  kernels_.begin() +
                                      static_cast<std::ptrdiff_t>(count)),
              start_time_);
}

Eigen::VectorXcd evolve(const Eigen::VectorXcd& init, const KernelChain& chain,
                        double init_sum_tol) {
  const auto dim = static_cast<Eigen::Index>(chain.space().dimension());
  if (init.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial vector has " + std::to_string(init.size()) +
                    " entries but the space has " + std::to_string(dim));
  }
  const double sum_dev = std::abs(init.sum() - Complex{1.0, 0.0});
  if (sum_dev > init_sum_tol) {
    throw Error(ErrorCode::InvalidArgument,
                "initial vector sums to 1 only within " +
                    std::to_string(sum_dev) + " (tolerance " +
                    std::to_string(init_sum_tol) + ")");
  }
  Eigen::VectorXcd v = init;
  for (const auto& k : chain.kernels()) {
    v = (v.transpose() * k.entries()).transpose();
  }
  return v;
}

std::vector<PathTerm> enumerate_paths(const KernelChain& chain,
                                      const std::string& from,
                                      const std::string& to,
                                      const PathCaps& caps) {
  const std::size_t dim = chain.space().dimension();
  const std::size_t n = chain.size();
  if (n > caps.max_steps) {
    throw Error(ErrorCode::TooLarge,
                "chain of " + std::to_string(n) +
                    " steps exceeds the oracle cap of " +
                    std::to_string(caps.max_steps));
  }
  if (dim > caps.max_dimension) {
    throw Error(ErrorCode::TooLarge,
                "dimension " + std::to_string(dim) +
                    " exceeds the oracle cap of " +
                    std::to_string(caps.max_dimension));
  }
  const std::size_t from_i = chain.space().index_of(from);
  const std::size_t to_i = chain.space().index_of(to);

  std::vector<PathTerm> out;
  if (n == 0) {
    return out;  // no step, no path
  }
  double count = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) count *= static_cast<double>(dim);
  if (count > static_cast<double>(caps.max_paths)) {
    throw Error(ErrorCode::TooLarge,
                "enumeration would produce more than " +
                    std::to_string(caps.max_paths) + " paths");
  }
  out.reserve(static_cast<std::size_t>(count));

  std::vector<std::size_t> mid(n >= 1 ? n - 1 : 0, 0);
  for (;;) {
    PathTerm term;
    term.states.reserve(n + 1);
    term.states.push_back(from_i);
    Complex value{1.0, 0.0};
    std::size_t prev = from_i;
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t next = (step + 1 == n) ? to_i : mid[step];
      value *= chain.kernels()[step].entry(prev, next);
      term.states.push_back(next);
      prev = next;
    }
    term.value = value;
    out.push_back(std::move(term));

    // advance the odometer over intermediate assignments
    std::size_t pos = 0;
    for (; pos < mid.size(); ++pos) {
      if (++mid[pos] < dim) break;
      mid[pos] = 0;
    }
    if (pos == mid.size()) break;
  }
  return out;
}

Proposition Proposition::make(StateSpace space,
                              std::vector<std::string> members,
                              std::optional<std::size_t> time_index) {
  if (members.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "a proposition needs at least one member state");
  }
  std::set<std::size_t> indices;
  for (const auto& m : members) {
    indices.insert(space.index_of(m));
  }
  Proposition p;
  p.space_ = std::move(space);
  p.members_.assign(indices.begin(), indices.end());
  p.time_index_ = time_index;
  return p;
}

std::vector<std::string> Proposition::member_labels() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (std::size_t i : members_) out.push_back(space_.label(i));
  return out;
}

std::size_t Proposition::effective_time(const KernelChain& chain) const {
  const std::size_t t = time_index_.value_or(chain.size());
  if (t > chain.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "proposition time index " + std::to_string(t) +
                    " exceeds the chain length " +
                    std::to_string(chain.size()));
  }
  return t;
}

bool Proposition::contains_index(std::size_t i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

}  // namespace cprob
