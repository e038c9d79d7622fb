#ifndef CPROB_STATE_SPACE_HPP
#define CPROB_STATE_SPACE_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cprob/algebra.hpp"
#include "cprob/errors.hpp"

namespace cprob {

/// A finite ordered set of mutually exclusive state labels. Exactly one state
/// proposition is true at each time; distinctness of the labels is what
/// encodes that exclusivity.
class StateSpace {
 public:
  /// Builds a space from nonempty, pairwise distinct labels.
  /// Throws EmptySpace / DuplicateLabel.
  static StateSpace make(std::vector<std::string> labels);

  std::size_t dimension() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  /// Index of a label; throws UnknownLabel.
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const;

  bool operator==(const StateSpace& other) const {
    return labels_ == other.labels_;
  }
  bool operator!=(const StateSpace& other) const { return !(*this == other); }

 private:
  StateSpace() = default;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Product space with labels "<a>.<b>", row-major in the first factor.
StateSpace product_space(const StateSpace& a, const StateSpace& b);

/// One-time-step table of complex transition probabilities over a StateSpace.
/// Entry (r, c) is the complex probability (state r at t -> state c at t+step).
/// Every row of a valid kernel sums to exactly 1; validation is explicit
/// (validate_kernel) so that malformed user files can be diagnosed rather than
/// rejected at construction.
class Kernel {
 public:
  /// Entries must be a dimension x dimension matrix of finite values and the
  /// step must be positive; throws DimensionMismatch / InvalidArgument.
  Kernel(StateSpace space, double step, Eigen::MatrixXcd entries);

  static Kernel identity(const StateSpace& space, double step = 1.0);

  const StateSpace& space() const { return space_; }
  double step() const { return step_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  Complex entry(std::size_t from, std::size_t to) const {
    return entries_(static_cast<Eigen::Index>(from),
                    static_cast<Eigen::Index>(to));
  }
  Complex entry(const std::string& from, const std::string& to) const {
    return entries_(static_cast<Eigen::Index>(space_.index_of(from)),
                    static_cast<Eigen::Index>(space_.index_of(to)));
  }

 private:
  StateSpace space_;
  double step_;
  Eigen::MatrixXcd entries_;
};

struct RowIssue {
  std::size_t row = 0;
  Complex sum;
  double deviation = 0.0;  // |sum - 1|
};

struct ValidationReport {
  std::vector<RowIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline constexpr double kRowSumTolerance = 1e-10;

/// Reports every row whose sum deviates from 1 by more than `tol`.
ValidationReport validate_kernel(const Kernel& kernel,
                                 double tol = kRowSumTolerance);

/// Marginalizes over the intermediate time: entry(x, z) = sum_y k1(x,y) k2(y,z).
/// The result's step is the sum of the two steps. Throws SpaceMismatch.
Kernel compose(const Kernel& k1, const Kernel& k2);

/// Independent-subsystem product: entry((x,u),(y,v)) = kA(x,y) * kB(u,v) over
/// product_space(kA.space, kB.space). Steps must agree; throws StepMismatch.
Kernel tensor(const Kernel& a, const Kernel& b);

/// An ordered schedule of kernels over one StateSpace.
class KernelChain {
 public:
  static KernelChain make(StateSpace space, std::vector<Kernel> kernels,
                          double start_time = 0.0);

  const StateSpace& space() const { return space_; }
  const std::vector<Kernel>& kernels() const { return kernels_; }
  std::size_t size() const { return kernels_.size(); }
  double start_time() const { return start_time_; }

  /// Sub-chain covering kernels [0, count); used for queries at intermediate
  /// times. Throws InvalidArgument if count exceeds the chain length.
  KernelChain prefix(std::size_t count) const;

 private:
  KernelChain() = default;
  StateSpace space_;
  std::vector<Kernel> kernels_;
  double start_time_ = 0.0;
};

inline constexpr double kInitSumTolerance = 1e-10;

/// Contracts an initial row of complex probabilities through every kernel of
/// the chain in order. The initial vector must have the space's dimension and
/// sum to 1 within `init_sum_tol` (it is itself a row of complex
/// probabilities). Throws DimensionMismatch / InvalidArgument.
Eigen::VectorXcd evolve(const Eigen::VectorXcd& init, const KernelChain& chain,
                        double init_sum_tol = kInitSumTolerance);

/// One term of the discrete path integral: the intermediate-state assignment
/// and the product of one-step complex probabilities along it.
struct PathTerm {
  std::vector<std::size_t> states;  // from, x_1, ..., x_{n-1}, to
  Complex value;
};

struct PathCaps {
  std::size_t max_steps = 8;
  std::size_t max_dimension = 12;
  // dim^(n-1) grows fast; the explicit product above would admit ~36M paths,
  // more than the oracle is meant to materialize.
  std::size_t max_paths = 4000000;
};

/// Brute-force path enumeration between two labels: every intermediate-state
/// assignment with its product of one-step entries. The sum over the returned
/// list equals the composed-chain entry (from, to). Throws TooLarge when the
/// chain exceeds the oracle caps, UnknownLabel for bad endpoints.
std::vector<PathTerm> enumerate_paths(const KernelChain& chain,
                                      const std::string& from,
                                      const std::string& to,
                                      const PathCaps& caps = PathCaps{});

/// A disjunction of state propositions at a single time slot. Mixed-time
/// targets are unrepresentable by construction.
class Proposition {
 public:
  /// Members must be a nonempty subset of the space's labels (duplicates are
  /// collapsed). `time_index` counts kernels from the start of a chain; when
  /// absent the proposition refers to the end of whatever chain it is
  /// evaluated against.
  static Proposition make(StateSpace space, std::vector<std::string> members,
                          std::optional<std::size_t> time_index = {});

  const StateSpace& space() const { return space_; }
  const std::vector<std::size_t>& member_indices() const { return members_; }
  std::vector<std::string> member_labels() const;
  std::optional<std::size_t> time_index() const { return time_index_; }
  std::size_t effective_time(const KernelChain& chain) const;
  bool contains_index(std::size_t i) const;

  bool operator==(const Proposition& other) const {
    return space_ == other.space_ && members_ == other.members_ &&
           time_index_ == other.time_index_;
  }

 private:
  Proposition() = default;
  StateSpace space_;
  std::vector<std::size_t> members_;  // sorted, unique
  std::optional<std::size_t> time_index_;
};

}  // namespace cprob

#endif  // CPROB_STATE_SPACE_HPP
