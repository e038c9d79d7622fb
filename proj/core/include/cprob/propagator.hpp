#ifndef CPROB_PROPAGATOR_HPP
#define CPROB_PROPAGATOR_HPP

#include <Eigen/Dense>
#include <functional>

#include "cprob/algebra.hpp"
#include "cprob/errors.hpp"

namespace cprob {

/// A periodic uniform grid discretizing R^d. Points per axis and spacing fix
/// the extent; displacements are taken minimal-image.
class Grid {
 public:
  /// Throws InvalidArgument unless dimension >= 1, points_per_axis >= 8 and
  /// spacing > 0; GridTooCoarse doubles as the under-resolution diagnostic at
  /// kernel-build time. Total point count is capped to keep dense kernels
  /// affordable.
  static Grid make(int dimension, int points_per_axis, double spacing);

  int dimension() const { return dimension_; }
  int points_per_axis() const { return points_per_axis_; }
  double spacing() const { return spacing_; }
  double extent() const { return points_per_axis_ * spacing_; }
  std::size_t total_points() const { return total_points_; }
  double cell_volume() const;

  /// Axis coordinates of a flattened index, origin at the grid center.
  Eigen::VectorXd coordinate(std::size_t flat) const;

  /// Minimal-image displacement vector between two flattened indices.
  Eigen::VectorXd displacement(std::size_t from, std::size_t to) const;

  /// True when every axis coordinate satisfies |x_i| <= extent/4.
  bool in_inner_half(std::size_t flat) const;

 private:
  Grid() = default;
  int dimension_ = 0;
  int points_per_axis_ = 0;
  double spacing_ = 0.0;
  std::size_t total_points_ = 0;
};

/// The coefficient fields of the short-time propagator as functions of
/// position: a scalar rate nu0, a drift vector nu and a weight matrix W.
struct Fields {
  std::function<Complex(const Eigen::VectorXd&)> nu0;
  std::function<Eigen::VectorXcd(const Eigen::VectorXd&)> nu;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)> weight;
};

Fields constant_fields(Complex nu0, Eigen::VectorXcd nu, Eigen::MatrixXcd weight);

/// Free-particle fields: nu0 = 0, nu = 0, W = (regulator + i * mass) * I.
/// The small positive regulator makes the oscillatory kernel summable on the
/// lattice.
Fields free_particle_fields(int dimension, double mass, double regulator);

/// Edge-decay regulator rule: the smallest delta for which the step kernel's
/// magnitude has fallen to `edge_decay` at the half-extent displacement.
double edge_regulator(double step, const Grid& grid, double edge_decay = 1e-8);

/// A one-step complex transition table over a periodic grid. Rows sum to
/// exactly 1 after construction-time renormalization; the sum each row carried
/// before renormalization is kept for diagnostics.
class GridKernel {
 public:
  GridKernel(Grid grid, double step, Eigen::MatrixXcd entries,
             Eigen::VectorXcd pre_normalization_sums);

  static GridKernel identity(const Grid& grid, double step);

  const Grid& grid() const { return grid_; }
  double step() const { return step_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  const Eigen::VectorXcd& pre_normalization_sums() const {
    return pre_normalization_sums_;
  }

  /// v'(y) = sum_x v(x) entry(x, y).
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

 private:
  Grid grid_;
  double step_;
  Eigen::MatrixXcd entries_;
  Eigen::VectorXcd pre_normalization_sums_;
};

/// Discretized short-time Gaussian propagator
///   entry(x, x+z) ~ sqrt(det W / (2 pi tau)^d)
///                   * exp(-tau [ (z/tau - nu)^T W (z/tau - nu) / 2 + nu0 ]),
/// sampled over minimal-image displacements with periodic winding images
/// summed in, then renormalized row by row so the row-sum law holds exactly.
/// Throws SingularWeight for non-invertible W and GridTooCoarse when a row's
/// pre-normalization sum deviates from its continuum value by more than 10%
/// (or the winding sum fails to localize).
GridKernel gaussian_step_kernel(const Fields& fields, double step,
                                const Grid& grid);

/// Matrix composition of two grid kernels; steps add. Throws
/// DimensionMismatch when the grids differ.
GridKernel compose(const GridKernel& k1, const GridKernel& k2);

/// Splits the step into `refinement` sub-steps and composes the sub-step
/// kernels: refine_and_compose(f, tau, 1, g) is gaussian_step_kernel(f, tau, g).
GridKernel refine_and_compose(const Fields& fields, double step,
                              int refinement, const Grid& grid);

/// Extracted moment data of a short-time kernel at one grid point, together
/// with the diagonalization products built from the second moments.
struct MomentData {
  Complex nu0;              // (1 - sum_z mu) / tau
  Eigen::VectorXcd nu;      // (1/tau) sum_z mu z_j
  Eigen::MatrixXcd nu2;     // (1/tau) sum_z mu z_j z_k
  Eigen::MatrixXcd diagonalizer;  // M with M^T nu2 M = diag(1/omega)
  Eigen::VectorXcd omega;
  Eigen::MatrixXcd weight;  // W = M diag(omega) M^T
};

/// First three moments of the kernel row at `at` (flattened index), rate
/// scaled by 1/step. The diagonalization fields are left empty; see
/// weight_matrix / complete_moments.
MomentData extract_moments(const GridKernel& kernel, std::size_t at);

struct WeightDecomposition {
  Eigen::MatrixXcd diagonalizer;
  Eigen::VectorXcd omega;
  Eigen::MatrixXcd weight;
};

/// Diagonalizes a complex symmetric second-moment table by a complex
/// orthogonal matrix: M^T nu2 M = diag(1/omega), W = M diag(omega) M^T.
/// Columns are ordered by descending real part of the nu2 eigenvalues and
/// sign-fixed so the output is deterministic. Throws SingularMoments for
/// singular or non-orthogonally-diagonalizable input, InvalidArgument for a
/// non-symmetric table.
WeightDecomposition weight_matrix(const Eigen::MatrixXcd& nu2);

/// extract_moments followed by weight_matrix on the extracted nu2.
MomentData complete_moments(const GridKernel& kernel, std::size_t at);

/// L(x, v) = (i/2) (v - nu)^T W (v - nu) - i nu0, evaluated at the moment
/// data's extraction point.
Complex lagrangian(const MomentData& m, const Eigen::VectorXcd& velocity);

/// A 1-D Gaussian wave packet. `wavenumber` multiplies e^{i k (x - center)};
/// under this engine's kernel phase convention the packet drifts with
/// velocity -k/mass.
struct GaussianPacket {
  double center = 0.0;
  double sigma0 = 1.0;
  double wavenumber = 0.0;
};

/// Packet samples on a 1-D grid, L2-normalized (sum |psi|^2 h = 1).
Eigen::VectorXcd sample_packet(const GaussianPacket& packet, const Grid& grid);

/// Closed-form free evolution of the packet at time t for the engine's kernel
/// convention (W = i * mass, no regulator).
Eigen::VectorXcd analytic_free_evolution(const GaussianPacket& packet,
                                         const Grid& grid, double mass,
                                         double time);

/// Evolves packet samples through `steps` applications of the step kernel
/// built from `fields` with step = total_time / steps.
Eigen::VectorXcd evolve_packet(const Fields& fields,
                               const GaussianPacket& packet, double total_time,
                               int steps, const Grid& grid);

/// L2 distance between two grid functions over the inner half-grid.
double inner_l2_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                         const Grid& grid);

/// One number for the free-particle check: evolve the packet by regulated
/// step kernels and measure the inner-half L2 discrepancy against the
/// closed-form solution. Throws BoundaryContamination when more than 1% of
/// the packet's weight sits within extent/8 of the boundary at either end of
/// the evolution.
double schrodinger_residual(const GaussianPacket& packet, double mass,
                            double regulator, double total_time, int steps,
                            const Grid& grid);

}  // namespace cprob

#endif  // CPROB_PROPAGATOR_HPP
