#include "cprob/propagator.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace cprob {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxTotalPoints = 2048;
constexpr int kMaxWindingShell = 8;

std::vector<int> unflatten(std::size_t flat, int d, int points) {
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int axis = d - 1; axis >= 0; --axis) {
    idx[static_cast<std::size_t>(axis)] = static_cast<int>(flat % points);
    flat /= static_cast<std::size_t>(points);
  }
  return idx;
}

// Image vectors with Chebyshev norm exactly `shell`, appended to `out`.
void winding_shell(int d, int shell, std::vector<Eigen::VectorXi>& out) {
  Eigen::VectorXi w = Eigen::VectorXi::Constant(d, -shell);
  for (;;) {
    if (w.cwiseAbs().maxCoeff() == shell) out.push_back(w);
    int axis = 0;
    for (; axis < d; ++axis) {
      if (w[axis] < shell) {
        ++w[axis];
        break;
      }
      w[axis] = -shell;
    }
    if (axis == d) break;
  }
}

}  // namespace

Grid Grid::make(int dimension, int points_per_axis, double spacing) {
  if (dimension < 1 || dimension > 3) {
    throw Error(ErrorCode::InvalidArgument,
                "grid dimension must be 1, 2 or 3");
  }
  if (points_per_axis < 8) {
    throw Error(ErrorCode::GridTooCoarse,
                "a grid needs at least 8 points per axis, got " +
                    std::to_string(points_per_axis));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  }
  std::size_t total = 1;
  for (int i = 0; i < dimension; ++i) {
    total *= static_cast<std::size_t>(points_per_axis);
  }
  if (total > kMaxTotalPoints) {
    throw Error(ErrorCode::TooLarge,
                "dense grid kernels are capped at " +
                    std::to_string(kMaxTotalPoints) + " points, got " +
                    std::to_string(total));
  }
  Grid g;
  g.dimension_ = dimension;
  g.points_per_axis_ = points_per_axis;
  g.spacing_ = spacing;
  g.total_points_ = total;
  return g;
}

double Grid::cell_volume() const {
  return std::pow(spacing_, dimension_);
}

Eigen::VectorXd Grid::coordinate(std::size_t flat) const {
  const auto idx = unflatten(flat, dimension_, points_per_axis_);
  Eigen::VectorXd x(dimension_);
  for (int axis = 0; axis < dimension_; ++axis) {
    x[axis] = (idx[static_cast<std::size_t>(axis)] - points_per_axis_ / 2) *
              spacing_;
  }
  return x;
}

Eigen::VectorXd Grid::displacement(std::size_t from, std::size_t to) const {
  const auto a = unflatten(from, dimension_, points_per_axis_);
  const auto b = unflatten(to, dimension_, points_per_axis_);
  Eigen::VectorXd z(dimension_);
  for (int axis = 0; axis < dimension_; ++axis) {
    int d = b[static_cast<std::size_t>(axis)] -
            a[static_cast<std::size_t>(axis)];
    d = ((d % points_per_axis_) + points_per_axis_ + points_per_axis_ / 2) %
            points_per_axis_ -
        points_per_axis_ / 2;
    z[axis] = d * spacing_;
  }
  return z;
}

bool Grid::in_inner_half(std::size_t flat) const {
  const Eigen::VectorXd x = coordinate(flat);
  return (x.cwiseAbs().array() <= extent() / 4.0 + 1e-15).all();
}

Fields constant_fields(Complex nu0, Eigen::VectorXcd nu,
                       Eigen::MatrixXcd weight) {
  return Fields{
      [nu0](const Eigen::VectorXd&) { return nu0; },
      [nu = std::move(nu)](const Eigen::VectorXd&) { return nu; },
      [weight = std::move(weight)](const Eigen::VectorXd&) { return weight; },
  };
}

Fields free_particle_fields(int dimension, double mass, double regulator) {
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::ParameterRange, "mass must be positive");
  }
  if (regulator < 0.0) {
    throw Error(ErrorCode::ParameterRange, "regulator must be non-negative");
  }
  Eigen::MatrixXcd w = Complex{regulator, mass} *
                       Eigen::MatrixXcd::Identity(dimension, dimension);
  return constant_fields(Complex{0.0, 0.0}, Eigen::VectorXcd::Zero(dimension),
                         std::move(w));
}

double edge_regulator(double step, const Grid& grid, double edge_decay) {
  const double half = grid.extent() / 2.0;
  return 2.0 * step * std::log(1.0 / edge_decay) / (half * half);
}

GridKernel::GridKernel(Grid grid, double step, Eigen::MatrixXcd entries,
                       Eigen::VectorXcd pre_normalization_sums)
    : grid_(grid),
      step_(step),
      entries_(std::move(entries)),
      pre_normalization_sums_(std::move(pre_normalization_sums)) {
  const auto n = static_cast<Eigen::Index>(grid_.total_points());
  if (entries_.rows() != n || entries_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "grid kernel table does not match the grid size");
  }
  if (!(step_ > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "kernel step must be positive");
  }
}

GridKernel GridKernel::identity(const Grid& grid, double step) {
  const auto n = static_cast<Eigen::Index>(grid.total_points());
  return GridKernel(grid, step, Eigen::MatrixXcd::Identity(n, n),
                    Eigen::VectorXcd::Ones(n));
}

Eigen::VectorXcd GridKernel::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != entries_.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length does not match the grid kernel");
  }
  return (v.transpose() * entries_).transpose();
}

GridKernel gaussian_step_kernel(const Fields& fields, double step,
                                const Grid& grid) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::InvalidArgument, "step must be positive");
  }
  const auto n = static_cast<Eigen::Index>(grid.total_points());
  const int d = grid.dimension();
  const double extent = grid.extent();
  Eigen::MatrixXcd entries(n, n);
  Eigen::VectorXcd pre_sums(n);

  for (Eigen::Index row = 0; row < n; ++row) {
    const Eigen::VectorXd x = grid.coordinate(static_cast<std::size_t>(row));
    const Complex nu0 = fields.nu0(x);
    const Eigen::VectorXcd nu = fields.nu(x);
    const Eigen::MatrixXcd w = fields.weight(x);
    if (nu.size() != d || w.rows() != d || w.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  "field dimensions do not match the grid dimension");
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(w);
    if (!lu.isInvertible()) {
      throw Error(ErrorCode::SingularWeight,
                  "weight matrix is singular at row " + std::to_string(row));
    }
    const Complex det = lu.determinant();
    const Complex prefactor =
        grid.cell_volume() * std::exp(0.5 * std::log(det)) /
        std::pow(2.0 * kPi * step, 0.5 * d);

    // Periodic winding images: accumulate shells of images until they stop
    // contributing. A kernel whose images never die off is not localized on
    // this grid.
    for (Eigen::Index col = 0; col < n; ++col) {
      const Eigen::VectorXd z0 = grid.displacement(
          static_cast<std::size_t>(row), static_cast<std::size_t>(col));
      Complex acc{0.0, 0.0};
      double last_shell_mag = 0.0;
      int shell = 0;
      for (; shell <= kMaxWindingShell; ++shell) {
        std::vector<Eigen::VectorXi> images;
        winding_shell(d, shell, images);
        double shell_mag = 0.0;
        for (const auto& wv : images) {
          Eigen::VectorXd z = z0 + extent * wv.cast<double>();
          Eigen::VectorXcd u = (z / step).cast<Complex>() - nu;
          const Complex quad = u.transpose() * w * u;
          const Complex val =
              prefactor * std::exp(-step * (0.5 * quad + nu0));
          acc += val;
          shell_mag = std::max(shell_mag, std::abs(val));
        }
        last_shell_mag = shell_mag;
        if (shell > 0 && shell_mag < 1e-16 * (std::abs(acc) + 1e-300)) break;
      }
      if (shell > kMaxWindingShell && last_shell_mag > 1e-12) {
        throw Error(ErrorCode::GridTooCoarse,
                    "kernel is not localized on the grid (winding images do "
                    "not decay)");
      }
      entries(row, col) = acc;
    }

    const Complex sum = entries.row(row).sum();
    const Complex continuum = std::exp(-step * nu0);
    if (std::abs(sum - continuum) > 0.1 * std::abs(continuum)) {
      throw Error(ErrorCode::GridTooCoarse,
                  "row " + std::to_string(row) +
                      " sums to |" + std::to_string(std::abs(sum)) +
                      "| before normalization; expected within 10% of |" +
                      std::to_string(std::abs(continuum)) + "|");
    }
    pre_sums(row) = sum;
    entries.row(row) /= sum;
  }
  return GridKernel(grid, step, std::move(entries), std::move(pre_sums));
}

GridKernel compose(const GridKernel& k1, const GridKernel& k2) {
  if (k1.grid().dimension() != k2.grid().dimension() ||
      k1.grid().points_per_axis() != k2.grid().points_per_axis() ||
      k1.grid().spacing() != k2.grid().spacing()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot compose kernels over different grids");
  }
  Eigen::MatrixXcd product = k1.entries() * k2.entries();
  Eigen::VectorXcd sums = product.rowwise().sum();
  return GridKernel(k1.grid(), k1.step() + k2.step(), std::move(product),
                    std::move(sums));
}

GridKernel refine_and_compose(const Fields& fields, double step,
                              int refinement, const Grid& grid) {
  if (refinement < 1) {
    throw Error(ErrorCode::InvalidArgument, "refinement count must be >= 1");
  }
  const GridKernel sub =
      gaussian_step_kernel(fields, step / refinement, grid);
  GridKernel acc = sub;
  for (int i = 1; i < refinement; ++i) {
    acc = compose(acc, sub);
  }
  return acc;
}

MomentData extract_moments(const GridKernel& kernel, std::size_t at) {
  const Grid& grid = kernel.grid();
  if (at >= grid.total_points()) {
    throw Error(ErrorCode::InvalidArgument, "extraction point off the grid");
  }
  const int d = grid.dimension();
  const double tau = kernel.step();
  const auto row = kernel.entries().row(static_cast<Eigen::Index>(at));

  MomentData m;
  m.nu = Eigen::VectorXcd::Zero(d);
  m.nu2 = Eigen::MatrixXcd::Zero(d, d);
  Complex total{0.0, 0.0};
  for (Eigen::Index col = 0; col < row.size(); ++col) {
    const Complex mu = row(col);
    total += mu;
    const Eigen::VectorXd z =
        grid.displacement(at, static_cast<std::size_t>(col));
    for (int j = 0; j < d; ++j) {
      m.nu[j] += mu * z[j];
      for (int k = 0; k < d; ++k) {
        m.nu2(j, k) += mu * z[j] * z[k];
      }
    }
  }
  m.nu0 = (Complex{1.0, 0.0} - total) / tau;
  m.nu /= tau;
  m.nu2 /= tau;
  return m;
}

WeightDecomposition weight_matrix(const Eigen::MatrixXcd& nu2) {
  const auto d = nu2.rows();
  if (nu2.cols() != d || d < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "second-moment table must be square");
  }
  const double scale = nu2.cwiseAbs().maxCoeff();
  const double sym_dev = (nu2 - nu2.transpose()).cwiseAbs().maxCoeff();
  if (sym_dev > 1e-10 * std::max(1.0, scale)) {
    throw Error(ErrorCode::InvalidArgument,
                "second-moment table must be symmetric (asymmetry " +
                    std::to_string(sym_dev) + ")");
  }
  const Eigen::MatrixXcd a = 0.5 * (nu2 + nu2.transpose());

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMoments, "eigendecomposition failed");
  }
  Eigen::VectorXcd lambda = solver.eigenvalues();
  Eigen::MatrixXcd vecs = solver.eigenvectors();

  // Order by descending real part of the nu2 eigenvalue; deterministic
  // tie-break on the imaginary part.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (lambda(i).real() != lambda(j).real())
      return lambda(i).real() > lambda(j).real();
    return lambda(i).imag() > lambda(j).imag();
  });
  Eigen::VectorXcd lam(d);
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    lam(i) = lambda(order[static_cast<std::size_t>(i)]);
    m.col(i) = vecs.col(order[static_cast<std::size_t>(i)]);
  }

  // A complex symmetric matrix is diagonalized by a complex orthogonal M:
  // eigenvectors of distinct eigenvalues are automatically orthogonal under
  // the bilinear form u^T v; within a degenerate cluster we orthogonalize
  // explicitly. An isotropic eigenvector (v^T v = 0) has no orthogonal
  // normalization and the decomposition does not exist.
  const double group_tol = 1e-7 * std::max(1.0, scale);
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && std::abs(lam(end) - lam(start)) <= group_tol) ++end;
    for (Eigen::Index i = start; i < end; ++i) {
      for (Eigen::Index j = start; j < i; ++j) {
        const Complex proj = (m.col(j).transpose() * m.col(i))(0, 0);
        m.col(i) -= proj * m.col(j);  // col(j) already bilinear-normalized
      }
      const Complex b = (m.col(i).transpose() * m.col(i))(0, 0);
      if (std::abs(b) < 1e-8 * m.col(i).squaredNorm()) {
        throw Error(ErrorCode::SingularMoments,
                    "isotropic eigenvector: table is not orthogonally "
                    "diagonalizable");
      }
      m.col(i) /= std::sqrt(b);
    }
    start = end;
  }

  // Sign fix: make the largest-magnitude component of each column point into
  // the right half plane (the bilinear normalization leaves a +-1 freedom).
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index imax = 0;
    m.col(i).cwiseAbs().maxCoeff(&imax);
    const Complex c = m(imax, i);
    if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0)) {
      m.col(i) = -m.col(i);
    }
  }

  WeightDecomposition out;
  out.omega = Eigen::VectorXcd(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(lam(i)) < 1e-12 * std::max(1.0, scale)) {
      throw Error(ErrorCode::SingularMoments,
                  "second-moment table is singular");
    }
    out.omega(i) = Complex{1.0, 0.0} / lam(i);
  }
  out.diagonalizer = m;
  out.weight = m * out.omega.asDiagonal() * m.transpose();
  return out;
}

MomentData complete_moments(const GridKernel& kernel, std::size_t at) {
  MomentData m = extract_moments(kernel, at);
  WeightDecomposition w = weight_matrix(m.nu2);
  m.diagonalizer = std::move(w.diagonalizer);
  m.omega = std::move(w.omega);
  m.weight = std::move(w.weight);
  return m;
}

Complex lagrangian(const MomentData& m, const Eigen::VectorXcd& velocity) {
  if (velocity.size() != m.nu.size() || m.weight.size() == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "lagrangian needs complete moment data and a matching "
                "velocity vector");
  }
  const Eigen::VectorXcd u = velocity - m.nu;
  const Complex quad = (u.transpose() * m.weight * u)(0, 0);
  const Complex i{0.0, 1.0};
  return 0.5 * i * quad - i * m.nu0;
}

Eigen::VectorXcd sample_packet(const GaussianPacket& packet, const Grid& grid) {
  if (grid.dimension() != 1) {
    throw Error(ErrorCode::InvalidArgument, "packets are 1-D");
  }
  if (!(packet.sigma0 > 0.0)) {
    throw Error(ErrorCode::ParameterRange, "packet width must be positive");
  }
  const auto n = static_cast<Eigen::Index>(grid.total_points());
  Eigen::VectorXcd psi(n);
  const double norm0 = std::pow(2.0 * kPi * packet.sigma0 * packet.sigma0, -0.25);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.coordinate(static_cast<std::size_t>(i))[0];
    const double dx = x - packet.center;
    psi(i) = norm0 *
             std::exp(Complex{-dx * dx / (4.0 * packet.sigma0 * packet.sigma0),
                              packet.wavenumber * dx});
  }
  psi /= std::sqrt(psi.squaredNorm() * grid.cell_volume());
  return psi;
}

Eigen::VectorXcd analytic_free_evolution(const GaussianPacket& packet,
                                         const Grid& grid, double mass,
                                         double time) {
  if (grid.dimension() != 1) {
    throw Error(ErrorCode::InvalidArgument, "packets are 1-D");
  }
  const Complex w{0.0, mass};
  const double a0 = 2.0 * packet.sigma0 * packet.sigma0;
  const Complex q = time + w * a0;
  const Complex amp = std::pow(2.0 * kPi * packet.sigma0 * packet.sigma0, -0.25) *
                      std::sqrt(a0 / (a0 + time / w));
  const double k = packet.wavenumber;
  const auto n = static_cast<Eigen::Index>(grid.total_points());
  Eigen::VectorXcd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.coordinate(static_cast<std::size_t>(i))[0];
    const Complex dx{x - packet.center, 0.0};
    const Complex expo = -w * dx * dx / (2.0 * q) +
                         Complex{0.0, 1.0} * k * a0 * w * dx / q -
                         a0 * k * k * time / (2.0 * q);
    psi(i) = amp * std::exp(expo);
  }
  return psi;
}

Eigen::VectorXcd evolve_packet(const Fields& fields,
                               const GaussianPacket& packet, double total_time,
                               int steps, const Grid& grid) {
  if (steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "step count must be >= 1");
  }
  const GridKernel kernel =
      gaussian_step_kernel(fields, total_time / steps, grid);
  Eigen::VectorXcd v = sample_packet(packet, grid);
  for (int i = 0; i < steps; ++i) {
    v = kernel.apply(v);
  }
  return v;
}

double inner_l2_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                         const Grid& grid) {
  if (a.size() != b.size() ||
      a.size() != static_cast<Eigen::Index>(grid.total_points())) {
    throw Error(ErrorCode::DimensionMismatch,
                "grid functions must match the grid");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (grid.in_inner_half(static_cast<std::size_t>(i))) {
      acc += std::norm(a(i) - b(i));
    }
  }
  return std::sqrt(acc * grid.cell_volume());
}

namespace {

double boundary_weight_fraction(const Eigen::VectorXcd& psi, const Grid& grid) {
  double near = 0.0;
  double total = 0.0;
  const double margin = grid.extent() / 8.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const Eigen::VectorXd x = grid.coordinate(static_cast<std::size_t>(i));
    const double w = std::norm(psi(i));
    total += w;
    double dist_to_boundary = grid.extent();
    for (int axis = 0; axis < grid.dimension(); ++axis) {
      dist_to_boundary =
          std::min(dist_to_boundary, grid.extent() / 2.0 - std::abs(x[axis]));
    }
    if (dist_to_boundary <= margin) near += w;
  }
  return total > 0.0 ? near / total : 0.0;
}

}  // namespace

double schrodinger_residual(const GaussianPacket& packet, double mass,
                            double regulator, double total_time, int steps,
                            const Grid& grid) {
  const Eigen::VectorXcd initial = sample_packet(packet, grid);
  const Eigen::VectorXcd reference =
      analytic_free_evolution(packet, grid, mass, total_time);
  const double f0 = boundary_weight_fraction(initial, grid);
  const double f1 = boundary_weight_fraction(reference, grid);
  if (std::max(f0, f1) > 0.01) {
    throw Error(ErrorCode::BoundaryContamination,
                "packet weight near the boundary is " +
                    std::to_string(std::max(f0, f1) * 100.0) + "%");
  }
  if (total_time == 0.0) {
    return inner_l2_distance(initial, reference, grid);
  }
  const Fields fields =
      free_particle_fields(grid.dimension(), mass, regulator);
  const Eigen::VectorXcd evolved =
      evolve_packet(fields, packet, total_time, steps, grid);
  return inner_l2_distance(evolved, reference, grid);
}

}  // namespace cprob
