#include "cprob/scenario.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

namespace cprob {

namespace {

const Complex kSplitA{0.5, -0.5};  // (1 - i)/2
const Complex kSplitB{0.5, 0.5};   // (1 + i)/2

}  // namespace

KernelChain Scenario::chain() const {
  std::vector<Kernel> ordered;
  ordered.reserve(chain_order.size());
  for (const auto& name : chain_order) {
    ordered.push_back(kernel_named(name));
  }
  return KernelChain::make(space, std::move(ordered));
}

const Kernel& Scenario::kernel_named(const std::string& name) const {
  for (const auto& [kname, kernel] : kernels) {
    if (kname == name) return kernel;
  }
  throw Error(ErrorCode::UnknownLabel, "no kernel named '" + name + "'");
}

bool Scenario::operator==(const Scenario& other) const {
  if (space != other.space || chain_order != other.chain_order ||
      init_label != other.init_label || parameters != other.parameters) {
    return false;
  }
  if (init.size() != other.init.size() || init != other.init) return false;
  if (kernels.size() != other.kernels.size()) return false;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    if (kernels[i].first != other.kernels[i].first) return false;
    const auto& a = kernels[i].second;
    const auto& b = other.kernels[i].second;
    if (a.step() != b.step() || a.entries() != b.entries()) return false;
  }
  if (queries.size() != other.queries.size()) return false;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (queries[i].first != other.queries[i].first ||
        !(queries[i].second == other.queries[i].second)) {
      return false;
    }
  }
  return true;
}

ScenarioResult run(const Scenario& scenario) {
  const auto started = std::chrono::steady_clock::now();

  for (const auto& [name, kernel] : scenario.kernels) {
    const auto report = validate_kernel(kernel);
    if (!report.ok()) {
      const auto& issue = report.issues.front();
      throw Error(ErrorCode::RowSumViolation,
                  "kernel '" + name + "' row '" +
                      kernel.space().label(issue.row) + "' sums to " +
                      std::to_string(issue.sum.real()) + (issue.sum.imag() < 0 ? "" : "+") +
                      std::to_string(issue.sum.imag()) + "i");
    }
  }
  const KernelChain chain = scenario.chain();

  ScenarioResult result;
  result.scenario_name = scenario.name;
  result.parameters = scenario.parameters;
  for (const auto& [name, query] : scenario.queries) {
    result.queries.emplace_back(name, prob(scenario.init, query, chain));
  }

  if (scenario.init_label) {
    PathCaps caps;
    const bool enumerable = chain.size() <= caps.max_steps &&
                            scenario.space.dimension() <= caps.max_dimension;
    if (enumerable) {
      const Eigen::VectorXcd final_state = evolve(scenario.init, chain);
      for (std::size_t i = 0; i < scenario.space.dimension(); ++i) {
        const auto& label = scenario.space.label(i);
        const auto paths = enumerate_paths(chain, *scenario.init_label, label);
        std::size_t nonzero = 0;
        double incoherent = 0.0;
        Complex coherent{0.0, 0.0};
        for (const auto& p : paths) {
          if (std::abs(p.value) > 0.0) ++nonzero;
          incoherent += std::norm(p.value);
          coherent += p.value;
        }
        if (nonzero == 0 && std::norm(final_state(static_cast<Eigen::Index>(i))) == 0.0) {
          continue;  // unreachable endpoint
        }
        result.deficits.push_back(
            {label, incoherent - std::norm(coherent), nonzero});
      }
    }
  }

  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

Scenario build_mach_zehnder() {
  Scenario s;
  s.name = "mach_zehnder";
  s.space = StateSpace::make({"src", "m1", "m2", "d1", "d2"});
  const auto dim = static_cast<Eigen::Index>(s.space.dimension());

  Eigen::MatrixXcd s1 = Eigen::MatrixXcd::Identity(dim, dim);
  s1(0, 0) = 0.0;
  s1(0, 1) = kSplitA;  // src -> m1
  s1(0, 2) = kSplitB;  // src -> m2

  Eigen::MatrixXcd s2 = Eigen::MatrixXcd::Identity(dim, dim);
  s2(1, 1) = 0.0;
  s2(1, 3) = kSplitB;  // m1 -> d1
  s2(1, 4) = kSplitA;  // m1 -> d2
  s2(2, 2) = 0.0;
  s2(2, 3) = kSplitA;  // m2 -> d1
  s2(2, 4) = kSplitB;  // m2 -> d2

  s.kernels.emplace_back("S1", Kernel(s.space, 1.0, std::move(s1)));
  s.kernels.emplace_back("S2", Kernel(s.space, 1.0, std::move(s2)));
  s.chain_order = {"S1", "S2"};

  s.init_label = "src";
  s.init = Eigen::VectorXcd::Zero(dim);
  s.init(0) = 1.0;

  s.queries.emplace_back("d1", Proposition::make(s.space, {"d1"}));
  s.queries.emplace_back("d2", Proposition::make(s.space, {"d2"}));
  return s;
}

Scenario build_which_path(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::ParameterRange,
                "efficiency must lie in [0,1], got " + std::to_string(eta));
  }
  const Scenario mz = build_mach_zehnder();
  const StateSpace flag = StateSpace::make({"h", "n"});
  const Kernel flag_id = Kernel::identity(flag, 1.0);

  Scenario s;
  s.name = "which_path";
  s.parameters["eta"] = eta;

  const Kernel k1 = tensor(mz.kernel_named("S1"), flag_id);
  const Kernel k3 = tensor(mz.kernel_named("S2"), flag_id);
  s.space = k1.space();
  const auto dim = static_cast<Eigen::Index>(s.space.dimension());

  // Mirror step: spatially a wait, but the recording device pushes the flag.
  // At m1 the device reports "hit" with weight (1+eta)/2; at m2 the mirrored
  // row applies. A flag already set stays set; everywhere else nothing moves.
  Eigen::MatrixXcd mirror = Eigen::MatrixXcd::Identity(dim, dim);
  const auto row_m1n = static_cast<Eigen::Index>(s.space.index_of("m1.n"));
  const auto col_m1h = static_cast<Eigen::Index>(s.space.index_of("m1.h"));
  const auto row_m2n = static_cast<Eigen::Index>(s.space.index_of("m2.n"));
  const auto col_m2h = static_cast<Eigen::Index>(s.space.index_of("m2.h"));
  mirror(row_m1n, row_m1n) = (1.0 - eta) / 2.0;
  mirror(row_m1n, col_m1h) = (1.0 + eta) / 2.0;
  mirror(row_m2n, row_m2n) = (1.0 + eta) / 2.0;
  mirror(row_m2n, col_m2h) = (1.0 - eta) / 2.0;

  s.kernels.emplace_back("S1", k1);
  s.kernels.emplace_back("M", Kernel(s.space, 1.0, std::move(mirror)));
  s.kernels.emplace_back("S2", k3);
  s.chain_order = {"S1", "M", "S2"};

  s.init_label = "src.n";
  s.init = Eigen::VectorXcd::Zero(dim);
  s.init(static_cast<Eigen::Index>(s.space.index_of("src.n"))) = 1.0;

  s.queries.emplace_back("d1",
                         Proposition::make(s.space, {"d1.h", "d1.n"}));
  s.queries.emplace_back("d2",
                         Proposition::make(s.space, {"d2.h", "d2.n"}));
  return s;
}

Scenario build_two_slit(const TwoSlitConfig& config) {
  if (config.screen_points < 16) {
    throw Error(ErrorCode::ParameterRange,
                "a two-slit screen needs at least 16 points");
  }
  if (!(config.wavelength > 0.0) || !(config.distance > 0.0) ||
      !(config.separation > 0.0) || !(config.screen_spacing > 0.0)) {
    throw Error(ErrorCode::ParameterRange,
                "two-slit geometry parameters must be positive");
  }

  std::vector<std::string> labels = {"src", "s1", "s2"};
  std::vector<std::string> screen;
  screen.reserve(static_cast<std::size_t>(config.screen_points));
  for (int i = 0; i < config.screen_points; ++i) {
    std::string name = "x" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    screen.push_back(name);
    labels.push_back(std::move(name));
  }

  Scenario s;
  s.name = config.mode == SlitMode::BothOpen ? "two_slit" : "two_slit_blocked";
  s.space = StateSpace::make(labels);
  const auto dim = static_cast<Eigen::Index>(s.space.dimension());

  Eigen::MatrixXcd source = Eigen::MatrixXcd::Identity(dim, dim);
  source(0, 0) = 0.0;
  if (config.mode == SlitMode::BothOpen) {
    source(0, 1) = kSplitA;
    source(0, 2) = kSplitB;
  } else {
    source(0, 1) = 1.0;
    source(0, 2) = 0.0;
  }

  // Slit rows: unit-magnitude phases from the slit-to-screen-point distance,
  // normalized by the row's own sum so the row-sum law holds exactly.
  Eigen::MatrixXcd screen_kernel = Eigen::MatrixXcd::Identity(dim, dim);
  const double half_sep = config.separation / 2.0;
  for (int slit = 0; slit < 2; ++slit) {
    const double slit_y = slit == 0 ? half_sep : -half_sep;
    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < config.screen_points; ++i) {
      const double y =
          (i - (config.screen_points - 1) / 2.0) * config.screen_spacing;
      const double dist = std::hypot(config.distance, y - slit_y);
      const double phase =
          2.0 * std::numbers::pi * dist / config.wavelength;
      row(3 + i) = std::exp(Complex{0.0, phase});
    }
    const Complex sum = row.sum();
    if (std::abs(sum) < 1e-6) {
      throw Error(ErrorCode::DegenerateRow,
                  "slit row phases cancel (|sum| = " +
                      std::to_string(std::abs(sum)) +
                      "); geometry is pathological");
    }
    screen_kernel.row(1 + slit) = (row / sum).transpose();
  }

  s.kernels.emplace_back("source", Kernel(s.space, 1.0, std::move(source)));
  s.kernels.emplace_back("screen",
                         Kernel(s.space, 1.0, std::move(screen_kernel)));
  s.chain_order = {"source", "screen"};

  s.init_label = "src";
  s.init = Eigen::VectorXcd::Zero(dim);
  s.init(0) = 1.0;

  for (const auto& name : screen) {
    s.queries.emplace_back(name, Proposition::make(s.space, {name}));
  }
  s.queries.emplace_back("screen", Proposition::make(s.space, screen));

  s.parameters["wavelength"] = config.wavelength;
  s.parameters["separation"] = config.separation;
  s.parameters["distance"] = config.distance;
  s.parameters["screen_spacing"] = config.screen_spacing;
  return s;
}

Scenario build_named(const std::string& name,
                     const std::map<std::string, double>& parameters) {
  const auto require_known = [&](const std::set<std::string>& known) {
    for (const auto& [key, value] : parameters) {
      if (!known.count(key)) {
        throw Error(ErrorCode::UnknownParameter,
                    "scenario '" + name + "' has no parameter '" + key + "'");
      }
    }
  };
  const auto get = [&](const std::string& key, double fallback) {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
  };

  if (name == "mach_zehnder") {
    require_known({});
    return build_mach_zehnder();
  }
  if (name == "which_path") {
    require_known({"eta"});
    return build_which_path(get("eta", 1.0));
  }
  if (name == "two_slit") {
    require_known({"wavelength", "separation", "distance"});
    TwoSlitConfig config;
    config.wavelength = get("wavelength", config.wavelength);
    config.separation = get("separation", config.separation);
    config.distance = get("distance", config.distance);
    return build_two_slit(config);
  }
  throw Error(ErrorCode::UnknownLabel, "no built-in scenario named '" + name + "'");
}

}  // namespace cprob
