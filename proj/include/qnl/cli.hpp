#pragma once

// Command-line front end. `run` is the whole program; tools/qnl.cpp only
// forwards argv and the standard streams.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnl/discrimination.hpp"
#include "qnl/io.hpp"
#include "qnl/purification.hpp"
#include "qnl/transform.hpp"

namespace qnl::cli {

/// Environment variable supplying the default seed when --seed is absent.
inline constexpr const char* kSeedEnv = "QNL_SEED";

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  Format format = Format::Csv;
  std::string out;  // empty: stdout
  std::uint64_t seed = 0;
  bool degrees = false;

  std::optional<double> theta;
  double phi = 0.0;
  std::string rho_file;
  std::string method = "all";
  std::uint64_t trials = 100000;
  std::optional<double> f0;
  int iterations = 15;
  std::string variant = "minus-only";
  std::string gate = "xor";
  int n_theta = 32;
  int n_phi = 64;
  std::optional<double> alpha;
};

namespace detail {

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(kSeedEnv) + " is not an unsigned 64-bit integer");
  }
  return 0;
}

inline double to_radians(double v, bool degrees) { return degrees ? v * std::numbers::pi / 180.0 : v; }

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

inline io::RunInfo base_info(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"format", cfg.format == Format::Csv ? "csv" : "json"}};
}

inline io::json json_envelope(const io::RunInfo& info, const RunConfig& cfg, io::json result) {
  io::json j = io::json::object();
  j["command"] = cfg.command;
  io::json params = io::run_info_json(info);
  params.erase("command");
  params.erase("seed");
  j["parameters"] = std::move(params);
  j["seed"] = cfg.seed;
  j["result"] = std::move(result);
  return j;
}

inline std::string run_transform(RunConfig& cfg) {
  auto info = base_info(cfg);
  std::optional<DensityMatrix> rho;
  if (!cfg.rho_file.empty()) {
    require(!cfg.theta.has_value(), "transform: use either --theta/--phi or --rho, not both");
    std::ifstream in(cfg.rho_file);
    if (!in) throw IoError("cannot read " + cfg.rho_file);
    nlohmann::json j;
    try {
      in >> j;
      rho = io::density_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("invalid density matrix JSON in " + cfg.rho_file + ": " + e.what());
    } catch (const qnl::Error& e) {
      throw UsageError("invalid density matrix in " + cfg.rho_file + ": " + e.what());
    }
    require(rho->dim() == 2, "transform: --rho must hold a 2x2 density matrix");
    info.emplace_back("rho", cfg.rho_file);
  } else {
    require(cfg.theta.has_value(), "transform: --theta (or --rho) is required");
    const double theta = to_radians(*cfg.theta, cfg.degrees);
    const double phi = to_radians(cfg.phi, cfg.degrees);
    require(theta >= 0.0 && theta <= std::numbers::pi, "transform: --theta must lie in [0, pi]");
    require(std::isfinite(phi), "transform: --phi must be finite");
    rho = spin_state(theta, phi).density();
    info.emplace_back("theta", io::fmt(theta));
    info.emplace_back("phi", io::fmt(phi));
  }
  info.emplace_back("seed", std::to_string(cfg.seed));

  const auto result = square_elements(*rho);
  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    io::write_transform_csv(os, info, *rho, result);
  } else {
    io::json r = io::to_json(result);
    r["rho_in"] = io::to_json(*rho);
    os << json_envelope(info, cfg, std::move(r)).dump(2) << '\n';
  }
  return os.str();
}

inline std::string run_discriminate(RunConfig& cfg) {
  require(cfg.theta.has_value(), "discriminate: --theta is required");
  const double theta = to_radians(*cfg.theta, cfg.degrees);
  const double phi = to_radians(cfg.phi, cfg.degrees);
  require(theta > 0.0 && theta < std::numbers::pi, "discriminate: --theta must lie in (0, pi)");
  require(std::isfinite(phi), "discriminate: --phi must be finite");
  require(cfg.trials >= 1, "discriminate: --trials must be >= 1");

  std::vector<Strategy> strategies;
  if (cfg.method == "all") strategies.assign(kStrategies.begin(), kStrategies.end());
  else strategies.push_back(strategy_from_string(cfg.method));

  auto info = base_info(cfg);
  info.emplace_back("theta", io::fmt(theta));
  info.emplace_back("phi", io::fmt(phi));
  info.emplace_back("method", cfg.method);
  info.emplace_back("trials", std::to_string(cfg.trials));
  info.emplace_back("seed", std::to_string(cfg.seed));
  info.emplace_back("generator", std::string(SplitMix64::kName));

  const auto pair = build_pair(theta, phi);
  const double s = overlap(pair.psi1, pair.psi2);
  std::vector<io::SweepRow> rows;
  for (auto strategy : strategies) rows.push_back({theta, s, simulate_trials(strategy, pair, cfg.trials, cfg.seed)});

  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    io::write_sweep_csv(os, info, rows);
  } else {
    io::json arr = io::json::array();
    for (const auto& r : rows) arr.push_back(io::to_json(r));
    os << json_envelope(info, cfg, std::move(arr)).dump(2) << '\n';
  }
  return os.str();
}

inline std::string run_purify(RunConfig& cfg) {
  require(cfg.f0.has_value(), "purify: --f0 is required");
  require(*cfg.f0 >= 0.0 && *cfg.f0 <= 1.0, "purify: --f0 must lie in [0, 1]");
  require(cfg.iterations >= 1, "purify: --iterations must be >= 1");
  const auto variant = cfg.variant == "both" ? PurifyVariant::Both : PurifyVariant::MinusOnly;

  auto info = base_info(cfg);
  info.emplace_back("f0", io::fmt(*cfg.f0));
  info.emplace_back("iterations", std::to_string(cfg.iterations));
  info.emplace_back("variant", cfg.variant);
  info.emplace_back("initial_state", "werner");
  info.emplace_back("seed", std::to_string(cfg.seed));

  const auto t = iterate(*cfg.f0, cfg.iterations, variant);
  std::ostringstream os;
  if (cfg.format == Format::Csv) io::write_trajectory_csv(os, info, t);
  else os << json_envelope(info, cfg, io::to_json(t)).dump(2) << '\n';
  return os.str();
}

inline std::string run_sphere(RunConfig& cfg) {
  require(cfg.n_theta >= 2 && cfg.n_phi >= 2, "sphere: grid counts must be >= 2");
  const auto gate = cfg.gate == "exp-zx" ? exp_zx_gate() : xor_gate();

  auto info = base_info(cfg);
  info.emplace_back("gate", cfg.gate);
  info.emplace_back("n_theta", std::to_string(cfg.n_theta));
  info.emplace_back("n_phi", std::to_string(cfg.n_phi));
  info.emplace_back("seed", std::to_string(cfg.seed));

  const auto points = sphere_map(gate, cfg.n_theta, cfg.n_phi);
  std::ostringstream os;
  if (cfg.format == Format::Csv) io::write_sphere_csv(os, info, points);
  else os << json_envelope(info, cfg, io::sphere_json(points)).dump(2) << '\n';
  return os.str();
}

inline std::string run_povm(RunConfig& cfg) {
  require(cfg.alpha.has_value(), "povm: --alpha is required");
  const double alpha = to_radians(*cfg.alpha, cfg.degrees);
  require(alpha > 0.0 && alpha < std::numbers::pi / 2, "povm: --alpha must lie in (0, pi/2)");

  auto info = base_info(cfg);
  info.emplace_back("alpha", io::fmt(alpha));
  info.emplace_back("seed", std::to_string(cfg.seed));

  const auto povm = optimal_povm_for_alpha(alpha);
  std::ostringstream os;
  if (cfg.format == Format::Csv) io::write_povm_csv(os, info, povm);
  else os << json_envelope(info, cfg, io::to_json(povm)).dump(2) << '\n';
  return os.str();
}

inline void add_common(CLI::App* sub, RunConfig& cfg, std::optional<std::uint64_t>& seed, std::string& format) {
  sub->add_option("--format", format, "Output format {csv|json} (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out, "Output path (default stdout)");
  sub->add_option("--seed", seed, std::string("Seed, unsigned 64-bit (default $") + kSeedEnv + " or 0)");
  sub->add_flag("--degrees", cfg.degrees, "Read angles in degrees (echoed in radians)");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";

  CLI::App app{"Nonlinear two-copy spin transformations: transform, discrimination, purification, sphere maps"};
  app.require_subcommand(1);

  auto* transform = app.add_subcommand("transform", "Square the elements of a spin-1/2 density matrix");
  transform->add_option("--theta", cfg.theta, "Polar angle of the pure input, [0, pi]");
  transform->add_option("--phi", cfg.phi, "Azimuth of the pure input (default 0)");
  transform->add_option("--rho", cfg.rho_file, "DensityMatrix JSON file (2x2), instead of --theta/--phi");

  auto* discriminate = app.add_subcommand("discriminate", "Monte Carlo unambiguous discrimination");
  discriminate->add_option("--theta", cfg.theta, "Polar angle of state 1, (0, pi)");
  discriminate->add_option("--phi", cfg.phi, "Azimuth of state 1 (default 0)");
  discriminate->add_option("--method", cfg.method, "{nonlinear|lige2|lige-product|povm|all} (default all)")
      ->check(CLI::IsMember({"nonlinear", "lige2", "lige-product", "povm", "all"}));
  discriminate->add_option("--trials", cfg.trials, "Number of trials, >= 1 (default 100000)")
      ->check(CLI::PositiveNumber);

  auto* purify = app.add_subcommand("purify", "Purification trajectory from a Werner state");
  purify->add_option("--f0", cfg.f0, "Initial singlet fidelity, [0, 1]")->check(CLI::Range(0.0, 1.0));
  purify->add_option("--iterations", cfg.iterations, "Number of rounds, >= 1 (default 15)")
      ->check(CLI::PositiveNumber);
  purify->add_option("--variant", cfg.variant, "{minus-only|both} (default minus-only)")
      ->check(CLI::IsMember({"minus-only", "both"}));

  auto* sphere = app.add_subcommand("sphere", "Image of the Bloch sphere under a two-copy gate");
  sphere->add_option("--gate", cfg.gate, "{xor|exp-zx} (default xor)")->check(CLI::IsMember({"xor", "exp-zx"}));
  sphere->add_option("--n-theta", cfg.n_theta, "Polar grid points, >= 2 (default 32)")->check(CLI::Range(2, 1 << 16));
  sphere->add_option("--n-phi", cfg.n_phi, "Azimuthal grid points, >= 2 (default 64)")->check(CLI::Range(2, 1 << 16));

  auto* povm = app.add_subcommand("povm", "Optimal unambiguous POVM for cos(a/2)|+> +- sin(a/2)|->");
  povm->add_option("--alpha", cfg.alpha, "Half-angle with overlap cos(alpha), (0, pi/2)");

  for (auto* sub : {transform, discriminate, purify, sphere, povm}) detail::add_common(sub, cfg, seed, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  std::string text;
  try {
    cfg.seed = seed ? *seed : detail::default_seed();
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

    if (cfg.command == "transform") text = detail::run_transform(cfg);
    else if (cfg.command == "discriminate") text = detail::run_discriminate(cfg);
    else if (cfg.command == "purify") text = detail::run_purify(cfg);
    else if (cfg.command == "sphere") text = detail::run_sphere(cfg);
    else text = detail::run_povm(cfg);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qnl::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (cfg.out.empty()) {
    out << text;
    out.flush();
    return out ? kExitOk : kExitIo;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << cfg.out << " for writing\n";
    return kExitIo;
  }
  file << text;
  file.close();
  if (!file) {
    err << "error: failed writing " << cfg.out << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace qnl::cli
