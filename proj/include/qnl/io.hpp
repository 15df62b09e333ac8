#pragma once

// CSV and JSON serialization. Numbers carry 12 significant digits. CSV files
// start with '#' comment lines recording the command, its parameters and the
// seed, followed by a header row.

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnl/discrimination.hpp"
#include "qnl/purification.hpp"
#include "qnl/states.hpp"
#include "qnl/transform.hpp"

namespace qnl::io {

using json = nlohmann::ordered_json;

/// "%.12g", with negative zero printed as 0.
inline std::string fmt(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Rounds to 12 significant digits so JSON output matches the CSV precision.
inline double round12(double v) { return std::strtod(fmt(v).c_str(), nullptr); }

/// Ordered (key, value) pairs describing a run.
using RunInfo = std::vector<std::pair<std::string, std::string>>;

inline void write_csv_preamble(std::ostream& os, const RunInfo& info) {
  for (const auto& [k, v] : info) os << "# " << k << '=' << v << '\n';
}

inline json run_info_json(const RunInfo& info) {
  json j = json::object();
  for (const auto& [k, v] : info) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// DensityMatrix: {"dim": d, "re": [[...]], "im": [[...]]}

inline json to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      rr.push_back(round12(m(r, c).real()));
      ir.push_back(round12(m(r, c).imag()));
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline json to_json(const DensityMatrix& rho) { return to_json(rho.matrix()); }

/// Parses the DensityMatrix schema and validates the state.
inline DensityMatrix density_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != dim || im.size() != dim) throw DimensionError("density matrix JSON row count != dim");
  Matrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (re[r].size() != dim || im[r].size() != dim) throw DimensionError("density matrix JSON column count != dim");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = Complex{re[r][c].get<double>(), im[r][c].get<double>()};
  }
  return DensityMatrix(std::move(m));
}

inline json to_json(const BlochVector& p) { return json{{"x", round12(p.x)}, {"y", round12(p.y)}, {"z", round12(p.z)}}; }

// ---------------------------------------------------------------------------
// Transform

inline const char* kTransformHeader = "in_x,in_y,in_z,out_x,out_y,out_z,out_nx,out_ny,out_nz,p_success";

inline json to_json(const TransformResult& r) {
  return json{{"rho_out", to_json(r.rho_out)},
              {"success_probability", round12(r.success_probability)},
              {"factored", r.factored}};
}

inline void write_transform_csv(std::ostream& os, const RunInfo& info, const DensityMatrix& in,
                                const TransformResult& r) {
  write_csv_preamble(os, info);
  os << kTransformHeader << '\n';
  const auto a = bloch_from_density(in);
  const auto b = bloch_from_density(r.rho_out);
  const auto c = bloch_from_density(r.rho_out, BlochConvention::Normalized);
  os << fmt(a.x) << ',' << fmt(a.y) << ',' << fmt(a.z) << ',' << fmt(b.x) << ',' << fmt(b.y) << ',' << fmt(b.z)
     << ',' << fmt(c.x) << ',' << fmt(c.y) << ',' << fmt(c.z) << ',' << fmt(r.success_probability) << '\n';
}

// ---------------------------------------------------------------------------
// Sphere map

inline const char* kSphereHeader = "theta,phi,in_x,in_y,in_z,out_x,out_y,out_z,out_nx,out_ny,out_nz,p_success";

inline void write_sphere_csv(std::ostream& os, const RunInfo& info, const std::vector<SpherePoint>& points) {
  write_csv_preamble(os, info);
  os << kSphereHeader << '\n';
  for (const auto& p : points) {
    os << fmt(p.theta) << ',' << fmt(p.phi) << ',' << fmt(p.input.x) << ',' << fmt(p.input.y) << ','
       << fmt(p.input.z) << ',' << fmt(p.output.x) << ',' << fmt(p.output.y) << ',' << fmt(p.output.z) << ','
       << fmt(p.output_normalized.x) << ',' << fmt(p.output_normalized.y) << ',' << fmt(p.output_normalized.z)
       << ',' << fmt(p.success_probability) << '\n';
  }
}

inline json sphere_json(const std::vector<SpherePoint>& points) {
  json arr = json::array();
  for (const auto& p : points)
    arr.push_back(json{{"theta", round12(p.theta)},
                       {"phi", round12(p.phi)},
                       {"in", to_json(p.input)},
                       {"out", to_json(p.output)},
                       {"out_normalized", to_json(p.output_normalized)},
                       {"p_success", round12(p.success_probability)}});
  return arr;
}

// ---------------------------------------------------------------------------
// Discrimination sweeps

struct SweepRow {
  double theta;
  double overlap;
  TrialStats stats;
};

inline const char* kSweepHeader = "theta,overlap,method,analytic_success,empirical_success,n_trials,seed";

inline void write_sweep_csv(std::ostream& os, const RunInfo& info, const std::vector<SweepRow>& rows) {
  write_csv_preamble(os, info);
  os << kSweepHeader << '\n';
  for (const auto& r : rows)
    os << fmt(r.theta) << ',' << fmt(r.overlap) << ',' << to_string(r.stats.strategy) << ','
       << fmt(r.stats.analytic_success) << ',' << fmt(r.stats.empirical_success) << ',' << r.stats.n_trials << ','
       << r.stats.seed << '\n';
}

inline json to_json(const SweepRow& r) {
  json counts = json::object();
  for (const auto& [o, n] : r.stats.counts) counts[std::string(to_string(o))] = n;
  return json{{"theta", round12(r.theta)},
              {"overlap", round12(r.overlap)},
              {"method", to_string(r.stats.strategy)},
              {"analytic_success", round12(r.stats.analytic_success)},
              {"empirical_success", round12(r.stats.empirical_success)},
              {"n_trials", r.stats.n_trials},
              {"seed", r.stats.seed},
              {"generator", r.stats.generator},
              {"counts", std::move(counts)},
              {"n_wrong", r.stats.n_wrong}};
}

// ---------------------------------------------------------------------------
// POVM

inline json to_json(const Povm& povm) {
  json elements = json::array();
  for (const auto& e : povm.elements) {
    json j = json{{"label", to_string(e.label)}};
    j.update(to_json(e.op));
    elements.push_back(std::move(j));
  }
  return json{{"x", round12(povm.x)}, {"overlap", round12(povm.overlap)}, {"elements", std::move(elements)}};
}

inline const char* kPovmHeader = "label,row,col,re,im";

inline void write_povm_csv(std::ostream& os, const RunInfo& info, const Povm& povm) {
  write_csv_preamble(os, info);
  os << kPovmHeader << '\n';
  for (const auto& e : povm.elements)
    for (std::size_t r = 0; r < e.op.rows(); ++r)
      for (std::size_t c = 0; c < e.op.cols(); ++c)
        os << to_string(e.label) << ',' << r << ',' << c << ',' << fmt(e.op(r, c).real()) << ','
           << fmt(e.op(r, c).imag()) << '\n';
}

// ---------------------------------------------------------------------------
// Purification trajectory

inline const char* kTrajectoryHeader = "iteration,fidelity,yield,cumulative_yield,variant,f0";

inline void write_trajectory_csv(std::ostream& os, const RunInfo& info, const Trajectory& t) {
  write_csv_preamble(os, info);
  os << kTrajectoryHeader << '\n';
  for (const auto& s : t.steps)
    os << s.iteration << ',' << fmt(s.fidelity) << ',' << fmt(s.yield) << ',' << fmt(s.cumulative_yield) << ','
       << to_string(t.variant) << ',' << fmt(t.initial_fidelity) << '\n';
}

inline json to_json(const Trajectory& t) {
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back(json{{"iteration", s.iteration},
                         {"fidelity", round12(s.fidelity)},
                         {"yield", round12(s.yield)},
                         {"cumulative_yield", round12(s.cumulative_yield)},
                         {"variant", to_string(t.variant)},
                         {"f0", round12(t.initial_fidelity)}});
  return json{{"steps", std::move(steps)}, {"final_state", to_json(t.final_state)}};
}

}  // namespace qnl::io
