#pragma once

#include "fsgrowth/compatibility.hpp"
#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/fixed_point.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/presets.hpp"
#include "fsgrowth/sparse.hpp"
#include "fsgrowth/state.hpp"

#include <Eigen/Core>
#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace fsgrowth {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

struct InitialSpec {
  std::string preset = "small-data";
  double amplitude = -1.0;  // preset default when negative
  std::uint64_t seed = 1;
  std::vector<double> c0;  // inline cell values, row-major in (j, i); overrides the preset
};

struct OutputSpec {
  std::string dir = "out";
  int cadence = 1;  // write every cadence-th stored level
};

struct RunConfig {
  GeometryConfig geometry;
  PhysParams params;
  DriverConfig driver;
  double T_total = 0.1;
  InitialSpec initial;
  OutputSpec output;
  json raw;

  TwoPhaseDomain domain() const { return build_strip_domain(geometry); }
  InitialData initial_data(const TwoPhaseDomain& d) const;
};

namespace detail {

template <typename T>
inline void read_opt(const json& block, const char* section, const char* key, T& out) {
  if (!block.contains(key)) return;
  try {
    out = block.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(section) + "." + key + ": wrong type");
  }
}

inline void reject_unknown(const json& block, const char* section, std::initializer_list<const char*> keys) {
  for (auto it = block.begin(); it != block.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(std::string(section) + ": unknown field '" + it.key() + "'");
  }
}

inline const json& section(const json& root, const char* name) {
  static const json empty = json::object();
  if (!root.contains(name)) return empty;
  const json& s = root.at(name);
  if (!s.is_object()) throw ConfigError(std::string(name) + ": must be an object");
  return s;
}

}  // namespace detail

/// Parses and validates a run configuration; every failure is a ConfigError
/// naming the offending field.
inline RunConfig parse_run_config(const json& root) {
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  detail::reject_unknown(root, "config",
                         {"schema_version", "geometry", "params", "numerics", "initial_data", "output"});
  if (!root.contains("schema_version")) throw ConfigError("config: schema_version is required");
  if (!root.at("schema_version").is_number_integer() || root.at("schema_version").get<int>() != kSchemaVersion)
    throw ConfigError("config: schema_version must be " + std::to_string(kSchemaVersion));

  RunConfig c;
  c.raw = root;

  const json& g = detail::section(root, "geometry");
  detail::reject_unknown(g, "geometry", {"nx", "ny_f", "ny_s", "h_f", "h_s", "period"});
  detail::read_opt(g, "geometry", "nx", c.geometry.nx);
  detail::read_opt(g, "geometry", "ny_f", c.geometry.ny_f);
  detail::read_opt(g, "geometry", "ny_s", c.geometry.ny_s);
  detail::read_opt(g, "geometry", "h_f", c.geometry.h_f);
  detail::read_opt(g, "geometry", "h_s", c.geometry.h_s);
  detail::read_opt(g, "geometry", "period", c.geometry.period);
  (void)build_strip_domain(c.geometry);

  const json& p = detail::section(root, "params");
  detail::reject_unknown(p, "params",
                         {"rho_f", "rho_s", "nu_f", "nu_s", "mu_s", "D_f", "D_s", "zeta", "beta", "gamma", "n_dim"});
  detail::read_opt(p, "params", "rho_f", c.params.rho_f);
  detail::read_opt(p, "params", "rho_s", c.params.rho_s);
  detail::read_opt(p, "params", "nu_f", c.params.nu_f);
  detail::read_opt(p, "params", "nu_s", c.params.nu_s);
  detail::read_opt(p, "params", "mu_s", c.params.mu_s);
  detail::read_opt(p, "params", "D_f", c.params.D_f);
  detail::read_opt(p, "params", "D_s", c.params.D_s);
  detail::read_opt(p, "params", "zeta", c.params.zeta);
  detail::read_opt(p, "params", "beta", c.params.beta);
  detail::read_opt(p, "params", "gamma", c.params.gamma);
  detail::read_opt(p, "params", "n_dim", c.params.n_dim);
  c.params.validate();

  const json& n = detail::section(root, "numerics");
  detail::reject_unknown(n, "numerics",
                         {"dt", "window0", "T_total", "tol", "max_iter", "max_halvings", "q", "s", "g_form",
                          "quadrature", "M_q"});
  DriverConfig& d = c.driver;
  detail::read_opt(n, "numerics", "dt", d.dt);
  detail::read_opt(n, "numerics", "window0", d.window);
  c.T_total = d.window;
  detail::read_opt(n, "numerics", "T_total", c.T_total);
  detail::read_opt(n, "numerics", "tol", d.tol);
  detail::read_opt(n, "numerics", "max_iter", d.max_iter);
  detail::read_opt(n, "numerics", "max_halvings", d.max_halvings);
  detail::read_opt(n, "numerics", "q", d.norms.q);
  detail::read_opt(n, "numerics", "s", d.norms.s);
  detail::read_opt(n, "numerics", "M_q", d.M_q);
  d.norms.n_dim = c.params.n_dim;
  std::string gform = "pointwise", quadrature = "trapezoid";
  detail::read_opt(n, "numerics", "g_form", gform);
  detail::read_opt(n, "numerics", "quadrature", quadrature);
  if (gform == "pointwise") d.g_form = GForm::Pointwise;
  else if (gform == "conservative") d.g_form = GForm::Conservative;
  else throw ConfigError("numerics.g_form: expected 'pointwise' or 'conservative'");
  if (quadrature == "trapezoid") d.quadrature = TimeQuadrature::Trapezoid;
  else if (quadrature == "left") d.quadrature = TimeQuadrature::LeftEndpoint;
  else throw ConfigError("numerics.quadrature: expected 'trapezoid' or 'left'");
  d.validate();
  d.norms.validate_extension();
  if (!(c.T_total >= d.window - 1e-12)) throw ConfigError("numerics.T_total: must be at least window0");

  const json& i = detail::section(root, "initial_data");
  detail::reject_unknown(i, "initial_data", {"preset", "amplitude", "seed", "c0"});
  detail::read_opt(i, "initial_data", "preset", c.initial.preset);
  detail::read_opt(i, "initial_data", "amplitude", c.initial.amplitude);
  detail::read_opt(i, "initial_data", "seed", c.initial.seed);
  detail::read_opt(i, "initial_data", "c0", c.initial.c0);
  bool known = false;
  for (const auto& name : preset_names()) known = known || name == c.initial.preset;
  if (!known) throw ConfigError("initial_data.preset: unknown preset '" + c.initial.preset + "'");
  if (!c.initial.c0.empty() &&
      static_cast<int>(c.initial.c0.size()) != c.geometry.nx * (c.geometry.ny_f + c.geometry.ny_s))
    throw ConfigError("initial_data.c0: expected nx * (ny_f + ny_s) values");

  const json& o = detail::section(root, "output");
  detail::reject_unknown(o, "output", {"dir", "cadence"});
  detail::read_opt(o, "output", "dir", c.output.dir);
  detail::read_opt(o, "output", "cadence", c.output.cadence);
  if (c.output.cadence < 1) throw ConfigError("output.cadence: must be at least 1");
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_run_config(root);
}

inline InitialData RunConfig::initial_data(const TwoPhaseDomain& d) const {
  if (initial.c0.empty()) return preset_initial_data(d, initial.preset, initial.amplitude, initial.seed);
  InitialData w(d);
  w.c0.for_each([&](int i, int j, double& v) { v = initial.c0[static_cast<std::size_t>(j) * d.nx + i]; });
  return w;
}

// ---------------------------------------------------------------------------
// Reproducibility

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

/// Hash of the canonical (key-sorted, compact) serialization.
inline std::string config_hash(const json& j) { return hex64(fnv1a(j.dump())); }

inline std::string compiler_id() {
#if defined(__clang__)
  return std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  return std::string("gcc ") + __VERSION__;
#else
  return "unknown";
#endif
}

inline json versions_json() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return {{"fsgrowth", kVersion},
          {"eigen", eigen.str()},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", compiler_id()},
          {"schema_version", kSchemaVersion}};
}

// ---------------------------------------------------------------------------
// Serialization

inline json to_json(const IterationReport& r) {
  return {{"window", {r.t_a, r.t_b}},
          {"iterates", r.iterates},
          {"halvings", r.halvings},
          {"residual_history", r.residual_history},
          {"contraction_estimate", r.contraction_estimate},
          {"accepted", r.accepted},
          {"monotone", r.monotone},
          {"message", r.message}};
}

inline json to_json(const CompatibilityReport& r) {
  json items = json::array();
  for (const auto& i : r.items) items.push_back({{"name", i.name}, {"residual", i.residual}, {"pass", i.pass}});
  return {{"tolerance", r.tolerance}, {"pass", r.pass()}, {"items", items}};
}

inline json to_json(const NonnegativityReport& r) {
  return {{"tolerance", r.tolerance}, {"pass", r.pass()}, {"min_per_level", r.min_per_level}, {"flagged", r.flagged}};
}

inline json grid_json(const TwoPhaseDomain& d) {
  return {{"nx", d.nx}, {"ny_f", d.ny_f}, {"ny_s", d.ny_s}, {"h_f", d.h_f},
          {"h_s", d.h_s}, {"period", d.period}, {"dx", d.dx}, {"dy", d.dy}};
}

namespace detail {

inline void write_field(std::ostream& os, double t, const TwoPhaseDomain& d, const ScalarField& f,
                        const char* name) {
  f.for_each([&](int i, int j, const double& v) {
    double x = 0.0, y = 0.0;
    switch (f.staggering()) {
      case Staggering::Cell: x = d.x_center(i); y = d.y_center(j); break;
      case Staggering::XFace: x = d.x_face(i); y = d.y_center(j); break;
      case Staggering::YFace: x = d.x_center(i); y = d.y_face(j); break;
      case Staggering::Node: x = d.x_face(i); y = d.y_face(j); break;
    }
    os << t << ',' << x << ',' << y << ',' << name << ',' << v << '\n';
  });
}

}  // namespace detail

/// Long-format trajectory CSV: t,x,y,field,value. The first line carries the
/// config hash as a comment.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const TwoPhaseDomain& d,
                                 const std::string& hash, int cadence = 1) {
  os << "# config_hash=" << hash << '\n';
  os << "t,x,y,field,value\n";
  os << std::setprecision(17);
  for (std::size_t m = 0; m < tr.levels.size(); ++m) {
    if (m % cadence != 0 && m + 1 != tr.levels.size()) continue;
    const LevelState& s = tr.levels[m];
    const double t = tr.t[m];
    detail::write_field(os, t, d, s.v.ux, "ux");
    detail::write_field(os, t, d, s.v.uy, "uy");
    for (int i = 0; i < d.nx; ++i) os << t << ',' << d.x_face(i) << ',' << d.h_f << ",ux_gamma," << s.v.ux_gamma[i] << '\n';
    detail::write_field(os, t, d, s.pi, "pi");
    detail::write_field(os, t, d, s.c, "c");
    detail::write_field(os, t, d, s.cstar, "cstar");
    detail::write_field(os, t, d, s.g, "g");
  }
}

/// MatrixMarket coordinate format.
inline void write_matrix_market(std::ostream& os, const SpMat& A, const std::string& comment) {
  os << "%%MatrixMarket matrix coordinate real general\n% " << comment << '\n';
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n' << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

inline void write_json_file(const std::filesystem::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw ConfigError("output: cannot write " + p.string());
  out << j.dump(2) << '\n';
}

}  // namespace fsgrowth
