#include "dipoles/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "dipoles/errors.hpp"
#include "dipoles/greens.hpp"
#include "dipoles/overlap.hpp"

namespace dipoles {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

AtomArray GeometrySpec::build(double d_override) const {
  const double d = d_override > 0.0 ? d_override : spacing;
  switch (kind) {
    case LatticeKind::kSquare:
      return build_square_array(n_side, d);
    case LatticeKind::kLine:
      return build_line_array(count > 0 ? count : n_side, d);
    case LatticeKind::kCustom:
      return load_array_json(file);
  }
  throw std::invalid_argument("GeometrySpec: unknown kind");
}

namespace {

LatticeKind parse_kind(const std::string& s) {
  if (s == "square") return LatticeKind::kSquare;
  if (s == "line") return LatticeKind::kLine;
  if (s == "file" || s == "custom") return LatticeKind::kCustom;
  throw std::invalid_argument("config: unknown geometry kind '" + s + "'");
}

Method parse_method(const std::string& s) {
  if (s == "analytic") return Method::kAnalytic;
  if (s == "master") return Method::kMaster;
  if (s == "both") return Method::kBoth;
  throw std::invalid_argument("config: unknown method '" + s + "'");
}

Vec3 parse_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("config: expected [x, y, z]");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: parse error: " + std::string(e.what()));
  }

  RunConfig cfg;
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    if (g.contains("kind")) cfg.geometry.kind = parse_kind(g["kind"]);
    if (g.contains("n_side")) cfg.geometry.n_side = g["n_side"].get<int>();
    if (g.contains("count")) cfg.geometry.count = g["count"].get<int>();
    if (g.contains("spacing")) cfg.geometry.spacing = g["spacing"].get<double>();
    if (g.contains("file")) cfg.geometry.file = g["file"].get<std::string>();
  }
  if (j.contains("method")) cfg.method = parse_method(j["method"]);
  if (j.contains("omega0")) cfg.omega0 = j["omega0"].get<double>();
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (s.contains("d_list")) {
      cfg.sweep.d_list = s["d_list"].get<std::vector<double>>();
    }
    if (s.contains("mode_indices")) {
      cfg.sweep.mode_indices = s["mode_indices"].get<std::vector<int>>();
    }
    if (s.contains("phi_steps")) cfg.sweep.phi_steps = s["phi_steps"].get<int>();
    if (s.contains("a_min")) cfg.sweep.a_min = s["a_min"].get<double>();
    if (s.contains("a_max")) cfg.sweep.a_max = s["a_max"].get<double>();
    if (s.contains("a_steps")) cfg.sweep.a_steps = s["a_steps"].get<int>();
    if (s.contains("tau_grid")) {
      cfg.sweep.tau_grid = s["tau_grid"].get<std::vector<double>>();
    }
  }
  if (j.contains("integrator")) {
    const auto& s = j["integrator"];
    if (s.contains("dt")) cfg.integrator.dt = s["dt"].get<double>();
    if (s.contains("tol")) cfg.integrator.tol = s["tol"].get<double>();
    if (s.contains("max_time")) {
      cfg.integrator.max_time = s["max_time"].get<double>();
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
  }
  if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
  if (j.contains("master_atom_budget")) {
    cfg.master_atom_budget = j["master_atom_budget"].get<int>();
  }
  if (j.contains("drive")) {
    const auto& d = j["drive"];
    if (d.contains("kind")) cfg.drive_kind = d["kind"].get<std::string>();
    if (d.contains("alpha")) cfg.alpha = d["alpha"].get<int>();
    if (d.contains("alpha_tilde")) cfg.alpha_tilde = d["alpha_tilde"].get<int>();
    if (d.contains("A")) cfg.rel_amplitude = d["A"].get<double>();
    if (d.contains("phi")) cfg.rel_phase = d["phi"].get<double>();
    if (d.contains("k0")) cfg.k0 = parse_vec3(d["k0"]);
    if (d.contains("omega0")) cfg.omega0 = d["omega0"].get<double>();
  }
  if (j.contains("detector")) {
    const auto& d = j["detector"];
    if (d.contains("kind")) cfg.detector_kind = d["kind"].get<std::string>();
    if (d.contains("k")) cfg.k_det = parse_vec3(d["k"]);
  }

  if (cfg.method != Method::kAnalytic) {
    const int n = cfg.geometry.kind == LatticeKind::kSquare
                      ? cfg.geometry.n_side * cfg.geometry.n_side
                      : cfg.geometry.count;
    if (n > cfg.master_atom_budget) {
      throw std::invalid_argument(
          "config: master evolution requested for N = " + std::to_string(n) +
          " atoms, above the budget of " +
          std::to_string(cfg.master_atom_budget));
    }
  }
  return cfg;
}

std::string RunConfig::canonical_json() const {
  json j;
  j["geometry"]["kind"] = geometry.kind == LatticeKind::kSquare ? "square"
                          : geometry.kind == LatticeKind::kLine ? "line"
                                                                : "file";
  j["geometry"]["n_side"] = geometry.n_side;
  j["geometry"]["count"] = geometry.count;
  j["geometry"]["spacing"] = geometry.spacing;
  j["geometry"]["file"] = geometry.file;
  j["method"] = method == Method::kAnalytic ? "analytic"
                : method == Method::kMaster ? "master"
                                            : "both";
  j["omega0"] = omega0;
  j["sweep"]["d_list"] = sweep.d_list;
  j["sweep"]["mode_indices"] = sweep.mode_indices;
  j["sweep"]["phi_steps"] = sweep.phi_steps;
  j["sweep"]["a_min"] = sweep.a_min;
  j["sweep"]["a_max"] = sweep.a_max;
  j["sweep"]["a_steps"] = sweep.a_steps;
  j["sweep"]["tau_grid"] = sweep.tau_grid;
  j["integrator"]["dt"] = integrator.dt;
  j["integrator"]["tol"] = integrator.tol;
  j["integrator"]["max_time"] = integrator.max_time;
  j["drive"]["kind"] = drive_kind;
  j["drive"]["alpha"] = alpha;
  j["drive"]["alpha_tilde"] = alpha_tilde;
  j["drive"]["A"] = rel_amplitude;
  j["drive"]["phi"] = rel_phase;
  j["drive"]["k0"] = {k0.x(), k0.y(), k0.z()};
  j["detector"]["kind"] = detector_kind;
  j["detector"]["k"] = {k_det.x(), k_det.y(), k_det.z()};
  return j.dump();
}

std::string RunConfig::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json())));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Output helpers

std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows,
               const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "config," << header << '\n';
  for (const auto& r : rows) out << config_hash << ',' << r << '\n';
}

void write_manifest(const std::string& path, const RunConfig& config,
                    const std::string& dataset_name) {
  json j;
  j["dataset"] = dataset_name;
  j["config_hash"] = config.config_hash();
  j["config"] = json::parse(config.canonical_json());
  j["units"] = {{"length", "lambda"}, {"rate", "Gamma"}};
  j["uncorrelated_reference"] = 0.96;  // 1 - 1/N for the default 25 atoms
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << j.dump(2) << '\n';
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Shared pipeline pieces

namespace {

struct ModeContext {
  AtomArray array;
  PairCodec codec;
  GreensMatrices greens;
  SingleModeSet singles;
  DoubleModeSet doubles;

  static ModeContext build(const AtomArray& a) {
    PairCodec codec(a.size());
    GreensMatrices gm = GreensMatrices::build(a, codec);
    SingleModeSet s = make_single_modes(gm.G);
    DoubleModeSet d = a.size() >= 2
                          ? make_double_modes(gm.Gtilde, gm.G, codec)
                          : DoubleModeSet{};
    return ModeContext{a, std::move(codec), std::move(gm), std::move(s),
                       std::move(d)};
  }
};

// Guard-satisfying drive amplitude for an eigenmode drive.
double safe_omega0(const RunConfig& cfg, double gamma_mode) {
  return std::min(cfg.omega0, 0.01 * gamma_mode);
}

constexpr double kFig3RelaxTime = 25.0;  // 1/Gamma, from the analytic seed

}  // namespace

// ---------------------------------------------------------------------------
// Figure datasets

std::vector<Fig1Row> run_fig1(const RunConfig& config) {
  const auto& d_list = config.sweep.d_list;
  std::vector<std::vector<Fig1Row>> per_d(d_list.size());
  parallel_for(static_cast<int>(d_list.size()), config.jobs, [&](int k) {
    const ModeContext ctx = ModeContext::build(config.geometry.build(d_list[k]));
    per_d[k].reserve(ctx.doubles.count());
    for (int beta = 0; beta < ctx.doubles.count(); ++beta) {
      per_d[k].push_back(
          {d_list[k], ctx.doubles.gamma2(beta), ctx.doubles.zeta(beta)});
    }
  });
  std::vector<Fig1Row> rows;
  for (auto& block : per_d) {
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

Fig2Data run_fig2(const RunConfig& config) {
  Fig2Data out;
  out.d = config.geometry.spacing;
  const ModeContext ctx = ModeContext::build(config.geometry.build());
  const OverlapTables tables =
      OverlapTables::build(ctx.singles, ctx.doubles, ctx.codec);
  const int n = ctx.singles.count();
  const int m = ctx.doubles.count();

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < m; ++b) {
      out.x_rows.push_back({ctx.doubles.gamma2(b) - 2.0 * ctx.singles.gamma(a),
                            std::abs(tables.X(a, b)), a, a, b});
    }
  }
  for (int a1 = 0; a1 < n; ++a1) {
    for (int a2 = a1 + 1; a2 < n; ++a2) {
      const CVector q = pair_product_vector(a1, a2, ctx.singles, ctx.codec);
      const CVector l_all = (q.transpose() * ctx.doubles.W).transpose();
      for (int b = 0; b < m; ++b) {
        out.l_rows.push_back({ctx.doubles.gamma2(b) - ctx.singles.gamma(a1) -
                                  ctx.singles.gamma(a2),
                              std::abs(l_all(b)), a1, a2, b});
      }
    }
  }
  return out;
}

std::vector<Fig3Row> run_fig3(const RunConfig& config) {
  const auto& d_list = config.sweep.d_list;
  std::vector<std::vector<Fig3Row>> per_d(d_list.size());
  parallel_for(static_cast<int>(d_list.size()), config.jobs, [&](int k) {
    const ModeContext ctx = ModeContext::build(config.geometry.build(d_list[k]));
    const OverlapTables tables =
        OverlapTables::build(ctx.singles, ctx.doubles, ctx.codec);
    const Liouvillian lv(ctx.greens, ctx.codec);

    std::vector<int> alphas = config.sweep.mode_indices;
    if (alphas.empty()) {
      alphas.resize(ctx.singles.count());
      for (int a = 0; a < ctx.singles.count(); ++a) alphas[a] = a;
    }

    for (int alpha : alphas) {
      const double g2_same =
          g2_zero_single_mode(alpha, ctx.singles, ctx.doubles, tables.X);

      const double om0 = safe_omega0(config, ctx.singles.gamma(alpha));
      const DriveConfig drive = DriveConfig::eigenmode(
          ctx.singles, alpha, om0, ctx.singles.delta(alpha));
      const AnalyticSteadyState analytic =
          analytic_steady_state(drive, ctx.singles, ctx.doubles, ctx.codec);
      DensityMatrix state = analytic.to_density_matrix();
      if (config.method != Method::kAnalytic) {
        IntegratorOptions opts = config.integrator;
        if (opts.dt <= 0.0) opts.dt = 0.5 / lv.rate_bound();
        state = evolve(state, drive, lv, kFig3RelaxTime, opts);
      }
      const double g2_fs = g2_zero_freespace(state, lv);
      per_d[k].push_back(
          {d_list[k], ctx.singles.gamma(alpha), g2_same, g2_fs});
    }
  });
  std::vector<Fig3Row> rows;
  for (auto& block : per_d) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

Fig4Data run_fig4(const RunConfig& config) {
  const ModeContext ctx = ModeContext::build(config.geometry.build());
  const OverlapTables tables =
      OverlapTables::build(ctx.singles, ctx.doubles, ctx.codec);
  const int n = ctx.singles.count();
  const int alpha = config.alpha >= 0 ? config.alpha : n - 1;  // superradiant
  const int alpha_tilde =
      config.alpha_tilde >= 0 ? config.alpha_tilde : 0;  // subradiant

  Fig4Data out;
  out.g2_min = std::numeric_limits<double>::infinity();
  out.g2_max = 0.0;
  const int na = std::max(1, config.sweep.a_steps);
  const int nphi = std::max(1, config.sweep.phi_steps);
  std::vector<std::vector<Fig4PhiRow>> per_a(na);
  std::vector<Fig4EnvelopeRow> env(na);

  parallel_for(na, config.jobs, [&](int ia) {
    const double A =
        na == 1 ? config.sweep.a_min
                : config.sweep.a_min + (config.sweep.a_max - config.sweep.a_min) *
                                           ia / (na - 1);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    per_a[ia].reserve(nphi);
    for (int ip = 0; ip < nphi; ++ip) {
      const double phi = 2.0 * M_PI * ip / nphi;
      const double g2 = g2_zero_two_mode(alpha, alpha_tilde, A, phi,
                                         ctx.singles, ctx.doubles, tables.X,
                                         ctx.codec);
      per_a[ia].push_back({A, phi / M_PI, g2});
      lo = std::min(lo, g2);
      hi = std::max(hi, g2);
    }
    env[ia] = {A, lo, hi};
  });
  for (int ia = 0; ia < na; ++ia) {
    out.phi_rows.insert(out.phi_rows.end(), per_a[ia].begin(), per_a[ia].end());
    out.envelope_rows.push_back(env[ia]);
    out.g2_min = std::min(out.g2_min, env[ia].g2_min);
    out.g2_max = std::max(out.g2_max, env[ia].g2_max);
  }
  return out;
}

G2TauResult run_g2tau(const RunConfig& config) {
  const ModeContext ctx = ModeContext::build(config.geometry.build());
  const Liouvillian lv(ctx.greens, ctx.codec);

  const int alpha = config.alpha >= 0 ? config.alpha : 0;
  DriveConfig drive;
  if (config.drive_kind == "plane_wave") {
    drive = DriveConfig::plane_wave(ctx.array, config.omega0, config.k0, 0.0);
  } else if (config.drive_kind == "eigenmode") {
    drive = DriveConfig::eigenmode(
        ctx.singles, alpha, safe_omega0(config, ctx.singles.gamma(alpha)),
        ctx.singles.delta(alpha));
  } else if (config.drive_kind == "two_mode") {
    const int at = config.alpha_tilde >= 0 ? config.alpha_tilde : 0;
    drive = DriveConfig::two_mode(
        ctx.singles, alpha, at, config.rel_amplitude, config.rel_phase,
        safe_omega0(config, std::min(ctx.singles.gamma(alpha),
                                     ctx.singles.gamma(at))));
  } else {
    throw std::invalid_argument("config: unknown drive kind '" +
                                config.drive_kind + "'");
  }
  drive.check_low_intensity(ctx.singles);

  DetectionOperator det;
  if (config.detector_kind == "adjoint_mode") {
    det = DetectionOperator::adjoint_mode(ctx.singles, alpha);
  } else if (config.detector_kind == "mode") {
    det = DetectionOperator::mode(ctx.singles, alpha);
  } else if (config.detector_kind == "direction") {
    det = DetectionOperator::direction(ctx.array, config.k_det);
  } else {
    throw std::invalid_argument("config: unknown detector kind '" +
                                config.detector_kind + "'");
  }

  G2TauResult out;
  out.tau = config.sweep.tau_grid;
  if (out.tau.empty()) {
    out.tau.resize(101);
    const double tmax = 10.0 / std::max(ctx.singles.gamma(alpha), 1e-3);
    for (int i = 0; i <= 100; ++i) out.tau[i] = tmax * i / 100.0;
  }
  out.g2 = g2_tau(drive, lv, det, det, out.tau, config.integrator);
  return out;
}

}  // namespace dipoles
