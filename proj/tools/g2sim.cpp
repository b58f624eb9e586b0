// g2sim: photon-statistics datasets for collectively interacting dipole
// arrays. Subcommands reproduce the standard sweep datasets (fig1..fig4),
// g2(tau) traces, and mode/overlap exports, all as CSV plus a JSON manifest.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dipoles/analytic.hpp"
#include "dipoles/errors.hpp"
#include "dipoles/experiments.hpp"
#include "dipoles/greens.hpp"
#include "dipoles/master.hpp"
#include "dipoles/modes.hpp"
#include "dipoles/overlap.hpp"

namespace fs = std::filesystem;
using namespace dipoles;

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config_file;
  std::string out_dir = ".";
  std::string method = "";
  int jobs = 0;
};

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_file.empty()) {
    cfg = RunConfig::from_json_file(args.config_file);
  }
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  if (!args.method.empty()) {
    if (args.method == "analytic") cfg.method = Method::kAnalytic;
    else if (args.method == "master") cfg.method = Method::kMaster;
    else if (args.method == "both") cfg.method = Method::kBoth;
    else throw std::invalid_argument("unknown --method " + args.method);
  }
  fs::create_directories(cfg.out_dir);
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file, "JSON run configuration");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--method", args.method, "analytic|master|both");
  cmd->add_option("--jobs", args.jobs, "worker threads for sweeps");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void run_fig1_cmd(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const auto rows = run_fig1(cfg);
  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (const auto& r : rows) {
    lines.push_back(format_value(r.d) + ',' + format_value(r.gamma_beta) +
                    ',' + format_value(r.zeta_beta));
  }
  write_csv(join_path(cfg.out_dir, "fig1.csv"), "d,gamma_beta,zeta_beta",
            lines, cfg.config_hash());
  write_manifest(join_path(cfg.out_dir, "fig1.json"), cfg, "fig1");
  std::cout << "fig1: " << rows.size() << " rows -> " << cfg.out_dir << '\n';
}

void run_fig2_cmd(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const auto data = run_fig2(cfg);
  const std::string hash = cfg.config_hash();
  std::vector<std::string> xlines, llines;
  for (const auto& r : data.x_rows) {
    xlines.push_back(format_value(r.mismatch) + ',' +
                     format_value(r.magnitude) + ',' + std::to_string(r.alpha1) +
                     ',' + std::to_string(r.beta));
  }
  for (const auto& r : data.l_rows) {
    llines.push_back(format_value(r.mismatch) + ',' +
                     format_value(r.magnitude) + ',' + std::to_string(r.alpha1) +
                     ',' + std::to_string(r.alpha2) + ',' +
                     std::to_string(r.beta));
  }
  write_csv(join_path(cfg.out_dir, "fig2_x.csv"),
            "mismatch,abs_x,alpha,beta", xlines, hash);
  write_csv(join_path(cfg.out_dir, "fig2_l.csv"),
            "mismatch,abs_l,alpha1,alpha2,beta", llines, hash);
  write_manifest(join_path(cfg.out_dir, "fig2.json"), cfg, "fig2");
  std::cout << "fig2: " << xlines.size() << " X rows, " << llines.size()
            << " L rows -> " << cfg.out_dir << '\n';
}

void run_fig3_cmd(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const auto rows = run_fig3(cfg);
  std::vector<std::string> lines;
  for (const auto& r : rows) {
    lines.push_back(format_value(r.d) + ',' + format_value(r.gamma_alpha) +
                    ',' + format_value(r.g2_same_mode) + ',' +
                    format_value(r.g2_free_space));
  }
  write_csv(join_path(cfg.out_dir, "fig3.csv"),
            "d,gamma_alpha,g2_same_mode,g2_free_space", lines,
            cfg.config_hash());
  write_manifest(join_path(cfg.out_dir, "fig3.json"), cfg, "fig3");
  std::cout << "fig3: " << rows.size() << " rows -> " << cfg.out_dir << '\n';
}

void run_fig4_cmd(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const auto data = run_fig4(cfg);
  const std::string hash = cfg.config_hash();
  std::vector<std::string> plines, elines;
  for (const auto& r : data.phi_rows) {
    plines.push_back(format_value(r.rel_amplitude) + ',' +
                     format_value(r.phi_over_pi) + ',' +
                     format_value(r.g2_zero));
  }
  for (const auto& r : data.envelope_rows) {
    elines.push_back(format_value(r.rel_amplitude) + ',' +
                     format_value(r.g2_min) + ',' + format_value(r.g2_max));
  }
  write_csv(join_path(cfg.out_dir, "fig4_phi.csv"), "A,phi_over_pi,g2_zero",
            plines, hash);
  write_csv(join_path(cfg.out_dir, "fig4_envelope.csv"), "A,g2_min,g2_max",
            elines, hash);
  write_manifest(join_path(cfg.out_dir, "fig4.json"), cfg, "fig4");
  std::cout << "fig4: g2(0) range [" << data.g2_min << ", " << data.g2_max
            << "] -> " << cfg.out_dir << '\n';
}

void run_g2tau_cmd(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const auto result = run_g2tau(cfg);
  std::vector<std::string> lines;
  for (size_t i = 0; i < result.tau.size(); ++i) {
    lines.push_back(format_value(result.tau[i]) + ',' +
                    format_value(result.g2[i]));
  }
  write_csv(join_path(cfg.out_dir, "g2tau.csv"), "tau_in_inverse_Gamma,g2",
            lines, cfg.config_hash());
  write_manifest(join_path(cfg.out_dir, "g2tau.json"), cfg, "g2tau");
  std::cout << "g2tau: " << lines.size() << " samples -> " << cfg.out_dir
            << '\n';
}

void run_modes_cmd(const CommonArgs& args, bool amplitudes) {
  RunConfig cfg = load_config(args);
  const AtomArray array = cfg.geometry.build();
  const PairCodec codec(array.size());
  const GreensMatrices gm = GreensMatrices::build(array, codec);
  const SingleModeSet singles = make_single_modes(gm.G);
  export_modes_csv(singles, join_path(cfg.out_dir, "modes_single.csv"),
                   amplitudes);
  if (array.size() >= 2) {
    const DoubleModeSet doubles = make_double_modes(gm.Gtilde, gm.G, codec);
    export_modes_csv(doubles, join_path(cfg.out_dir, "modes_double.csv"),
                     amplitudes);
  }
  write_manifest(join_path(cfg.out_dir, "modes.json"), cfg, "modes");
  std::cout << "modes: N = " << array.size() << " -> " << cfg.out_dir << '\n';
}

void run_overlaps_cmd(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const AtomArray array = cfg.geometry.build();
  if (array.size() < 2) {
    throw std::invalid_argument("overlaps: need at least two atoms");
  }
  const PairCodec codec(array.size());
  const GreensMatrices gm = GreensMatrices::build(array, codec);
  const SingleModeSet singles = make_single_modes(gm.G);
  const DoubleModeSet doubles = make_double_modes(gm.Gtilde, gm.G, codec);
  const OverlapTables tables = OverlapTables::build(singles, doubles, codec);
  std::vector<std::string> lines;
  for (int a = 0; a < singles.count(); ++a) {
    for (int b = 0; b < doubles.count(); ++b) {
      lines.push_back(std::to_string(a) + ',' + std::to_string(b) + ',' +
                      format_value(singles.gamma(a)) + ',' +
                      format_value(doubles.gamma2(b)) + ',' +
                      format_value(tables.X(a, b).real()) + ',' +
                      format_value(tables.X(a, b).imag()));
    }
  }
  write_csv(join_path(cfg.out_dir, "overlaps_x.csv"),
            "alpha,beta,gamma_alpha,gamma2_beta,re_x,im_x", lines,
            cfg.config_hash());
  write_manifest(join_path(cfg.out_dir, "overlaps.json"), cfg, "overlaps");
  std::cout << "overlaps: " << lines.size() << " rows -> " << cfg.out_dir
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon statistics of weakly driven dipole arrays"};
  app.require_subcommand(1);

  CommonArgs args;
  bool amplitudes = false;

  auto* fig1 = app.add_subcommand("fig1", "zeta vs gamma for double modes");
  auto* fig2 = app.add_subcommand("fig2", "X/L overlaps vs rate mismatch");
  auto* fig3 = app.add_subcommand("fig3", "g2(0) vs mode decay rate");
  auto* fig4 = app.add_subcommand("fig4", "two-mode interference g2(0)");
  auto* g2tau = app.add_subcommand("g2tau", "g2(tau) trace (master path)");
  auto* modes = app.add_subcommand("modes", "export eigenmode tables");
  auto* overlaps = app.add_subcommand("overlaps", "export the X table");
  for (auto* cmd : {fig1, fig2, fig3, fig4, g2tau, modes, overlaps}) {
    add_common(cmd, args);
  }
  modes->add_flag("--amplitudes", amplitudes, "include mode amplitudes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fig1->parsed()) run_fig1_cmd(args);
    else if (fig2->parsed()) run_fig2_cmd(args);
    else if (fig3->parsed()) run_fig3_cmd(args);
    else if (fig4->parsed()) run_fig4_cmd(args);
    else if (g2tau->parsed()) run_g2tau_cmd(args);
    else if (modes->parsed()) run_modes_cmd(args, amplitudes);
    else if (overlaps->parsed()) run_overlaps_cmd(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
