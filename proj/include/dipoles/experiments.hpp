#ifndef DIPOLES_EXPERIMENTS_HPP
#define DIPOLES_EXPERIMENTS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dipoles/analytic.hpp"
#include "dipoles/geometry.hpp"
#include "dipoles/master.hpp"
#include "dipoles/types.hpp"

namespace dipoles {

enum class Method { kAnalytic, kMaster, kBoth };

struct GeometrySpec {
  LatticeKind kind = LatticeKind::kSquare;
  int n_side = 5;        // square
  int count = 0;         // line
  double spacing = 0.4;  // overridden by sweep d-list where applicable
  std::string file;      // custom geometry JSON

  AtomArray build(double d_override = -1.0) const;
};

struct SweepSpec {
  std::vector<double> d_list = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<int> mode_indices;            // empty -> all modes
  int phi_steps = 128;                      // phi in [0, 2 pi)
  double a_min = 0.0, a_max = 3.0;
  int a_steps = 61;
  std::vector<double> tau_grid;
};

struct RunConfig {
  GeometrySpec geometry;
  Method method = Method::kAnalytic;
  double omega0 = 1e-3;  // drive amplitude (units Gamma); guards may shrink it
  SweepSpec sweep;
  IntegratorOptions integrator;
  std::string out_dir = ".";
  int jobs = 1;
  int master_atom_budget = 25;  // method != analytic requires N <= budget

  // Drive / detector selections for g2tau
  std::string drive_kind = "eigenmode";  // plane_wave | eigenmode | two_mode
  std::string detector_kind = "adjoint_mode";  // adjoint_mode|mode|direction
  int alpha = 0, alpha_tilde = -1;
  double rel_amplitude = 0.0, rel_phase = 0.0;
  Vec3 k0 = Vec3(0, 1, 0);  // plane-wave drive direction (units of k)
  Vec3 k_det = Vec3(0, 1, 0);

  static RunConfig from_json_file(const std::string& path);
  std::string canonical_json() const;
  std::string config_hash() const;  // fnv1a-64 hex of canonical form
};

// Flat row types for the figure datasets; written as CSV.
struct Fig1Row { double d, gamma_beta, zeta_beta; };
struct Fig2Row { double mismatch, magnitude; int alpha1, alpha2, beta; };
struct Fig3Row { double d, gamma_alpha, g2_same_mode, g2_free_space; };
struct Fig4PhiRow { double rel_amplitude, phi_over_pi, g2_zero; };
struct Fig4EnvelopeRow { double rel_amplitude, g2_min, g2_max; };

std::vector<Fig1Row> run_fig1(const RunConfig& config);
// X rows (alpha1 == alpha2) and L rows (alpha1 < alpha2) at fixed spacing.
struct Fig2Data { std::vector<Fig2Row> x_rows, l_rows; double d; };
Fig2Data run_fig2(const RunConfig& config);
std::vector<Fig3Row> run_fig3(const RunConfig& config);
struct Fig4Data {
  std::vector<Fig4PhiRow> phi_rows;
  std::vector<Fig4EnvelopeRow> envelope_rows;
  double g2_min = 0.0, g2_max = 0.0;
};
Fig4Data run_fig4(const RunConfig& config);

struct G2TauResult {
  std::vector<double> tau, g2;
};
G2TauResult run_g2tau(const RunConfig& config);

/// Writes rows + a JSON manifest ("<name>.json") with the config hash,
/// settings and provenance next to "<name>.csv". Deterministic output:
/// rerunning the same config reproduces the bytes.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows,
               const std::string& config_hash);
void write_manifest(const std::string& path, const RunConfig& config,
                    const std::string& dataset_name);

std::string format_value(double x);  // shortest round-trip formatting

/// Deterministic fan-out: applies fn(i) for i in [0, n) on `jobs` threads,
/// results land in index order.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace dipoles

#endif  // DIPOLES_EXPERIMENTS_HPP
