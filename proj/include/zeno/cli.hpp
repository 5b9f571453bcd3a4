#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zeno/checks.hpp"
#include "zeno/params.hpp"
#include "zeno/pfunc_track.hpp"

namespace zeno::cli {

inline constexpr std::string_view kSchemaName = "zeno-distill";
std::string_view version();

enum ExitCode : int { kOk = 0, kCheckBreach = 1, kBadRegime = 2, kIoError = 3, kInvalidInput = 4 };

enum class Format { Csv, Json };

struct RunConfig {
  SystemParams params{};
  cplx alpha0{1.0, 0.0};
  int n_max = 30;
  int fock_dim = 80;
  int p_quad_order = 64;
  int alpha_quad_order = 32;
  /// coherent | mixture:<file> | thermal:<nbar>
  std::string state = "coherent";
  std::string output_path = "-";
  Format format = Format::Csv;

  void validate() const;
};

/// Initial field state from `state`. Mixture files hold one "weight re im" triple per line
/// ('#' starts a comment); thermal states are centered on alpha0.
PFunction initial_state(const RunConfig& cfg);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Columns N, P, lnP, F, mean_quanta, alpha_N_re, alpha_N_im, r_N, phi_N for N = 1..n_max.
/// For mixed initial states alpha_N is the ensemble mean <a>.
Table cmd_distill(const RunConfig& cfg);

/// lnP@<a0> and d2lnP@<a0> columns per alpha0 (real amplitudes). The second difference is
/// centered and left empty (NaN) at N = 1 and N = n_max.
Table cmd_lnp_curvature(const RunConfig& cfg, std::span<const double> alpha0s);

/// Columns t_bar, P0, mean_quanta0.
Table cmd_free(const RunConfig& cfg, std::span<const double> t_grid);

/// Columns N, tau_bar, P, fidelity, regime for N = 2^k, k = k_min..k_max.
Table cmd_zeno(const RunConfig& cfg, double t_bar, int k_min, int k_max);

CheckConfig check_config(const RunConfig& cfg);
Table oracle_report(const std::vector<CheckResult>& results);

/// printf-style %.17g (round-trip exact); "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double x);

void write_csv(std::ostream& os, const Table& table);
void write_json(std::ostream& os, const Table& table);

/// Full command-line entry point. `args[0]` is the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace zeno::cli
