#include "zeno/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "zeno/coherent_track.hpp"
#include "zeno/errors.hpp"
#include "zeno/free_track.hpp"
#include "zeno/iterates.hpp"

namespace zeno::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class IoError : public ZenoError {
 public:
  using ZenoError::ZenoError;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

CoherentMixtureP read_mixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mixture file '" + path + "'");
  CoherentMixtureP mix;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream fields(line);
    double w = 0, re = 0, im = 0;
    if (!(fields >> w >> re >> im))
      throw InvalidParams(path + ":" + std::to_string(lineno) + ": expected 'weight re im'");
    mix.components.push_back({w, cplx(re, im)});
  }
  return mix;
}

}  // namespace

std::string_view version() { return ZENO_VERSION; }

void RunConfig::validate() const {
  params.validate();
  if (n_max < 1) throw InvalidParams("n-max must be >= 1");
  if (fock_dim < 16) throw InvalidParams("fock-dim must be >= 16");
  if (p_quad_order < 1 || alpha_quad_order < 1) throw InvalidParams("quadrature orders must be >= 1");
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag())) throw InvalidParams("alpha0 must be finite");
}

PFunction initial_state(const RunConfig& cfg) {
  const std::string& s = cfg.state;
  PFunction p;
  if (s == "coherent") {
    p = DeltaP{cfg.alpha0};
  } else if (s.rfind("mixture:", 0) == 0) {
    p = read_mixture(s.substr(8));
  } else if (s.rfind("thermal:", 0) == 0) {
    const std::string num = s.substr(8);
    double nbar = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), nbar);
    if (ec != std::errc() || ptr != num.data() + num.size()) throw InvalidParams("bad thermal occupation '" + num + "'");
    p = ThermalP{nbar, cfg.alpha0};
  } else {
    throw InvalidParams("unknown state '" + s + "' (expected coherent, mixture:<file> or thermal:<nbar>)");
  }
  validate(p);
  return p;
}

Table cmd_distill(const RunConfig& cfg) {
  cfg.validate();
  const ProjectedKernel kernel = derive_kernel(cfg.params);
  const TargetSqueeze target = target_squeeze(kernel);
  const PFunction pfunc = initial_state(cfg);

  Table t{"distill", {"N", "P", "lnP", "F", "mean_quanta", "alpha_N_re", "alpha_N_im", "r_N", "phi_N"}, {}};
  if (const auto* delta = std::get_if<DeltaP>(&pfunc)) {
    for (const auto& rec : distill_series(kernel, delta->alpha0, cfg.n_max)) {
      t.rows.push_back({rec.n, std::exp(rec.log_p), rec.log_p, rec.fidelity, rec.mean_quanta, rec.state.alpha.real(),
                        rec.state.alpha.imag(), rec.state.r(), rec.state.phi()});
    }
    return t;
  }
  QuadratureOptions q;
  q.order = cfg.alpha_quad_order;
  for (std::int64_t n = 1; n <= cfg.n_max; ++n) {
    const StepClosure c = step_closure(kernel, n);
    const FieldEnsemble e = evolve_ensemble(kernel, pfunc, n, q);
    cplx mean_a = 0.0;
    for (const auto& row : e.rows) mean_a += row.weight * row.label.alpha;
    t.rows.push_back({n, e.normalization(), e.log_normalization, ensemble_fidelity(e, target, c),
                      ensemble_mean_quanta(e, c), mean_a.real(), mean_a.imag(), c.r_N, c.phi_N});
  }
  return t;
}

Table cmd_lnp_curvature(const RunConfig& cfg, std::span<const double> alpha0s) {
  cfg.validate();
  if (alpha0s.empty()) throw InvalidParams("lnp-curvature needs at least one alpha0");
  const ProjectedKernel kernel = derive_kernel(cfg.params);
  Table t{"lnp-curvature", {"N"}, {}};
  std::vector<std::vector<double>> lnp;
  for (const double a : alpha0s) {
    t.columns.push_back("lnP@" + format_double(a));
    t.columns.push_back("d2lnP@" + format_double(a));
    std::vector<double> col;
    for (std::int64_t n = 1; n <= cfg.n_max; ++n) col.push_back(survival_log_prob(kernel, a, n));
    lnp.push_back(std::move(col));
  }
  for (int i = 0; i < cfg.n_max; ++i) {
    std::vector<Cell> row{std::int64_t{i + 1}};
    for (const auto& col : lnp) {
      row.emplace_back(col[i]);
      const bool interior = i > 0 && i + 1 < cfg.n_max;
      row.emplace_back(interior ? col[i + 1] - 2.0 * col[i] + col[i - 1] : kNaN);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_free(const RunConfig& cfg, std::span<const double> t_grid) {
  cfg.validate();
  QuadratureOptions q;
  q.order = cfg.alpha_quad_order;
  Table t{"free", {"t_bar", "P0", "mean_quanta0"}, {}};
  for (const auto& rec : free_series(cfg.params, initial_state(cfg), t_grid, q))
    t.rows.push_back({rec.t_bar, rec.survival, rec.mean_quanta});
  return t;
}

Table cmd_zeno(const RunConfig& cfg, double t_bar, int k_min, int k_max) {
  cfg.validate();
  if (t_bar == 0.0) throw DegenerateKernel("zeno: t_bar = 0 gives tau_bar = 0, a degenerate kernel");
  if (k_min < 0 || k_max < k_min || k_max > 40) throw InvalidParams("zeno: need 0 <= k-min <= k-max <= 40");
  std::vector<std::int64_t> ns;
  for (int k = k_min; k <= k_max; ++k) ns.push_back(std::int64_t{1} << k);
  Table t{"zeno", {"N", "tau_bar", "P", "fidelity", "regime"}, {}};
  for (const auto& r : zeno_series(cfg.params, t_bar, cfg.alpha0, ns))
    t.rows.push_back({r.n, r.tau_bar, std::exp(r.log_p), r.fidelity, std::string(to_string(r.regime))});
  return t;
}

CheckConfig check_config(const RunConfig& cfg) {
  CheckConfig c;
  c.params = cfg.params;
  c.fock_dim = cfg.fock_dim;
  c.p_quad_order = cfg.p_quad_order;
  c.alpha_quad_order = cfg.alpha_quad_order;
  return c;
}

Table oracle_report(const std::vector<CheckResult>& results) {
  Table t{"oracle-check", {"id", "check", "status", "measure", "observed", "tolerance", "detail"}, {}};
  for (const auto& r : results)
    t.rows.push_back({std::int64_t{r.id}, r.name, std::string(r.passed ? "pass" : "FAIL"), r.measure, r.observed,
                      r.tolerance, r.detail});
  return t;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  os << "# " << kSchemaName << " v" << version() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& table) {
  nlohmann::ordered_json doc;
  doc["format"] = std::string(kSchemaName);
  doc["version"] = std::string(version());
  doc["command"] = table.command;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* i = std::get_if<std::int64_t>(&c)) {
        r.push_back(*i);
      } else if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          r.push_back(*d);
        else
          r.push_back(nullptr);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << "\n";
}

namespace {

void emit(const Table& table, const RunConfig& cfg, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (cfg.format == Format::Json)
      write_json(os, table);
    else
      write_csv(os, table);
  };
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    write(out);
    if (!out) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file '" + cfg.output_path + "'");
  write(file);
  file.flush();
  if (!file) throw IoError("failed writing output file '" + cfg.output_path + "'");
}

std::vector<double> linear_grid(double t_max, int steps) {
  std::vector<double> g;
  for (int i = 0; i <= steps; ++i) g.push_back(t_max * i / steps);
  return g;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  double alpha_re = cfg.alpha0.real();
  double alpha_im = cfg.alpha0.imag();

  CLI::App app{"Exact dynamics of a field mode under repeated partial measurements of a coupled particle",
               "zeno-distill"};
  app.set_version_flag("--version", std::string(version()));
  app.set_config("--config", "", "Flat key = value file using the long option names");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--tau-bar", cfg.params.tau_bar, "Dimensionless measurement interval omega*tau");
  app.add_option("--g-bar", cfg.params.g_bar, "Dimensionless coupling");
  app.add_option("--dp-bar", cfg.params.dp_bar, "Dimensionless probe momentum width");
  app.add_option("--alpha0-re", alpha_re, "Initial coherent amplitude, real part");
  app.add_option("--alpha0-im", alpha_im, "Initial coherent amplitude, imaginary part");
  app.add_option("--n-max", cfg.n_max, "Number of measurements");
  app.add_option("--fock-dim", cfg.fock_dim, "Number-basis truncation of the oracle");
  app.add_option("--p-quad-order", cfg.p_quad_order, "Gauss-Hermite nodes over the probe momentum");
  app.add_option("--alpha-quad-order", cfg.alpha_quad_order, "Gauss-Hermite nodes per axis over the P-function");
  app.add_option("--state", cfg.state, "coherent | mixture:<file> | thermal:<nbar>");
  app.add_option("--format", cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::Csv}, {"json", Format::Json}},
                                          CLI::ignore_case));
  app.add_option("--out", cfg.output_path, "Output path ('-' for stdout)");

  auto* distill = app.add_subcommand("distill", "Per-measurement P, lnP, fidelity and mean quanta");

  std::vector<double> alpha_list{0.0, 2.0, 4.0};
  auto* curvature = app.add_subcommand("lnp-curvature", "ln P(N tau) and its second difference for several alpha0");
  curvature->add_option("--alpha0-list", alpha_list, "Real initial amplitudes")->delimiter(',');

  double t_max = 4.0 * 3.14159265358979323846;
  int t_steps = 200;
  std::vector<double> t_grid;
  auto* free = app.add_subcommand("free", "Survival probability and mean quanta without measurements");
  free->add_option("--t-max", t_max, "Largest time on the uniform grid");
  free->add_option("--t-steps", t_steps, "Number of grid intervals")->check(CLI::PositiveNumber);
  free->add_option("--t-grid", t_grid, "Explicit comma-separated time grid (overrides --t-max/--t-steps)")
      ->delimiter(',');

  double zeno_t = 0.9 * 3.14159265358979323846;
  int k_min = 0;
  int k_max = 12;
  auto* zeno = app.add_subcommand("zeno", "Fixed total time split into N = 2^k measurements");
  zeno->add_option("--t-bar", zeno_t, "Total dimensionless time");
  zeno->add_option("--k-min", k_min, "Smallest exponent");
  zeno->add_option("--k-max", k_max, "Largest exponent");

  auto* oracle = app.add_subcommand("oracle-check", "Cross-validate every closed form against the Fock-space oracle");

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }
  cfg.alpha0 = cplx(alpha_re, alpha_im);

  try {
    if (*distill) {
      emit(cmd_distill(cfg), cfg, out);
    } else if (*curvature) {
      emit(cmd_lnp_curvature(cfg, alpha_list), cfg, out);
    } else if (*free) {
      emit(cmd_free(cfg, t_grid.empty() ? linear_grid(t_max, t_steps) : t_grid), cfg, out);
    } else if (*zeno) {
      emit(cmd_zeno(cfg, zeno_t, k_min, k_max), cfg, out);
    } else if (*oracle) {
      cfg.validate();
      const auto results = run_all_checks(check_config(cfg));
      emit(oracle_report(results), cfg, out);
      bool all = true;
      for (const auto& r : results) {
        all = all && r.passed;
        err << (r.passed ? "pass " : "FAIL ") << r.id << " " << r.name << ": " << r.measure << " = "
            << format_double(r.observed) << " (tolerance " << format_double(r.tolerance) << ")"
            << (r.detail.empty() ? "" : "; " + r.detail) << "\n";
      }
      return all ? kOk : kCheckBreach;
    }
  } catch (const DegenerateKernel& e) {
    err << "error: degenerate regime: " << e.what() << "\n";
    return kBadRegime;
  } catch (const MarginalKernel& e) {
    err << "error: marginal regime: " << e.what() << "\n";
    return kBadRegime;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ZenoError& e) {
    err << "error: numerical gate: " << e.what() << "\n";
    return kCheckBreach;
  }
  return kOk;
}

}  // namespace zeno::cli
