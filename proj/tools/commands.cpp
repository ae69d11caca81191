#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

#include "volret/error.hpp"
#include "volret/inference.hpp"
#include "volret/kernels.hpp"
#include "volret/models.hpp"
#include "volret/moments.hpp"
#include "volret/returns.hpp"

namespace volret::cli {
namespace {

using Cell = std::variant<double, long long, std::string, bool>;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_date(const Date& d) {
  std::ostringstream os;
  os << std::setfill('0') << std::setw(4) << static_cast<int>(d.year()) << '-' << std::setw(2)
     << static_cast<unsigned>(d.month()) << '-' << std::setw(2) << static_cast<unsigned>(d.day());
  return os.str();
}

class Table {
public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  // Writes <dir>/<stem>.csv or .json and returns the path.
  std::filesystem::path write(const RunConfig& config, const std::string& stem) const {
    const bool json = config.format == OutputFormat::json;
    const auto path = config.output_dir / (stem + (json ? ".json" : ".csv"));
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    if (json) {
      write_json(os, config.invocation);
    } else {
      write_csv(os, config.invocation);
    }
    if (!os) throw IoError("failed writing " + path.string());
    return path;
  }

private:
  static std::string text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) return format_double(v);
          else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
          else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
          else return v;
        },
        c);
  }

  void write_csv(std::ostream& os, const std::string& invocation) const {
    os << "# " << invocation << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << text(row[i]);
      os << '\n';
    }
  }

  void write_json(std::ostream& os, const std::string& invocation) const {
    nlohmann::ordered_json doc;
    doc["command"] = invocation;
    doc["columns"] = columns_;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                if (std::isfinite(v)) obj[columns_[i]] = v;
                else obj[columns_[i]] = nullptr;
              } else {
                obj[columns_[i]] = v;
              }
            },
            row[i]);
      }
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    os << std::setw(2) << doc << '\n';
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

void ensure_output_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    throw IoError("cannot create output directory " + config.output_dir.string());
  }
}

PriceSeries load_input(const RunConfig& config) {
  if (config.input_path.empty()) throw ValidationError("--input is required");
  return load_price_series(config.input_path);
}

double drift(const RunConfig& config, const PriceSeries& series) {
  return config.mu ? *config.mu : fit_growth_rate(series);
}

void require_taus(const RunConfig& config) {
  if (config.tau_list.empty()) throw ValidationError("tau list is empty");
}

Family family_of(Kind kind) {
  if (is_heston(kind)) return Family::heston;
  if (is_multiplicative(kind)) return Family::multiplicative;
  throw ValidationError("moment analysis supports the ga and iga families only");
}

ModelParams model_params(const RunConfig& config) {
  Family family;
  if (config.model == "heston" || config.model == "ga") {
    family = Family::heston;
  } else if (config.model == "multiplicative" || config.model == "mult" || config.model == "iga") {
    family = Family::multiplicative;
  } else {
    throw ValidationError("unknown model '" + config.model + "'");
  }
  if (config.alpha && config.kappa) throw ValidationError("give either --alpha or --kappa");
  ModelParams p;
  if (config.alpha) {
    p = ModelParams::from_alpha(family, config.gamma, config.theta, *config.alpha, config.rho);
  } else {
    p = ModelParams{family, config.gamma, config.theta, config.kappa.value_or(1e-3), config.rho};
    p.validate();
  }
  return p;
}

}  // namespace

std::vector<int> parse_taus(const std::string& text) {
  std::vector<int> out;
  std::stringstream list(text);
  std::string item;
  auto to_int = [](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad tau value '" + s + "'");
    }
    if (used != s.size()) throw ValidationError("bad tau value '" + s + "'");
    return v;
  };
  while (std::getline(list, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream range(item);
    std::string part;
    while (std::getline(range, part, ':')) parts.push_back(part);
    if (parts.size() == 1) {
      out.push_back(to_int(parts[0]));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const int lo = to_int(parts[0]);
      const int hi = to_int(parts[1]);
      const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
      if (step < 1 || hi < lo) throw ValidationError("bad tau range '" + item + "'");
      for (int t = lo; t <= hi; t += step) out.push_back(t);
    } else {
      throw ValidationError("bad tau range '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError("tau list is empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1) throw ValidationError("taus must be positive");
    if (i > 0 && out[i] <= out[i - 1]) throw ValidationError("taus must be strictly increasing");
  }
  return out;
}

std::vector<Kind> parse_families(const std::string& text) {
  std::vector<Kind> out;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (!item.empty()) out.push_back(kind_from_string(item));
  }
  if (out.empty()) throw ValidationError("family list is empty");
  return out;
}

int cmd_ingest(const RunConfig& config, std::ostream& out) {
  const auto series = load_input(config);
  ensure_output_dir(config);
  const double mu = fit_growth_rate(series);

  const auto series_path = config.output_dir / "series.csv";
  std::ofstream os(series_path, std::ios::binary);
  if (!os) throw IoError("cannot write " + series_path.string());
  write_price_series(os, series);

  Table summary({"n", "first_date", "last_date", "mu"});
  summary.add({static_cast<long long>(series.size()), format_date(series.dates().front()),
               format_date(series.dates().back()), mu});
  summary.write(config, "summary");
  out << "N = " << series.size() << ", " << format_date(series.dates().front()) << " .. "
      << format_date(series.dates().back()) << ", mu = " << format_double(mu) << '\n';
  return 0;
}

int cmd_rv(const RunConfig& config, std::ostream& out) {
  require_taus(config);
  const auto series = load_input(config);
  ensure_output_dir(config);
  const double mu = drift(config, series);
  const auto curve = realized_variance_curve(series, mu, config.tau_list);

  Table rv({"tau", "mean_rv"});
  std::vector<std::pair<double, double>> points;
  for (const auto& p : curve) {
    rv.add({static_cast<long long>(p.tau), p.mean_rv});
    points.emplace_back(p.tau, p.mean_rv);
  }
  rv.write(config, "rv");

  Table fit_table({"slope", "intercept", "r_squared", "mu"});
  if (points.size() >= 2) {
    const auto fit = linear_fit(points);
    fit_table.add({fit.slope, fit.intercept, fit.r_squared, mu});
    out << "RV slope (theta) = " << format_double(fit.slope)
        << ", intercept = " << format_double(fit.intercept) << '\n';
  }
  fit_table.write(config, "rv_fit");
  return 0;
}

int cmd_fit(const RunConfig& config, std::ostream& out) {
  require_taus(config);
  const auto series = load_input(config);
  ensure_output_dir(config);
  const double mu = drift(config, series);

  Table fits({"tau", "family", "alpha", "theta", "loglik", "ks", "converged"});
  Table ratios({"tau", "family", "ll_ratio", "ll_difference"});
  bool all_converged = true;
  for (int tau : config.tau_list) {
    const auto sample = tau_returns(series, tau, mu);
    const auto normal = fit_normal(sample);
    std::map<Kind, FitResult> done;
    for (Kind kind : config.families) {
      FitResult fit;
      if (kind == Kind::normal) {
        fit = normal;
      } else if (is_joint(kind)) {
        const Kind pd = is_heston(kind) ? Kind::heston_pd : Kind::mult_pd;
        if (!done.contains(pd)) done[pd] = mle_fit(sample, pd);
        fit = mle_fit(sample, kind, {}, done[pd].spec);
      } else {
        fit = done.contains(kind) ? done[kind] : mle_fit(sample, kind);
      }
      done[kind] = fit;
      all_converged = all_converged && fit.converged;
      const double ks = ks_statistic(sample, fit.spec);
      // the normal reports theta = sigma^2 / tau and no shape parameter
      const double alpha = kind == Kind::normal ? std::nan("") : fit.spec.alpha;
      const double theta =
          kind == Kind::normal ? fit.spec.sigma * fit.spec.sigma / tau : fit.spec.theta;
      fits.add({static_cast<long long>(tau), std::string(to_string(kind)), alpha, theta,
                fit.log_likelihood, ks, fit.converged});
      ratios.add({static_cast<long long>(tau), std::string(to_string(kind)),
                  ll_ratio(fit, normal), ll_difference(fit, normal)});
    }
  }
  fits.write(config, "fits");
  ratios.write(config, "ll_ratio");
  out << "fitted " << config.families.size() << " families at " << config.tau_list.size()
      << " horizons" << (all_converged ? "" : " (some fits did not converge)") << '\n';
  return all_converged ? 0 : static_cast<int>(ExitCode::numerical);
}

int cmd_moments(const RunConfig& config, std::ostream& out) {
  require_taus(config);
  const auto series = load_input(config);
  const double mu = drift(config, series);

  // Validate every requested (family, n) before doing any work.
  std::vector<std::pair<Kind, std::vector<int>>> plan;
  for (Kind kind : config.families) {
    if (kind == Kind::normal || is_joint(kind)) continue;
    const Family family = family_of(kind);
    std::vector<int> orders = config.orders;
    if (orders.empty()) orders = family == Family::heston ? std::vector<int>{1, 2, 3, 4, 5, 6}
                                                          : std::vector<int>{1, 2};
    for (int n : orders) {
      (void)theoretical_moment(kind == Kind::heston_pd ? DistributionSpec::heston_pd(2.0, 1.0, 1.0)
                                                       : DistributionSpec::mult_pd(2.0, 1.0, 1.0),
                               2 * n);
    }
    plan.emplace_back(kind, orders);
  }
  if (plan.empty()) throw ValidationError("moment analysis needs the ga or iga family");
  ensure_output_dir(config);

  std::vector<ReturnSample> samples;
  for (int tau : config.tau_list) samples.push_back(tau_returns(series, tau, mu));

  Table reference({"family", "ref_tau", "alpha", "theta", "converged"});
  bool all_converged = true;
  for (const auto& [kind, orders] : plan) {
    double alpha = 0.0;
    double theta = 0.0;
    bool converged = true;
    if (config.alpha && config.theta > 0.0) {
      alpha = *config.alpha;
      theta = config.theta;
    } else {
      const auto fit = mle_fit(tau_returns(series, config.ref_tau, mu), kind);
      alpha = fit.spec.alpha;
      theta = fit.spec.theta;
      converged = fit.converged;
    }
    all_converged = all_converged && converged;
    reference.add({std::string(to_string(kind)), static_cast<long long>(config.ref_tau), alpha,
                   theta, converged});

    Table relax({"n", "a", "b", "residual_rms"});
    for (int n : orders) {
      const auto curve = moment_ratio_curve(samples, family_of(kind), alpha, theta, n);
      Table t({"tau", "ratio"});
      for (const auto& p : curve) t.add({static_cast<long long>(p.tau), p.ratio});
      t.write(config, "ratio_" + std::string(to_string(kind)) + "_n" + std::to_string(n));
      if (curve.size() >= 3) {
        const auto fit = fit_relaxation(curve, n);
        relax.add({static_cast<long long>(n), fit.a, fit.b, fit.residual_rms});
        out << to_string(kind) << " n=" << n << ": a = " << format_double(fit.a)
            << ", b = " << format_double(fit.b)
            << (fit.rate_unresolved ? " (no decay resolved in the tau range)" : "") << '\n';
      }
    }
    relax.write(config, "relaxation_" + std::string(to_string(kind)));
  }
  reference.write(config, "moment_reference");
  return all_converged ? 0 : static_cast<int>(ExitCode::numerical);
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  const auto params = model_params(config);
  ensure_output_dir(config);

  const auto vpath = simulate_variance_path(params, config.dt, config.steps, config.seed);
  Table variance({"step", "v"});
  for (std::size_t i = 0; i < vpath.values.size(); ++i) {
    variance.add({static_cast<long long>(i), vpath.values[i]});
  }
  variance.write(config, "variance");

  const auto path = simulate_log_return_path(params, config.dt, config.steps, config.seed, config.ito);
  Table coupled({"step", "x", "v"});
  for (std::size_t i = 0; i < path.x.size(); ++i) {
    coupled.add({static_cast<long long>(i), path.x[i], path.v.values[i]});
  }
  coupled.write(config, "path");

  if (config.prices_path) {
    const double per_day = 1.0 / config.dt;
    const auto steps_per_day = static_cast<std::size_t>(std::lround(per_day));
    if (std::abs(per_day - static_cast<double>(steps_per_day)) > 1e-9 || steps_per_day == 0) {
      throw ValidationError("--prices needs 1/dt to be an integer");
    }
    std::vector<double> log_prices;
    for (std::size_t i = 0; i < path.x.size(); i += steps_per_day) {
      log_prices.push_back(std::log(100.0) + path.x[i]);
    }
    const auto series = PriceSeries::from_log_prices(log_prices);
    std::ofstream os(*config.prices_path, std::ios::binary);
    if (!os) throw IoError("cannot write " + config.prices_path->string());
    write_price_series(os, series);
  }

  out << "simulated " << config.steps << " steps of the " << to_string(params.family)
      << " model (alpha = " << format_double(params.alpha()) << ")\n";

  if (config.ks_check) {
    kernels::StationaryBatch batch;
    batch.n_paths = 100;
    batch.samples_per_path = 1000;
    batch.dt = config.dt;
    batch.burn_in = 10.0 / params.gamma;
    batch.thin = 1.0 / params.gamma;
    batch.seed = config.seed;
    const auto samples = kernels::stationary_variance_samples(params, batch);
    const double d = ks_statistic(
        samples, [&](double v) { return steady_state_variance_cdf(params, v); });
    const bool pass = d < 0.01;
    Table ks({"n_samples", "ks", "pass"});
    ks.add({static_cast<long long>(samples.size()), d, pass});
    ks.write(config, "stationary_ks");
    out << "stationary KS = " << format_double(d) << (pass ? " PASS" : " FAIL") << '\n';
  }
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic-volatility return distributions: realized variance, MLE fits, "
               "moment analysis and simulation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value configuration file");

  RunConfig config;
  std::string input, taus = "1:250", families = "ga,iga,ga-jp,iga-jp,normal", output = ".",
                     format = "csv", orders, prices;
  std::optional<double> mu, kappa, alpha;
  std::optional<double> theta;

  app.add_option("--input", input, "price CSV with header date,close");
  app.add_option("--taus", taus, "return horizons, e.g. 1:250 or 1,5,10")->capture_default_str();
  app.add_option("--families", families, "ga,iga,ga-jp,iga-jp,normal")->capture_default_str();
  app.add_option("--seed", config.seed, "random seed")->capture_default_str();
  app.add_option("--out", output, "output directory")->capture_default_str();
  app.add_option("--format", format, "csv or json")->capture_default_str();
  app.add_option("--mu", mu, "drift per day (default: fitted)");
  app.add_option("--orders", orders, "moment half-orders n, e.g. 1:6");
  app.add_option("--ref-tau", config.ref_tau, "horizon of the reference fit")->capture_default_str();
  app.add_option("--model", config.model, "heston or multiplicative")->capture_default_str();
  app.add_option("--gamma", config.gamma, "mean-reversion rate")->capture_default_str();
  app.add_option("--theta", theta, "mean variance per day");
  app.add_option("--kappa", kappa, "noise amplitude");
  app.add_option("--alpha", alpha, "shape 2 gamma theta / kappa^2");
  app.add_option("--rho", config.rho, "Wiener correlation")->capture_default_str();
  app.add_option("--dt", config.dt, "time step in days")->capture_default_str();
  app.add_option("--steps", config.steps, "number of steps")->capture_default_str();
  app.add_flag("!--no-ito", config.ito, "drop the -v/2 dt drift of log returns");
  app.add_option("--prices", prices, "also write the daily simulated price series here");
  app.add_flag("--ks-check", config.ks_check, "stationary-law KS check of the simulator");

  auto* ingest = app.add_subcommand("ingest", "parse and validate a price series");
  auto* rv = app.add_subcommand("rv", "realized-variance curve and linear fit");
  auto* fit = app.add_subcommand("fit", "per-horizon MLE fits, KS and log-likelihood ratios");
  auto* moments = app.add_subcommand("moments", "moment-ratio curves and relaxation fits");
  auto* simulate = app.add_subcommand("simulate", "simulate variance and log-return paths");
  for (auto* sub : {ingest, rv, fit, moments, simulate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(ExitCode::validation);
  }

  try {
    std::ostringstream inv;
    inv << "volret";
    for (int i = 1; i < argc; ++i) inv << ' ' << argv[i];
    config.invocation = inv.str();
    config.input_path = input;
    config.output_dir = output;
    config.mu = mu;
    config.kappa = kappa;
    config.alpha = alpha;
    if (theta) config.theta = *theta;
    if (!prices.empty()) config.prices_path = prices;
    if (format == "csv") {
      config.format = OutputFormat::csv;
    } else if (format == "json") {
      config.format = OutputFormat::json;
    } else {
      throw ValidationError("--format must be csv or json");
    }

    if (ingest->parsed()) return cmd_ingest(config, out);
    if (simulate->parsed()) return cmd_simulate(config, out);

    config.tau_list = parse_taus(taus);
    config.families = parse_families(families);
    if (!orders.empty()) config.orders = parse_taus(orders);
    if (moments->parsed() && !theta) config.alpha.reset();  // reference values need both
    if (rv->parsed()) return cmd_rv(config, out);
    if (fit->parsed()) return cmd_fit(config, out);
    if (moments->parsed()) return cmd_moments(config, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical);
  }
  return static_cast<int>(ExitCode::validation);
}

}  // namespace volret::cli
