#include "specvol/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "specvol/config.hpp"
#include "specvol/csv.hpp"
#include "specvol/error.hpp"
#include "specvol/estimators.hpp"
#include "specvol/kernel.hpp"
#include "specvol/mcharness.hpp"
#include "specvol/rng.hpp"
#include "specvol/spectral.hpp"
#include "specvol/svg.hpp"

namespace specvol {

namespace fs = std::filesystem;

namespace {

/// Raised for invalid command usage; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

constexpr double kSecondsPerYear = kSecondsPerDay * kDaysPerYear;

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' || s[0] == '+' ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

void check_regular(const std::vector<double>& t, const std::vector<std::size_t>& lines) {
  if (t.size() < 16) throw ConfigError("series: need at least 16 rows, got " + std::to_string(t.size()));
  const double span = t.back() - t.front();
  const double step = span / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double d = t[i] - t[i - 1];
    if (!(d > 0.0)) {
      throw ConfigError("series line " + std::to_string(lines[i]) +
                        ": timestamps must be strictly increasing");
    }
    if (std::abs(d - step) > 1e-9 * step) {
      throw ConfigError("series line " + std::to_string(lines[i]) +
                        ": irregular spacing; the estimators assume regularly spaced observations");
    }
  }
}

std::vector<double> column_values(const CsvTable& t, std::size_t col, const std::string& name) {
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    v.push_back(parse_double(t.rows[r][col], "line " + std::to_string(t.line_numbers[r]) + " " + name));
  }
  return v;
}

} // namespace

double parse_iso8601(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0.0;
  char sep = 0;
  std::istringstream is(text);
  char dash1 = 0, dash2 = 0, colon1 = 0, colon2 = 0;
  if (!(is >> y >> dash1 >> mo >> dash2 >> d) || dash1 != '-' || dash2 != '-') {
    throw ConfigError("bad ISO-8601 timestamp '" + text + "'");
  }
  sep = static_cast<char>(is.get());
  if (sep != 'T' && sep != ' ') throw ConfigError("bad ISO-8601 timestamp '" + text + "'");
  if (!(is >> h >> colon1 >> mi >> colon2 >> s) || colon1 != ':' || colon2 != ':') {
    throw ConfigError("bad ISO-8601 timestamp '" + text + "'");
  }
  std::string rest;
  is >> rest;
  if (!rest.empty() && rest != "Z") throw ConfigError("bad ISO-8601 timestamp '" + text + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s >= 61) {
    throw ConfigError("out-of-range ISO-8601 timestamp '" + text + "'");
  }
  const auto days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + s;
}

IngestedSeries read_series(std::istream& is, bool log_transform) {
  const CsvTable table = read_csv(is);
  IngestedSeries out{ObservedSeries{Grid(4, 1.0), {}}, std::nullopt, false, 0};
  std::vector<double> t, y;
  std::optional<std::vector<double>> latent;

  const auto c_t = table.column("t");
  const auto c_y = table.column("y");
  if (c_t != std::string::npos && c_y != std::string::npos) {
    out.simulated = true;
    t = column_values(table, c_t, "t");
    y = column_values(table, c_y, "y");
    if (const auto c_x = table.column("x"); c_x != std::string::npos) {
      latent = column_values(table, c_x, "x");
    }
    check_regular(t, table.line_numbers);
  } else {
    const auto c_ts = table.column("timestamp");
    const auto c_p = table.column("price");
    if (c_ts == std::string::npos || c_p == std::string::npos) {
      throw ConfigError("series: expected columns timestamp,price (or simulator columns t,x,nu,y)");
    }
    double origin = 0.0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const std::string& ts = table.rows[r][c_ts];
      const double secs = is_integer_token(ts) ? parse_double(ts, "timestamp") : parse_iso8601(ts);
      // Offsets from the first stamp keep sub-second spacing exact.
      if (r == 0) origin = secs;
      t.push_back((secs - origin) / kSecondsPerYear);
      const double p = parse_double(table.rows[r][c_p],
                                    "line " + std::to_string(table.line_numbers[r]) + " price");
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw ConfigError("series line " + std::to_string(table.line_numbers[r]) +
                          ": price must be positive");
      }
      y.push_back(log_transform ? std::log(p) : p);
    }
    check_regular(t, table.line_numbers);
  }

  // The grid needs an even number of increments.
  if ((t.size() - 1) % 2 != 0) {
    t.pop_back();
    y.pop_back();
    if (latent) latent->pop_back();
    out.dropped_rows = 1;
  }
  const std::size_t n = t.size() - 1;
  out.observed = ObservedSeries{Grid(n, t.back() - t.front()), std::move(y)};
  out.latent = std::move(latent);
  return out;
}

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void write_series_csv(std::ostream& os, const LatentPath& latent, const ObservedSeries& obs) {
  write_csv_row(os, {"t", "x", "nu", "y"});
  for (std::size_t j = 0; j < obs.y.size(); ++j) {
    write_csv_row(os, {format_double(latent.grid.time(j)), format_double(latent.x[j]),
                       format_double(latent.spot_var[j]), format_double(obs.y[j])});
  }
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  return f;
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t path = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, Streams io) {
  auto cfg = load_config(a.config);
  if (a.seed) cfg.master_seed = *a.seed;
  const auto latent_seed = substream_seed(cfg.master_seed, a.path, Stream::latent);
  const auto noise_seed = substream_seed(cfg.master_seed, a.path, Stream::noise);
  const auto latent = simulate_latent(cfg.model, cfg.grid, latent_seed);
  const auto obs = observe(latent, cfg.noise, noise_seed);
  if (a.out.empty()) {
    write_series_csv(io.out, latent, obs);
    return 0;
  }
  auto f = open_out(a.out);
  write_series_csv(f, latent, obs);
  auto meta = open_out(a.out + ".meta.json");
  nlohmann::json m;
  m["master_seed"] = cfg.master_seed;
  m["path_index"] = a.path;
  m["latent_seed"] = latent_seed;
  m["noise_seed"] = noise_seed;
  m["true_integrated_volatility"] = true_integrated_volatility(latent);
  m["config"] = config_to_json(cfg);
  meta << m.dump(2) << '\n';
  return 0;
}

// ---- estimate -----------------------------------------------------------

struct EstimateArgs {
  std::string file;
  std::string noise = "white";
  std::string estimators = "m1,w,b";
  bool log_transform = false;
  std::string out;
  std::string spectrum_out;
  std::string table_out;
  std::string tsrv_noise = "whittle";
};

void write_spectrum(std::ostream& os, const Periodogram& per, const WhittleFit& fit,
                    const IngestedSeries& in) {
  const std::size_t n = per.grid.n();
  const auto rc = multiscale_ratio(fit, per.grid);
  std::optional<Periodogram> sx, se;
  if (in.latent) {
    sx = periodogram(increments(per.grid, *in.latent));
    std::vector<double> eps(in.observed.y.size());
    for (std::size_t j = 0; j < eps.size(); ++j) eps[j] = in.observed.y[j] - (*in.latent)[j];
    se = periodogram(increments(per.grid, eps));
  }
  std::vector<std::string> header{"k", "f", "s_y", "model_signal", "model_noise", "ratio", "shrunk"};
  if (sx) {
    for (const char* h : {"s_x", "s_eps", "ratio_oracle"}) header.emplace_back(h);
  }
  write_csv_row(os, header);
  for (std::size_t k = 0; k < n / 2; ++k) {
    std::vector<std::string> row{std::to_string(k),
                                 format_double(static_cast<double>(k) / static_cast<double>(n)),
                                 format_double(per.s[k]),
                                 format_double(fit.sig2_x),
                                 format_double(noise_spectrum(fit.noise, k, n)),
                                 format_double(rc.l[k]),
                                 format_double(rc.l[k] * per.s[k])};
    if (sx) {
      const double denom = sx->s[k] + se->s[k];
      row.push_back(format_double(sx->s[k]));
      row.push_back(format_double(se->s[k]));
      row.push_back(format_double(denom > 0.0 ? sx->s[k] / denom : 0.0));
    }
    write_csv_row(os, row);
  }
}

int cmd_estimate(const EstimateArgs& a, Streams io) {
  const auto tags = parse_estimator_list(a.estimators);
  const auto choice = NoiseModelChoice::parse(a.noise);

  std::ifstream f(a.file);
  if (!f) throw ConfigError("cannot open series file '" + a.file + "'");
  const auto in = read_series(f, a.log_transform);
  if (in.dropped_rows) io.err << "note: dropped the last row so that N is even\n";

  for (auto e : tags) {
    if (needs_latent(e) && !in.latent) {
      throw UsageError("estimator '" + std::string(to_string(e)) +
                       "' needs the latent path, which ingested data does not provide");
    }
  }

  const auto& obs = in.observed;
  const auto per = periodogram(increments(obs));
  std::optional<WhittleFit> fit;
  std::optional<OrderSelection> selection;
  auto need_fit = [&] {
    if (fit) return;
    FitOptions opts;
    if (choice.kind == NoiseModelChoice::Kind::aicc) {
      selection = select_order_aicc(per, choice.q, opts);
      fit = selection->fit;
    } else {
      fit = fit_noise_model(per, choice, opts);
    }
  };

  auto tsrv_noise = [&]() -> std::optional<double> {
    if (a.tsrv_noise == "realized") return std::nullopt;
    need_fit();
    return fit->noise.marginal_variance();
  };

  std::vector<EstimateReport> reports;
  for (auto e : tags) {
    switch (e) {
    case Estimator::b: {
      EstimateReport r;
      r.name = e;
      r.value = realized_volatility(obs.y);
      reports.push_back(r);
      break;
    }
    case Estimator::u: {
      EstimateReport r;
      r.name = e;
      r.value = realized_volatility(*in.latent);
      reports.push_back(r);
      break;
    }
    case Estimator::m1: need_fit(); reports.push_back(multiscale_m1(per, *fit)); break;
    case Estimator::w: need_fit(); reports.push_back(whittle_w(*fit, obs.grid)); break;
    case Estimator::m2: {
      LatentPath latent{obs.grid, *in.latent, std::vector<double>(obs.y.size(), 0.0)};
      std::vector<double> eps(obs.y.size());
      for (std::size_t j = 0; j < eps.size(); ++j) eps[j] = obs.y[j] - latent.x[j];
      reports.push_back(oracle_m2(latent, eps));
      break;
    }
    case Estimator::s1: reports.push_back(tsrv_first_best(obs, tsrv_noise())); break;
    case Estimator::s2: reports.push_back(tsrv_avg(obs.y, tsrv_plan(obs, tsrv_noise()).k)); break;
    }
  }

  auto emit = [&](std::ostream& os) {
    write_csv_row(os, {"estimator", "value", "sig2_x", "sig2_noise", "q", "theta", "loglik",
                       "aicc", "k_subsample", "degenerate"});
    for (const auto& r : reports) {
      std::string theta;
      if (r.fit) {
        for (std::size_t m = 0; m < r.fit->noise.theta.size(); ++m) {
          if (m) theta += ';';
          theta += format_double(r.fit->noise.theta[m]);
        }
      }
      write_csv_row(os, {std::string(to_string(r.name)), format_double(r.value),
                         r.fit ? format_double(r.fit->sig2_x) : "",
                         r.fit ? format_double(r.fit->noise.sig2) : "",
                         r.fit ? std::to_string(r.fit->q) : "", theta,
                         r.fit ? format_double(r.fit->loglik) : "",
                         r.fit ? format_double(r.fit->aicc) : "",
                         r.k_subsample ? std::to_string(*r.k_subsample) : "",
                         r.degenerate ? "1" : "0"});
    }
  };
  if (a.out.empty()) {
    emit(io.out);
  } else {
    auto o = open_out(a.out);
    emit(o);
  }

  if (!a.table_out.empty()) {
    if (!selection) throw UsageError("--table-out requires --noise aicc:qmax");
    auto o = open_out(a.table_out);
    write_order_table_csv(o, *selection, choice.q);
  }
  if (!a.spectrum_out.empty()) {
    need_fit();
    auto o = open_out(a.spectrum_out);
    write_spectrum(o, per, *fit, in);
  }
  return 0;
}

// ---- mc -----------------------------------------------------------------

struct McArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::size_t> paths;
  std::string out_dir;
  std::string format = "csv";
  std::optional<std::size_t> order_selection;
};

void write_histogram_svg(std::ostream& os, const MCReport& rep) {
  std::vector<SvgSeries> series;
  for (std::size_t i = 0; i < rep.config.estimators.size(); ++i) {
    const auto e = rep.config.estimators[i];
    if (e == Estimator::b) continue;
    std::vector<double> err;
    for (const auto& p : rep.paths) {
      if (!p.failed) err.push_back(p.values[i] - p.true_iv);
    }
    if (err.empty()) continue;
    const auto [lo, hi] = std::minmax_element(err.begin(), err.end());
    const int bins = 40;
    const double width = (*hi - *lo) / bins;
    std::vector<double> x(bins), y(bins, 0.0);
    for (int b = 0; b < bins; ++b) x[b] = *lo + (b + 0.5) * width;
    for (double v : err) {
      int b = width > 0.0 ? static_cast<int>((v - *lo) / width) : 0;
      y[std::clamp(b, 0, bins - 1)] += 1.0;
    }
    series.push_back({std::string(to_string(e)), x, y});
  }
  write_svg_lines(os, rep.config.name + ": distribution of estimate - true IV", series);
}

int cmd_mc(const McArgs& a, Streams io) {
  auto cfg = load_config(a.config);
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.paths) {
    if (*a.paths == 0) throw ConfigError("config: paths: must be >= 1");
    cfg.paths = *a.paths;
  }
  const unsigned threads = resolve_threads(a.threads);
  const fs::path dir = a.out_dir.empty() ? fs::path{} : fs::path(a.out_dir);

  if (a.order_selection) {
    const auto rep = run_order_selection(cfg, *a.order_selection, threads);
    if (rep.selections.size() == 1) {
      write_order_table_csv(io.out, rep.selections.front(), rep.q_max);
    } else {
      write_csv_row(io.out, {"q", "selected"});
      for (std::size_t q = 0; q < rep.counts.size(); ++q) {
        write_csv_row(io.out, {std::to_string(q), std::to_string(rep.counts[q])});
      }
    }
    if (!a.out_dir.empty()) {
      auto f = open_out(dir / (cfg.name + "_order.csv"));
      if (!rep.selections.empty()) write_order_table_csv(f, rep.selections.front(), rep.q_max);
    }
    return 0;
  }

  const auto rep = run_experiment(cfg, threads);
  io.err << cfg.name << ": " << cfg.paths << " paths, " << rep.excluded << " excluded, "
         << std::fixed << std::setprecision(1) << rep.wall_seconds << " s on " << threads
         << " thread(s)\n";
  if (a.format == "svg") {
    write_histogram_svg(io.out, rep);
  } else {
    write_summary_csv(io.out, rep);
  }
  if (!a.out_dir.empty()) {
    auto s = open_out(dir / (cfg.name + "_summary.csv"));
    write_summary_csv(s, rep);
    auto p = open_out(dir / (cfg.name + "_paths.csv"));
    write_paths_csv(p, rep);
    if (a.format == "svg") {
      auto h = open_out(dir / (cfg.name + "_bias_hist.svg"));
      write_histogram_svg(h, rep);
    }
  }
  return 0;
}

// ---- kernel -------------------------------------------------------------

struct KernelArgs {
  std::optional<double> ratio;
  std::optional<double> sig2_x;
  std::optional<double> sig2_eps;
  std::vector<double> theta;
  std::size_t n = 23400;
  std::size_t max_lag = 50;
  std::string format = "csv";
  std::string out_dir;
};

int cmd_kernel(const KernelArgs& a, Streams io) {
  double sig2_x = 0.0, sig2_eps = 0.0;
  if (a.ratio) {
    if (a.sig2_x || a.sig2_eps) throw UsageError("give --ratio or --sig2-x/--sig2-eps, not both");
    if (!(*a.ratio > 0.0)) throw UsageError("--ratio must be positive");
    sig2_eps = 0.0005 * 0.0005;
    sig2_x = *a.ratio * sig2_eps;
  } else if (a.sig2_x && a.sig2_eps) {
    sig2_x = *a.sig2_x;
    sig2_eps = *a.sig2_eps;
  } else {
    throw UsageError("kernel needs --ratio or both --sig2-x and --sig2-eps");
  }
  if (!(sig2_x > 0.0) || !(sig2_eps > 0.0)) throw UsageError("variances must be positive");
  const Grid grid(a.n, 1.0 / kDaysPerYear);
  const NoiseSpec noise = a.theta.empty() ? NoiseSpec::white(sig2_eps) : NoiseSpec::ma(a.theta, sig2_eps);
  const auto rc = multiscale_ratio(sig2_x, noise, grid.n());
  const auto kern = kernel_from_ratio(rc);
  const std::size_t max_lag = std::min(a.max_lag, grid.n() / 2);

  std::vector<double> taus, ls, rs, qs;
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    taus.push_back(static_cast<double>(tau));
    ls.push_back(kern.l[tau]);
    if (noise.is_white()) {
      double r = std::numeric_limits<double>::quiet_NaN();
      try {
        r = kernel_closed_form(sig2_x, sig2_eps, static_cast<long>(tau));
      } catch (const DomainError&) {
      }
      rs.push_back(r);
      qs.push_back(kernel_laplace(sig2_x, sig2_eps, static_cast<long>(tau)));
    }
  }

  auto emit_csv = [&](std::ostream& os) {
    write_csv_row(os, {"tau", "l", "r", "q"});
    for (std::size_t i = 0; i < taus.size(); ++i) {
      write_csv_row(os, {std::to_string(i), format_double(ls[i]),
                         i < rs.size() && std::isfinite(rs[i]) ? format_double(rs[i]) : "",
                         i < qs.size() ? format_double(qs[i]) : ""});
    }
  };
  auto emit_kernel_svg = [&](std::ostream& os) {
    std::vector<SvgSeries> s{{"l (numeric)", taus, ls}};
    if (!rs.empty()) s.push_back({"r (closed form)", taus, rs});
    if (!qs.empty()) s.push_back({"q (Laplace)", taus, qs});
    write_svg_lines(os, "smoothing kernel", s);
  };
  auto emit_ratio_svg = [&](std::ostream& os) {
    std::vector<double> f, l;
    for (std::size_t k = 0; k < grid.n() / 2; ++k) {
      f.push_back(static_cast<double>(k) / static_cast<double>(grid.n()));
      l.push_back(rc.l[k]);
    }
    write_svg_lines(os, "multiscale ratio", {{"L_k", f, l}});
  };

  if (a.out_dir.empty()) {
    if (a.format == "svg") {
      emit_kernel_svg(io.out);
    } else {
      emit_csv(io.out);
    }
    return 0;
  }
  const fs::path dir(a.out_dir);
  auto c = open_out(dir / "kernel.csv");
  emit_csv(c);
  if (a.format == "svg") {
    auto k = open_out(dir / "kernel.svg");
    emit_kernel_svg(k);
    auto r = open_out(dir / "ratio.svg");
    emit_ratio_svg(r);
  }
  return 0;
}

// ---- table --------------------------------------------------------------

int cmd_table(const std::string& file, Streams io) {
  std::ifstream f(file);
  if (!f) throw ConfigError("cannot open '" + file + "'");
  const auto t = read_csv(f);
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t c = 0; c < t.header.size(); ++c) width[c] = t.header[c].size();
  std::vector<std::vector<std::string>> cells = t.rows;
  for (auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      // Shorten long floats for display only.
      if (row[c].find_first_of(".e") != std::string::npos) {
        try {
          const double v = parse_double(row[c], "cell");
          std::ostringstream s;
          s << std::setprecision(4) << std::scientific << v;
          row[c] = s.str();
        } catch (const ConfigError&) {
        }
      }
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto print = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      io.out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << row[c];
    }
    io.out << '\n';
  };
  print(t.header);
  for (const auto& row : cells) print(row);
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integrated volatility under microstructure noise: multiscale Whittle estimation"};
  app.name("specvol");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate one latent + observed path to CSV (t,x,nu,y)");
  s->add_option("config", sim.config, "Experiment config (JSON)")->required();
  s->add_option("--seed", sim.seed, "Override the master seed");
  s->add_option("--path", sim.path, "Path index within the experiment");
  s->add_option("--out", sim.out, "Output CSV (default stdout); also writes <out>.meta.json");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate integrated volatility of a series file");
  e->add_option("file", est.file, "CSV with timestamp,price or simulator output")->required();
  e->add_option("--noise", est.noise, "Noise model: white | ma:q | aicc:qmax");
  e->add_option("--estimators", est.estimators, "Comma-separated tags from b,u,m1,m2,w,s1,s2");
  e->add_flag("--log-transform", est.log_transform, "Use log(price)");
  e->add_option("--out", est.out, "Write estimates here instead of stdout");
  e->add_option("--spectrum-out", est.spectrum_out, "Write periodogram, fitted spectrum and ratio");
  e->add_option("--table-out", est.table_out, "Write the per-order AICC table (aicc only)");
  e->add_option("--tsrv-noise", est.tsrv_noise, "Noise plug-in for the TSRV subsampling rule")
      ->check(CLI::IsMember({"whittle", "realized"}));

  McArgs mc;
  auto* m = app.add_subcommand("mc", "Run a Monte Carlo experiment");
  m->add_option("config", mc.config, "Experiment config (JSON)")->required();
  m->add_option("--seed", mc.seed, "Override the master seed");
  m->add_option("--threads", mc.threads, "Worker threads (default SPECVOL_THREADS or all cores)");
  m->add_option("--paths", mc.paths, "Override the path count");
  m->add_option("--out-dir", mc.out_dir, "Directory for <name>_summary.csv and <name>_paths.csv");
  m->add_option("--format", mc.format, "csv | svg")->check(CLI::IsMember({"csv", "svg"}));
  m->add_option("--order-selection", mc.order_selection, "Run AICC order selection up to this q");

  KernelArgs ker;
  auto* k = app.add_subcommand("kernel", "Emit the implied time-domain smoothing kernel");
  k->add_option("--ratio", ker.ratio, "Signal-to-noise variance ratio sig2_x / sig2_eps");
  k->add_option("--sig2-x", ker.sig2_x, "Per-increment signal variance");
  k->add_option("--sig2-eps", ker.sig2_eps, "Noise (innovation) variance");
  k->add_option("--theta", ker.theta, "MA coefficients of the noise")->delimiter(',');
  k->add_option("--N", ker.n, "Number of increments");
  k->add_option("--max-lag", ker.max_lag, "Largest lag written");
  k->add_option("--format", ker.format, "csv | svg")->check(CLI::IsMember({"csv", "svg"}));
  k->add_option("--out-dir", ker.out_dir, "Write kernel.csv (and SVGs) here");

  std::string table_file;
  auto* t = app.add_subcommand("table", "Pretty-print a summary CSV");
  t->add_option("file", table_file, "Summary CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  const Streams io{out, err};
  try {
    if (*s) return cmd_simulate(sim, io);
    if (*e) return cmd_estimate(est, io);
    if (*m) return cmd_mc(mc, io);
    if (*k) return cmd_kernel(ker, io);
    if (*t) return cmd_table(table_file, io);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << '\n';
    return 2;
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << '\n';
    return 3;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace specvol
