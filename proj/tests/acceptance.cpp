// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "specvol/config.hpp"
#include "specvol/estimators.hpp"
#include "specvol/kernel.hpp"
#include "specvol/mcharness.hpp"
#include "specvol/rng.hpp"

using namespace specvol;

namespace {

int failures = 0;

std::string sci(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  return buf;
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

void report(int id, const std::string& title, bool ok, const std::vector<std::string>& details) {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << '\n';
  for (const auto& d : details) std::cout << "        " << d << '\n';
  std::cout.flush();
  if (!ok) ++failures;
}

std::string check_line(bool ok, const std::string& text) { return std::string(ok ? "[ok]   " : "[miss] ") + text; }

ExperimentConfig config(const std::string& name) {
  return load_config(std::string(SPECVOL_SOURCE_DIR) + "/configs/" + name + ".json");
}

MCReport run(const ExperimentConfig& cfg, unsigned threads) {
  const auto rep = run_experiment(cfg, threads);
  std::cout << "  (" << cfg.name << ": " << cfg.paths << " paths, " << rep.excluded << " excluded, "
            << sci(rep.wall_seconds, 3) << " s)\n";
  return rep;
}

std::size_t index_of(const ExperimentConfig& cfg, Estimator e) {
  const auto it = std::find(cfg.estimators.begin(), cfg.estimators.end(), e);
  if (it == cfg.estimators.end()) throw std::logic_error("estimator missing from config");
  return static_cast<std::size_t>(it - cfg.estimators.begin());
}

std::string summary_csv(const MCReport& r) {
  std::ostringstream os;
  write_summary_csv(os, r);
  return os.str();
}

} // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned threads = resolve_threads(std::nullopt);
  std::cout << "acceptance suite on " << threads << " thread(s)\n";

  // ---- Default Heston design: criteria 1-4 and the per-path part of 10 ---
  const auto t1cfg = config("table1");
  const auto t1 = run(t1cfg, threads);
  {
    const double bias = t1.at(Estimator::b).bias;
    const double target = 2.0 * 23400.0 * 2.5e-7;
    report(1, "naive bias equals 2 N sig2_eps within 1%", within(bias, target, 0.01),
           {"bias(b) = " + sci(bias) + ", target " + sci(target)});
  }
  {
    const double m1 = t1.at(Estimator::m1).rmse, u = t1.at(Estimator::u).rmse;
    const double m2 = t1.at(Estimator::m2).rmse, b = t1.at(Estimator::b).rmse;
    const bool a = within(m1, 1.61e-5, 0.25), c = within(u, 1.44e-5, 0.25);
    const bool order = u <= m2 && m2 <= m1 && m1 < b;
    report(2, "multiscale RMSE and estimator ordering", a && c && order,
           {check_line(a, "RMSE(m1) = " + sci(m1) + ", target 1.61e-5 +-25%"),
            check_line(c, "RMSE(u)  = " + sci(u) + ", target 1.44e-5 +-25%"),
            check_line(order, "RMSE u <= m2 <= m1 < b: " + sci(u) + " <= " + sci(m2) + " <= " + sci(m1) +
                                  " < " + sci(b))});
  }
  {
    const double m1 = t1.at(Estimator::m1).rmse, w = t1.at(Estimator::w).rmse;
    const double gap = std::abs(w - m1) / m1;
    const auto im1 = index_of(t1cfg, Estimator::m1), iw = index_of(t1cfg, Estimator::w);
    std::vector<double> rel;
    for (const auto& p : t1.paths) {
      if (!p.failed) rel.push_back(std::abs(p.values[im1] - p.values[iw]) / p.values[iw]);
    }
    std::nth_element(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(rel.size() / 2), rel.end());
    const double median = rel[rel.size() / 2];
    const bool a = gap < 0.02, c = median < 0.01;
    report(3, "w and m1 agree", a && c,
           {check_line(a, "|RMSE(w) - RMSE(m1)| / RMSE(m1) = " + sci(gap, 3) + " < 2e-2"),
            check_line(c, "median per-path |m1 - w| / w = " + sci(median, 3) + " < 1e-2")});
  }
  {
    const double sx = t1.mean_sig2_x, se = t1.mean_sig2_noise;
    const bool a = within(sx, 6.8e-9, 0.10), c = within(se, 2.5e-7, 0.05);
    report(4, "parameter recovery", a && c,
           {check_line(a, "mean sig2_x = " + sci(sx) + ", target 6.8e-9 +-10%"),
            check_line(c, "mean sig2_eps = " + sci(se) + ", target 2.5e-7 +-5%")});
  }

  // ---- Criterion 5: closed-form standard deviation ---------------------
  {
    const double sd = std::sqrt(predicted_variance_w(1.0 / 252.0, 0.04009, 5e-4, 1.0 / (252.0 * 23400.0)));
    report(5, "closed-form Whittle standard deviation", within(sd, 1.0246e-5, 1e-3),
           {"sqrt(predicted_variance_w) = " + sci(sd, 6) + ", target 1.0246e-5 +-1e-3 rel"});
  }

  // ---- Criterion 6: short path ------------------------------------------
  {
    const auto rep = run(config("table2"), threads);
    const double m1 = rep.at(Estimator::m1).rmse;
    report(6, "short-path design (N = 2340)", within(m1, 2.06e-5, 0.25),
           {"RMSE(m1) = " + sci(m1) + ", target 2.06e-5 +-25%"});
  }

  // ---- Criterion 7: low noise -------------------------------------------
  {
    const auto cfg = config("table3");
    const auto rep = run(cfg, threads);
    const double m1 = rep.at(Estimator::m1).rmse;
    const auto& s1 = rep.at(Estimator::s1);
    const double frac = static_cast<double>(s1.degenerate) / static_cast<double>(s1.n);
    const bool a = within(m1, 1.46e-5, 0.25), c = frac >= 0.95;
    report(7, "low-noise design", a && c,
           {check_line(a, "RMSE(m1) = " + sci(m1) + ", target 1.46e-5 +-25%"),
            check_line(c, "s1 degenerate on " + std::to_string(s1.degenerate) + " / " + std::to_string(s1.n) +
                              " paths (" + sci(frac, 3) + "), need >= 95%")});
  }

  // ---- Criterion 8: Brownian and OU -------------------------------------
  {
    const auto bm = run(config("table1a_brownian"), threads);
    const auto ou = run(config("table1b_ou"), threads);
    const double rb = bm.at(Estimator::m1).rmse, ro = ou.at(Estimator::m1).rmse;
    const bool a = within(rb, 4.46e-6, 0.25), c = within(ro, 4.44e-6, 0.25);
    report(8, "Brownian and OU designs", a && c,
           {check_line(a, "Brownian RMSE(m1) = " + sci(rb) + ", target 4.46e-6 +-25%"),
            check_line(c, "OU RMSE(m1) = " + sci(ro) + ", target 4.44e-6 +-25%")});
  }

  // ---- Criterion 9: MA(4) order selection --------------------------------
  {
    const double expected[4] = {0.806, -0.603, -0.101, 0.410};
    auto evaluate = [&](const ExperimentConfig& cfg, std::vector<std::string>& details) {
      const auto rep = run_order_selection(cfg, 8, 1);
      if (rep.selections.empty()) {
        details.push_back("[miss] order selection failed");
        return false;
      }
      const auto& sel = rep.selections.front();
      const bool q_ok = sel.q_star == 4;
      details.push_back(check_line(q_ok, "q* = " + std::to_string(sel.q_star) + ", expected 4"));
      bool theta_ok = q_ok;
      std::string th = "theta_hat =";
      for (std::size_t m = 0; m < sel.fit.noise.theta.size(); ++m) {
        th += " " + sci(sel.fit.noise.theta[m], 3);
        if (m < 4) theta_ok = theta_ok && std::abs(sel.fit.noise.theta[m] - expected[m]) <= 0.05;
      }
      details.push_back(check_line(theta_ok, th + "; table row (0.806, -0.603, -0.101, 0.410) +-0.05"));
      bool order_ok = true;
      for (std::size_t q = 1; q < sel.table.size(); ++q) {
        if (!sel.table[q].fit || !sel.table[q - 1].fit) {
          order_ok = false;
          continue;
        }
        const double prev = sel.table[q - 1].fit->aicc, cur = sel.table[q].fit->aicc;
        order_ok = order_ok && (q <= 4 ? cur < prev : cur > prev);
      }
      details.push_back(check_line(order_ok, "AICC falls to q = 4 and rises after it"));
      return q_ok && theta_ok && order_ok;
    };

    std::vector<std::string> details;
    const auto cfg = config("table4");
    const bool ok = evaluate(cfg, details);
    report(9, "MA(4) order selection with theta = (0.8, -0.6, 0.1, 0.4)", ok, details);

    // Diagnostic only: the same path with the third coefficient negated.
    auto alt = cfg;
    alt.noise.theta[2] = -0.1;
    std::vector<std::string> alt_details;
    const bool alt_ok = evaluate(alt, alt_details);
    std::cout << "INFO  criterion 9 with theta_3 = -0.1 instead: " << (alt_ok ? "would pass" : "would fail")
              << '\n';
    for (const auto& d : alt_details) std::cout << "        " << d << '\n';
  }

  // ---- Criterion 10: exact identities -----------------------------------
  {
    std::vector<std::string> details;
    bool all = true;
    auto add = [&](bool ok, const std::string& text) {
      all = all && ok;
      details.push_back(check_line(ok, text));
    };

    const Grid g = Grid::trading_day();
    double parseval = 0.0, td_gap = 0.0, kernel_sum = 0.0, ratio_lo = 1.0, ratio_hi = 0.0;
    bool tsrv_exact = true;
    for (std::uint64_t path = 0; path < 5; ++path) {
      const auto latent = simulate_heston(HestonParams{}, g, substream_seed(77, path, Stream::latent));
      const auto obs = observe(latent, NoiseSpec::white(2.5e-7), substream_seed(77, path, Stream::noise));
      const auto inc = increments(obs);
      const auto per = periodogram(inc);
      const double energy = std::inner_product(inc.d.begin(), inc.d.end(), inc.d.begin(), 0.0);
      const double spec = std::accumulate(per.s.begin(), per.s.end(), 0.0);
      parseval = std::max(parseval, std::abs(energy - spec) / energy);

      const auto fit = fit_white(per);
      const auto rc = multiscale_ratio(fit, g);
      for (std::size_t k = 0; k < g.n(); ++k) {
        ratio_lo = std::min(ratio_lo, rc.l[k]);
        ratio_hi = std::max(ratio_hi, rc.l[k]);
      }
      const auto kern = kernel_from_ratio(rc);
      const double lsum = std::accumulate(kern.l.begin(), kern.l.end(), 0.0);
      kernel_sum = std::max(kernel_sum, std::abs(lsum - rc.l[0]));
      if (path == 0) {
        const double f = multiscale_m1(per, fit).value;
        td_gap = std::abs(time_domain_m1(inc.d, kern) - f) / f;
      }
      tsrv_exact = tsrv_exact && tsrv_avg(obs.y, 1).value == realized_volatility(obs.y);
    }
    add(parseval <= 1e-12, "Parseval: max relative gap " + sci(parseval, 2) + " <= 1e-12");
    add(td_gap <= 1e-10, "time-domain m1 vs frequency-domain m1: relative gap " + sci(td_gap, 2) + " <= 1e-10");
    add(kernel_sum <= 1e-12, "sum of kernel vs L_0: max gap " + sci(kernel_sum, 2) + " <= 1e-12");
    add(tsrv_exact, "tsrv_avg(K = 1) == b bit for bit");

    const double T = 1.0 / 252.0, dt = T / 23400.0, tau = 0.04009, se = 5e-4;
    const double id = predicted_variance_w(T, tau, se, dt) * fisher_matrix(T, tau, se).i_tt;
    const double id_gap = std::abs(id - T * T * std::sqrt(dt)) / (T * T * std::sqrt(dt));
    add(id_gap <= 1e-14, "predicted_variance_w * i_tt vs T^2 sqrt(dt): relative gap " + sci(id_gap, 2));

    const auto im1 = index_of(t1cfg, Estimator::m1), ib = index_of(t1cfg, Estimator::b);
    std::size_t violations = 0;
    for (const auto& p : t1.paths) {
      if (!p.failed && p.values[im1] > p.values[ib]) ++violations;
    }
    add(violations == 0, "m1 <= b on all " + std::to_string(t1.paths.size()) + " default-design paths (" +
                             std::to_string(violations) + " violations)");
    add(ratio_lo >= 0.0 && ratio_hi <= 1.0, "fitted ratio within [0, 1]: range [" + sci(ratio_lo, 3) + ", " +
                                                sci(ratio_hi, 3) + "]");
    report(10, "exact identities", all, details);
  }

  // ---- Criterion 11: determinism across thread counts -------------------
  {
    auto cfg = t1cfg;
    cfg.paths = 120;
    cfg.estimators.push_back(Estimator::s2);
    const auto a = summary_csv(run_experiment(cfg, 1));
    const auto b = summary_csv(run_experiment(cfg, 1));
    const auto c = summary_csv(run_experiment(cfg, 2));
    const auto d = summary_csv(run_experiment(cfg, 5));
    const bool ok = a == b && a == c && a == d;
    report(11, "byte-identical summaries across runs and thread counts", ok,
           {"threads 1, 1, 2, 5 on " + std::to_string(cfg.paths) + " paths: " + (ok ? "identical" : "differ")});
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criterion(s) FAILED") << " in "
            << sci(secs, 3) << " s\n";
  return failures == 0 ? 0 : 1;
}
