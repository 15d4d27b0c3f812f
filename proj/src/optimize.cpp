// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "wdmtwin/csv.hpp"
#include "wdmtwin/errors.hpp"

namespace wdmtwin {

void OptConfig::validate() const {
  if (tau_schedule.empty() || iters_per_stage <= 0) {
    throw std::invalid_argument("opt config: empty schedule or iterations");
  }
  for (std::size_t i = 0; i < tau_schedule.size(); ++i) {
    if (!(tau_schedule[i] > 0.0) ||
        (i > 0 && tau_schedule[i] < tau_schedule[i - 1])) {
      throw std::invalid_argument("opt config: tau schedule must be positive "
                                  "and ascending");
    }
  }
  if (!(max_dynamic_range_db > 0.0)) {
    throw std::invalid_argument("opt config: dynamic range must be > 0");
  }
  (void)toggles_from_name(variant);
}

OptConfig opt_config_from_json(const nlohmann::json& j) {
  OptConfig c;
  c.p_tot_dbm = j.value("p_tot_dbm", c.p_tot_dbm);
  c.variant = j.value("variant", c.variant);
  if (j.contains("tau_schedule")) {
    c.tau_schedule = j.at("tau_schedule").get<std::vector<double>>();
  }
  c.iters_per_stage = j.value("iters_per_stage", c.iters_per_stage);
  c.adam.lr = j.value("lr", c.adam.lr);
  if (j.contains("adam")) {
    const auto& ja = j.at("adam");
    c.adam.beta1 = ja.value("beta1", c.adam.beta1);
    c.adam.beta2 = ja.value("beta2", c.adam.beta2);
    c.adam.eps = ja.value("eps", c.adam.eps);
  }
  c.max_dynamic_range_db = j.value("max_dynamic_range_db",
                                   c.max_dynamic_range_db);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

OptConfig load_opt_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config: JSON parse error in " +
                                path.string() + ": " + e.what());
  }
  return opt_config_from_json(j);
}

PowerProfile parameterize(const ChannelGrid& grid,
                          std::span<const double> theta, double p_tot_dbm) {
  if (static_cast<int>(theta.size()) != grid.n_ch) {
    throw std::invalid_argument("parameterize: theta size mismatch");
  }
  const double shift = *std::max_element(theta.begin(), theta.end());
  std::vector<double> w(theta.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    w[i] = std::exp(theta[i] - shift);
    sum += w[i];
  }
  const double p_tot = dbm_to_mw(p_tot_dbm);
  for (double& x : w) x *= p_tot / sum;
  return make_profile(grid, std::move(w));
}

double smooth_min_db(std::span<const double> xs_db, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("smooth_min: tau must be > 0");
  const double m = *std::min_element(xs_db.begin(), xs_db.end());
  double s = 0.0;
  for (double x : xs_db) s += std::exp(-tau * (x - m));
  return m - std::log(s) / tau;
}

ad::Value smooth_min_db(std::span<const ad::Value> xs_db, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("smooth_min: tau must be > 0");
  if (xs_db.empty()) throw std::invalid_argument("smooth_min: empty input");
  double m = xs_db[0].value();
  for (const ad::Value& x : xs_db) m = std::min(m, x.value());
  // detached shift keeps the exponentials bounded; gradient is unchanged
  ad::Value s = ad::exp((xs_db[0] - m) * -tau);
  for (std::size_t i = 1; i < xs_db.size(); ++i) {
    s = s + ad::exp((xs_db[i] - m) * -tau);
  }
  return m - ad::ln(s) / tau;
}

namespace {

/// Recentre to zero mean, then clamp so the dB spread stays within range.
void project_theta(std::vector<double>& theta, double max_range_db) {
  const double mean =
      std::accumulate(theta.begin(), theta.end(), 0.0) /
      static_cast<double>(theta.size());
  const double half = max_range_db * M_LN10 / 20.0;  // dB -> nat, half-range
  for (double& t : theta) {
    t -= mean;
    t = std::clamp(t, -half, half);
  }
}

}  // namespace

OptimizeResult optimize_profile(const LinkPath& path,
                                const TrxPenaltyModel* trx,
                                const OptConfig& cfg,
                                std::span<const double> theta0) {
  cfg.validate();
  const ChannelGrid& grid = path.grid;
  const auto n = static_cast<std::size_t>(grid.n_ch);
  OptimizeResult result;

  for (const PathElement& el : path.elements) {
    if (std::holds_alternative<AmpElement>(el)) {
      const auto& amp = std::get<AmpElement>(el);
      if (amp.model && !amp.model->metadata.trained) {
        result.warnings.push_back("optimizing with an untrained twin model");
        break;
      }
    }
  }

  const Toggles toggles = toggles_from_name(cfg.variant);
  std::vector<double> theta(n, 0.0);
  if (!theta0.empty()) {
    if (theta0.size() != n) {
      throw std::invalid_argument("optimize: theta0 size mismatch");
    }
    theta.assign(theta0.begin(), theta0.end());
    project_theta(theta, cfg.max_dynamic_range_db);
  }
  const double p_tot_mw = dbm_to_mw(cfg.p_tot_dbm);

  int global_iter = 0;
  // best iterate across the whole run, judged by the hard minimum (the
  // smooth cost steers the steps; the hard minimum is what is delivered)
  double best_hard_min = -std::numeric_limits<double>::infinity();
  std::vector<double> best_hard_theta = theta;
  for (double tau : cfg.tau_schedule) {
    AdamOptimizer adam(n, cfg.adam);
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> best_theta = theta;
    for (int it = 0; it < cfg.iters_per_stage; ++it) {
      ad::Tape tape;
      std::vector<ad::Value> th;
      th.reserve(n);
      for (double t : theta) th.push_back(tape.leaf(t));
      // softmax with detached shift
      double shift = theta[0];
      for (double t : theta) shift = std::max(shift, t);
      std::vector<ad::Value> expw;
      expw.reserve(n);
      for (const ad::Value& t : th) expw.push_back(ad::exp(t - shift));
      ad::Value denom = ad::sum(std::span<const ad::Value>(expw));
      std::vector<ad::Value> launch;
      launch.reserve(n);
      for (const ad::Value& e : expw) {
        launch.push_back(e * p_tot_mw / denom);
      }
      std::vector<ad::Value> snr =
          cascade_snr_db(path, launch, trx, toggles);
      ad::Value cost = -smooth_min_db(std::span<const ad::Value>(snr), tau);
      if (!std::isfinite(cost.value())) {
        throw NumericalError("optimization diverged at iteration " +
                             std::to_string(global_iter));
      }
      tape.backward(cost);
      std::vector<double> grad(n);
      for (std::size_t i = 0; i < n; ++i) grad[i] = tape.grad(th[i]);

      if (cost.value() < best_cost) {
        best_cost = cost.value();
        best_theta = theta;
      }
      double hard_min = snr[0].value();
      for (const ad::Value& s : snr) hard_min = std::min(hard_min, s.value());
      if (hard_min > best_hard_min) {
        best_hard_min = hard_min;
        best_hard_theta = theta;
      }
      result.trace.push_back(TracePoint{++global_iter, tau, best_cost});

      adam.step(grad, theta);
      project_theta(theta, cfg.max_dynamic_range_db);
    }
    theta = best_theta;
  }

  result.profile = parameterize(grid, best_hard_theta, cfg.p_tot_dbm);

  // hard minimum under the full twin, for reporting
  std::vector<double> snr_full = cascade_snr_db<double>(
      path, result.profile.p_mw, trx, Toggles{true, true}, nullptr, nullptr);
  result.hard_min_snr_db_full =
      *std::min_element(snr_full.begin(), snr_full.end());
  return result;
}

void save_trace_csv(std::span<const TracePoint> trace,
                    const std::filesystem::path& p, std::uint64_t config_hash,
                    std::uint64_t model_hash) {
  CsvWriter w(p);
  write_standard_comments(w, config_hash, model_hash);
  w.header({"iter", "tau", "cost_db"});
  for (const TracePoint& pt : trace) {
    w.row({std::to_string(pt.iter), format_fixed(pt.tau),
           format_fixed(pt.cost_db)});
  }
}

}  // namespace wdmtwin
