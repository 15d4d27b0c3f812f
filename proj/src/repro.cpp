// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/repro.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <thread>

#include "wdmtwin/csv.hpp"
#include "wdmtwin/field_sim.hpp"
#include "wdmtwin/hash.hpp"
#include "wdmtwin/rng.hpp"
#include "wdmtwin/optimize.hpp"
#include "wdmtwin/topology.hpp"
#include "wdmtwin/train.hpp"
#include "wdmtwin/version.hpp"

namespace wdmtwin {

int effective_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WDMTWIN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 4u));
}

namespace {

struct OptTask {
  std::string link;
  std::string variant;
  OptimizeResult result;
};

std::string table_line(const ReproRow& r, double flat_min, double flat_lw) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%-6s %-13s %10.3f %12.3f %10.3f %12.3f", r.link.c_str(),
                r.profile.c_str(), r.min_margin_db,
                r.min_margin_db - flat_min, r.lw_margin_db,
                r.lw_margin_db - flat_lw);
  return std::string(buf);
}

ReproRow row_from_report(const std::string& link, const std::string& profile,
                         const SnrReport& truth) {
  ReproRow r;
  r.link = link;
  r.profile = profile;
  r.min_margin_db = truth.min_margin_db();
  r.min_margin_lambda_nm = truth.lambda_nm[truth.argmin_margin()];
  // channel 0 carries the lowest frequency, i.e. the longest wavelength
  r.lw_margin_db = truth.margin_db.front();
  return r;
}

}  // namespace

Topology materialize_default_scenario(const std::filesystem::path& dir,
                                      std::uint64_t seed_override) {
  std::filesystem::create_directories(dir);
  Topology topo = default_scenario_topology();
  if (seed_override != 0) topo.sim.master_seed = seed_override;
  topo.base_dir = dir;

  // transceiver truth curve (dense) for the simulator
  std::vector<double> lam, snr;
  const double lo = topo.grid.lambda_nm(topo.grid.n_ch - 1);
  const double hi = topo.grid.lambda_nm(0);
  const int n_pts = 25;
  for (int k = 0; k < n_pts; ++k) {
    const double l = lo + (hi - lo) * k / (n_pts - 1);
    lam.push_back(l);
    snr.push_back(default_trx_truth_snr_db(l, topo.grid));
  }
  save_trx_csv(dir / "trx_truth.csv", lam, snr);
  save_topology(topo, dir / "topology.json");
  return topo;
}

ReproSummary run_repro_paper(const ReproOptions& options) {
  namespace fs = std::filesystem;
  const fs::path dir = options.workdir;
  Topology topo = materialize_default_scenario(dir, options.seed_override);
  const std::uint64_t config_hash = hash_of_file(dir / "topology.json");

  NetworkSim sim(topo);

  // back-to-back transceiver measurement for the twin (8 wavelengths)
  {
    std::vector<double> lam, snr;
    const double lo = topo.grid.lambda_nm(topo.grid.n_ch - 1);
    const double hi = topo.grid.lambda_nm(0);
    for (int k = 0; k < 8; ++k) {
      const double l = lo + (hi - lo) * k / 7.0;
      lam.push_back(l);
      snr.push_back(sim.trx_truth().snr_db_at(l));
    }
    save_trx_csv(dir / "trx_b2b.csv", lam, snr);
  }
  const TrxPenaltyModel trx = load_trx_csv(dir / "trx_b2b.csv");

  TrainConfig tcfg;
  if (options.seed_override != 0) tcfg.seed = options.seed_override;
  if (options.quick) {
    tcfg.n_train = 40;
    tcfg.n_val = 10;
    tcfg.epochs = 80;
  }
  std::vector<ProbeRecord> probes =
      generate_probes(sim, "train", tcfg, tcfg.n_train + tcfg.n_val);
  save_probes_csv(probes, topo.grid, dir / "probes.csv", config_hash);

  const std::span<const ProbeRecord> train_span(probes.data(),
                                                static_cast<std::size_t>(tcfg.n_train));
  const std::span<const ProbeRecord> val_span(
      probes.data() + tcfg.n_train, static_cast<std::size_t>(tcfg.n_val));
  LinkPath train_path = build_twin_path(topo, "train", nullptr);
  TrainResult trained = train_twin(train_span, val_span, train_path, tcfg);
  save_twin(trained.model, dir / "model.json");
  const std::uint64_t model_hash = twin_hash(trained.model);
  save_curve_csv(trained.curve, dir / "curve.csv", config_hash, model_hash);

  auto model = std::make_shared<const EdfaTwinModel>(trained.model);

  const std::vector<std::string> links = {"short", "long"};
  const std::vector<std::string> variants = {"full", "no-nl", "no-nl-no-trx"};

  // flat-profile predictions and truth
  const PowerProfile flat = flat_profile(topo.grid, 18.0);
  ReproSummary summary;
  for (const std::string& link : links) {
    LinkPath path = build_twin_path(topo, link, model);
    SnrReport twin_rep =
        predict(path, flat, &trx, Toggles{true, true}, topo.threshold_db);
    save_report_csv(twin_rep, dir / ("twin_flat_" + link + ".csv"),
                    config_hash, model_hash);
    SnrReport truth_rep = sim.ground_truth_snr(link, flat);
    save_report_csv(truth_rep, dir / ("truth_flat_" + link + ".csv"),
                    config_hash, 0);
    if (link == "long") {
      for (int i = 0; i < topo.grid.n_ch; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        summary.max_osnr_err_flat_long_db = std::max(
            summary.max_osnr_err_flat_long_db,
            std::abs(twin_rep.osnr_db[idx] - truth_rep.osnr_db[idx]));
        summary.max_snr_err_flat_long_db = std::max(
            summary.max_snr_err_flat_long_db,
            std::abs(twin_rep.snr_db[idx] - truth_rep.snr_db[idx]));
      }
    }
  }

  // optimizations, fanned out across variants and links
  std::vector<OptTask> tasks;
  for (const std::string& link : links) {
    for (const std::string& variant : variants) {
      tasks.push_back(OptTask{link, variant, {}});
    }
  }
  const int threads = effective_thread_count(options.threads);
  auto run_task = [&](OptTask& task) {
    OptConfig ocfg;
    ocfg.variant = task.variant;
    if (options.quick) ocfg.iters_per_stage = 120;
    ocfg.seed = mix_seed(topo.sim.master_seed, hash_of_string(task.variant));
    LinkPath path = build_twin_path(topo, task.link, model);
    task.result = optimize_profile(path, &trx, ocfg);
  };
  if (threads <= 1) {
    for (OptTask& t : tasks) run_task(t);
  } else {
    std::size_t next = 0;
    while (next < tasks.size()) {
      std::vector<std::future<void>> wave;
      for (int k = 0; k < threads && next < tasks.size(); ++k, ++next) {
        wave.push_back(std::async(std::launch::async, run_task,
                                  std::ref(tasks[next])));
      }
      for (auto& f : wave) f.get();
    }
  }

  // evaluate everything on the truth, fixed order
  for (const std::string& link : links) {
    SnrReport truth_flat = sim.ground_truth_snr(link, flat);
    summary.rows.push_back(row_from_report(link, "flat", truth_flat));
    for (const std::string& variant : variants) {
      const OptTask* task = nullptr;
      for (const OptTask& t : tasks) {
        if (t.link == link && t.variant == variant) task = &t;
      }
      save_profile_csv(topo.grid, task->result.profile,
                       dir / ("profile_" + variant + "_" + link + ".csv"),
                       config_hash, model_hash);
      save_trace_csv(task->result.trace,
                     dir / ("trace_" + variant + "_" + link + ".csv"),
                     config_hash, model_hash);
      SnrReport truth_rep = sim.ground_truth_snr(link, task->result.profile);
      save_report_csv(truth_rep,
                      dir / ("truth_" + variant + "_" + link + ".csv"),
                      config_hash, 0);
      summary.rows.push_back(row_from_report(link, variant, truth_rep));
    }
  }

  // summary files
  {
    CsvWriter w(dir / "summary.csv");
    write_standard_comments(w, config_hash, model_hash);
    w.comment("margins evaluated on the ground-truth network");
    w.header({"link", "profile", "min_margin_db", "min_margin_lambda_nm",
              "lw_margin_db"});
    for (const ReproRow& r : summary.rows) {
      w.row({r.link, r.profile, format_fixed(r.min_margin_db),
             format_fixed(r.min_margin_lambda_nm),
             format_fixed(r.lw_margin_db)});
    }
  }
  {
    std::ofstream out(dir / "summary.txt");
    out << kToolName << " " << kVersion << " scenario summary\n";
    out << "max |OSNR twin-truth| on long link, flat profile: "
        << format_fixed(summary.max_osnr_err_flat_long_db) << " dB\n";
    out << "max |SNR twin-truth| on long link, flat profile: "
        << format_fixed(summary.max_snr_err_flat_long_db) << " dB\n\n";
    out << "link   profile        min_margin  d_min(flat)  lw_margin  "
           "d_lw(flat)\n";
    for (const std::string& link : links) {
      double flat_min = 0.0, flat_lw = 0.0;
      for (const ReproRow& r : summary.rows) {
        if (r.link == link && r.profile == "flat") {
          flat_min = r.min_margin_db;
          flat_lw = r.lw_margin_db;
        }
      }
      for (const ReproRow& r : summary.rows) {
        if (r.link == link) out << table_line(r, flat_min, flat_lw) << "\n";
      }
    }
  }
  return summary;
}

}  // namespace wdmtwin
