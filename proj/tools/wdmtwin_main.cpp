// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface: probe -> train -> predict -> optimize -> evaluate,
// plus the one-shot scenario runner. Exit codes: 0 success, 1 usage,
// 2 config/validation, 3 numerical failure (diagnostics file written).
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "wdmtwin/csv.hpp"
#include "wdmtwin/errors.hpp"
#include "wdmtwin/field_sim.hpp"
#include "wdmtwin/optimize.hpp"
#include "wdmtwin/repro.hpp"
#include "wdmtwin/topology.hpp"
#include "wdmtwin/train.hpp"
#include "wdmtwin/version.hpp"

namespace fs = std::filesystem;
using namespace wdmtwin;

namespace {

struct CommonArgs {
  std::string topology;
  std::string path_id;
  std::uint64_t seed_override = 0;
};

Topology load_topo(const CommonArgs& a) {
  Topology t = load_topology(a.topology);
  if (a.seed_override != 0) t.sim.master_seed = a.seed_override;
  return t;
}

PowerProfile resolve_profile(const ChannelGrid& grid,
                             const std::string& spec_str, double total_dbm) {
  if (spec_str == "flat") return flat_profile(grid, total_dbm);
  return load_profile_csv(grid, spec_str);
}

std::filesystem::path diagnostics_target(const std::string& out_file) {
  if (!out_file.empty()) {
    return fs::path(out_file).parent_path() / "wdmtwin-diagnostics.txt";
  }
  return fs::path("wdmtwin-diagnostics.txt");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) + " " + kVersion +
               " - WDM link digital twin toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string config_file, probes_file, model_file, trx_file, out_file;
  std::string curve_file, profile_spec = "flat", toggles_name_str = "full";
  std::string variant = "full", trace_file, workdir;
  int count = 250;
  double total_dbm = 18.0;
  bool quick = false;

  auto add_common = [&](CLI::App* cmd, bool with_path = true) {
    cmd->add_option("--topology", common.topology, "topology JSON file")
        ->required();
    if (with_path) {
      cmd->add_option("--path", common.path_id, "path id from the topology")
          ->required();
    }
    cmd->add_option("--seed", common.seed_override,
                    "override every configured seed");
  };

  CLI::App* probe = app.add_subcommand("probe", "measure random probes");
  add_common(probe);
  probe->add_option("--count", count, "number of probes");
  probe->add_option("--config", config_file, "training config JSON");
  probe->add_option("--out", out_file, "output probes CSV")->required();

  CLI::App* train = app.add_subcommand("train", "fit the amplifier twin");
  add_common(train);
  train->add_option("--probes", probes_file, "probes CSV")->required();
  train->add_option("--config", config_file, "training config JSON");
  train->add_option("--out", model_file, "output model JSON")->required();
  train->add_option("--curve", curve_file, "training curve CSV");

  CLI::App* predict_cmd =
      app.add_subcommand("predict", "twin prediction for a launch profile");
  add_common(predict_cmd);
  predict_cmd->add_option("--model", model_file, "twin model JSON")
      ->required();
  predict_cmd->add_option("--trx", trx_file, "transceiver b2b CSV");
  predict_cmd->add_option("--profile", profile_spec,
                          "'flat' or a profile CSV");
  predict_cmd->add_option("--total-dbm", total_dbm,
                          "total power for the flat profile");
  predict_cmd->add_option("--toggles", toggles_name_str,
                          "full|no-nl|no-nl-no-trx");
  predict_cmd->add_option("--out", out_file, "report CSV")->required();

  CLI::App* optimize_cmd =
      app.add_subcommand("optimize", "optimize the launch power profile");
  add_common(optimize_cmd);
  optimize_cmd->add_option("--model", model_file, "twin model JSON")
      ->required();
  optimize_cmd->add_option("--trx", trx_file, "transceiver b2b CSV");
  optimize_cmd->add_option("--variant", variant, "full|no-nl|no-nl-no-trx");
  optimize_cmd->add_option("--config", config_file, "optimizer config JSON");
  optimize_cmd->add_option("--out", out_file, "optimized profile CSV")
      ->required();
  optimize_cmd->add_option("--trace", trace_file, "cost trace CSV");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "ground-truth evaluation of a profile");
  add_common(evaluate);
  evaluate->add_option("--profile", profile_spec, "'flat' or a profile CSV");
  evaluate->add_option("--total-dbm", total_dbm,
                       "total power for the flat profile");
  evaluate->add_option("--out", out_file, "truth report CSV")->required();

  CLI::App* repro =
      app.add_subcommand("repro-paper", "run the bundled two-link scenario");
  repro->add_option("--workdir", workdir, "output directory")->required();
  repro->add_option("--seed", common.seed_override,
                    "override every configured seed");
  repro->add_flag("--quick", quick, "reduced probe/epoch/iteration counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(probe)) {
      const Topology topo = load_topo(common);
      TrainConfig cfg = config_file.empty() ? TrainConfig{}
                                            : load_train_config(config_file);
      if (common.seed_override != 0) cfg.seed = common.seed_override;
      const NetworkSim sim(topo);
      const auto probes = generate_probes(sim, common.path_id, cfg, count);
      save_probes_csv(probes, topo.grid, out_file,
                      hash_of_file(common.topology));
    } else if (app.got_subcommand(train)) {
      const Topology topo = load_topo(common);
      TrainConfig cfg = config_file.empty() ? TrainConfig{}
                                            : load_train_config(config_file);
      if (common.seed_override != 0) cfg.seed = common.seed_override;
      const auto probes = load_probes_csv(topo.grid, probes_file);
      if (static_cast<int>(probes.size()) < cfg.n_train) {
        throw std::invalid_argument(
            "train: probe file has fewer probes than n_train");
      }
      const int n_val = std::min<int>(cfg.n_val,
                                      static_cast<int>(probes.size()) -
                                          cfg.n_train);
      const LinkPath path = build_twin_path(topo, common.path_id, nullptr);
      const TrainResult res = train_twin(
          std::span<const ProbeRecord>(probes.data(),
                                       static_cast<std::size_t>(cfg.n_train)),
          std::span<const ProbeRecord>(probes.data() + cfg.n_train,
                                       static_cast<std::size_t>(n_val)),
          path, cfg);
      save_twin(res.model, model_file);
      if (!curve_file.empty()) {
        save_curve_csv(res.curve, curve_file, hash_of_file(common.topology),
                       twin_hash(res.model));
      }
      std::cout << "final train mse " << res.model.metadata.final_train_mse
                << ", val mse " << res.model.metadata.final_val_mse << "\n";
    } else if (app.got_subcommand(predict_cmd)) {
      const Topology topo = load_topo(common);
      auto model =
          std::make_shared<const EdfaTwinModel>(load_twin(model_file));
      const LinkPath path = build_twin_path(topo, common.path_id, model);
      const PowerProfile launch =
          resolve_profile(topo.grid, profile_spec, total_dbm);
      const Toggles toggles = toggles_from_name(toggles_name_str);
      std::optional<TrxPenaltyModel> trx;
      if (!trx_file.empty()) trx = load_trx_csv(trx_file);
      const SnrReport rep = predict(path, launch, trx ? &*trx : nullptr,
                                    toggles, topo.threshold_db);
      save_report_csv(rep, out_file, hash_of_file(common.topology),
                      twin_hash(*model));
    } else if (app.got_subcommand(optimize_cmd)) {
      const Topology topo = load_topo(common);
      auto model =
          std::make_shared<const EdfaTwinModel>(load_twin(model_file));
      const LinkPath path = build_twin_path(topo, common.path_id, model);
      OptConfig cfg =
          config_file.empty() ? OptConfig{} : load_opt_config(config_file);
      cfg.variant = variant;
      if (common.seed_override != 0) cfg.seed = common.seed_override;
      std::optional<TrxPenaltyModel> trx;
      if (!trx_file.empty()) trx = load_trx_csv(trx_file);
      const OptimizeResult res =
          optimize_profile(path, trx ? &*trx : nullptr, cfg);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
      save_profile_csv(topo.grid, res.profile, out_file,
                       hash_of_file(common.topology), twin_hash(*model));
      if (!trace_file.empty()) {
        save_trace_csv(res.trace, trace_file, hash_of_file(common.topology),
                       twin_hash(*model));
      }
      std::cout << "hard min SNR under the full twin: "
                << format_fixed(res.hard_min_snr_db_full) << " dB\n";
    } else if (app.got_subcommand(evaluate)) {
      const Topology topo = load_topo(common);
      const NetworkSim sim(topo);
      const PowerProfile launch =
          resolve_profile(topo.grid, profile_spec, total_dbm);
      const SnrReport rep = sim.ground_truth_snr(common.path_id, launch);
      save_report_csv(rep, out_file, hash_of_file(common.topology), 0);
    } else if (app.got_subcommand(repro)) {
      ReproOptions opts;
      opts.workdir = workdir;
      opts.seed_override = common.seed_override;
      opts.quick = quick;
      const ReproSummary summary = run_repro_paper(opts);
      std::cout << read_file(fs::path(workdir) / "summary.txt");
      (void)summary;
    }
  } catch (const NumericalError& e) {
    std::ofstream diag(diagnostics_target(out_file));
    diag << kToolName << " " << kVersion << " numerical failure\n"
         << e.what() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::ofstream diag(diagnostics_target(out_file));
    diag << kToolName << " " << kVersion << " numerical failure\n"
         << e.what() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
