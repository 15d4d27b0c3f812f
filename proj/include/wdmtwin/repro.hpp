// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wdmtwin/topology.hpp"

namespace wdmtwin {

/// End-to-end scenario runner: materializes the bundled four-node network,
/// probes and trains the amplifier twin through the access loop, optimizes
/// the launch profile for the short and long round trips with all three
/// twin variants, evaluates every candidate on the hidden truth, and writes
/// a summary table. All outputs are deterministic in the seeds.
struct ReproOptions {
  std::filesystem::path workdir;
  std::uint64_t seed_override = 0;  // 0: keep config seeds
  bool quick = false;               // reduced probe/epoch/iteration counts
  int threads = 0;                  // 0: WDMTWIN_THREADS or hardware default
};

struct ReproRow {
  std::string link;
  std::string profile;        // flat | full | no-nl | no-nl-no-trx
  double min_margin_db = 0.0;      // on truth
  double min_margin_lambda_nm = 0.0;
  double lw_margin_db = 0.0;       // margin at the longest wavelength
};

struct ReproSummary {
  std::vector<ReproRow> rows;
  double max_osnr_err_flat_long_db = 0.0;  // twin vs truth, flat profile
  double max_snr_err_flat_long_db = 0.0;
};

ReproSummary run_repro_paper(const ReproOptions& options);

/// Writes topology.json and the transceiver truth CSV for the bundled
/// scenario into dir and returns the topology (base_dir set).
Topology materialize_default_scenario(const std::filesystem::path& dir,
                                      std::uint64_t seed_override = 0);

int effective_thread_count(int requested);

}  // namespace wdmtwin
