// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wdmtwin/fiber.hpp"
#include "wdmtwin/grid.hpp"
#include "wdmtwin/link.hpp"

#include "json.hpp"

namespace wdmtwin {

struct EdgeSpec {
  std::string a, b;
  FiberSpan span;
};

struct EdfaSpec {
  std::string node;
  double setpoint_dbm = 18.0;
  std::uint64_t device_seed = 0;
};

struct SimSpec {
  double osa_sigma_db = 0.05;
  std::uint64_t master_seed = 1;
  bool device_variation = false;
};

/// Parsed topology file. Paths are lists of hop strings "A-B" with a
/// trailing '*' when the signal is amplified at B ("A-B*"); repeated
/// amplification visits at a node consume that node's devices in order.
struct Topology {
  ChannelGrid grid;
  std::vector<std::string> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<EdfaSpec> edfas;
  std::map<std::string, std::vector<std::string>> paths;
  SimSpec sim;
  std::string trx_truth_csv;  // resolved against the topology file directory
  double threshold_db = 12.5;

  /// Source directory of the file this topology was loaded from (used to
  /// resolve relative CSV references); empty for in-memory topologies.
  std::filesystem::path base_dir;

  const EdgeSpec& find_edge(const std::string& a, const std::string& b) const;
  std::vector<std::size_t> device_indices_at(const std::string& node) const;
};

Topology topology_from_json(const nlohmann::json& j);
nlohmann::json topology_to_json(const Topology& t);
Topology load_topology(const std::filesystem::path& path);
void save_topology(const Topology& t, const std::filesystem::path& path);

/// One resolved step of a path: a fiber hop, optionally followed by an
/// amplification at the hop's destination using a specific device.
struct ResolvedHop {
  FiberSpan span;
  std::string from, to;
  bool amplified = false;
  std::size_t edfa_index = 0;  // into Topology::edfas when amplified
};

std::vector<ResolvedHop> resolve_path(const Topology& t,
                                      const std::string& path_id);

/// Twin cascade for a path: every amplification site references the single
/// shared twin model (setpoints still come from the per-device config).
LinkPath build_twin_path(const Topology& t, const std::string& path_id,
                         std::shared_ptr<const EdfaTwinModel> model);

/// Four-node network used by the bundled scenario: access node STN, hub RDG
/// (4 amplifiers), spur PGT (2 amplifiers), passive FRX. Includes the
/// training loop STN-RDG*-STN plus short (439.4 km) and long (592.4 km)
/// round trips.
Topology default_scenario_topology();

/// Smooth reference curve for the transceiver back-to-back SNR, peaked at
/// the band center. Used to seed the scenario's truth CSV.
double default_trx_truth_snr_db(double lambda_nm, const ChannelGrid& grid);

}  // namespace wdmtwin
