// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/topology.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace wdmtwin {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("topology: " + where + ": " + what);
}

double require_number(const nlohmann::json& j, const std::string& where,
                      const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    fail(where + "." + key, "missing or non-numeric field");
  }
  return j.at(key).get<double>();
}

double number_or(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

const EdgeSpec& Topology::find_edge(const std::string& a,
                                    const std::string& b) const {
  for (const EdgeSpec& e : edges) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e;
  }
  throw std::invalid_argument("topology: no edge between '" + a + "' and '" +
                              b + "'");
}

std::vector<std::size_t> Topology::device_indices_at(
    const std::string& node) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edfas.size(); ++i) {
    if (edfas[i].node == node) out.push_back(i);
  }
  return out;
}

Topology topology_from_json(const nlohmann::json& j) {
  Topology t;
  if (!j.contains("grid")) fail("grid", "missing section");
  const auto& jg = j.at("grid");
  const int n_ch = static_cast<int>(require_number(jg, "grid", "n_ch"));
  const double f0 = require_number(jg, "grid", "f0_thz");
  const double step = require_number(jg, "grid", "step_thz");
  const double b_ref = require_number(jg, "grid", "b_ref_ghz");
  if (!jg.contains("b_ch_ghz")) fail("grid.b_ch_ghz", "missing field");
  if (jg.at("b_ch_ghz").is_array()) {
    const auto b = jg.at("b_ch_ghz").get<std::vector<double>>();
    t.grid = make_grid(n_ch, f0, step, b, b_ref);
  } else {
    t.grid =
        make_uniform_grid(n_ch, f0, step, jg.at("b_ch_ghz").get<double>(), b_ref);
  }

  if (!j.contains("nodes") || !j.at("nodes").is_array()) {
    fail("nodes", "missing array");
  }
  for (const auto& n : j.at("nodes")) t.nodes.push_back(n.get<std::string>());
  std::set<std::string> node_set(t.nodes.begin(), t.nodes.end());
  if (node_set.size() != t.nodes.size()) fail("nodes", "duplicate node name");

  if (!j.contains("edges") || !j.at("edges").is_array()) {
    fail("edges", "missing array");
  }
  std::size_t ei = 0;
  for (const auto& je : j.at("edges")) {
    const std::string where = "edges[" + std::to_string(ei++) + "]";
    EdgeSpec e;
    e.a = je.value("a", "");
    e.b = je.value("b", "");
    if (!node_set.count(e.a)) fail(where + ".a", "unknown node '" + e.a + "'");
    if (!node_set.count(e.b)) fail(where + ".b", "unknown node '" + e.b + "'");
    e.span.length_km = require_number(je, where, "length_km");
    e.span.alpha_db_km = number_or(je, "alpha_db_km", 0.2);
    e.span.beta2_ps2_km = number_or(je, "beta2_ps2_km", -21.3);
    e.span.gamma_1_wkm = number_or(je, "gamma_1_wkm", 1.3);
    e.span.cr_1_wkmthz = number_or(je, "cr_1_wkmthz", 0.028);
    e.span.lumped_loss_db = number_or(je, "lumped_loss_db", 0.0);
    try {
      e.span.validate();
    } catch (const std::exception& ex) {
      fail(where, ex.what());
    }
    t.edges.push_back(std::move(e));
  }

  if (j.contains("edfas")) {
    std::size_t ai = 0;
    for (const auto& ja : j.at("edfas")) {
      const std::string where = "edfas[" + std::to_string(ai++) + "]";
      EdfaSpec a;
      a.node = ja.value("node", "");
      if (!node_set.count(a.node)) {
        fail(where + ".node", "unknown node '" + a.node + "'");
      }
      a.setpoint_dbm = require_number(ja, where, "setpoint_dbm");
      a.device_seed = ja.value("device_seed", std::uint64_t{0});
      t.edfas.push_back(std::move(a));
    }
  }

  if (j.contains("paths")) {
    for (const auto& [name, arr] : j.at("paths").items()) {
      if (!arr.is_array() || arr.empty()) {
        fail("paths." + name, "must be a non-empty array of hops");
      }
      std::vector<std::string> hops;
      for (const auto& h : arr) hops.push_back(h.get<std::string>());
      t.paths[name] = std::move(hops);
    }
  }

  if (j.contains("sim")) {
    const auto& js = j.at("sim");
    t.sim.osa_sigma_db = number_or(js, "osa_sigma_db", 0.05);
    t.sim.master_seed = js.value("master_seed", std::uint64_t{1});
    t.sim.device_variation = js.value("device_variation", false);
    if (t.sim.osa_sigma_db < 0.0) fail("sim.osa_sigma_db", "must be >= 0");
  }
  t.trx_truth_csv = j.value("trx_truth_csv", "");
  t.threshold_db = j.value("threshold_db", 12.5);

  // every path must resolve
  for (const auto& [name, hops] : t.paths) {
    (void)hops;
    resolve_path(t, name);
  }
  return t;
}

nlohmann::json topology_to_json(const Topology& t) {
  nlohmann::json j;
  j["grid"] = {{"n_ch", t.grid.n_ch},
               {"f0_thz", t.grid.f_thz.front()},
               {"step_thz", t.grid.spacing_ghz * 1e-3},
               {"b_ch_ghz", t.grid.b_ch_ghz.front()},
               {"b_ref_ghz", t.grid.b_ref_ghz}};
  j["nodes"] = t.nodes;
  j["edges"] = nlohmann::json::array();
  for (const EdgeSpec& e : t.edges) {
    j["edges"].push_back({{"a", e.a},
                          {"b", e.b},
                          {"length_km", e.span.length_km},
                          {"alpha_db_km", e.span.alpha_db_km},
                          {"beta2_ps2_km", e.span.beta2_ps2_km},
                          {"gamma_1_wkm", e.span.gamma_1_wkm},
                          {"cr_1_wkmthz", e.span.cr_1_wkmthz},
                          {"lumped_loss_db", e.span.lumped_loss_db}});
  }
  j["edfas"] = nlohmann::json::array();
  for (const EdfaSpec& a : t.edfas) {
    j["edfas"].push_back({{"node", a.node},
                          {"setpoint_dbm", a.setpoint_dbm},
                          {"device_seed", a.device_seed}});
  }
  j["paths"] = nlohmann::json::object();
  for (const auto& [name, hops] : t.paths) j["paths"][name] = hops;
  j["sim"] = {{"osa_sigma_db", t.sim.osa_sigma_db},
              {"master_seed", t.sim.master_seed},
              {"device_variation", t.sim.device_variation}};
  j["trx_truth_csv"] = t.trx_truth_csv;
  j["threshold_db"] = t.threshold_db;
  return j;
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open topology file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("topology: JSON parse error in " +
                                path.string() + ": " + e.what());
  }
  Topology t = topology_from_json(j);
  t.base_dir = path.parent_path();
  return t;
}

void save_topology(const Topology& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write topology file: " + path.string());
  }
  out << topology_to_json(t).dump(2) << "\n";
}

std::vector<ResolvedHop> resolve_path(const Topology& t,
                                      const std::string& path_id) {
  const auto it = t.paths.find(path_id);
  if (it == t.paths.end()) {
    throw std::invalid_argument("topology: unknown path '" + path_id + "'");
  }
  std::vector<ResolvedHop> hops;
  std::map<std::string, std::size_t> amp_visits;
  std::string prev_to;
  std::size_t hi = 0;
  for (const std::string& hop_str : it->second) {
    const std::string where =
        "paths." + path_id + "[" + std::to_string(hi++) + "]";
    std::string s = hop_str;
    bool amp = false;
    if (!s.empty() && s.back() == '*') {
      amp = true;
      s.pop_back();
    }
    const auto dash = s.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 >= s.size()) {
      fail(where, "hop must look like 'A-B' or 'A-B*'");
    }
    ResolvedHop h;
    h.from = s.substr(0, dash);
    h.to = s.substr(dash + 1);
    if (!prev_to.empty() && h.from != prev_to) {
      fail(where, "hop starts at '" + h.from + "' but previous hop ended at '" +
                      prev_to + "'");
    }
    prev_to = h.to;
    h.span = t.find_edge(h.from, h.to).span;
    if (amp) {
      const auto devices = t.device_indices_at(h.to);
      const std::size_t visit = amp_visits[h.to]++;
      if (visit >= devices.size()) {
        fail(where, "node '" + h.to + "' has " +
                        std::to_string(devices.size()) +
                        " amplifier(s) but the path needs more");
      }
      h.amplified = true;
      h.edfa_index = devices[visit];
    }
    hops.push_back(std::move(h));
  }
  return hops;
}

LinkPath build_twin_path(const Topology& t, const std::string& path_id,
                         std::shared_ptr<const EdfaTwinModel> model) {
  LinkPath path;
  path.path_id = path_id;
  path.grid = t.grid;
  for (const ResolvedHop& h : resolve_path(t, path_id)) {
    path.elements.emplace_back(h.span);
    if (h.amplified) {
      const EdfaSpec& spec = t.edfas[h.edfa_index];
      path.elements.emplace_back(AmpElement{
          spec.setpoint_dbm, model,
          spec.node + "#" + std::to_string(h.edfa_index)});
    }
  }
  return path;
}

Topology default_scenario_topology() {
  Topology t;
  t.grid = default_grid();
  t.nodes = {"STN", "RDG", "FRX", "PGT"};
  auto edge = [](const std::string& a, const std::string& b, double km) {
    EdgeSpec e;
    e.a = a;
    e.b = b;
    e.span.length_km = km;
    e.span.gamma_1_wkm = 1.1;  // this plant's fiber, low end of SSMF range
    return e;
  };
  t.edges.push_back(edge("STN", "RDG", 73.0));
  t.edges.push_back(edge("RDG", "FRX", 70.2));
  t.edges.push_back(edge("RDG", "PGT", 76.5));
  for (int i = 0; i < 4; ++i) {
    t.edfas.push_back({"RDG", 18.4, 1001ull + static_cast<std::uint64_t>(i)});
  }
  t.edfas.push_back({"PGT", 18.4, 1005ull});
  t.edfas.push_back({"PGT", 18.4, 1006ull});
  t.paths["train"] = {"STN-RDG*", "RDG-STN"};
  t.paths["short"] = {"STN-RDG*", "RDG-PGT*", "PGT-RDG*",
                      "RDG-FRX",  "FRX-RDG*", "RDG-STN"};
  t.paths["long"] = {"STN-RDG*", "RDG-PGT*", "PGT-RDG*", "RDG-PGT*",
                     "PGT-RDG*", "RDG-FRX",  "FRX-RDG*", "RDG-STN"};
  t.sim.osa_sigma_db = 0.05;
  t.sim.master_seed = 4394;
  t.sim.device_variation = true;
  t.trx_truth_csv = "trx_truth.csv";
  t.threshold_db = 12.5;
  return t;
}

double default_trx_truth_snr_db(double lambda_nm, const ChannelGrid& grid) {
  // Band-edge rolloff with a linear skew: the transceiver chain performs
  // worst at the short-wavelength end of the band.
  const double lo = grid.lambda_nm(grid.n_ch - 1);  // shortest wavelength
  const double hi = grid.lambda_nm(0);
  const double mid = 0.5 * (lo + hi);
  const double x = 2.0 * (lambda_nm - mid) / (hi - lo);
  return 18.0 - 1.8 * x * x + 0.8 * x;
}

}  // namespace wdmtwin
