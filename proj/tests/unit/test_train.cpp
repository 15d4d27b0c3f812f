// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "wdmtwin/csv.hpp"
#include "wdmtwin/rng.hpp"
#include "wdmtwin/train.hpp"

using namespace wdmtwin;

namespace {

Topology train_topology(double sigma_db) {
  Topology t;
  t.grid = default_grid();
  t.nodes = {"STN", "RDG"};
  EdgeSpec e;
  e.a = "STN";
  e.b = "RDG";
  e.span.length_km = 73.0;
  t.edges.push_back(e);
  t.edfas.push_back({"RDG", 18.0, 3101ull});
  t.paths["train"] = {"STN-RDG*", "RDG-STN"};
  t.sim.osa_sigma_db = sigma_db;
  t.sim.master_seed = 616;
  return t;
}

}  // namespace

TEST_CASE("degenerate probe config produces flat probes") {
  const Topology topo = train_topology(0.0);
  const NetworkSim sim(topo);
  TrainConfig cfg;
  cfg.offset_range_db = 0.0;
  cfg.p_tot_min_dbm = 18.0;
  cfg.p_tot_max_dbm = 18.0;
  const auto probes = generate_probes(sim, "train", cfg, 5);
  REQUIRE(probes.size() == 5);
  for (const ProbeRecord& p : probes) {
    for (double v : p.p_in_dbm) {
      CHECK(v == doctest::Approx(1.18758762624).epsilon(1e-9));
    }
  }
}

TEST_CASE("probe generation is reproducible and ids are distinct") {
  const Topology topo = train_topology(0.05);
  const NetworkSim sim(topo);
  TrainConfig cfg;
  const auto a = generate_probes(sim, "train", cfg, 250);
  const auto b = generate_probes(sim, "train", cfg, 250);
  REQUIRE(a.size() == 250);
  std::vector<std::int64_t> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].p_in_dbm == b[i].p_in_dbm);
    CHECK(a[i].p_out_dbm == b[i].p_out_dbm);
    ids.push_back(a[i].probe_id);
  }
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());

  TrainConfig cfg2;
  cfg2.seed = cfg.seed + 1;
  const auto c = generate_probes(sim, "train", cfg2, 250);
  CHECK(a[0].p_in_dbm != c[0].p_in_dbm);
}

TEST_CASE("probe totals span the configured power range") {
  const Topology topo = train_topology(0.05);
  const NetworkSim sim(topo);
  TrainConfig cfg;
  const auto probes = generate_probes(sim, "train", cfg, 250);
  double lo = 1e9, hi = -1e9;
  for (const ProbeRecord& p : probes) {
    double tot = 0.0;
    for (double v : p.p_in_dbm) tot += dbm_to_mw(v);
    const double dbm = mw_to_dbm(tot);
    lo = std::min(lo, dbm);
    hi = std::max(hi, dbm);
    CHECK(dbm >= 12.0 - 0.1);
    CHECK(dbm <= 21.0 + 0.1);
  }
  CHECK(lo < 12.5);
  CHECK(hi > 20.5);
}

TEST_CASE("training fits a truth the skeleton can represent") {
  // no tilt, no ripple, no instrument noise: only the noise-figure curve is
  // left for the nets to learn
  Topology topo = train_topology(0.0);
  GroundTruthParams params;
  params.tilt_coeff_db_per_db = 0.0;
  params.ripple_amp_db = {0.0, 0.0, 0.0};
  const NetworkSim sim(topo, params);

  TrainConfig cfg;
  cfg.n_train = 48;
  cfg.n_val = 12;
  cfg.epochs = 150;
  cfg.seed = 99;
  const auto probes = generate_probes(sim, "train", cfg, 60);
  const LinkPath path = build_twin_path(topo, "train", nullptr);
  const TrainResult res =
      train_twin(std::span<const ProbeRecord>(probes.data(), 48),
                 std::span<const ProbeRecord>(probes.data() + 48, 12), path,
                 cfg);

  const ValidationReport rep = validate_twin(
      res.model, path, std::span<const ProbeRecord>(probes.data() + 48, 12));
  INFO("rms gain err ", rep.rms_gain_err_db, " rms ase err ",
       rep.rms_ase_err_db);
  CHECK(rep.rms_gain_err_db < 0.02);

  // descent sanity: the late-epoch window does not exceed the early window
  const auto& curve = res.curve;
  const auto window_mean = [&](std::size_t from, std::size_t count) {
    double s = 0.0;
    for (std::size_t i = from; i < from + count; ++i) s += curve[i].train_mse;
    return s / count;
  };
  CHECK(window_mean(curve.size() - 50, 50) <= window_mean(0, 50));
  CHECK(res.model.metadata.trained);
}

TEST_CASE("gradient reaches every weight") {
  Topology topo = train_topology(0.05);
  const NetworkSim sim(topo);
  TrainConfig cfg;
  const auto probes = generate_probes(sim, "train", cfg, 8);
  const LinkPath path = build_twin_path(topo, "train", nullptr);
  const ChannelGrid& grid = topo.grid;
  EdfaTwinModel model = init_twin_model(grid, 7);
  // zero-initialized output layers would block gradient flow to the hidden
  // layers by construction; randomize all weights to probe connectivity
  {
    Rng rng(71);
    std::vector<double> params(model.gain_net.parameter_count());
    for (double& p : params) p = rng.uniform(-0.5, 0.5);
    model.gain_net.set_parameters(params);
    for (double& p : params) p = rng.uniform(-0.5, 0.5);
    model.nf_net.set_parameters(params);
    // keep both normalized inputs away from zero, where the first-layer
    // weight gradients vanish identically
    model.set_input_normalization(0.0, 10.0, 15.0, 5.0);
  }

  std::vector<bool> touched(model.gain_net.parameter_count() +
                                model.nf_net.parameter_count(),
                            false);
  for (const ProbeRecord& probe : probes) {
    ad::Tape tape;
    TwinLeaves leaves{model.gain_net.make_leaves(tape),
                      model.nf_net.make_leaves(tape)};
    SpanStateT<ad::Value> st;
    for (double v : probe.p_in_dbm) {
      st.signal.push_back(tape.constant(dbm_to_mw(v)));
    }
    st.ase.assign(48, tape.constant(0.0));
    st.nli.assign(48, tape.constant(0.0));
    for (const PathElement& el : path.elements) {
      if (std::holds_alternative<FiberSpan>(el)) {
        propagate_span(std::get<FiberSpan>(el), grid, st, false);
      } else {
        amplify(model, grid, st, std::get<AmpElement>(el).setpoint_dbm,
                nullptr, &leaves);
      }
    }
    ad::Value loss = tape.constant(0.0);
    for (int i = 0; i < 48; ++i) {
      ad::Value d_out = ad::log10(st.signal[i]) * 10.0 - probe.p_out_dbm[i];
      ad::Value d_ase = ad::log10(st.ase[i]) * 10.0 - probe.p_ase_dbm[i];
      loss = loss + d_out * d_out + d_ase * d_ase;
    }
    tape.backward(loss);
    std::size_t k = 0;
    for (const auto& leaf : leaves.gain.values) {
      if (tape.grad(leaf) != 0.0) touched[k] = true;
      ++k;
    }
    for (const auto& leaf : leaves.nf.values) {
      if (tape.grad(leaf) != 0.0) touched[k] = true;
      ++k;
    }
  }
  CHECK(std::all_of(touched.begin(), touched.end(), [](bool b) { return b; }));
}

TEST_CASE("validation on self-generated measurements is exact") {
  Topology topo = train_topology(0.0);
  const LinkPath path = build_twin_path(topo, "train", nullptr);
  EdfaTwinModel model = init_twin_model(topo.grid, 21);
  // synthesize probes whose measurements are the model's own predictions
  TrainConfig cfg;
  const NetworkSim sim(topo);
  auto probes = generate_probes(sim, "train", cfg, 6);
  for (ProbeRecord& p : probes) {
    auto [out, ase] = predict_probe_response(model, path, p);
    p.p_out_dbm = out;
    p.p_ase_dbm = ase;
  }
  const ValidationReport rep = validate_twin(model, path, probes);
  CHECK(rep.rms_gain_err_db == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.max_ase_err_db == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fingerprint guard on validation") {
  Topology topo = train_topology(0.0);
  const LinkPath path = build_twin_path(topo, "train", nullptr);
  const ChannelGrid other = make_uniform_grid(48, 191.4, 0.1, 12.5, 12.5);
  EdfaTwinModel model = init_twin_model(other, 3);
  ProbeRecord probe;
  probe.p_in_dbm.assign(48, 0.0);
  probe.p_out_dbm.assign(48, 0.0);
  probe.p_ase_dbm.assign(48, -40.0);
  CHECK_THROWS_AS(
      (void)validate_twin(model, path,
                          std::span<const ProbeRecord>(&probe, 1)),
      std::invalid_argument);
}

TEST_CASE("probe csv round trip") {
  Topology topo = train_topology(0.05);
  const NetworkSim sim(topo);
  TrainConfig cfg;
  const auto probes = generate_probes(sim, "train", cfg, 7);
  const auto dir =
      std::filesystem::temp_directory_path() / "wdmtwin_train_test";
  std::filesystem::create_directories(dir);
  save_probes_csv(probes, topo.grid, dir / "probes.csv", 3);
  const auto back = load_probes_csv(topo.grid, dir / "probes.csv");
  REQUIRE(back.size() == probes.size());
  for (std::size_t k = 0; k < probes.size(); ++k) {
    CHECK(back[k].probe_id == probes[k].probe_id);
    CHECK(back[k].path_id == probes[k].path_id);
    for (int i = 0; i < 48; ++i) {
      CHECK(back[k].p_out_dbm[i] ==
            doctest::Approx(probes[k].p_out_dbm[i]).epsilon(2e-6));
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("adam optimizer minimizes a quadratic") {
  AdamOptimizer adam(2, AdamParams{0.05, 0.9, 0.999, 1e-8});
  std::vector<double> x = {3.0, -2.0};
  for (int it = 0; it < 500; ++it) {
    const std::vector<double> g = {2.0 * (x[0] - 1.0), 2.0 * (x[1] + 0.5)};
    adam.step(g, x);
  }
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(x[1] == doctest::Approx(-0.5).epsilon(1e-3));
}
