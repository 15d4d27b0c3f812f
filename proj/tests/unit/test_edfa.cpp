// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "wdmtwin/edfa.hpp"
#include "wdmtwin/csv.hpp"
#include "wdmtwin/rng.hpp"

#include "support/test_util.hpp"

using namespace wdmtwin;

namespace {

/// nf_net output bias that pins the squashed noise figure to nf_db.
double nf_bias_for(double nf_db) {
  const double s = (nf_db - 3.0) / 9.0;
  return std::log(s / (1.0 - s));
}

EdfaTwinModel zero_model(const ChannelGrid& grid) {
  return init_twin_model(grid, 1);
}

}  // namespace

TEST_CASE("spontaneous-emission arithmetic") {
  // flat 20 dB gain, 5 dB noise figure, 193.4 THz, 12.5 GHz reference band
  const double expect_w =
      6.62607015e-34 * 193.4e12 * 12.5e9 * std::pow(10.0, 0.5) * 99.0;
  const double got_mw = ase_added_mw(5.0, 100.0, 193.4, 12.5);
  CHECK(got_mw == doctest::Approx(expect_w * 1e3).epsilon(1e-12));
  CHECK(got_mw == doctest::Approx(5.0e-7 * 1e3).epsilon(0.01));
  CHECK(10.0 * std::log10(got_mw) == doctest::Approx(-33.0).epsilon(1e-3));
  // gain below unity adds nothing
  CHECK(ase_added_mw(5.0, 0.5, 193.4, 12.5) == 0.0);
}

TEST_CASE("amplify with pinned noise figure reproduces the ASE formula") {
  const ChannelGrid grid = default_grid();
  EdfaTwinModel model = zero_model(grid);
  model.nf_net.biases.back().assign(model.nf_net.biases.back().size(),
                                    nf_bias_for(5.0));
  // flat -10 dBm per channel, setpoint = total input + 20 dB
  SpanState st;
  st.signal.assign(48, dbm_to_mw(-10.0));
  st.ase.assign(48, 0.0);
  st.nli.assign(48, 0.0);
  const double p_in_tot = mw_to_dbm(48 * dbm_to_mw(-10.0));
  const double setpoint = p_in_tot + 20.0;
  amplify(model, grid, st, setpoint);

  // output total pinned to the setpoint
  double tot = 0.0;
  for (int i = 0; i < 48; ++i) tot += st.signal[i] + st.ase[i] + st.nli[i];
  CHECK(mw_to_dbm(tot) == doctest::Approx(setpoint).epsilon(1e-12));

  // the added ASE, un-renormalized, matches the arithmetic formula per ch
  double kappa = 0.0;
  {
    double pre_total = 0.0;
    for (int i = 0; i < 48; ++i) {
      pre_total += dbm_to_mw(-10.0) * 100.0 +
                   ase_added_mw(5.0, 100.0, grid.f_thz[i], grid.b_ref_ghz);
    }
    kappa = dbm_to_mw(setpoint) / pre_total;
  }
  for (int i = 0; i < 48; ++i) {
    const double expect =
        kappa * ase_added_mw(5.0, 100.0, grid.f_thz[i], grid.b_ref_ghz);
    CHECK(st.ase[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("zero-weight nets, signal-only input: closed-form gain") {
  const ChannelGrid grid = default_grid();
  const EdfaTwinModel model = zero_model(grid);
  SpanState st;
  const double per_ch = dbm_to_mw(-10.0) / 48.0;  // total -10 dBm
  st.signal.assign(48, per_ch);
  st.ase.assign(48, 0.0);
  st.nli.assign(48, 0.0);
  amplify(model, grid, st, 10.0);
  // gain 20 dB minus the share absorbed by the output renormalization
  double ase_tot = 0.0;
  for (int i = 0; i < 48; ++i) {
    ase_tot += ase_added_mw(7.5, 100.0, grid.f_thz[i], grid.b_ref_ghz);
  }
  const double kappa = dbm_to_mw(10.0) / (dbm_to_mw(-10.0) * 100.0 + ase_tot);
  for (int i = 0; i < 48; ++i) {
    CHECK(st.signal[i] ==
          doctest::Approx(per_ch * 100.0 * kappa).epsilon(1e-12));
  }
  CHECK(10.0 * std::log10(st.signal[5] / per_ch) ==
        doctest::Approx(20.0).epsilon(1e-3));  // ASE share is tiny here
}

TEST_CASE("output total equals the setpoint for random weights and inputs") {
  const ChannelGrid grid = default_grid();
  Rng rng(77);
  for (int t = 0; t < 25; ++t) {
    EdfaTwinModel model = init_twin_model(grid, 100 + t);
    std::vector<double> params(model.gain_net.parameter_count() +
                               model.nf_net.parameter_count());
    for (double& p : params) p = rng.uniform(-1.0, 1.0);
    model.gain_net.set_parameters(
        std::span<const double>(params).subspan(0,
                                                model.gain_net.parameter_count()));
    model.nf_net.set_parameters(
        std::span<const double>(params).subspan(model.gain_net.parameter_count()));
    SpanState st;
    st.signal = wdmtwin::testing::random_profile(grid, rng,
                                                 rng.uniform(-5.0, 8.0)).p_mw;
    st.ase.assign(48, rng.uniform(0.0, 1e-4));
    st.nli.assign(48, rng.uniform(0.0, 1e-5));
    const double setpoint = rng.uniform(14.0, 21.0);
    amplify(model, grid, st, setpoint);
    double tot = 0.0;
    for (int i = 0; i < 48; ++i) tot += st.signal[i] + st.ase[i] + st.nli[i];
    CHECK(std::abs(mw_to_dbm(tot) - setpoint) < 1e-9);
  }
}

TEST_CASE("noise figure stays inside the squash bounds") {
  const ChannelGrid grid = default_grid();
  Rng rng(123);
  for (int t = 0; t < 200; ++t) {
    EdfaTwinModel model = init_twin_model(grid, 200 + t);
    std::vector<double> params(model.nf_net.parameter_count());
    for (double& p : params) p = rng.uniform(-8.0, 8.0);
    model.nf_net.set_parameters(params);
    const auto raw = model.nf_net.forward(rng.uniform(-30.0, 23.0),
                                          rng.uniform(10.0, 22.0));
    for (double y : raw) {
      const double nf = 3.0 + 9.0 / (1.0 + std::exp(-y));
      CHECK(nf >= 3.0);
      CHECK(nf <= 12.0);
    }
  }
}

TEST_CASE("initialization contract") {
  const ChannelGrid grid = default_grid();
  const EdfaTwinModel a = init_twin_model(grid, 42);
  const EdfaTwinModel b = init_twin_model(grid, 42);
  CHECK(twin_to_json(a).dump() == twin_to_json(b).dump());
  const EdfaTwinModel c = init_twin_model(grid, 43);
  CHECK(twin_to_json(a).dump() != twin_to_json(c).dump());

  // zero output layer: pure physical skeleton
  const auto dg = a.gain_net.forward(0.0, 18.0);
  for (double v : dg) CHECK(v == 0.0);
  const auto nf_raw = a.nf_net.forward(0.0, 18.0);
  for (double y : nf_raw) {
    CHECK(3.0 + 9.0 / (1.0 + std::exp(-y)) == doctest::Approx(7.5));
  }
}

TEST_CASE("model json round trip is bit exact") {
  const ChannelGrid grid = default_grid();
  Rng rng(9);
  EdfaTwinModel model = init_twin_model(grid, 4242);
  std::vector<double> params(model.gain_net.parameter_count());
  for (double& p : params) p = rng.uniform(-1.0, 1.0) * std::exp(rng.uniform(-9.0, 2.0));
  model.gain_net.set_parameters(params);
  model.metadata.trained = true;
  model.metadata.final_train_mse = 1.2345678901234567e-3;

  const auto dir =
      std::filesystem::temp_directory_path() / "wdmtwin_edfa_test";
  std::filesystem::create_directories(dir);
  save_twin(model, dir / "model.json");
  const EdfaTwinModel back = load_twin(dir / "model.json");
  CHECK(twin_to_json(back).dump() == twin_to_json(model).dump());
  for (std::size_t l = 0; l < model.gain_net.weights.size(); ++l) {
    CHECK(back.gain_net.weights[l] == model.gain_net.weights[l]);
    CHECK(back.nf_net.weights[l] == model.nf_net.weights[l]);
  }
  save_twin(back, dir / "model2.json");
  CHECK(read_file(dir / "model.json") == read_file(dir / "model2.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("amplify is differentiable in weights and inputs") {
  const ChannelGrid grid = make_uniform_grid(5, 192.5, 0.1, 12.5, 12.5);
  Rng rng(55);
  EdfaTwinModel model = init_twin_model(grid, 3, {6});
  std::vector<double> params(model.gain_net.parameter_count() +
                             model.nf_net.parameter_count());
  for (double& p : params) p = rng.uniform(-0.4, 0.4);
  model.gain_net.set_parameters(
      std::span<const double>(params).subspan(0, model.gain_net.parameter_count()));
  model.nf_net.set_parameters(
      std::span<const double>(params).subspan(model.gain_net.parameter_count()));

  SUBCASE("w.r.t. the input profile") {
    std::vector<double> x(5);
    for (double& v : x) v = rng.uniform(0.05, 0.4);
    auto f = [&](ad::Tape& tape, std::span<const ad::Value> xs) {
      SpanStateT<ad::Value> st;
      st.signal.assign(xs.begin(), xs.end());
      st.ase.assign(xs.size(), tape.constant(1e-5));
      st.nli.assign(xs.size(), tape.constant(0.0));
      amplify(model, grid, st, 15.0);
      return ad::sum(std::span<const ad::Value>(st.signal)) +
             ad::sum(std::span<const ad::Value>(st.ase)) * 1e5;
    };
    CHECK(ad::gradcheck(f, x, 1e-4).pass);
  }

  SUBCASE("w.r.t. the network weights") {
    // the leaf values carry the weights; stored weights are not consulted
    auto f = [&](ad::Tape& tape, std::span<const ad::Value> ws) {
      const auto n_gain = model.gain_net.parameter_count();
      Mlp::LeafSet gain_set, nf_set;
      gain_set.values.assign(ws.begin(),
                             ws.begin() + static_cast<std::ptrdiff_t>(n_gain));
      nf_set.values.assign(ws.begin() + static_cast<std::ptrdiff_t>(n_gain),
                           ws.end());
      TwinLeaves tied{std::move(gain_set), std::move(nf_set)};
      SpanStateT<ad::Value> st;
      st.signal.assign(5, tape.constant(0.1));
      st.ase.assign(5, tape.constant(0.0));
      st.nli.assign(5, tape.constant(0.0));
      amplify(model, grid, st, 15.0, nullptr, &tied);
      return ad::sum(std::span<const ad::Value>(st.signal)) +
             ad::sum(std::span<const ad::Value>(st.ase)) * 1e5;
    };
    CHECK(ad::gradcheck(f, params, 1e-4).pass);
  }
}

TEST_CASE("OSNR degrades monotonically as input power drops") {
  const ChannelGrid grid = default_grid();
  const EdfaTwinModel model = zero_model(grid);
  double prev_osnr = 1e9;
  for (double in_dbm : {5.0, 0.0, -5.0, -10.0, -15.0, -20.0}) {
    SpanState st;
    st.signal.assign(48, dbm_to_mw(in_dbm) / 48.0);
    st.ase.assign(48, 0.0);
    st.nli.assign(48, 0.0);
    amplify(model, grid, st, 18.0);
    const double osnr = 10.0 * std::log10(st.signal[24] / st.ase[24]);
    CHECK(osnr < prev_osnr);
    prev_osnr = osnr;
  }
}

TEST_CASE("envelope and fingerprint guards") {
  const ChannelGrid grid = default_grid();
  const EdfaTwinModel model = zero_model(grid);
  SpanState st;
  st.signal.assign(48, dbm_to_mw(-40.0) / 48.0);
  st.ase.assign(48, 0.0);
  st.nli.assign(48, 0.0);
  std::vector<std::string> warnings;
  amplify(model, grid, st, 18.0, &warnings);
  REQUIRE(!warnings.empty());
  CHECK(warnings[0].find("envelope") != std::string::npos);

  const ChannelGrid other = make_uniform_grid(48, 191.4, 0.1, 12.5, 12.5);
  SpanState st2;
  st2.signal.assign(48, 0.1);
  st2.ase.assign(48, 0.0);
  st2.nli.assign(48, 0.0);
  CHECK_THROWS_AS(amplify(model, other, st2, 18.0), std::invalid_argument);
}
