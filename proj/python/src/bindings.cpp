// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the main operations: grid handling, the network
// simulator, twin training, link prediction and launch-profile optimization.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wdmtwin/field_sim.hpp"
#include "wdmtwin/optimize.hpp"
#include "wdmtwin/repro.hpp"
#include "wdmtwin/topology.hpp"
#include "wdmtwin/train.hpp"
#include "wdmtwin/version.hpp"

namespace py = pybind11;
using namespace wdmtwin;

PYBIND11_MODULE(_core, m) {
  m.doc() = "WDM link digital twin toolkit";
  m.attr("__version__") = kVersion;

  m.def("dbm_to_mw", &dbm_to_mw, py::arg("x_dbm"));
  m.def("mw_to_dbm", &mw_to_dbm, py::arg("x_mw"));

  py::class_<ChannelGrid>(m, "ChannelGrid")
      .def_readonly("n_ch", &ChannelGrid::n_ch)
      .def_readonly("f_thz", &ChannelGrid::f_thz)
      .def_readonly("spacing_ghz", &ChannelGrid::spacing_ghz)
      .def_readonly("b_ch_ghz", &ChannelGrid::b_ch_ghz)
      .def_readonly("b_ref_ghz", &ChannelGrid::b_ref_ghz)
      .def_readonly("fingerprint", &ChannelGrid::fingerprint)
      .def("lambda_nm", &ChannelGrid::lambda_nm, py::arg("ch"));
  m.def("default_grid", &default_grid);
  m.def("make_uniform_grid", &make_uniform_grid, py::arg("n_ch"),
        py::arg("f0_thz"), py::arg("step_thz"), py::arg("b_ch_ghz"),
        py::arg("b_ref_ghz"));

  py::class_<PowerProfile>(m, "PowerProfile")
      .def_readonly("grid_fingerprint", &PowerProfile::grid_fingerprint)
      .def_readonly("p_mw", &PowerProfile::p_mw);
  m.def("make_profile", &make_profile, py::arg("grid"), py::arg("p_mw"));
  m.def("flat_profile", &flat_profile, py::arg("grid"), py::arg("p_tot_dbm"));
  m.def("total_power_dbm", &total_power_dbm, py::arg("profile"));

  py::class_<FiberSpan>(m, "FiberSpan")
      .def(py::init<>())
      .def_readwrite("length_km", &FiberSpan::length_km)
      .def_readwrite("alpha_db_km", &FiberSpan::alpha_db_km)
      .def_readwrite("beta2_ps2_km", &FiberSpan::beta2_ps2_km)
      .def_readwrite("gamma_1_wkm", &FiberSpan::gamma_1_wkm)
      .def_readwrite("cr_1_wkmthz", &FiberSpan::cr_1_wkmthz)
      .def_readwrite("lumped_loss_db", &FiberSpan::lumped_loss_db);

  py::class_<Topology>(m, "Topology")
      .def_property_readonly("grid",
                             [](const Topology& t) { return t.grid; })
      .def_readonly("nodes", &Topology::nodes)
      .def_readonly("threshold_db", &Topology::threshold_db)
      .def("path_ids",
           [](const Topology& t) {
             std::vector<std::string> ids;
             for (const auto& [k, v] : t.paths) ids.push_back(k);
             return ids;
           })
      .def_static("load", &load_topology, py::arg("path"))
      .def("save", &save_topology, py::arg("path"));
  m.def("default_scenario", &materialize_default_scenario, py::arg("dir"),
        py::arg("seed_override") = 0,
        "Write the bundled four-node scenario into dir and return it");

  py::class_<TrxPenaltyModel>(m, "TrxPenaltyModel")
      .def_static(
          "fit",
          [](const std::vector<double>& lam, const std::vector<double>& snr) {
            return TrxPenaltyModel::fit(lam, snr);
          },
          py::arg("lambda_nm"), py::arg("snr_b2b_db"))
      .def("snr_db_at", &TrxPenaltyModel::snr_db_at, py::arg("lambda_nm"))
      .def("snr_linear_at", &TrxPenaltyModel::snr_linear_at,
           py::arg("lambda_nm"));
  m.def("load_trx_csv", &load_trx_csv, py::arg("path"));

  py::class_<TwinMetadata>(m, "TwinMetadata")
      .def_readonly("final_train_mse", &TwinMetadata::final_train_mse)
      .def_readonly("final_val_mse", &TwinMetadata::final_val_mse)
      .def_readonly("probe_count", &TwinMetadata::probe_count)
      .def_readonly("seed", &TwinMetadata::seed)
      .def_readonly("trained", &TwinMetadata::trained);

  py::class_<EdfaTwinModel, std::shared_ptr<EdfaTwinModel>>(m,
                                                            "EdfaTwinModel")
      .def_readonly("grid_fingerprint", &EdfaTwinModel::grid_fingerprint)
      .def_readonly("b_ref_ghz", &EdfaTwinModel::b_ref_ghz)
      .def_readonly("metadata", &EdfaTwinModel::metadata)
      .def("save", &save_twin, py::arg("path"))
      .def_static("load", &load_twin, py::arg("path"));
  m.def("init_twin_model", &init_twin_model, py::arg("grid"), py::arg("seed"),
        py::arg("hidden") = std::vector<int>{16, 16});

  py::class_<ProbeRecord>(m, "ProbeRecord")
      .def_readonly("probe_id", &ProbeRecord::probe_id)
      .def_readonly("path_id", &ProbeRecord::path_id)
      .def_readonly("p_in_dbm", &ProbeRecord::p_in_dbm)
      .def_readonly("p_out_dbm", &ProbeRecord::p_out_dbm)
      .def_readonly("p_ase_dbm", &ProbeRecord::p_ase_dbm);

  py::class_<NetworkSim>(m, "NetworkSim")
      .def(py::init<Topology>(), py::arg("topology"))
      .def("measure_probe", &NetworkSim::measure_probe, py::arg("path_id"),
           py::arg("input"), py::arg("probe_index"))
      .def("ground_truth_snr", &NetworkSim::ground_truth_snr,
           py::arg("path_id"), py::arg("input"));

  py::class_<AdamParams>(m, "AdamParams")
      .def(py::init<>())
      .def_readwrite("lr", &AdamParams::lr)
      .def_readwrite("beta1", &AdamParams::beta1)
      .def_readwrite("beta2", &AdamParams::beta2)
      .def_readwrite("eps", &AdamParams::eps);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("n_train", &TrainConfig::n_train)
      .def_readwrite("n_val", &TrainConfig::n_val)
      .def_readwrite("p_tot_min_dbm", &TrainConfig::p_tot_min_dbm)
      .def_readwrite("p_tot_max_dbm", &TrainConfig::p_tot_max_dbm)
      .def_readwrite("offset_range_db", &TrainConfig::offset_range_db)
      .def_readwrite("adam", &TrainConfig::adam)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("seed", &TrainConfig::seed);

  m.def("generate_probes", &generate_probes, py::arg("sim"),
        py::arg("path_id"), py::arg("config"), py::arg("count"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<Toggles>(m, "Toggles")
      .def(py::init([](bool nl, bool trx) { return Toggles{nl, trx}; }),
           py::arg("nl") = true, py::arg("trx") = true)
      .def_readwrite("nl", &Toggles::nl)
      .def_readwrite("trx", &Toggles::trx);
  m.def("toggles_from_name", &toggles_from_name, py::arg("name"));

  py::class_<LinkPath>(m, "LinkPath")
      .def_readonly("path_id", &LinkPath::path_id)
      .def_property_readonly("grid",
                             [](const LinkPath& p) { return p.grid; });
  m.def(
      "build_twin_path",
      [](const Topology& t, const std::string& path_id,
         std::shared_ptr<EdfaTwinModel> model) {
        return build_twin_path(t, path_id, std::move(model));
      },
      py::arg("topology"), py::arg("path_id"), py::arg("model"));

  py::class_<SnrReport>(m, "SnrReport")
      .def_readonly("path_id", &SnrReport::path_id)
      .def_readonly("threshold_db", &SnrReport::threshold_db)
      .def_readonly("f_thz", &SnrReport::f_thz)
      .def_readonly("lambda_nm", &SnrReport::lambda_nm)
      .def_readonly("signal_dbm", &SnrReport::signal_dbm)
      .def_readonly("ase_dbm", &SnrReport::ase_dbm)
      .def_readonly("nli_dbm", &SnrReport::nli_dbm)
      .def_readonly("osnr_db", &SnrReport::osnr_db)
      .def_readonly("snr_db", &SnrReport::snr_db)
      .def_readonly("margin_db", &SnrReport::margin_db)
      .def_readonly("flags", &SnrReport::flags)
      .def("min_margin_db", &SnrReport::min_margin_db)
      .def("argmin_margin", &SnrReport::argmin_margin);

  m.def(
      "predict",
      [](const LinkPath& path, const PowerProfile& launch,
         const TrxPenaltyModel* trx, const Toggles& toggles,
         double threshold_db) {
        return predict(path, launch, trx, toggles, threshold_db);
      },
      py::arg("path"), py::arg("launch"), py::arg("trx") = nullptr,
      py::arg("toggles") = Toggles{}, py::arg("threshold_db") = 12.5,
      py::keep_alive<0, 1>());

  py::class_<TrainCurvePoint>(m, "TrainCurvePoint")
      .def_readonly("epoch", &TrainCurvePoint::epoch)
      .def_readonly("train_mse", &TrainCurvePoint::train_mse)
      .def_readonly("val_mse", &TrainCurvePoint::val_mse);

  py::class_<TrainResult>(m, "TrainResult")
      .def_property_readonly(
          "model",
          [](const TrainResult& r) {
            return std::make_shared<EdfaTwinModel>(r.model);
          })
      .def_readonly("curve", &TrainResult::curve);

  m.def(
      "train_twin",
      [](const std::vector<ProbeRecord>& train_probes,
         const std::vector<ProbeRecord>& val_probes, const LinkPath& path,
         const TrainConfig& cfg) {
        py::gil_scoped_release release;
        return train_twin(train_probes, val_probes, path, cfg);
      },
      py::arg("train_probes"), py::arg("val_probes"), py::arg("path"),
      py::arg("config"));

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("rms_gain_err_db", &ValidationReport::rms_gain_err_db)
      .def_readonly("max_gain_err_db", &ValidationReport::max_gain_err_db)
      .def_readonly("rms_ase_err_db", &ValidationReport::rms_ase_err_db)
      .def_readonly("max_ase_err_db", &ValidationReport::max_ase_err_db)
      .def_readonly("per_channel_rms_gain_db",
                    &ValidationReport::per_channel_rms_gain_db)
      .def_readonly("per_channel_rms_ase_db",
                    &ValidationReport::per_channel_rms_ase_db);
  m.def(
      "validate_twin",
      [](std::shared_ptr<EdfaTwinModel> model, const LinkPath& path,
         const std::vector<ProbeRecord>& probes) {
        return validate_twin(*model, path, probes);
      },
      py::arg("model"), py::arg("path"), py::arg("probes"));

  py::class_<OptConfig>(m, "OptConfig")
      .def(py::init<>())
      .def_readwrite("p_tot_dbm", &OptConfig::p_tot_dbm)
      .def_readwrite("variant", &OptConfig::variant)
      .def_readwrite("tau_schedule", &OptConfig::tau_schedule)
      .def_readwrite("iters_per_stage", &OptConfig::iters_per_stage)
      .def_readwrite("adam", &OptConfig::adam)
      .def_readwrite("max_dynamic_range_db", &OptConfig::max_dynamic_range_db)
      .def_readwrite("seed", &OptConfig::seed);

  py::class_<TracePoint>(m, "TracePoint")
      .def_readonly("iter", &TracePoint::iter)
      .def_readonly("tau", &TracePoint::tau)
      .def_readonly("cost_db", &TracePoint::cost_db);

  py::class_<OptimizeResult>(m, "OptimizeResult")
      .def_readonly("profile", &OptimizeResult::profile)
      .def_readonly("trace", &OptimizeResult::trace)
      .def_readonly("hard_min_snr_db_full",
                    &OptimizeResult::hard_min_snr_db_full)
      .def_readonly("warnings", &OptimizeResult::warnings);

  m.def(
      "optimize_profile",
      [](const LinkPath& path, const TrxPenaltyModel* trx,
         const OptConfig& cfg) {
        py::gil_scoped_release release;
        return optimize_profile(path, trx, cfg);
      },
      py::arg("path"), py::arg("trx") = nullptr,
      py::arg("config") = OptConfig{});

  m.def("smooth_min_db",
        [](const std::vector<double>& xs, double tau) {
          return smooth_min_db(xs, tau);
        },
        py::arg("snr_db"), py::arg("tau"));
  m.def("parameterize", &parameterize, py::arg("grid"), py::arg("theta"),
        py::arg("p_tot_dbm"));

  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);
}
