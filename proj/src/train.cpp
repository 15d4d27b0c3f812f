// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "wdmtwin/csv.hpp"
#include "wdmtwin/errors.hpp"
#include "wdmtwin/rng.hpp"

namespace wdmtwin {

AdamOptimizer::AdamOptimizer(std::size_t n, AdamParams params)
    : p_(params), m_(n, 0.0), v_(n, 0.0) {}

void AdamOptimizer::step(std::span<const double> grad,
                         std::span<double> params) {
  if (grad.size() != m_.size() || params.size() != m_.size()) {
    throw std::invalid_argument("adam: size mismatch");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(p_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(p_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < m_.size(); ++i) {
    m_[i] = p_.beta1 * m_[i] + (1.0 - p_.beta1) * grad[i];
    v_[i] = p_.beta2 * v_[i] + (1.0 - p_.beta2) * grad[i] * grad[i];
    const double mh = m_[i] / bc1;
    const double vh = v_[i] / bc2;
    params[i] -= p_.lr * mh / (std::sqrt(vh) + p_.eps);
  }
}

void TrainConfig::validate() const {
  if (n_train <= 0 || n_val < 0) {
    throw std::invalid_argument("train config: probe counts must be positive");
  }
  if (!(p_tot_max_dbm >= p_tot_min_dbm)) {
    throw std::invalid_argument("train config: degenerate total power range");
  }
  if (offset_range_db < 0.0 || epochs <= 0 || batch_size <= 0) {
    throw std::invalid_argument("train config: invalid numeric field");
  }
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.n_train = j.value("n_train", c.n_train);
  c.n_val = j.value("n_val", c.n_val);
  if (j.contains("p_tot_range_dbm")) {
    const auto r = j.at("p_tot_range_dbm").get<std::vector<double>>();
    if (r.size() != 2) {
      throw std::invalid_argument("train config: p_tot_range_dbm needs 2 values");
    }
    c.p_tot_min_dbm = r[0];
    c.p_tot_max_dbm = r[1];
  }
  c.offset_range_db = j.value("offset_range_db", c.offset_range_db);
  if (j.contains("adam")) {
    const auto& ja = j.at("adam");
    c.adam.beta1 = ja.value("beta1", c.adam.beta1);
    c.adam.beta2 = ja.value("beta2", c.adam.beta2);
    c.adam.eps = ja.value("eps", c.adam.eps);
  }
  c.adam.lr = j.value("lr", c.adam.lr);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
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
  return train_config_from_json(j);
}

std::vector<ProbeRecord> generate_probes(const NetworkSim& sim,
                                         const std::string& path_id,
                                         const TrainConfig& cfg, int count) {
  cfg.validate();
  const ChannelGrid& grid = sim.grid();
  std::vector<ProbeRecord> probes;
  probes.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    std::vector<double> shape(static_cast<std::size_t>(grid.n_ch));
    for (double& s : shape) {
      s = std::pow(10.0, rng.uniform(-cfg.offset_range_db,
                                     cfg.offset_range_db) / 10.0);
    }
    const double total_dbm =
        rng.uniform(cfg.p_tot_min_dbm, cfg.p_tot_max_dbm);
    const double sum = std::accumulate(shape.begin(), shape.end(), 0.0);
    const double scale = dbm_to_mw(total_dbm) / sum;
    for (double& s : shape) s *= scale;
    PowerProfile input = make_profile(grid, std::move(shape));
    probes.push_back(
        sim.measure_probe(path_id, input, static_cast<std::uint64_t>(k)));
  }
  return probes;
}

namespace {

struct FlatTwinParams {
  std::size_t n_gain = 0;
  std::size_t n_total = 0;

  static FlatTwinParams of(const EdfaTwinModel& m) {
    FlatTwinParams f;
    f.n_gain = m.gain_net.parameter_count();
    f.n_total = f.n_gain + m.nf_net.parameter_count();
    return f;
  }
  void gather(const EdfaTwinModel& m, std::span<double> out) const {
    m.gain_net.copy_parameters(out.subspan(0, n_gain));
    m.nf_net.copy_parameters(out.subspan(n_gain));
  }
  void scatter(EdfaTwinModel& m, std::span<const double> in) const {
    m.gain_net.set_parameters(in.subspan(0, n_gain));
    m.nf_net.set_parameters(in.subspan(n_gain));
  }
};

void check_probes(const ChannelGrid& grid,
                  std::span<const ProbeRecord> probes) {
  for (const ProbeRecord& p : probes) {
    if (static_cast<int>(p.p_in_dbm.size()) != grid.n_ch ||
        static_cast<int>(p.p_out_dbm.size()) != grid.n_ch ||
        static_cast<int>(p.p_ase_dbm.size()) != grid.n_ch) {
      throw std::invalid_argument("probe record does not match grid size");
    }
  }
}

/// Twin-cascade forward in plain doubles: predicted output/ASE spectra.
std::pair<std::vector<double>, std::vector<double>> forward_probe(
    const EdfaTwinModel& model, const LinkPath& path,
    const ProbeRecord& probe) {
  const ChannelGrid& grid = path.grid;
  SpanState state;
  state.signal.resize(static_cast<std::size_t>(grid.n_ch));
  for (int i = 0; i < grid.n_ch; ++i) {
    state.signal[static_cast<std::size_t>(i)] =
        dbm_to_mw(probe.p_in_dbm[static_cast<std::size_t>(i)]);
  }
  state.ase.assign(static_cast<std::size_t>(grid.n_ch), 0.0);
  state.nli.assign(static_cast<std::size_t>(grid.n_ch), 0.0);
  for (const PathElement& el : path.elements) {
    if (std::holds_alternative<FiberSpan>(el)) {
      propagate_span(std::get<FiberSpan>(el), grid, state, /*with_nli=*/false);
    } else {
      amplify(model, grid, state, std::get<AmpElement>(el).setpoint_dbm);
    }
  }
  std::vector<double> out_dbm(static_cast<std::size_t>(grid.n_ch));
  std::vector<double> ase_dbm(static_cast<std::size_t>(grid.n_ch));
  for (int i = 0; i < grid.n_ch; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out_dbm[idx] = 10.0 * std::log10(std::max(state.signal[idx], 1e-300));
    ase_dbm[idx] = 10.0 * std::log10(std::max(state.ase[idx], 1e-300));
  }
  return {std::move(out_dbm), std::move(ase_dbm)};
}

double probe_mse(const EdfaTwinModel& model, const LinkPath& path,
                 std::span<const ProbeRecord> probes) {
  double acc = 0.0;
  for (const ProbeRecord& probe : probes) {
    const auto [out, ase] = forward_probe(model, path, probe);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double de = out[i] - probe.p_out_dbm[i];
      const double da = ase[i] - probe.p_ase_dbm[i];
      acc += de * de + da * da;
    }
  }
  return acc / (static_cast<double>(probes.size()) *
                static_cast<double>(path.grid.n_ch));
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> predict_probe_response(
    const EdfaTwinModel& model, const LinkPath& path,
    const ProbeRecord& probe) {
  if (model.grid_fingerprint != path.grid.fingerprint) {
    throw std::invalid_argument("model/grid fingerprint mismatch");
  }
  check_probes(path.grid, std::span<const ProbeRecord>(&probe, 1));
  return forward_probe(model, path, probe);
}

TrainResult train_twin(std::span<const ProbeRecord> train_probes,
                       std::span<const ProbeRecord> val_probes,
                       const LinkPath& path, const TrainConfig& cfg) {
  cfg.validate();
  const ChannelGrid& grid = path.grid;
  check_probes(grid, train_probes);
  check_probes(grid, val_probes);
  if (train_probes.empty()) {
    throw std::invalid_argument("train: no training probes");
  }
  bool has_amp = false;
  for (const PathElement& el : path.elements) {
    if (std::holds_alternative<AmpElement>(el)) has_amp = true;
  }
  if (!has_amp) {
    throw std::invalid_argument("train: path has no amplifier to fit");
  }

  EdfaTwinModel model = init_twin_model(grid, cfg.seed);
  const FlatTwinParams layout = FlatTwinParams::of(model);

  // Freeze input normalization from the operating points the initial model
  // sees on the training set.
  {
    std::vector<double> p_ins, p_outs;
    for (const ProbeRecord& probe : train_probes) {
      SpanState state;
      state.signal.resize(static_cast<std::size_t>(grid.n_ch));
      for (int i = 0; i < grid.n_ch; ++i) {
        state.signal[static_cast<std::size_t>(i)] =
            dbm_to_mw(probe.p_in_dbm[static_cast<std::size_t>(i)]);
      }
      state.ase.assign(static_cast<std::size_t>(grid.n_ch), 0.0);
      state.nli.assign(static_cast<std::size_t>(grid.n_ch), 0.0);
      for (const PathElement& el : path.elements) {
        if (std::holds_alternative<FiberSpan>(el)) {
          propagate_span(std::get<FiberSpan>(el), grid, state, false);
        } else {
          double tot = 0.0;
          for (int i = 0; i < grid.n_ch; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            tot += state.signal[idx] + state.ase[idx] + state.nli[idx];
          }
          p_ins.push_back(10.0 * std::log10(tot));
          p_outs.push_back(std::get<AmpElement>(el).setpoint_dbm);
          amplify(model, grid, state, std::get<AmpElement>(el).setpoint_dbm);
        }
      }
    }
    auto stats = [](const std::vector<double>& xs) {
      double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var /= xs.size();
      const double sd = std::sqrt(var);
      return std::pair<double, double>(mean, sd > 1e-9 ? sd : 1.0);
    };
    const auto [mi, si] = stats(p_ins);
    const auto [mo, so] = stats(p_outs);
    model.set_input_normalization(mi, si, mo, so);
  }

  std::vector<double> params(layout.n_total);
  layout.gather(model, params);
  AdamOptimizer adam(layout.n_total, cfg.adam);

  TrainResult result;
  result.curve.reserve(static_cast<std::size_t>(cfg.epochs));

  std::vector<std::size_t> order(train_probes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(cfg.seed, 0xE70Cull ^
                                           static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      ad::Tape tape;
      TwinLeaves leaves{model.gain_net.make_leaves(tape),
                        model.nf_net.make_leaves(tape)};
      ad::Value loss = tape.constant(0.0);
      for (std::size_t bi = start; bi < stop; ++bi) {
        const ProbeRecord& probe = train_probes[order[bi]];
        SpanStateT<ad::Value> state;
        state.signal.reserve(static_cast<std::size_t>(grid.n_ch));
        for (int i = 0; i < grid.n_ch; ++i) {
          state.signal.push_back(tape.constant(
              dbm_to_mw(probe.p_in_dbm[static_cast<std::size_t>(i)])));
        }
        state.ase.assign(static_cast<std::size_t>(grid.n_ch),
                         tape.constant(0.0));
        state.nli.assign(static_cast<std::size_t>(grid.n_ch),
                         tape.constant(0.0));
        for (const PathElement& el : path.elements) {
          if (std::holds_alternative<FiberSpan>(el)) {
            propagate_span(std::get<FiberSpan>(el), grid, state, false);
          } else {
            amplify(model, grid, state,
                    std::get<AmpElement>(el).setpoint_dbm, nullptr, &leaves);
          }
        }
        for (int i = 0; i < grid.n_ch; ++i) {
          const auto idx = static_cast<std::size_t>(i);
          ad::Value out_db =
              ad::log10(ad::max_with(state.signal[idx], 1e-300)) * 10.0;
          ad::Value ase_db =
              ad::log10(ad::max_with(state.ase[idx], 1e-300)) * 10.0;
          ad::Value de = out_db - probe.p_out_dbm[idx];
          ad::Value da = ase_db - probe.p_ase_dbm[idx];
          loss = loss + (de * de + da * da);
        }
      }
      const double denom = static_cast<double>(stop - start) *
                           static_cast<double>(grid.n_ch);
      loss = loss / denom;
      if (!std::isfinite(loss.value())) {
        throw NumericalError("training diverged (non-finite loss) at epoch " +
                             std::to_string(epoch));
      }
      tape.backward(loss);
      std::vector<double> grad(layout.n_total);
      for (std::size_t k = 0; k < layout.n_gain; ++k) {
        grad[k] = tape.grad(leaves.gain.values[k]);
      }
      for (std::size_t k = layout.n_gain; k < layout.n_total; ++k) {
        grad[k] = tape.grad(leaves.nf.values[k - layout.n_gain]);
      }
      adam.step(grad, params);
      layout.scatter(model, params);
      epoch_loss += loss.value();
      ++n_batches;
    }
    TrainCurvePoint pt;
    pt.epoch = epoch;
    pt.train_mse = epoch_loss / static_cast<double>(n_batches);
    pt.val_mse = val_probes.empty() ? 0.0 : probe_mse(model, path, val_probes);
    result.curve.push_back(pt);
  }

  model.metadata.trained = true;
  model.metadata.seed = cfg.seed;
  model.metadata.probe_count = static_cast<int>(train_probes.size());
  model.metadata.final_train_mse = result.curve.back().train_mse;
  model.metadata.final_val_mse = result.curve.back().val_mse;
  result.model = std::move(model);
  return result;
}

ValidationReport validate_twin(const EdfaTwinModel& model,
                               const LinkPath& path,
                               std::span<const ProbeRecord> probes) {
  if (model.grid_fingerprint != path.grid.fingerprint) {
    throw std::invalid_argument("validate: model/grid fingerprint mismatch");
  }
  check_probes(path.grid, probes);
  if (probes.empty()) {
    throw std::invalid_argument("validate: no probes");
  }
  const auto n = static_cast<std::size_t>(path.grid.n_ch);
  ValidationReport rep;
  rep.per_channel_rms_gain_db.assign(n, 0.0);
  rep.per_channel_rms_ase_db.assign(n, 0.0);
  double acc_g = 0.0, acc_a = 0.0;
  for (const ProbeRecord& probe : probes) {
    const auto [out, ase] = forward_probe(model, path, probe);
    for (std::size_t i = 0; i < n; ++i) {
      const double de = out[i] - probe.p_out_dbm[i];
      const double da = ase[i] - probe.p_ase_dbm[i];
      rep.per_channel_rms_gain_db[i] += de * de;
      rep.per_channel_rms_ase_db[i] += da * da;
      acc_g += de * de;
      acc_a += da * da;
      rep.max_gain_err_db = std::max(rep.max_gain_err_db, std::abs(de));
      rep.max_ase_err_db = std::max(rep.max_ase_err_db, std::abs(da));
    }
  }
  const double count = static_cast<double>(probes.size());
  for (std::size_t i = 0; i < n; ++i) {
    rep.per_channel_rms_gain_db[i] =
        std::sqrt(rep.per_channel_rms_gain_db[i] / count);
    rep.per_channel_rms_ase_db[i] =
        std::sqrt(rep.per_channel_rms_ase_db[i] / count);
  }
  rep.rms_gain_err_db = std::sqrt(acc_g / (count * static_cast<double>(n)));
  rep.rms_ase_err_db = std::sqrt(acc_a / (count * static_cast<double>(n)));
  return rep;
}

void save_probes_csv(std::span<const ProbeRecord> probes,
                     const ChannelGrid& grid, const std::filesystem::path& p,
                     std::uint64_t config_hash) {
  CsvWriter w(p);
  write_standard_comments(w, config_hash, 0);
  w.header({"probe_id", "path_id", "ch", "f_thz", "p_in_dbm", "p_out_dbm",
            "p_ase_dbm"});
  for (const ProbeRecord& probe : probes) {
    for (int i = 0; i < grid.n_ch; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      w.row({std::to_string(probe.probe_id), probe.path_id,
             std::to_string(i), format_fixed(grid.f_thz[idx]),
             format_fixed(probe.p_in_dbm[idx]),
             format_fixed(probe.p_out_dbm[idx]),
             format_fixed(probe.p_ase_dbm[idx])});
    }
  }
}

std::vector<ProbeRecord> load_probes_csv(const ChannelGrid& grid,
                                         const std::filesystem::path& p) {
  const CsvTable t = read_csv(p);
  const std::vector<std::string> expected = {
      "probe_id", "path_id", "ch", "f_thz", "p_in_dbm", "p_out_dbm",
      "p_ase_dbm"};
  if (t.header != expected) {
    throw std::invalid_argument("probes csv: unexpected header");
  }
  std::vector<ProbeRecord> probes;
  for (const auto& row : t.rows) {
    if (row.size() != expected.size()) {
      throw std::invalid_argument("probes csv: expected 7 columns");
    }
    const auto id = static_cast<std::int64_t>(parse_double(row[0]));
    const int ch = static_cast<int>(parse_double(row[2]));
    if (ch < 0 || ch >= grid.n_ch) {
      throw std::invalid_argument("probes csv: channel out of range");
    }
    if (std::abs(parse_double(row[3]) -
                 grid.f_thz[static_cast<std::size_t>(ch)]) > 1e-6) {
      throw std::invalid_argument(
          "probes csv: frequency mismatch with grid at channel " +
          std::to_string(ch));
    }
    if (probes.empty() || probes.back().probe_id != id) {
      ProbeRecord rec;
      rec.probe_id = id;
      rec.path_id = row[1];
      rec.p_in_dbm.assign(static_cast<std::size_t>(grid.n_ch), 0.0);
      rec.p_out_dbm.assign(static_cast<std::size_t>(grid.n_ch), 0.0);
      rec.p_ase_dbm.assign(static_cast<std::size_t>(grid.n_ch), 0.0);
      probes.push_back(std::move(rec));
    }
    ProbeRecord& rec = probes.back();
    rec.p_in_dbm[static_cast<std::size_t>(ch)] = parse_double(row[4]);
    rec.p_out_dbm[static_cast<std::size_t>(ch)] = parse_double(row[5]);
    rec.p_ase_dbm[static_cast<std::size_t>(ch)] = parse_double(row[6]);
  }
  return probes;
}

void save_curve_csv(std::span<const TrainCurvePoint> curve,
                    const std::filesystem::path& p, std::uint64_t config_hash,
                    std::uint64_t model_hash) {
  CsvWriter w(p);
  write_standard_comments(w, config_hash, model_hash);
  w.header({"epoch", "train_mse", "val_mse"});
  for (const TrainCurvePoint& pt : curve) {
    w.row({std::to_string(pt.epoch), format_fixed(pt.train_mse),
           format_fixed(pt.val_mse)});
  }
}

}  // namespace wdmtwin
