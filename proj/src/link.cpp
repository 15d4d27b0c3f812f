// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wdmtwin/csv.hpp"

namespace wdmtwin {

Toggles toggles_from_name(const std::string& name) {
  if (name == "full") return Toggles{true, true};
  if (name == "no-nl") return Toggles{false, true};
  if (name == "no-nl-no-trx") return Toggles{false, false};
  throw std::invalid_argument(
      "unknown variant '" + name + "' (expected full|no-nl|no-nl-no-trx)");
}

std::string toggles_name(const Toggles& t) {
  if (t.nl && t.trx) return "full";
  if (!t.nl && t.trx) return "no-nl";
  if (!t.nl && !t.trx) return "no-nl-no-trx";
  return "nl-no-trx";
}

double SnrReport::min_margin_db() const {
  return *std::min_element(margin_db.begin(), margin_db.end());
}

std::size_t SnrReport::argmin_margin() const {
  return static_cast<std::size_t>(
      std::min_element(margin_db.begin(), margin_db.end()) -
      margin_db.begin());
}

SnrReport predict(const LinkPath& path, const PowerProfile& launch,
                  const TrxPenaltyModel* trx, Toggles toggles,
                  double threshold_db) {
  require_same_grid(path.grid, launch);
  SnrReport rep;
  rep.path_id = path.path_id;
  rep.toggles = toggles;
  rep.threshold_db = threshold_db;

  SpanState state;
  std::vector<double> snr =
      cascade_snr_db<double>(path, launch.p_mw, trx, toggles, &rep.flags,
                             &state);
  const ChannelGrid& grid = path.grid;
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.n_ch; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    rep.f_thz.push_back(grid.f_thz[idx]);
    rep.lambda_nm.push_back(grid.lambda_nm(i));
    rep.signal_dbm.push_back(mw_to_dbm(state.signal[idx]));
    rep.ase_dbm.push_back(mw_to_dbm(state.ase[idx]));
    rep.nli_dbm.push_back(mw_to_dbm(state.nli[idx]));
    double osnr;
    if (state.signal[idx] == 0.0) {
      osnr = -inf;
      snr[idx] = -inf;
    } else if (state.ase[idx] == 0.0) {
      osnr = kSnrCapDb;
      rep.flags.push_back("osnr capped at 60 dB on channel " +
                          std::to_string(i));
    } else {
      osnr = 10.0 * std::log10(state.signal[idx] / state.ase[idx]);
      if (osnr > kSnrCapDb) {
        osnr = kSnrCapDb;
        rep.flags.push_back("osnr capped at 60 dB on channel " +
                            std::to_string(i));
      }
    }
    rep.osnr_db.push_back(osnr);
    rep.snr_db.push_back(snr[idx]);
    rep.margin_db.push_back(snr[idx] - threshold_db);
  }
  return rep;
}

void save_report_csv(const SnrReport& report, const std::filesystem::path& p,
                     std::uint64_t config_hash, std::uint64_t model_hash) {
  CsvWriter w(p);
  write_standard_comments(w, config_hash, model_hash);
  w.comment("path_id=" + report.path_id);
  w.comment("toggles=" + toggles_name(report.toggles));
  w.comment("threshold_db=" + format_fixed(report.threshold_db));
  for (const auto& f : report.flags) w.comment("flag: " + f);
  w.header({"ch", "f_thz", "lambda_nm", "p_dbm", "ase_dbm", "nli_dbm",
            "osnr_db", "snr_db", "margin_db"});
  for (std::size_t i = 0; i < report.f_thz.size(); ++i) {
    w.row({std::to_string(i), format_fixed(report.f_thz[i]),
           format_fixed(report.lambda_nm[i]),
           format_fixed(report.signal_dbm[i]),
           format_fixed(report.ase_dbm[i]), format_fixed(report.nli_dbm[i]),
           format_fixed(report.osnr_db[i]), format_fixed(report.snr_db[i]),
           format_fixed(report.margin_db[i])});
  }
}

void save_profile_csv(const ChannelGrid& grid, const PowerProfile& profile,
                      const std::filesystem::path& p,
                      std::uint64_t config_hash, std::uint64_t model_hash) {
  require_same_grid(grid, profile);
  CsvWriter w(p);
  write_standard_comments(w, config_hash, model_hash);
  w.header({"ch", "f_thz", "p_dbm"});
  for (int i = 0; i < grid.n_ch; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    w.row({std::to_string(i), format_fixed(grid.f_thz[idx]),
           format_fixed(mw_to_dbm(profile.p_mw[idx]))});
  }
}

PowerProfile load_profile_csv(const ChannelGrid& grid,
                              const std::filesystem::path& p) {
  const CsvTable t = read_csv(p);
  if (t.header != std::vector<std::string>{"ch", "f_thz", "p_dbm"}) {
    throw std::invalid_argument("profile csv: expected header ch,f_thz,p_dbm");
  }
  if (static_cast<int>(t.rows.size()) != grid.n_ch) {
    throw std::invalid_argument("profile csv: expected " +
                                std::to_string(grid.n_ch) + " rows, got " +
                                std::to_string(t.rows.size()));
  }
  std::vector<double> p_mw(static_cast<std::size_t>(grid.n_ch), 0.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != 3) {
      throw std::invalid_argument("profile csv: expected 3 columns");
    }
    const int ch = static_cast<int>(parse_double(row[0]));
    const double f = parse_double(row[1]);
    if (ch < 0 || ch >= grid.n_ch) {
      throw std::invalid_argument("profile csv: channel index out of range");
    }
    if (std::abs(f - grid.f_thz[static_cast<std::size_t>(ch)]) > 1e-6) {
      throw std::invalid_argument(
          "profile csv: frequency mismatch with grid at channel " +
          std::to_string(ch));
    }
    const double dbm = parse_double(row[2]);
    p_mw[static_cast<std::size_t>(ch)] =
        std::isinf(dbm) && dbm < 0 ? 0.0 : dbm_to_mw(dbm);
  }
  return make_profile(grid, std::move(p_mw));
}

}  // namespace wdmtwin
