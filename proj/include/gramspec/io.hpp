#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gramspec/experiment.hpp"

namespace gramspec {

namespace detail {

/// Shortest decimal string that round-trips the double bit-exactly.
inline std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, ptr);
}

}  // namespace detail

/// Canonical JSON echo of a config; embedded in every output so a run can
/// be reproduced exactly from its file.
inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["mode"] = mode_name(c.mode);
  j["seed"] = c.seed;
  if (c.mode == Mode::mp_grid) {
    j["tau_min"] = c.tau_min;
    j["tau_max"] = c.tau_max;
    j["tau_points"] = c.tau_points;
    j["x_points"] = c.x_points;
    return j;
  }
  j["dim"] = c.dim;
  j["steps"] = c.resolved_steps();
  if (c.tau) j["tau"] = *c.tau;
  j["trials"] = c.trials;
  if (c.bins) j["bins"] = *c.bins;
  if (c.mode == Mode::floquet) {
    j["kick"] = c.kick_strength;
    j["rot"] = c.rotation;
    j["start"] = c.start;
  }
  if (c.mode == Mode::permutation) {
    j["start"] = c.start;
    if (c.permutation) j["perm"] = *c.permutation;
  }
  return j;
}

inline nlohmann::json fit_to_json(const FitReport& fit) {
  nlohmann::json j;
  j["ks_distance"] = fit.ks_distance;
  j["wasserstein1"] = fit.wasserstein1;
  j["atom_fraction_empirical"] = fit.atom_fraction_empirical;
  j["support_observed"] = {fit.support_min_positive, fit.support_max};
  j["moments_empirical"] = fit.moments_empirical;
  return j;
}

inline nlohmann::json result_to_json(const RunResult& r) {
  nlohmann::json j;
  j["config"] = config_to_json(r.config);
  if (!r.trial_eigenvalues.empty()) j["eigenvalues"] = r.trial_eigenvalues;
  if (r.fit) j["fit"] = fit_to_json(*r.fit);
  if (r.histogram) {
    j["histogram"] = {{"lower", r.histogram->lower},
                      {"upper", r.histogram->upper},
                      {"atom_count", r.histogram->atom_count},
                      {"counts", r.histogram->counts}};
  }
  if (!r.cycles.empty()) j["cycle_type"] = r.cycles;
  if (r.multiplicity) {
    nlohmann::json rows = nlohmann::json::array();
    const double tau = *r.law_tau;
    for (std::size_t k = 0; k <= r.multiplicity->max_multiplicity(); ++k)
      rows.push_back({k, r.multiplicity->pmf(k), poisson_pmf(k, tau)});
    j["multiplicity"] = {{"rows", rows}, {"tv_distance", *r.tv_distance}};
  }
  if (!r.grid.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const GridRow& row : r.grid)
      rows.push_back({row.tau, row.x, row.density, row.cdf, row.atom_weight});
    j["grid"] = rows;
  }
  return j;
}

namespace detail {

inline void write_spectra_csv(const RunResult& r, std::ostream& os) {
  os << "trial,index,eigenvalue\n";
  for (std::size_t t = 0; t < r.trial_eigenvalues.size(); ++t) {
    const auto& values = r.trial_eigenvalues[t];
    for (std::size_t i = 0; i < values.size(); ++i)
      os << t << ',' << i << ',' << format_double(values[i]) << '\n';
  }
}

inline void write_histogram_csv(const Histogram& h, std::ostream& os) {
  os << "bin_left,bin_right,count\n";
  os << "0,0," << h.atom_count << '\n';  // zeros kept apart as the atom
  const double width = (h.upper - h.lower) / static_cast<double>(h.counts.size());
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    os << format_double(h.lower + static_cast<double>(b) * width) << ','
       << format_double(h.lower + static_cast<double>(b + 1) * width) << ',' << h.counts[b]
       << '\n';
  }
}

}  // namespace detail

inline void result_to_csv(const RunResult& r, std::ostream& os) {
  os << "# config " << config_to_json(r.config).dump() << '\n';
  if (r.fit) os << "# fit " << fit_to_json(*r.fit).dump() << '\n';
  if (!r.cycles.empty()) {
    os << "# cycle_type ";
    for (std::size_t i = 0; i < r.cycles.size(); ++i)
      os << (i > 0 ? "," : "") << r.cycles[i];
    os << '\n';
  }
  switch (r.config.mode) {
    case Mode::random:
    case Mode::floquet:
      // --bins selects the histogram schema; otherwise the raw spectra
      // are written in the schema the `fit` subcommand reads back.
      if (r.config.bins)
        detail::write_histogram_csv(*r.histogram, os);
      else
        detail::write_spectra_csv(r, os);
      break;
    case Mode::permutation:
      detail::write_spectra_csv(r, os);
      break;
    case Mode::classical: {
      os << "# tv_distance " << detail::format_double(*r.tv_distance) << '\n';
      os << "multiplicity,empirical,poisson\n";
      const double tau = *r.law_tau;
      for (std::size_t k = 0; k <= r.multiplicity->max_multiplicity(); ++k)
        os << k << ',' << detail::format_double(r.multiplicity->pmf(k)) << ','
           << detail::format_double(poisson_pmf(k, tau)) << '\n';
      break;
    }
    case Mode::mp_grid:
      os << "tau,x,density,cdf,atom_weight\n";
      for (const GridRow& row : r.grid)
        os << detail::format_double(row.tau) << ',' << detail::format_double(row.x) << ','
           << detail::format_double(row.density) << ',' << detail::format_double(row.cdf) << ','
           << detail::format_double(row.atom_weight) << '\n';
      break;
  }
}

inline void write_result(const RunResult& r, std::ostream& os) {
  if (r.config.format == OutputFormat::json)
    os << result_to_json(r).dump(2) << '\n';
  else
    result_to_csv(r, os);
}

/// Permutation file: a JSON array of the images of 0..N-1.
inline std::vector<std::size_t> load_permutation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open permutation file: " + path);
  nlohmann::json j;
  in >> j;
  if (!j.is_array()) throw std::runtime_error("permutation file must hold a JSON array");
  return j.get<std::vector<std::size_t>>();
}

/// Pools every eigenvalue found in a stored spectrum file. Accepts the
/// CSV schema (trial,index,eigenvalue) with '#' comments, a bare JSON
/// array, or any JSON object with an "eigenvalues" entry.
inline SpectralMeasure load_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spectrum file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<double> values;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const nlohmann::json& eigen = j.is_object() ? j.at("eigenvalues") : j;
    if (eigen.is_array() && !eigen.empty() && eigen.front().is_array()) {
      for (const auto& trial : eigen)
        for (const auto& v : trial) values.push_back(v.get<double>());
    } else {
      for (const auto& v : eigen) values.push_back(v.get<double>());
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(lines, line)) {
      if (line.empty() || line.front() == '#') continue;
      if (!header_seen) {
        header_seen = true;
        if (line.find("eigenvalue") == std::string::npos)
          throw std::runtime_error("not a spectrum file (header '" + line + "'): " + path);
        continue;
      }
      const auto last_comma = line.rfind(',');
      if (last_comma == std::string::npos) continue;
      const std::string field = line.substr(last_comma + 1);
      double value = 0.0;
      const auto begin = field.data();
      const auto end = field.data() + field.size();
      if (std::from_chars(begin, end, value).ec == std::errc()) values.push_back(value);
    }
  }
  if (values.empty()) throw std::runtime_error("no eigenvalues found in: " + path);
  return SpectralMeasure(std::move(values));
}

/// Overlays the fields of a JSON config file onto `config`. The mode
/// comes from the CLI subcommand; command-line flags override afterwards.
inline void apply_config_file(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "config file must hold a JSON object");
  try {
    if (j.contains("dim")) config.dim = j["dim"].get<Eigen::Index>();
    if (j.contains("tau")) config.tau = j["tau"].get<double>();
    if (j.contains("steps")) config.steps = j["steps"].get<std::size_t>();
    if (j.contains("trials")) config.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("bins")) config.bins = j["bins"].get<std::size_t>();
    if (j.contains("kick")) config.kick_strength = j["kick"].get<double>();
    if (j.contains("rot")) config.rotation = j["rot"].get<double>();
    if (j.contains("start")) config.start = j["start"].get<std::size_t>();
    if (j.contains("perm")) config.permutation = j["perm"].get<std::vector<std::size_t>>();
    if (j.contains("tau_min")) config.tau_min = j["tau_min"].get<double>();
    if (j.contains("tau_max")) config.tau_max = j["tau_max"].get<double>();
    if (j.contains("tau_points")) config.tau_points = j["tau_points"].get<std::size_t>();
    if (j.contains("x_points")) config.x_points = j["x_points"].get<std::size_t>();
    if (j.contains("out")) config.out = j["out"].get<std::string>();
    if (j.contains("format")) {
      const auto format = j["format"].get<std::string>();
      if (format == "csv")
        config.format = OutputFormat::csv;
      else if (format == "json")
        config.format = OutputFormat::json;
      else
        throw ConfigError("format", "must be csv or json");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", std::string("bad field type: ") + e.what());
  }
}

}  // namespace gramspec
