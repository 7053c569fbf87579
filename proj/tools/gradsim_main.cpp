// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradsim/analysis.hpp"
#include "gradsim/engine.hpp"
#include "gradsim/errors.hpp"
#include "gradsim/profiles.hpp"
#include "gradsim/units.hpp"
#include "output.hpp"

namespace {

using namespace gradsim;
using cli::Format;

struct InputOptions {
  std::string preset;
  std::string profile_path;
};

struct OutputOptions {
  std::string format = "table";
  std::string out_path;
};

std::string join(const std::vector<std::string>& parts) {
  std::string joined;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) joined += ", ";
    joined += parts[i];
  }
  return joined;
}

ProfileBundle resolve_bundle(const InputOptions& in) {
  if (!in.preset.empty() && !in.profile_path.empty()) {
    throw ConfigError("--preset and --profile are mutually exclusive");
  }
  if (!in.preset.empty()) {
    const ProfileBundle* bundle = find_preset(in.preset);
    if (!bundle) {
      throw ConfigError("unknown preset '" + in.preset +
                        "'; available presets: " + join(preset_names()));
    }
    return *bundle;
  }
  if (!in.profile_path.empty()) {
    return load_bundle_file(in.profile_path);
  }
  throw ConfigError("one of --preset or --profile is required");
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> items;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<CompressionScheme> select_schemes(const ProfileBundle& bundle,
                                              const std::string& csv) {
  if (csv.empty()) return bundle.schemes;
  std::vector<std::string> available;
  for (const auto& s : bundle.schemes) available.push_back(s.name);
  std::vector<CompressionScheme> selected;
  for (const auto& name : split_csv(csv)) {
    const CompressionScheme* scheme = bundle.find_scheme(name);
    if (!scheme) {
      throw ConfigError("unknown scheme '" + name +
                        "'; available schemes: " + join(available));
    }
    selected.push_back(*scheme);
  }
  if (selected.empty()) {
    throw ConfigError("--schemes selected nothing");
  }
  return selected;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

// "A:B:N" -> N points evenly spaced over [A, B]
Range parse_range(const std::string& text, const std::string& flag) {
  Range r;
  char c1 = 0, c2 = 0;
  std::istringstream stream(text);
  if (!(stream >> r.lo >> c1 >> r.hi >> c2 >> r.steps) || c1 != ':' || c2 != ':' ||
      !stream.eof()) {
    throw ConfigError(flag + " expects A:B:N, got '" + text + "'");
  }
  return r;
}

std::pair<int, int> parse_int_pair(const std::string& text, const std::string& flag) {
  int lo = 0, hi = 0;
  char c = 0;
  std::istringstream stream(text);
  if (!(stream >> lo >> c >> hi) || c != ':' || !stream.eof()) {
    throw ConfigError(flag + " expects A:B, got '" + text + "'");
  }
  return {lo, hi};
}

void emit(const std::string& text, const OutputOptions& out) {
  if (out.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out.out_path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot open output file: " + out.out_path);
  }
  file << text;
}

void warn_on_expansion(const ProfileBundle& bundle,
                       const std::vector<CompressionScheme>& schemes) {
  for (const auto& scheme : schemes) {
    if (scheme.is_syncsgd()) continue;
    try {
      const double ratio = effective_compression_ratio(scheme, bundle.model);
      if (ratio < 1.0) {
        std::cerr << "warning: scheme '" << scheme.name << "' expands the gradient (ratio "
                  << ratio << "x < 1)\n";
      }
    } catch (const ConfigError&) {
      // zero-payload schemes have no ratio; estimation handles them
    }
  }
}

int cmd_estimate(const InputOptions& in, const std::string& schemes_csv,
                 const OutputOptions& out) {
  const ProfileBundle bundle = resolve_bundle(in);
  const auto schemes = select_schemes(bundle, schemes_csv);
  warn_on_expansion(bundle, schemes);

  const IterationEstimate baseline = estimate_syncsgd(bundle.model, bundle.network);
  std::vector<cli::EstimateRow> rows;
  rows.reserve(schemes.size());
  for (const auto& scheme : schemes) {
    cli::EstimateRow row;
    row.estimate = estimate(bundle.model, bundle.network, scheme);
    row.linear_gap = linear_scaling_gap(row.estimate, bundle.model);
    row.speedup_vs_syncsgd = speedup(baseline, row.estimate);
    rows.push_back(std::move(row));
  }
  emit(cli::format_estimates(bundle, rows, cli::parse_format(out.format)), out);
  return 0;
}

int cmd_sweep(const std::string& kind, const InputOptions& in, const std::string& schemes_csv,
              const std::string& bw_range, const std::string& workers_csv,
              const std::string& speedup_range, const std::string& k_range,
              const std::string& l_csv, bool freeze_encode, const OutputOptions& out) {
  const ProfileBundle bundle = resolve_bundle(in);
  const Format format = cli::parse_format(out.format);

  if (kind == "bandwidth") {
    if (bw_range.empty()) throw ConfigError("bandwidth sweep requires --bw-gbps A:B:N");
    const Range r = parse_range(bw_range, "--bw-gbps");
    const auto sweep = sweep_bandwidth(bundle.model, bundle.network,
                                       select_schemes(bundle, schemes_csv),
                                       units::gbps_to_bytes_per_s(r.lo),
                                       units::gbps_to_bytes_per_s(r.hi), r.steps);
    emit(cli::format_sweep(sweep, format, false, false), out);
    return 0;
  }
  if (kind == "workers") {
    if (workers_csv.empty()) throw ConfigError("workers sweep requires --workers N,N,...");
    std::vector<int> p_values;
    for (const auto& item : split_csv(workers_csv)) {
      try {
        p_values.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw ConfigError("--workers expects integers, got '" + item + "'");
      }
    }
    const auto sweep = sweep_workers(bundle.model, bundle.network,
                                     select_schemes(bundle, schemes_csv), p_values);
    emit(cli::format_sweep(sweep, format, false, true), out);
    return 0;
  }
  if (kind == "compute-speedup") {
    if (speedup_range.empty()) {
      throw ConfigError("compute-speedup sweep requires --speedup A:B:N");
    }
    const Range r = parse_range(speedup_range, "--speedup");
    const auto sweep =
        sweep_compute_speedup(bundle.model, bundle.network,
                              select_schemes(bundle, schemes_csv), r.lo, r.hi, r.steps,
                              !freeze_encode);
    emit(cli::format_sweep(sweep, format, false, false), out);
    return 0;
  }
  if (kind == "encode-tradeoff") {
    if (schemes_csv.empty()) {
      throw ConfigError("encode-tradeoff requires --schemes with one compressed scheme");
    }
    const auto schemes = select_schemes(bundle, schemes_csv);
    if (schemes.size() != 1) {
      throw ConfigError("encode-tradeoff takes exactly one base scheme");
    }
    auto [k_lo, k_hi] = k_range.empty() ? std::pair<int, int>{1, 4}
                                        : parse_int_pair(k_range, "--k");
    std::vector<double> l_values;
    if (l_csv.empty()) {
      l_values = {1.0, 2.0, 3.0};
    } else {
      for (const auto& item : split_csv(l_csv)) {
        try {
          l_values.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw ConfigError("--l expects numbers, got '" + item + "'");
        }
      }
    }
    const auto sweep =
        sweep_encode_tradeoff(bundle.model, bundle.network, schemes[0], k_lo, k_hi, l_values);
    emit(cli::format_sweep(sweep, format, true, false), out);
    return 0;
  }
  throw ConfigError("unknown sweep kind '" + kind +
                    "' (bandwidth|workers|compute-speedup|encode-tradeoff)");
}

int cmd_required_compression(const InputOptions& in, const OutputOptions& out) {
  const ProfileBundle bundle = resolve_bundle(in);
  const CompressionRequirement req = required_compression(bundle.model, bundle.network);
  if (!req.feasible) {
    std::cerr << "infeasible: latency-bound\n";
  }
  emit(cli::format_requirement(bundle, req, cli::parse_format(out.format)), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical per-iteration time model for synchronous data-parallel training "
               "with gradient compression"};
  app.require_subcommand(1);

  InputOptions in;
  OutputOptions out;
  std::string schemes_csv;
  std::string sweep_kind;
  std::string bw_range, workers_csv, speedup_range, k_range, l_csv;
  bool freeze_encode = false;

  auto add_io = [&](CLI::App* cmd, bool with_input) {
    if (with_input) {
      cmd->add_option("--preset", in.preset, "built-in profile bundle name");
      cmd->add_option("--profile", in.profile_path, "profile document path (JSON)");
    }
    cmd->add_option("--format", out.format, "table|csv|json")->capture_default_str();
    cmd->add_option("--out", out.out_path, "write output to file instead of stdout");
  };

  CLI::App* estimate = app.add_subcommand("estimate", "per-iteration estimates per scheme");
  add_io(estimate, true);
  estimate->add_option("--schemes", schemes_csv, "comma-separated scheme names (default all)");

  CLI::App* sweep = app.add_subcommand("sweep", "what-if sweeps over one parameter");
  sweep->add_option("kind", sweep_kind, "bandwidth|workers|compute-speedup|encode-tradeoff")
      ->required();
  add_io(sweep, true);
  sweep->add_option("--schemes", schemes_csv, "comma-separated scheme names (default all)");
  sweep->add_option("--bw-gbps", bw_range, "bandwidth range A:B:N in Gbps");
  sweep->add_option("--workers", workers_csv, "worker counts, e.g. 4,8,16,32,64,96");
  sweep->add_option("--speedup", speedup_range, "compute speedup factors A:B:N");
  sweep->add_option("--k", k_range, "encode-time divisors A:B (default 1:4)");
  sweep->add_option("--l", l_csv, "payload growth factors, e.g. 1,2,3");
  sweep->add_flag("--freeze-encode", freeze_encode,
                  "keep encode-decode time fixed while compute speeds up");

  CLI::App* required =
      app.add_subcommand("required-compression", "payload size for linear scaling");
  add_io(required, true);

  CLI::App* presets = app.add_subcommand("presets", "list built-in profile bundles");
  add_io(presets, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (estimate->parsed()) return cmd_estimate(in, schemes_csv, out);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_kind, in, schemes_csv, bw_range, workers_csv, speedup_range,
                       k_range, l_csv, freeze_encode, out);
    }
    if (required->parsed()) return cmd_required_compression(in, out);
    if (presets->parsed()) {
      emit(gradsim::cli::format_presets(gradsim::cli::parse_format(out.format)), out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
