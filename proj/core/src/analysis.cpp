// SPDX-License-Identifier: Apache-2.0
#include "gradsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gradsim/errors.hpp"

namespace gradsim {

namespace {

constexpr double kCrossoverRelTol = 1e-6;

std::vector<std::string> labels_of(const std::vector<CompressionScheme>& schemes) {
  std::vector<std::string> labels;
  labels.reserve(schemes.size());
  for (const auto& s : schemes) labels.push_back(s.name);
  return labels;
}

void require_schemes(const std::vector<CompressionScheme>& schemes) {
  if (schemes.empty()) {
    throw ConfigError("sweep requires at least one scheme");
  }
}

std::vector<double> grid(double lo, double hi, int steps) {
  std::vector<double> xs(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(steps - 1);
  }
  return xs;
}

// Scans adjacent rows for a strict sign change of total_i - total_j and
// bisects it. A difference that is exactly zero at a grid point is a tie, not
// a crossing, so identical schemes report nothing.
void detect_crossovers(SweepResult& result,
                       const std::function<double(double, std::size_t)>& total_at) {
  const std::size_t n_schemes = result.scheme_labels.size();
  for (std::size_t i = 0; i < n_schemes; ++i) {
    for (std::size_t j = i + 1; j < n_schemes; ++j) {
      for (std::size_t r = 0; r + 1 < result.rows.size(); ++r) {
        const double d0 =
            result.rows[r].estimates[i].total - result.rows[r].estimates[j].total;
        const double d1 =
            result.rows[r + 1].estimates[i].total - result.rows[r + 1].estimates[j].total;
        if (d0 == 0.0 || d1 == 0.0 || (d0 < 0.0) == (d1 < 0.0)) continue;

        double lo = result.rows[r].parameter;
        double hi = result.rows[r + 1].parameter;
        double d_lo = d0;
        while (hi - lo > kCrossoverRelTol * std::max(std::abs(lo), std::abs(hi))) {
          const double mid = 0.5 * (lo + hi);
          const double d_mid = total_at(mid, i) - total_at(mid, j);
          if (d_mid == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((d_mid < 0.0) == (d_lo < 0.0)) {
            lo = mid;
            d_lo = d_mid;
          } else {
            hi = mid;
          }
        }
        result.crossovers.push_back(
            {result.scheme_labels[i], result.scheme_labels[j], 0.5 * (lo + hi)});
      }
    }
  }
}

}  // namespace

SweepResult sweep_bandwidth(const ModelProfile& model, const NetworkProfile& net_template,
                            const std::vector<CompressionScheme>& schemes, double bw_lo,
                            double bw_hi, int steps) {
  model.validate();
  require_schemes(schemes);
  if (!std::isfinite(bw_lo) || bw_lo <= 0.0) {
    throw ValidationError("sweep.bw_lo", "must be > 0");
  }
  if (!std::isfinite(bw_hi) || bw_hi < bw_lo) {
    throw ValidationError("sweep.bw_hi", "must be >= bw_lo");
  }
  if (steps < 2) {
    throw ValidationError("sweep.steps", "must be >= 2");
  }

  SweepResult result;
  result.parameter_name = "bandwidth_bytes_per_s";
  result.scheme_labels = labels_of(schemes);

  auto at_bandwidth = [&](double bw, const CompressionScheme& scheme) {
    NetworkProfile net = net_template;
    net.bandwidth = bw;
    return estimate(model, net, scheme);
  };

  for (double bw : grid(bw_lo, bw_hi, steps)) {
    SweepRow row;
    row.parameter = bw;
    for (const auto& scheme : schemes) {
      row.estimates.push_back(at_bandwidth(bw, scheme));
      row.linear_gaps.push_back(row.estimates.back().total - model.backward_time);
    }
    result.rows.push_back(std::move(row));
  }

  detect_crossovers(result, [&](double bw, std::size_t idx) {
    return at_bandwidth(bw, schemes[idx]).total;
  });
  return result;
}

SweepResult sweep_compute_speedup(const ModelProfile& model, const NetworkProfile& net,
                                  const std::vector<CompressionScheme>& schemes, double s_lo,
                                  double s_hi, int steps, bool scale_encode) {
  model.validate();
  net.validate();
  require_schemes(schemes);
  if (!std::isfinite(s_lo) || s_lo < 1.0) {
    throw ValidationError("sweep.speedup_lo", "must be >= 1");
  }
  if (!std::isfinite(s_hi) || s_hi < s_lo) {
    throw ValidationError("sweep.speedup_hi", "must be >= speedup_lo");
  }
  if (steps < 2) {
    throw ValidationError("sweep.steps", "must be >= 2");
  }

  SweepResult result;
  result.parameter_name = "compute_speedup_factor";
  result.scheme_labels = labels_of(schemes);

  auto at_factor = [&](double s, const CompressionScheme& scheme) {
    ModelProfile faster = model;
    faster.backward_time = model.backward_time / s;
    CompressionScheme adjusted = scheme;
    if (scale_encode) {
      adjusted.encode_decode_time = scheme.encode_decode_time / s;
    }
    return estimate(faster, net, adjusted);
  };

  for (double s : grid(s_lo, s_hi, steps)) {
    SweepRow row;
    row.parameter = s;
    const double scaled_backward = model.backward_time / s;
    for (const auto& scheme : schemes) {
      row.estimates.push_back(at_factor(s, scheme));
      row.linear_gaps.push_back(row.estimates.back().total - scaled_backward);
    }
    result.rows.push_back(std::move(row));
  }

  detect_crossovers(result, [&](double s, std::size_t idx) {
    return at_factor(s, schemes[idx]).total;
  });
  return result;
}

CompressionRequirement required_compression(const ModelProfile& model,
                                            const NetworkProfile& net) {
  model.validate();
  net.validate();

  if (net.workers == 1) {
    // degenerate: nothing to communicate, any payload "scales"
    return {model.gradient_size, 1.0, true};
  }

  const double p = static_cast<double>(net.workers);
  const double latency_floor = 2.0 * net.latency * (p - 1.0);
  const double budget = model.backward_time - latency_floor;
  if (budget <= 0.0) {
    return {0.0, 0.0, false};  // latency-bound: no payload size can fit
  }
  const double payload = budget * p * net.bandwidth / (2.0 * (p - 1.0));
  return {payload, model.gradient_size / payload, true};
}

SweepResult sweep_encode_tradeoff(const ModelProfile& model, const NetworkProfile& net,
                                  const CompressionScheme& base, int k_lo, int k_hi,
                                  const std::vector<double>& l_values) {
  model.validate();
  net.validate();
  base.validate();
  if (base.is_syncsgd()) {
    throw ConfigError("encode tradeoff requires a compressed base scheme, not 'syncsgd'");
  }
  if (k_lo < 1) {
    throw ValidationError("sweep.k_lo", "must be >= 1");
  }
  if (k_hi < k_lo) {
    throw ValidationError("sweep.k_hi", "must be >= k_lo");
  }
  if (l_values.empty()) {
    throw ValidationError("sweep.l_values", "must not be empty");
  }
  for (double l : l_values) {
    if (!std::isfinite(l) || l < 1.0) {
      throw ValidationError("sweep.l_values", "each l must be >= 1");
    }
  }

  const PayloadList base_payloads = compressed_payloads(base, model);

  SweepResult result;
  result.parameter_name = "k";
  for (double l : l_values) {
    std::string label = "l=" + std::to_string(l);
    label.erase(label.find_last_not_of('0') + 1);
    if (label.back() == '.') label.pop_back();
    result.scheme_labels.push_back(std::move(label));
  }

  for (int k = k_lo; k <= k_hi; ++k) {
    SweepRow row;
    row.parameter = static_cast<double>(k);
    for (double l : l_values) {
      // k == 1 takes no trade: the base scheme as-is, for every l
      const double multiplier = (k == 1) ? 1.0 : l * static_cast<double>(k);
      PayloadList scaled = base_payloads;
      for (auto& [payload, collective] : scaled) {
        payload.bytes *= multiplier;
      }
      row.estimates.push_back(estimate_unoverlapped(
          model, net, base.name, base.encode_decode_time / static_cast<double>(k), scaled));
      row.linear_gaps.push_back(row.estimates.back().total - model.backward_time);
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

SweepResult sweep_workers(const ModelProfile& model, const NetworkProfile& net_template,
                          const std::vector<CompressionScheme>& schemes,
                          const std::vector<int>& p_values) {
  model.validate();
  require_schemes(schemes);
  if (p_values.empty()) {
    throw ValidationError("sweep.workers", "must not be empty");
  }
  if (!std::is_sorted(p_values.begin(), p_values.end())) {
    throw ValidationError("sweep.workers", "must be sorted ascending");
  }
  for (int p : p_values) {
    if (p < 1) {
      throw ValidationError("sweep.workers", "each worker count must be >= 1");
    }
  }

  SweepResult result;
  result.parameter_name = "workers";
  result.scheme_labels = labels_of(schemes);

  for (int p : p_values) {
    NetworkProfile net = net_template;
    net.workers = p;
    SweepRow row;
    row.parameter = static_cast<double>(p);
    for (const auto& scheme : schemes) {
      row.estimates.push_back(estimate(model, net, scheme));
      row.linear_gaps.push_back(row.estimates.back().total - model.backward_time);
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace gradsim
