// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gradsim/engine.hpp"

namespace gradsim {

struct SweepRow {
  double parameter = 0.0;
  std::vector<IterationEstimate> estimates;  // one per scheme label
  std::vector<double> linear_gaps;           // gap vs the row's effective T_comp

  bool operator==(const SweepRow&) const = default;
};

// Parameter value where two schemes' totals meet, located by bisection after a
// sign change between adjacent grid rows.
struct Crossover {
  std::string scheme_a;
  std::string scheme_b;
  double parameter = 0.0;

  bool operator==(const Crossover&) const = default;
};

struct SweepResult {
  std::string parameter_name;
  std::vector<std::string> scheme_labels;
  std::vector<SweepRow> rows;  // sorted by parameter
  std::vector<Crossover> crossovers;
};

struct CompressionRequirement {
  double required_payload = 0.0;  // bytes that may be sent per iteration (g-hat)
  double required_ratio = 0.0;    // g / g-hat, meaningful when feasible
  bool feasible = false;

  bool operator==(const CompressionRequirement&) const = default;
};

// Evaluates every scheme at `steps` evenly spaced bandwidths in
// [bw_lo, bw_hi] (bytes/s) and reports all pairwise crossovers, bisected to
// relative tolerance 1e-6.
SweepResult sweep_bandwidth(const ModelProfile& model, const NetworkProfile& net_template,
                            const std::vector<CompressionScheme>& schemes, double bw_lo,
                            double bw_hi, int steps);

// At factor s both the backward pass and (unless frozen) the encode-decode
// step run s times faster; the network is unchanged.
SweepResult sweep_compute_speedup(const ModelProfile& model, const NetworkProfile& net,
                                  const std::vector<CompressionScheme>& schemes, double s_lo,
                                  double s_hi, int steps, bool scale_encode = true);

// Largest payload g-hat whose ring-reduce time still hides entirely under the
// backward pass: solves T_comp = 2a(p-1) + 2*g-hat*(p-1)/(p*BW). Encode time
// is deliberately ignored (idealized best case). Infeasible when the latency
// term alone exceeds T_comp; degenerate (ratio 1) when p == 1.
CompressionRequirement required_compression(const ModelProfile& model, const NetworkProfile& net);

// Hypothetical variants of `base`: dividing encode-decode time by k inflates
// every payload by l*k (k == 1 keeps the base scheme untouched). Rows are k
// values; columns one estimate per l.
SweepResult sweep_encode_tradeoff(const ModelProfile& model, const NetworkProfile& net,
                                  const CompressionScheme& base, int k_lo, int k_hi,
                                  const std::vector<double>& l_values);

// Evaluates every scheme at each worker count (ascending). Integer parameter,
// so no bisected crossovers are reported.
SweepResult sweep_workers(const ModelProfile& model, const NetworkProfile& net_template,
                          const std::vector<CompressionScheme>& schemes,
                          const std::vector<int>& p_values);

}  // namespace gradsim
