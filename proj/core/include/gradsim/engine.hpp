// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>

#include "gradsim/cost_model.hpp"
#include "gradsim/schemes.hpp"

namespace gradsim {

// Predicted backward-plus-synchronization time for one iteration, broken into
// critical-path parts: total == compute + encode_decode + comm_exposed.
// comm_overlapped is the communication hidden under the backward pass.
struct IterationEstimate {
  double total = 0.0;
  double compute = 0.0;          // gamma * T_comp on the overlapped path, else T_comp
  double encode_decode = 0.0;
  double comm_overlapped = 0.0;
  double comm_exposed = 0.0;
  std::string scheme_label;

  bool operator==(const IterationEstimate&) const = default;
};

// Overlapped bucketed all-reduce: the first k-1 buckets hide under the
// backward pass (which runs gamma slower while they do), the tail bucket is
// exposed. total = max(gamma*T_comp, (k-1)*T_comm(b)) + T_comm(b_hat).
// A single worker pays plain T_comp: there is nothing to overlap.
IterationEstimate estimate_syncsgd(const ModelProfile& model, const NetworkProfile& net);

// Compressed schemes run serially: backward, encode, send, decode. No overlap,
// so gamma does not apply. total = T_comp + T_enc + sum comm_time(payloads).
IterationEstimate estimate_compressed(const ModelProfile& model, const NetworkProfile& net,
                                      const CompressionScheme& scheme);

// Dispatches to the overlapped or serial path on scheme kind.
IterationEstimate estimate(const ModelProfile& model, const NetworkProfile& net,
                           const CompressionScheme& scheme);

// Serial-path estimate from an explicit payload list; building block for
// estimate_compressed and the what-if tradeoff sweeps.
IterationEstimate estimate_unoverlapped(const ModelProfile& model, const NetworkProfile& net,
                                        std::string_view label, double encode_decode_time,
                                        std::span<const std::pair<Payload, Collective>> payloads);

// T_obs minus the single-worker backward time: under weak scaling, linear
// scaling means the iteration costs exactly T_comp.
double linear_scaling_gap(const IterationEstimate& estimate, const ModelProfile& model);

// baseline.total / candidate.total
double speedup(const IterationEstimate& baseline, const IterationEstimate& candidate);

}  // namespace gradsim
