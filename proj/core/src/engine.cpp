// SPDX-License-Identifier: Apache-2.0
#include "gradsim/engine.hpp"

#include <algorithm>
#include <cmath>

#include "gradsim/errors.hpp"

namespace gradsim {

IterationEstimate estimate_syncsgd(const ModelProfile& model, const NetworkProfile& net) {
  model.validate();
  net.validate();

  IterationEstimate est;
  est.scheme_label = "syncsgd";
  if (net.workers == 1) {
    est.compute = model.backward_time;
    est.total = model.backward_time;
    return est;
  }

  const BucketPlan plan = bucketize(model);
  const double per_bucket = comm_time(Collective::RingReduce, Payload{plan.full_size}, net);
  const double overlap_comm = static_cast<double>(plan.full_buckets) * per_bucket;
  const double tail_comm = comm_time(Collective::RingReduce, Payload{plan.tail_size}, net);

  est.compute = model.gamma * model.backward_time;
  est.total = std::max(est.compute, overlap_comm) + tail_comm;
  est.comm_overlapped = std::min(overlap_comm, est.compute);
  est.comm_exposed = est.total - est.compute;
  return est;
}

IterationEstimate estimate_unoverlapped(const ModelProfile& model, const NetworkProfile& net,
                                        std::string_view label, double encode_decode_time,
                                        std::span<const std::pair<Payload, Collective>> payloads) {
  model.validate();
  net.validate();
  if (!std::isfinite(encode_decode_time) || encode_decode_time < 0.0) {
    throw ValidationError("scheme.encode_decode_time", "must be >= 0");
  }

  IterationEstimate est;
  est.scheme_label = std::string(label);
  est.compute = model.backward_time;
  est.encode_decode = encode_decode_time;
  for (const auto& [payload, collective] : payloads) {
    est.comm_exposed += comm_time(collective, payload, net);
  }
  est.total = est.compute + est.encode_decode + est.comm_exposed;
  return est;
}

IterationEstimate estimate_compressed(const ModelProfile& model, const NetworkProfile& net,
                                      const CompressionScheme& scheme) {
  if (scheme.is_syncsgd()) {
    throw ConfigError("estimate_compressed requires a compressed scheme; use estimate_syncsgd "
                      "for 'syncsgd'");
  }
  const PayloadList payloads = compressed_payloads(scheme, model);
  return estimate_unoverlapped(model, net, scheme.name, scheme.encode_decode_time, payloads);
}

IterationEstimate estimate(const ModelProfile& model, const NetworkProfile& net,
                           const CompressionScheme& scheme) {
  if (scheme.is_syncsgd()) {
    scheme.validate();
    IterationEstimate est = estimate_syncsgd(model, net);
    est.scheme_label = scheme.name;
    return est;
  }
  return estimate_compressed(model, net, scheme);
}

double linear_scaling_gap(const IterationEstimate& estimate, const ModelProfile& model) {
  return estimate.total - model.backward_time;
}

double speedup(const IterationEstimate& baseline, const IterationEstimate& candidate) {
  if (!(candidate.total > 0.0)) {
    throw ValidationError("candidate.total", "must be > 0 to form a speedup ratio");
  }
  return baseline.total / candidate.total;
}

}  // namespace gradsim
