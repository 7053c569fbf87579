// SPDX-License-Identifier: Apache-2.0
#include "gradsim/cost_model.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "gradsim/errors.hpp"

namespace gradsim {

void NetworkProfile::validate(std::string_view prefix) const {
  const std::string p(prefix);
  if (workers < 1) {
    throw ValidationError(p + ".workers", "must be >= 1");
  }
  if (!std::isfinite(bandwidth) || bandwidth <= 0.0) {
    throw ValidationError(p + ".bandwidth", "must be > 0");
  }
  if (!std::isfinite(latency) || latency < 0.0) {
    throw ValidationError(p + ".latency", "must be >= 0");
  }
}

std::string_view to_string(Collective kind) {
  switch (kind) {
    case Collective::RingReduce: return "ring-reduce";
    case Collective::TreeReduce: return "tree-reduce";
    case Collective::ParameterServer: return "parameter-server";
    case Collective::AllGather: return "all-gather";
  }
  return "unknown";
}

double comm_time(Collective kind, Payload payload, const NetworkProfile& net) {
  net.validate();
  if (!std::isfinite(payload.bytes) || payload.bytes < 0.0) {
    throw ValidationError("payload.bytes", "must be >= 0");
  }

  const double p = static_cast<double>(net.workers);
  const double n = payload.bytes;
  if (net.workers == 1) {
    return 0.0;
  }

  switch (kind) {
    case Collective::RingReduce:
      return 2.0 * net.latency * (p - 1.0) + 2.0 * n * (p - 1.0) / (p * net.bandwidth);
    case Collective::TreeReduce: {
      // ceil(log2 p), binary tree
      const double hops = static_cast<double>(
          std::bit_width(static_cast<unsigned>(net.workers - 1)));
      return 2.0 * net.latency * hops + 2.0 * n * hops / net.bandwidth;
    }
    case Collective::ParameterServer:
      return 2.0 * net.latency + 2.0 * n * (p - 1.0) / net.bandwidth;
    case Collective::AllGather:
      return n * (p - 1.0) / net.bandwidth;
  }
  return 0.0;
}

}  // namespace gradsim
