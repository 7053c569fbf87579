// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace gradsim {

// Cluster view of a flat, homogeneous interconnect: p ring/tree members, a
// single link bandwidth and a per-hop latency coefficient.
struct NetworkProfile {
  int workers = 1;         // p
  double bandwidth = 0.0;  // bytes/s
  double latency = 0.0;    // seconds per hop (alpha)

  // Throws ValidationError naming "<prefix>.<field>".
  void validate(std::string_view prefix = "network") const;

  bool operator==(const NetworkProfile&) const = default;
};

// One vector handed to a collective call.
struct Payload {
  double bytes = 0.0;

  bool operator==(const Payload&) const = default;
};

enum class Collective { RingReduce, TreeReduce, ParameterServer, AllGather };

std::string_view to_string(Collective kind);

// Closed-form alpha-beta cost of one collective call. All kinds return 0 when
// p == 1. RingReduce: 2a(p-1) + 2n(p-1)/(p BW); TreeReduce: 2a ceil(log2 p) +
// 2n ceil(log2 p)/BW; ParameterServer: 2a + 2n(p-1)/BW; AllGather: n(p-1)/BW
// (no latency term).
double comm_time(Collective kind, Payload payload, const NetworkProfile& net);

}  // namespace gradsim
