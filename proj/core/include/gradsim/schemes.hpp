// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gradsim/cost_model.hpp"

namespace gradsim {

// One training workload as the model sees it: how many gradient bytes leave
// the GPU each iteration and how long the backward pass takes to produce them.
struct ModelProfile {
  std::string name;
  double gradient_size = 0.0;  // bytes (g)
  double backward_time = 0.0;  // seconds, single-worker backward pass
  double gamma = 1.07;         // backward slowdown while overlapping comm
  double bucket_size = 25e6;   // bytes (b)
  int batch_size = 0;          // per-worker samples, reporting metadata
  std::string provenance;      // "measured" | "fixture" | "user"

  void validate(std::string_view prefix = "model") const;

  bool operator==(const ModelProfile&) const = default;
};

// Gradient split into k fixed-size buckets; the tail bucket absorbs the
// remainder. (k-1)*full_size + tail_size == gradient size, 0 < tail <= full.
struct BucketPlan {
  int full_buckets = 0;    // k-1
  double full_size = 0.0;  // b
  double tail_size = 0.0;  // b-hat

  bool operator==(const BucketPlan&) const = default;
};

BucketPlan bucketize(const ModelProfile& model);

struct SyncSgd {
  bool operator==(const SyncSgd&) const = default;
};

// Low-rank factor pair; payload sizes in bytes. Either set directly or derive
// from layer shapes with derive_powersgd_payloads().
struct PowerSgd {
  int rank = 0;
  double payload_p = 0.0;
  double payload_q = 0.0;

  bool operator==(const PowerSgd&) const = default;
};

// Top-fraction sparsification; indices cost the same wire bytes as values.
struct MsTopK {
  double fraction = 0.0;  // kept fraction of the gradient, in [0, 1]

  bool operator==(const MsTopK&) const = default;
};

// One sign bit per 32-bit gradient element.
struct SignSgd {
  bool operator==(const SignSgd&) const = default;
};

using SchemeParams = std::variant<SyncSgd, PowerSgd, MsTopK, SignSgd>;

struct CompressionScheme {
  std::string name;
  SchemeParams params;
  double encode_decode_time = 0.0;  // seconds
  std::string provenance;           // "measured" | "fixture" | "user"

  bool is_syncsgd() const { return std::holds_alternative<SyncSgd>(params); }
  // Whether the scheme's reduction operator is associative. Non-compatible
  // schemes aggregate via all-gather instead.
  bool allreduce_compatible() const;
  std::string_view kind_name() const;

  void validate(std::string_view prefix = "scheme") const;

  bool operator==(const CompressionScheme&) const = default;
};

using PayloadList = std::vector<std::pair<Payload, Collective>>;

// What goes on the wire each iteration, and through which collective.
// syncSGD sends its buckets over ring-reduce; PowerSGD its P and Q factors
// over ring-reduce; MSTop-K values plus equal-size indices and signSGD its
// bitmap over all-gather.
PayloadList compressed_payloads(const CompressionScheme& scheme, const ModelProfile& model);

// cols == 0 declares a 1-D tensor of `rows` elements, which PowerSGD leaves
// uncompressed (counted into payload P).
struct LayerShape {
  long long rows = 0;
  long long cols = 0;

  bool operator==(const LayerShape&) const = default;
};

struct PowerSgdPayloads {
  double payload_p = 0.0;
  double payload_q = 0.0;

  bool operator==(const PowerSgdPayloads&) const = default;
};

// P = sum_i rows_i * min(rank, min(rows_i, cols_i)) * element_size, Q
// likewise over cols. Additive over layers.
PowerSgdPayloads derive_powersgd_payloads(std::span<const LayerShape> layers, int rank,
                                          double element_size = 4.0);

double total_wire_bytes(const CompressionScheme& scheme, const ModelProfile& model);

// Gradient bytes divided by bytes actually sent per iteration (values plus
// indices for MSTop-K). Throws ConfigError when nothing is sent.
double effective_compression_ratio(const CompressionScheme& scheme, const ModelProfile& model);

}  // namespace gradsim
