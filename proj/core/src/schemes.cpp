// SPDX-License-Identifier: Apache-2.0
#include "gradsim/schemes.hpp"

#include <algorithm>
#include <cmath>

#include "gradsim/errors.hpp"

namespace gradsim {

void ModelProfile::validate(std::string_view prefix) const {
  const std::string p(prefix);
  if (!std::isfinite(gradient_size) || gradient_size <= 0.0) {
    throw ValidationError(p + ".gradient_size", "must be > 0");
  }
  if (!std::isfinite(backward_time) || backward_time <= 0.0) {
    throw ValidationError(p + ".backward_time", "must be > 0");
  }
  if (!std::isfinite(gamma) || gamma < 1.0) {
    throw ValidationError(p + ".gamma", "must be >= 1");
  }
  if (!std::isfinite(bucket_size) || bucket_size <= 0.0) {
    throw ValidationError(p + ".bucket_size", "must be > 0");
  }
  if (batch_size < 0) {
    throw ValidationError(p + ".batch_size", "must be >= 0");
  }
}

BucketPlan bucketize(const ModelProfile& model) {
  model.validate();
  const double g = model.gradient_size;
  const double b = model.bucket_size;

  auto buckets = static_cast<long long>(std::ceil(g / b));
  if (buckets < 1) buckets = 1;
  double tail = g - static_cast<double>(buckets - 1) * b;
  // ceil can overshoot by one when g/b lands on an integer plus rounding noise
  if (tail <= 0.0 && buckets > 1) {
    --buckets;
    tail = g - static_cast<double>(buckets - 1) * b;
  }
  return BucketPlan{static_cast<int>(buckets - 1), b, tail};
}

bool CompressionScheme::allreduce_compatible() const {
  return std::holds_alternative<SyncSgd>(params) || std::holds_alternative<PowerSgd>(params);
}

std::string_view CompressionScheme::kind_name() const {
  if (std::holds_alternative<SyncSgd>(params)) return "syncsgd";
  if (std::holds_alternative<PowerSgd>(params)) return "powersgd";
  if (std::holds_alternative<MsTopK>(params)) return "mstopk";
  return "signsgd";
}

void CompressionScheme::validate(std::string_view prefix) const {
  const std::string p(prefix);
  if (!std::isfinite(encode_decode_time) || encode_decode_time < 0.0) {
    throw ValidationError(p + ".encode_decode_time", "must be >= 0");
  }
  if (is_syncsgd() && encode_decode_time != 0.0) {
    throw ValidationError(p + ".encode_decode_time", "must be 0 for syncsgd");
  }
  if (const auto* psgd = std::get_if<PowerSgd>(&params)) {
    if (psgd->rank < 0) {
      throw ValidationError(p + ".rank", "must be >= 0");
    }
    if (!std::isfinite(psgd->payload_p) || psgd->payload_p < 0.0) {
      throw ValidationError(p + ".payload_p", "must be >= 0");
    }
    if (!std::isfinite(psgd->payload_q) || psgd->payload_q < 0.0) {
      throw ValidationError(p + ".payload_q", "must be >= 0");
    }
  }
  if (const auto* topk = std::get_if<MsTopK>(&params)) {
    if (!std::isfinite(topk->fraction) || topk->fraction < 0.0 || topk->fraction > 1.0) {
      throw ValidationError(p + ".fraction", "must be in [0, 1]");
    }
  }
}

PayloadList compressed_payloads(const CompressionScheme& scheme, const ModelProfile& model) {
  model.validate();
  scheme.validate();

  PayloadList out;
  if (std::holds_alternative<SyncSgd>(scheme.params)) {
    const BucketPlan plan = bucketize(model);
    out.reserve(static_cast<std::size_t>(plan.full_buckets) + 1);
    for (int i = 0; i < plan.full_buckets; ++i) {
      out.emplace_back(Payload{plan.full_size}, Collective::RingReduce);
    }
    out.emplace_back(Payload{plan.tail_size}, Collective::RingReduce);
  } else if (const auto* psgd = std::get_if<PowerSgd>(&scheme.params)) {
    if (psgd->payload_p <= 0.0 && psgd->payload_q <= 0.0) {
      throw ConfigError("scheme '" + scheme.name +
                        "': powersgd payloads unspecified; set payload bytes or derive them "
                        "from layer shapes");
    }
    out.emplace_back(Payload{psgd->payload_p}, Collective::RingReduce);
    out.emplace_back(Payload{psgd->payload_q}, Collective::RingReduce);
  } else if (const auto* topk = std::get_if<MsTopK>(&scheme.params)) {
    const double kept = topk->fraction * model.gradient_size;
    out.emplace_back(Payload{kept}, Collective::AllGather);  // values
    out.emplace_back(Payload{kept}, Collective::AllGather);  // indices
  } else {
    out.emplace_back(Payload{model.gradient_size / 32.0}, Collective::AllGather);
  }
  return out;
}

PowerSgdPayloads derive_powersgd_payloads(std::span<const LayerShape> layers, int rank,
                                          double element_size) {
  if (layers.empty()) {
    throw ConfigError("powersgd payload derivation needs at least one layer shape");
  }
  if (rank < 1) {
    throw ValidationError("powersgd.rank", "must be >= 1");
  }
  if (!std::isfinite(element_size) || element_size <= 0.0) {
    throw ValidationError("powersgd.element_size", "must be > 0");
  }

  PowerSgdPayloads out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerShape& layer = layers[i];
    if (layer.rows < 1) {
      throw ValidationError("layers[" + std::to_string(i) + "].rows", "must be >= 1");
    }
    if (layer.cols < 0) {
      throw ValidationError("layers[" + std::to_string(i) + "].cols", "must be >= 0");
    }
    if (layer.cols == 0) {
      // 1-D tensors bypass the low-rank factorization
      out.payload_p += static_cast<double>(layer.rows) * element_size;
      continue;
    }
    const long long cap = std::min<long long>(rank, std::min(layer.rows, layer.cols));
    out.payload_p += static_cast<double>(layer.rows * cap) * element_size;
    out.payload_q += static_cast<double>(layer.cols * cap) * element_size;
  }
  return out;
}

double total_wire_bytes(const CompressionScheme& scheme, const ModelProfile& model) {
  double total = 0.0;
  for (const auto& [payload, collective] : compressed_payloads(scheme, model)) {
    total += payload.bytes;
  }
  return total;
}

double effective_compression_ratio(const CompressionScheme& scheme, const ModelProfile& model) {
  const double sent = total_wire_bytes(scheme, model);
  if (sent <= 0.0) {
    throw ConfigError("scheme '" + scheme.name +
                      "' sends zero bytes; compression ratio undefined");
  }
  return model.gradient_size / sent;
}

}  // namespace gradsim
