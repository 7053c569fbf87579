// SPDX-License-Identifier: Apache-2.0
#include "gradsim/profiles.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "gradsim/errors.hpp"
#include "gradsim/units.hpp"

namespace gradsim {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Tracks which keys a parser consumed so leftovers can be rejected by path.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ValidationError(path_, "must be a JSON object");
    }
  }

  std::string field(std::string_view key) const { return path_ + "." + std::string(key); }

  std::optional<double> number(std::string_view key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      throw ValidationError(field(key), "must be a number");
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      throw ValidationError(field(key), "must be finite");
    }
    return x;
  }

  std::optional<long long> integer(std::string_view key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer() && !v->is_number_unsigned()) {
      throw ValidationError(field(key), "must be an integer");
    }
    return v->get<long long>();
  }

  std::optional<std::string> text(std::string_view key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      throw ValidationError(field(key), "must be a string");
    }
    return v->get<std::string>();
  }

  const json* raw(std::string_view key) {
    auto it = node_.find(key);
    if (it == node_.end()) return nullptr;
    consumed_.insert(std::string(key));
    return &*it;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!consumed_.contains(it.key())) {
        throw ValidationError(field(it.key()), "unknown field");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> consumed_;
};

struct Quantity {
  double value;
  std::string key;  // document key the value came from, for error messages
};

// A quantity may be spelled in its canonical unit or a friendly one, never both.
std::optional<Quantity> read_quantity(ObjectReader& r, std::string_view canonical_key,
                                      std::string_view friendly_key, double to_canonical) {
  auto canonical = r.number(canonical_key);
  auto friendly = r.number(friendly_key);
  if (canonical && friendly) {
    throw ValidationError(r.field(friendly_key),
                          "conflicts with " + std::string(canonical_key));
  }
  if (canonical) return Quantity{*canonical, r.field(canonical_key)};
  if (friendly) return Quantity{*friendly * to_canonical, r.field(friendly_key)};
  return std::nullopt;
}

Quantity require_quantity(ObjectReader& r, std::string_view canonical_key,
                          std::string_view friendly_key, double to_canonical) {
  auto q = read_quantity(r, canonical_key, friendly_key, to_canonical);
  if (!q) {
    throw ValidationError(r.field(friendly_key),
                          "required (or " + std::string(canonical_key) + ")");
  }
  return *q;
}

ModelProfile parse_model(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  ModelProfile m;
  m.name = r.text("name").value_or("");
  m.provenance = r.text("provenance").value_or("user");

  const Quantity g =
      require_quantity(r, "gradient_size_bytes", "gradient_size_mb", units::kBytesPerMb);
  if (g.value <= 0.0) throw ValidationError(g.key, "must be > 0");
  m.gradient_size = g.value;

  const Quantity backward = require_quantity(r, "backward_s", "backward_ms", units::kSecPerMs);
  if (backward.value <= 0.0) throw ValidationError(backward.key, "must be > 0");
  m.backward_time = backward.value;

  if (auto gamma = r.number("gamma")) {
    if (*gamma < 1.0) throw ValidationError(r.field("gamma"), "must be >= 1");
    m.gamma = *gamma;
  }
  if (auto bucket = read_quantity(r, "bucket_bytes", "bucket_mb", units::kBytesPerMb)) {
    if (bucket->value <= 0.0) throw ValidationError(bucket->key, "must be > 0");
    m.bucket_size = bucket->value;
  }
  if (auto batch = r.integer("batch_size")) {
    if (*batch < 0) throw ValidationError(r.field("batch_size"), "must be >= 0");
    m.batch_size = static_cast<int>(*batch);
  }
  r.finish();
  m.validate(path);
  return m;
}

NetworkProfile parse_network(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  NetworkProfile n;

  auto workers = r.integer("workers");
  if (!workers) throw ValidationError(r.field("workers"), "required");
  if (*workers < 1) throw ValidationError(r.field("workers"), "must be >= 1");
  n.workers = static_cast<int>(*workers);

  const Quantity bw =
      require_quantity(r, "bandwidth_bytes_per_s", "bandwidth_gbps", units::kBytesPerSecPerGbps);
  if (bw.value <= 0.0) throw ValidationError(bw.key, "must be > 0");
  n.bandwidth = bw.value;

  n.latency = units::ms_to_s(0.75);
  if (auto latency = read_quantity(r, "latency_s", "latency_ms", units::kSecPerMs)) {
    if (latency->value < 0.0) throw ValidationError(latency->key, "must be >= 0");
    n.latency = latency->value;
  }
  r.finish();
  n.validate(path);
  return n;
}

std::vector<LayerShape> parse_layers(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) {
    throw ValidationError(path, "must be a non-empty array of [rows, cols] pairs");
  }
  std::vector<LayerShape> layers;
  layers.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& entry = node[i];
    const std::string entry_path = path + "[" + std::to_string(i) + "]";
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
        !entry[1].is_number_integer()) {
      throw ValidationError(entry_path, "must be an integer pair [rows, cols]");
    }
    layers.push_back({entry[0].get<long long>(), entry[1].get<long long>()});
  }
  return layers;
}

CompressionScheme parse_scheme(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  auto kind = r.text("kind");
  if (!kind) throw ValidationError(r.field("kind"), "required");

  CompressionScheme s;
  s.name = r.text("name").value_or(*kind);
  s.provenance = r.text("provenance").value_or("user");
  if (auto enc = read_quantity(r, "encode_decode_s", "encode_decode_ms", units::kSecPerMs)) {
    if (enc->value < 0.0) throw ValidationError(enc->key, "must be >= 0");
    s.encode_decode_time = enc->value;
  }

  if (*kind == "syncsgd") {
    if (s.encode_decode_time != 0.0) {
      throw ValidationError(r.field("encode_decode_ms"), "must be 0 for syncsgd");
    }
    s.params = SyncSgd{};
  } else if (*kind == "powersgd") {
    PowerSgd p;
    if (auto rank = r.integer("rank")) {
      if (*rank < 1) throw ValidationError(r.field("rank"), "must be >= 1");
      p.rank = static_cast<int>(*rank);
    }
    auto pp = read_quantity(r, "payload_p_bytes", "payload_p_mb", units::kBytesPerMb);
    auto pq = read_quantity(r, "payload_q_bytes", "payload_q_mb", units::kBytesPerMb);
    const json* layers_node = r.raw("layers");
    auto element = r.number("element_bytes");
    if (pp || pq) {
      // direct payload bytes win over layer-shape derivation
      if (pp && pp->value < 0.0) throw ValidationError(pp->key, "must be >= 0");
      if (pq && pq->value < 0.0) throw ValidationError(pq->key, "must be >= 0");
      p.payload_p = pp ? pp->value : 0.0;
      p.payload_q = pq ? pq->value : 0.0;
    } else if (layers_node) {
      if (p.rank < 1) {
        throw ValidationError(r.field("rank"), "required to derive payloads from layers");
      }
      const auto layers = parse_layers(*layers_node, r.field("layers"));
      const auto derived = derive_powersgd_payloads(layers, p.rank, element.value_or(4.0));
      p.payload_p = derived.payload_p;
      p.payload_q = derived.payload_q;
    }
    s.params = p;
  } else if (*kind == "mstopk") {
    const Quantity fraction = require_quantity(r, "fraction", "fraction_pct", 0.01);
    if (fraction.value < 0.0 || fraction.value > 1.0) {
      throw ValidationError(fraction.key, "must describe a fraction in [0, 1]");
    }
    s.params = MsTopK{fraction.value};
  } else if (*kind == "signsgd") {
    s.params = SignSgd{};
  } else {
    throw ValidationError(r.field("kind"),
                          "unknown kind '" + *kind + "' (syncsgd|powersgd|mstopk|signsgd)");
  }
  r.finish();
  s.validate(path);
  return s;
}

}  // namespace

void ProfileBundle::validate() const {
  model.validate("model");
  network.validate("network");
  std::set<std::string> names;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const std::string path = "schemes[" + std::to_string(i) + "]";
    schemes[i].validate(path);
    if (!names.insert(schemes[i].name).second) {
      throw ValidationError(path + ".name", "duplicate scheme name '" + schemes[i].name + "'");
    }
  }
}

const CompressionScheme* ProfileBundle::find_scheme(std::string_view scheme_name) const {
  for (const auto& s : schemes) {
    if (s.name == scheme_name) return &s;
  }
  return nullptr;
}

ProfileBundle load_bundle(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("profile document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("document", "must be a JSON object");
  }

  ObjectReader r(doc, "document");
  ProfileBundle bundle;
  bundle.name = r.text("name").value_or("");

  const json* model_node = r.raw("model");
  if (!model_node) throw ValidationError("model", "required");
  bundle.model = parse_model(*model_node, "model");
  if (bundle.model.name.empty()) bundle.model.name = bundle.name;

  const json* network_node = r.raw("network");
  if (!network_node) throw ValidationError("network", "required");
  bundle.network = parse_network(*network_node, "network");

  if (const json* schemes_node = r.raw("schemes")) {
    if (!schemes_node->is_array()) {
      throw ValidationError("schemes", "must be an array");
    }
    for (std::size_t i = 0; i < schemes_node->size(); ++i) {
      bundle.schemes.push_back(
          parse_scheme((*schemes_node)[i], "schemes[" + std::to_string(i) + "]"));
    }
  } else {
    bundle.schemes.push_back({"syncsgd", SyncSgd{}, 0.0, "user"});
  }
  r.finish();
  bundle.validate();
  return bundle;
}

ProfileBundle load_bundle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open profile document: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_bundle(buf.str());
}

std::string serialize_bundle(const ProfileBundle& bundle) {
  bundle.validate();
  ordered_json doc;
  if (!bundle.name.empty()) doc["name"] = bundle.name;

  ordered_json model;
  if (!bundle.model.name.empty()) model["name"] = bundle.model.name;
  model["gradient_size_bytes"] = bundle.model.gradient_size;
  model["backward_s"] = bundle.model.backward_time;
  model["gamma"] = bundle.model.gamma;
  model["bucket_bytes"] = bundle.model.bucket_size;
  if (bundle.model.batch_size != 0) model["batch_size"] = bundle.model.batch_size;
  model["provenance"] = bundle.model.provenance;
  doc["model"] = std::move(model);

  ordered_json network;
  network["workers"] = bundle.network.workers;
  network["bandwidth_bytes_per_s"] = bundle.network.bandwidth;
  network["latency_s"] = bundle.network.latency;
  doc["network"] = std::move(network);

  ordered_json schemes = ordered_json::array();
  for (const auto& s : bundle.schemes) {
    ordered_json node;
    node["name"] = s.name;
    node["kind"] = std::string(s.kind_name());
    if (const auto* psgd = std::get_if<PowerSgd>(&s.params)) {
      if (psgd->rank > 0) node["rank"] = psgd->rank;
      node["payload_p_bytes"] = psgd->payload_p;
      node["payload_q_bytes"] = psgd->payload_q;
    } else if (const auto* topk = std::get_if<MsTopK>(&s.params)) {
      node["fraction"] = topk->fraction;
    }
    node["encode_decode_s"] = s.encode_decode_time;
    node["provenance"] = s.provenance;
    schemes.push_back(std::move(node));
  }
  doc["schemes"] = std::move(schemes);
  return doc.dump(2) + "\n";
}

namespace {

CompressionScheme powersgd_scheme(std::string name, int rank, double payload_p, double payload_q,
                                  double encode_s, std::string provenance) {
  return {std::move(name), PowerSgd{rank, payload_p, payload_q}, encode_s,
          std::move(provenance)};
}

CompressionScheme mstopk_scheme(std::string name, double fraction, double encode_s,
                                std::string provenance) {
  return {std::move(name), MsTopK{fraction}, encode_s, std::move(provenance)};
}

// Encode-decode times for resnet50 are published measurements; every other
// timing and all payload byte counts are calibration fixtures (see README).
std::vector<ProfileBundle> make_presets() {
  const double bw = units::gbps_to_bytes_per_s(10.0);
  const double latency = 25e-6;

  ProfileBundle resnet50;
  resnet50.name = "resnet50-ec2";
  resnet50.model = {"resnet50", 97e6, 0.122, 1.05, 25e6, 64, "measured"};
  resnet50.network = {64, bw, latency};
  resnet50.schemes = {
      {"syncsgd", SyncSgd{}, 0.0, "measured"},
      powersgd_scheme("powersgd-r4", 4, 240e3, 450e3, 0.045, "measured"),
      powersgd_scheme("powersgd-r8", 8, 480e3, 900e3, 0.064, "measured"),
      powersgd_scheme("powersgd-r16", 16, 960e3, 1800e3, 0.130, "measured"),
      mstopk_scheme("mstopk-1pct", 0.01, 0.103, "measured"),
      mstopk_scheme("mstopk-0.1pct", 0.001, 0.104, "measured"),
      {"signsgd", SignSgd{}, 0.01634, "measured"},
  };

  ProfileBundle resnet101;
  resnet101.name = "resnet101-ec2";
  resnet101.model = {"resnet101", 170e6, 0.260, 1.05, 25e6, 64, "fixture"};
  resnet101.network = {64, bw, latency};
  resnet101.schemes = {
      {"syncsgd", SyncSgd{}, 0.0, "measured"},
      powersgd_scheme("powersgd-r4", 4, 420e3, 790e3, 0.080, "fixture"),
      powersgd_scheme("powersgd-r8", 8, 840e3, 1580e3, 0.115, "fixture"),
      powersgd_scheme("powersgd-r16", 16, 1680e3, 3160e3, 0.230, "fixture"),
      mstopk_scheme("mstopk-1pct", 0.01, 0.180, "fixture"),
      mstopk_scheme("mstopk-0.1pct", 0.001, 0.182, "fixture"),
      {"signsgd", SignSgd{}, 0.028, "fixture"},
  };

  ProfileBundle bert;
  bert.name = "bert-base-ec2";
  bert.model = {"bert-base", 418e6, 0.560, 1.05, 25e6, 12, "fixture"};
  bert.network = {96, bw, latency};
  bert.schemes = {
      {"syncsgd", SyncSgd{}, 0.0, "measured"},
      powersgd_scheme("powersgd-r4", 4, 1200e3, 2280e3, 0.085, "fixture"),
      powersgd_scheme("powersgd-r8", 8, 2400e3, 4560e3, 0.120, "fixture"),
      powersgd_scheme("powersgd-r16", 16, 4800e3, 9120e3, 0.240, "fixture"),
      mstopk_scheme("mstopk-1pct", 0.01, 0.440, "fixture"),
      mstopk_scheme("mstopk-0.1pct", 0.001, 0.445, "fixture"),
      {"signsgd", SignSgd{}, 0.070, "fixture"},
  };

  return {std::move(resnet50), std::move(resnet101), std::move(bert)};
}

}  // namespace

const std::vector<ProfileBundle>& builtin_presets() {
  static const std::vector<ProfileBundle> presets = make_presets();
  return presets;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& b : builtin_presets()) names.push_back(b.name);
  return names;
}

const ProfileBundle* find_preset(std::string_view name) {
  for (const auto& b : builtin_presets()) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

}  // namespace gradsim
