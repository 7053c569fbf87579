// SPDX-License-Identifier: Apache-2.0
#include "gradsim/profiles.hpp"

#include <doctest.h>

#include "gradsim/errors.hpp"
#include "gradsim/units.hpp"
#include "test_support.hpp"

using namespace gradsim;
using gradsim::test::validation_field;

namespace {

constexpr const char* kMinimalDoc = R"({
  "model": { "gradient_size_mb": 97, "backward_ms": 122 },
  "network": { "workers": 4, "bandwidth_gbps": 10 }
})";

std::string fixture_path(const char* file) {
  return std::string(GRADSIM_PROFILE_DIR) + "/" + file;
}

}  // namespace

TEST_CASE("minimal document gets defaults filled") {
  const ProfileBundle bundle = load_bundle(kMinimalDoc);
  CHECK(bundle.model.gradient_size == 97e6);
  CHECK(bundle.model.backward_time == doctest::Approx(0.122).epsilon(1e-15));
  CHECK(bundle.model.gamma == 1.07);
  CHECK(bundle.model.bucket_size == 25e6);
  CHECK(bundle.network.workers == 4);
  CHECK(bundle.network.bandwidth == 1.25e9);  // 10 Gbps, exactly
  CHECK(bundle.network.latency == doctest::Approx(0.75e-3).epsilon(1e-15));
  REQUIRE(bundle.schemes.size() == 1);
  CHECK(bundle.schemes[0].name == "syncsgd");
}

TEST_CASE("validation errors carry the document field path") {
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": 97, "backward_ms": 122},
                          "network": {"workers": 4, "bandwidth_gbps": -1}})");
        }) == "network.bandwidth_gbps");
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": -97, "backward_ms": 122},
                          "network": {"workers": 4, "bandwidth_gbps": 10}})");
        }) == "model.gradient_size_mb");
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": 97, "backward_ms": 122,
                                    "typo_field": 3},
                          "network": {"workers": 4, "bandwidth_gbps": 10}})");
        }) == "model.typo_field");
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": 97, "gradient_size_bytes": 97,
                                    "backward_ms": 122},
                          "network": {"workers": 4, "bandwidth_gbps": 10}})");
        }) == "model.gradient_size_mb");
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": 97, "backward_ms": 122},
                          "network": {"workers": 0, "bandwidth_gbps": 10}})");
        }) == "network.workers");
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": 97, "backward_ms": 122},
                          "network": {"workers": 4, "bandwidth_gbps": 10},
                          "schemes": [{"kind": "mstopk", "fraction_pct": 150}]})");
        }) == "schemes[0].fraction_pct");
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": 97, "backward_ms": 122},
                          "network": {"workers": 4, "bandwidth_gbps": 10},
                          "schemes": [{"kind": "warp-drive"}]})");
        }) == "schemes[0].kind");
  CHECK(validation_field([] {
          load_bundle(R"({"model": {"gradient_size_mb": 97, "backward_ms": 122},
                          "network": {"workers": 4, "bandwidth_gbps": 10},
                          "schemes": [{"kind": "signsgd"}, {"kind": "signsgd"}]})");
        }) == "schemes[1].name");
  CHECK_THROWS_AS(load_bundle("model: not json"), ParseError);
  CHECK_THROWS_AS(load_bundle_file("/nonexistent/profile.json"), ParseError);
}

TEST_CASE("powersgd schemes accept direct payloads or layer shapes") {
  SUBCASE("layer shapes derive the factor sizes") {
    const ProfileBundle bundle = load_bundle(R"({
      "model": {"gradient_size_mb": 1.048576, "backward_ms": 10},
      "network": {"workers": 4, "bandwidth_gbps": 10},
      "schemes": [{"kind": "powersgd", "rank": 4, "layers": [[512, 512]]}]})");
    const auto* psgd = std::get_if<PowerSgd>(&bundle.schemes[0].params);
    REQUIRE(psgd != nullptr);
    CHECK(psgd->payload_p == 8192.0);
    CHECK(psgd->payload_q == 8192.0);
  }
  SUBCASE("direct payload bytes win over layers") {
    const ProfileBundle bundle = load_bundle(R"({
      "model": {"gradient_size_mb": 1, "backward_ms": 10},
      "network": {"workers": 4, "bandwidth_gbps": 10},
      "schemes": [{"kind": "powersgd", "rank": 4, "payload_p_bytes": 111,
                   "payload_q_bytes": 222, "layers": [[512, 512]]}]})");
    const auto* psgd = std::get_if<PowerSgd>(&bundle.schemes[0].params);
    CHECK(psgd->payload_p == 111.0);
    CHECK(psgd->payload_q == 222.0);
  }
  SUBCASE("layers without a rank are rejected") {
    CHECK(validation_field([] {
            load_bundle(R"({
              "model": {"gradient_size_mb": 1, "backward_ms": 10},
              "network": {"workers": 4, "bandwidth_gbps": 10},
              "schemes": [{"kind": "powersgd", "layers": [[512, 512]]}]})");
          }) == "schemes[0].rank");
  }
}

TEST_CASE("builtin presets") {
  const auto& presets = builtin_presets();
  REQUIRE(presets.size() == 3);
  for (const auto& bundle : presets) {
    CHECK_NOTHROW(bundle.validate());
    CHECK(bundle.schemes.size() == 7);
  }

  const ProfileBundle* resnet50 = find_preset("resnet50-ec2");
  REQUIRE(resnet50 != nullptr);
  CHECK(resnet50->model.gradient_size == 97e6);
  CHECK(resnet50->model.backward_time == 0.122);
  CHECK(resnet50->find_scheme("signsgd")->encode_decode_time == 0.01634);
  CHECK(resnet50->find_scheme("powersgd-r4")->encode_decode_time == 0.045);
  CHECK(resnet50->find_scheme("powersgd-r8")->encode_decode_time == 0.064);
  CHECK(resnet50->find_scheme("powersgd-r16")->encode_decode_time == 0.130);
  CHECK(resnet50->find_scheme("mstopk-1pct")->encode_decode_time == 0.103);
  CHECK(resnet50->find_scheme("mstopk-0.1pct")->encode_decode_time == 0.104);

  const ProfileBundle* resnet101 = find_preset("resnet101-ec2");
  REQUIRE(resnet101 != nullptr);
  CHECK(resnet101->model.gradient_size == 170e6);

  const ProfileBundle* bert = find_preset("bert-base-ec2");
  REQUIRE(bert != nullptr);
  CHECK(bert->model.gradient_size == 418e6);
  CHECK(bert->network.workers == 96);
  CHECK(bert->model.provenance == "fixture");

  CHECK(find_preset("resnet152-ec2") == nullptr);
  CHECK(preset_names() ==
        std::vector<std::string>{"resnet50-ec2", "resnet101-ec2", "bert-base-ec2"});
}

TEST_CASE("serialize/load round-trip is exact") {
  SUBCASE("presets") {
    for (const auto& bundle : builtin_presets()) {
      const std::string doc = serialize_bundle(bundle);
      const ProfileBundle reloaded = load_bundle(doc);
      CHECK(reloaded == bundle);
      CHECK(serialize_bundle(reloaded) == doc);
    }
  }
  SUBCASE("shipped fixture documents") {
    for (const char* file :
         {"resnet101-b16.json", "resnet101-b32.json", "resnet50-b128.json"}) {
      const ProfileBundle bundle = load_bundle_file(fixture_path(file));
      CHECK_NOTHROW(bundle.validate());
      const ProfileBundle reloaded = load_bundle(serialize_bundle(bundle));
      CHECK(reloaded == bundle);
    }
  }
  SUBCASE("minimal document") {
    const ProfileBundle bundle = load_bundle(kMinimalDoc);
    CHECK(load_bundle(serialize_bundle(bundle)) == bundle);
  }
}

TEST_CASE("unit conversions are exact for representable values") {
  CHECK(units::gbps_to_bytes_per_s(10.0) == 1.25e9);
  CHECK(units::bytes_per_s_to_gbps(1.25e9) == 10.0);
  CHECK(units::mb_to_bytes(170.0) == 170e6);
  const ProfileBundle bundle = load_bundle(kMinimalDoc);
  CHECK(bundle.network.bandwidth == 1.25e9);
}

TEST_CASE("fixture documents carry their calibration provenance") {
  const ProfileBundle b16 = load_bundle_file(fixture_path("resnet101-b16.json"));
  CHECK(b16.model.provenance == "fixture");
  CHECK(b16.model.batch_size == 16);
  CHECK(b16.find_scheme("powersgd-r4")->provenance == "fixture");
  const ProfileBundle b128 = load_bundle_file(fixture_path("resnet50-b128.json"));
  CHECK(b128.find_scheme("powersgd-r4")->provenance == "measured");
  CHECK(b128.model.provenance == "fixture");
}
