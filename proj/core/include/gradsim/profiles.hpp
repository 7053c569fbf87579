// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gradsim/cost_model.hpp"
#include "gradsim/schemes.hpp"

namespace gradsim {

// A complete what-if scenario: one model, one network, a named set of schemes.
struct ProfileBundle {
  std::string name;
  ModelProfile model;
  NetworkProfile network;
  std::vector<CompressionScheme> schemes;

  void validate() const;
  const CompressionScheme* find_scheme(std::string_view scheme_name) const;

  bool operator==(const ProfileBundle&) const = default;
};

// Parses a profile document (JSON with unit-suffixed field names, see
// README). Unknown fields are rejected; missing optional fields default to
// gamma 1.07, latency 0.75 ms, bucket 25 MB, schemes ["syncsgd"]. Errors name
// the offending field path.
ProfileBundle load_bundle(std::string_view json_text);
ProfileBundle load_bundle_file(const std::string& path);

// Canonical-unit document (bytes/seconds field names); load_bundle of the
// output reproduces the bundle exactly.
std::string serialize_bundle(const ProfileBundle& bundle);

// Calibration presets: resnet50-ec2, resnet101-ec2, bert-base-ec2, each with
// the seven named schemes. Fields marked provenance "fixture" are calibration
// values, not published measurements.
const std::vector<ProfileBundle>& builtin_presets();
std::vector<std::string> preset_names();
const ProfileBundle* find_preset(std::string_view name);  // nullptr when unknown

}  // namespace gradsim
