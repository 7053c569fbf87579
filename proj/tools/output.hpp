// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gradsim/analysis.hpp"
#include "gradsim/profiles.hpp"

namespace gradsim::cli {

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& name);

struct EstimateRow {
  IterationEstimate estimate;
  double linear_gap = 0.0;
  double speedup_vs_syncsgd = 0.0;
};

// Human tables round to 0.1 ms; csv/json emit full-precision canonical units.
std::string format_estimates(const ProfileBundle& bundle, const std::vector<EstimateRow>& rows,
                             Format format);
// long_form emits one line per (parameter, scheme-label) pair; used for the
// encode tradeoff where labels are l values.
std::string format_sweep(const SweepResult& sweep, Format format, bool long_form,
                         bool include_gaps);
std::string format_requirement(const ProfileBundle& bundle, const CompressionRequirement& req,
                               Format format);
std::string format_presets(Format format);

std::string precise(double value);  // shortest exact decimal round-trip

}  // namespace gradsim::cli
