// SPDX-License-Identifier: Apache-2.0
#include "output.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gradsim/errors.hpp"
#include "gradsim/units.hpp"

namespace gradsim::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string ms1(double seconds) {  // 0.1 ms table resolution
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", units::s_to_ms(seconds));
  return buf;
}

std::string fixed3(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

struct ParamDisplay {
  std::string header;
  std::string (*render)(double);
};

std::string render_gbps(double bytes_per_s) {
  return fixed3(units::bytes_per_s_to_gbps(bytes_per_s));
}
std::string render_int(double v) { return std::to_string(static_cast<long long>(v)); }
std::string render_factor(double v) { return fixed3(v); }

ParamDisplay param_display(const std::string& parameter_name) {
  if (parameter_name == "bandwidth_bytes_per_s") return {"bw_gbps", render_gbps};
  if (parameter_name == "workers") return {"workers", render_int};
  if (parameter_name == "k") return {"k", render_int};
  return {"speedup", render_factor};
}

ordered_json estimate_json(const IterationEstimate& est, double gap) {
  ordered_json node;
  node["scheme"] = est.scheme_label;
  node["total_s"] = est.total;
  node["compute_s"] = est.compute;
  node["encode_decode_s"] = est.encode_decode;
  node["comm_overlapped_s"] = est.comm_overlapped;
  node["comm_exposed_s"] = est.comm_exposed;
  node["linear_gap_s"] = gap;
  return node;
}

std::string bundle_heading(const ProfileBundle& bundle) {
  std::ostringstream out;
  out << "model: " << bundle.model.name;
  if (bundle.model.batch_size > 0) out << " (batch " << bundle.model.batch_size << ")";
  out << "  gradient: " << fixed3(units::bytes_to_mb(bundle.model.gradient_size)) << " MB"
      << "  backward: " << ms1(bundle.model.backward_time) << " ms"
      << "  gamma: " << fixed3(bundle.model.gamma) << "\n";
  out << "network: workers=" << bundle.network.workers
      << "  bandwidth=" << fixed3(units::bytes_per_s_to_gbps(bundle.network.bandwidth))
      << " Gbps"
      << "  latency=" << fixed3(units::s_to_ms(bundle.network.latency)) << " ms\n";
  return out.str();
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("unknown format '" + name + "' (table|csv|json)");
}

std::string precise(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_estimates(const ProfileBundle& bundle, const std::vector<EstimateRow>& rows,
                             Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::Csv: {
      out << "scheme,total_s,compute_s,encode_decode_s,comm_overlapped_s,comm_exposed_s,"
             "linear_gap_s,speedup_vs_syncsgd\n";
      for (const auto& row : rows) {
        const auto& e = row.estimate;
        out << e.scheme_label << ',' << precise(e.total) << ',' << precise(e.compute) << ','
            << precise(e.encode_decode) << ',' << precise(e.comm_overlapped) << ','
            << precise(e.comm_exposed) << ',' << precise(row.linear_gap) << ','
            << precise(row.speedup_vs_syncsgd) << '\n';
      }
      break;
    }
    case Format::Json: {
      ordered_json doc;
      doc["bundle"] = bundle.name.empty() ? bundle.model.name : bundle.name;
      doc["rows"] = ordered_json::array();
      for (const auto& row : rows) {
        ordered_json node = estimate_json(row.estimate, row.linear_gap);
        node["speedup_vs_syncsgd"] = row.speedup_vs_syncsgd;
        doc["rows"].push_back(std::move(node));
      }
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::Table: {
      out << bundle_heading(bundle) << '\n';
      out << std::left << std::setw(16) << "scheme" << std::right << std::setw(10)
          << "total_ms" << std::setw(12) << "compute_ms" << std::setw(11) << "encode_ms"
          << std::setw(13) << "comm_ovl_ms" << std::setw(13) << "comm_exp_ms" << std::setw(9)
          << "gap_ms" << std::setw(9) << "speedup" << '\n';
      for (const auto& row : rows) {
        const auto& e = row.estimate;
        out << std::left << std::setw(16) << e.scheme_label << std::right << std::setw(10)
            << ms1(e.total) << std::setw(12) << ms1(e.compute) << std::setw(11)
            << ms1(e.encode_decode) << std::setw(13) << ms1(e.comm_overlapped) << std::setw(13)
            << ms1(e.comm_exposed) << std::setw(9) << ms1(row.linear_gap) << std::setw(9)
            << fixed3(row.speedup_vs_syncsgd) << '\n';
      }
      break;
    }
  }
  return out.str();
}

std::string format_sweep(const SweepResult& sweep, Format format, bool long_form,
                         bool include_gaps) {
  std::ostringstream out;
  const ParamDisplay display = param_display(sweep.parameter_name);

  switch (format) {
    case Format::Csv: {
      for (const auto& c : sweep.crossovers) {
        out << "# crossover " << c.scheme_a << " " << c.scheme_b << " "
            << sweep.parameter_name << "=" << precise(c.parameter) << '\n';
      }
      if (long_form) {
        out << sweep.parameter_name << ",l,total_s,compute_s,encode_decode_s,comm_exposed_s\n";
        for (const auto& row : sweep.rows) {
          for (std::size_t i = 0; i < sweep.scheme_labels.size(); ++i) {
            std::string l = sweep.scheme_labels[i];
            if (l.rfind("l=", 0) == 0) l = l.substr(2);
            const auto& e = row.estimates[i];
            out << precise(row.parameter) << ',' << l << ',' << precise(e.total) << ','
                << precise(e.compute) << ',' << precise(e.encode_decode) << ','
                << precise(e.comm_exposed) << '\n';
          }
        }
      } else {
        out << sweep.parameter_name;
        for (const auto& label : sweep.scheme_labels) out << ',' << label << "_total_s";
        if (include_gaps) {
          for (const auto& label : sweep.scheme_labels) out << ',' << label << "_gap_s";
        }
        out << '\n';
        for (const auto& row : sweep.rows) {
          out << precise(row.parameter);
          for (const auto& e : row.estimates) out << ',' << precise(e.total);
          if (include_gaps) {
            for (double gap : row.linear_gaps) out << ',' << precise(gap);
          }
          out << '\n';
        }
      }
      break;
    }
    case Format::Json: {
      ordered_json doc;
      doc["parameter_name"] = sweep.parameter_name;
      doc["scheme_labels"] = sweep.scheme_labels;
      doc["rows"] = ordered_json::array();
      for (const auto& row : sweep.rows) {
        ordered_json node;
        node["parameter"] = row.parameter;
        node["estimates"] = ordered_json::array();
        for (std::size_t i = 0; i < row.estimates.size(); ++i) {
          node["estimates"].push_back(estimate_json(row.estimates[i], row.linear_gaps[i]));
        }
        doc["rows"].push_back(std::move(node));
      }
      doc["crossovers"] = ordered_json::array();
      for (const auto& c : sweep.crossovers) {
        ordered_json node;
        node["scheme_a"] = c.scheme_a;
        node["scheme_b"] = c.scheme_b;
        node["parameter"] = c.parameter;
        doc["crossovers"].push_back(std::move(node));
      }
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::Table: {
      if (long_form) {
        out << std::left << std::setw(8) << display.header << std::setw(6) << "l" << std::right
            << std::setw(10) << "total_ms" << std::setw(12) << "encode_ms" << std::setw(13)
            << "comm_exp_ms" << '\n';
        for (const auto& row : sweep.rows) {
          for (std::size_t i = 0; i < sweep.scheme_labels.size(); ++i) {
            std::string l = sweep.scheme_labels[i];
            if (l.rfind("l=", 0) == 0) l = l.substr(2);
            const auto& e = row.estimates[i];
            out << std::left << std::setw(8) << display.render(row.parameter) << std::setw(6)
                << l << std::right << std::setw(10) << ms1(e.total) << std::setw(12)
                << ms1(e.encode_decode) << std::setw(13) << ms1(e.comm_exposed) << '\n';
          }
        }
      } else {
        out << std::left << std::setw(12) << display.header << std::right;
        for (const auto& label : sweep.scheme_labels) {
          out << std::setw(16) << (label + "_ms");
        }
        if (include_gaps) {
          for (const auto& label : sweep.scheme_labels) {
            out << std::setw(16) << (label + "_gap");
          }
        }
        out << '\n';
        for (const auto& row : sweep.rows) {
          out << std::left << std::setw(12) << display.render(row.parameter) << std::right;
          for (const auto& e : row.estimates) out << std::setw(16) << ms1(e.total);
          if (include_gaps) {
            for (double gap : row.linear_gaps) out << std::setw(16) << ms1(gap);
          }
          out << '\n';
        }
      }
      out << "\ncrossovers:";
      if (sweep.crossovers.empty()) {
        out << " none\n";
      } else {
        out << '\n';
        for (const auto& c : sweep.crossovers) {
          out << "  " << c.scheme_a << " vs " << c.scheme_b << " at " << display.header << "="
              << display.render(c.parameter) << '\n';
        }
      }
      break;
    }
  }
  return out.str();
}

std::string format_requirement(const ProfileBundle& bundle, const CompressionRequirement& req,
                               Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::Csv: {
      out << "required_payload_bytes,required_ratio,feasible\n";
      out << precise(req.required_payload) << ',' << precise(req.required_ratio) << ','
          << (req.feasible ? "true" : "false") << '\n';
      break;
    }
    case Format::Json: {
      ordered_json doc;
      doc["bundle"] = bundle.name.empty() ? bundle.model.name : bundle.name;
      doc["required_payload_bytes"] = req.required_payload;
      doc["required_ratio"] = req.required_ratio;
      doc["feasible"] = req.feasible;
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::Table: {
      out << bundle_heading(bundle) << '\n';
      if (!req.feasible) {
        out << "infeasible: latency-bound (backward time does not cover the latency floor "
               "2*alpha*(p-1); no payload size fits)\n";
      } else {
        out << "required payload: " << fixed3(units::bytes_to_mb(req.required_payload))
            << " MB\n";
        out << "required ratio:   " << fixed3(req.required_ratio) << "x";
        if (req.required_ratio <= 1.0) out << "  (no compression needed)";
        out << '\n';
      }
      break;
    }
  }
  return out.str();
}

std::string format_presets(Format format) {
  std::ostringstream out;
  const auto& presets = builtin_presets();
  switch (format) {
    case Format::Csv: {
      out << "name,model,gradient_size_bytes,backward_s,workers,bandwidth_bytes_per_s,"
             "schemes\n";
      for (const auto& b : presets) {
        out << b.name << ',' << b.model.name << ',' << precise(b.model.gradient_size) << ','
            << precise(b.model.backward_time) << ',' << b.network.workers << ','
            << precise(b.network.bandwidth) << ',' << b.schemes.size() << '\n';
      }
      break;
    }
    case Format::Json: {
      ordered_json doc = ordered_json::array();
      for (const auto& b : presets) {
        doc.push_back(ordered_json::parse(serialize_bundle(b)));
      }
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::Table: {
      out << std::left << std::setw(16) << "preset" << std::setw(12) << "model"
          << std::right << std::setw(12) << "size_mb" << std::setw(13) << "backward_ms"
          << std::setw(9) << "workers" << std::setw(9) << "bw_gbps" << "  schemes\n";
      for (const auto& b : presets) {
        out << std::left << std::setw(16) << b.name << std::setw(12) << b.model.name
            << std::right << std::setw(12) << fixed3(units::bytes_to_mb(b.model.gradient_size))
            << std::setw(13) << ms1(b.model.backward_time) << std::setw(9)
            << b.network.workers << std::setw(9)
            << fixed3(units::bytes_per_s_to_gbps(b.network.bandwidth)) << "  ";
        for (std::size_t i = 0; i < b.schemes.size(); ++i) {
          if (i) out << ',';
          out << b.schemes[i].name;
        }
        out << '\n';
      }
      break;
    }
  }
  return out.str();
}

}  // namespace gradsim::cli
