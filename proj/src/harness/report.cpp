//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "molbench/error.hpp"
#include "molbench/harness.hpp"

namespace molbench {
namespace {

using nlohmann::json;

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json rounded_map(const std::map<std::string, double> &values) {
  json out = json::object();
  for (const auto &[k, v]: values)
    out[k] = report_round(v);
  return out;
}

std::map<std::string, double> read_double_map(const json &o, const char *key) {
  std::map<std::string, double> out;
  if (!o.contains(key))
    return out;
  for (const auto &[k, v]: o.at(key).items())
    out[k] = v.get<double>();
  return out;
}

}  // namespace

double report_round(double value) {
  if (!std::isfinite(value) || value == 0.0)
    return value;
  return std::strtod(format_value(value).c_str(), nullptr);
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "json")
    return ReportFormat::kJson;
  if (name == "md")
    return ReportFormat::kMarkdown;
  if (name == "csv")
    return ReportFormat::kCsv;
  return std::nullopt;
}

std::string render_report(const Report &r, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json o = json::object();
    o["task"] = r.task;
    o["version"] = std::string(kToolVersion);
    o["metrics"] = rounded_map(r.metrics);
    if (!r.sentence_metrics.empty())
      o["sentence_metrics"] = rounded_map(r.sentence_metrics);
    if (!r.metric_stds.empty())
      o["metric_stds"] = rounded_map(r.metric_stds);
    o["counts"] = { { "evaluated", r.evaluated },
                    { "skipped", r.skipped },
                    { "skip_reasons", r.skip_reasons } };
    o["inputs"] = r.digests;
    return o.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << "metric,value" << (r.metric_stds.empty() ? "" : ",std") << '\n';
    for (const auto &[k, v]: r.metrics) {
      out << k << ',' << format_value(v);
      if (!r.metric_stds.empty()) {
        auto it = r.metric_stds.find(k);
        out << ',' << (it == r.metric_stds.end() ? "" : format_value(it->second));
      }
      out << '\n';
    }
    for (const auto &[k, v]: r.sentence_metrics)
      out << "sentence:" << k << ',' << format_value(v) << (r.metric_stds.empty() ? "" : ",")
          << '\n';
    return out.str();
  }
  out << "# " << r.task << "\n\n| metric | value |";
  out << (r.metric_stds.empty() ? "\n|---|---|\n" : " std |\n|---|---|---|\n");
  for (const auto &[k, v]: r.metrics) {
    out << "| " << k << " | " << format_value(v) << " |";
    if (!r.metric_stds.empty()) {
      auto it = r.metric_stds.find(k);
      out << ' ' << (it == r.metric_stds.end() ? "" : format_value(it->second)) << " |";
    }
    out << '\n';
  }
  for (const auto &[k, v]: r.sentence_metrics)
    out << "| " << k << " (sentence mean) | " << format_value(v) << " |"
        << (r.metric_stds.empty() ? "" : "  |") << '\n';
  out << "\nevaluated: " << r.evaluated << ", skipped: " << r.skipped << '\n';
  for (const auto &[reason, n]: r.skip_reasons)
    out << "- " << reason << ": " << n << '\n';
  out << "\ntool version " << kToolVersion << '\n';
  for (const auto &[path, digest]: r.digests)
    out << "- `" << path << "` sha256 " << digest << '\n';
  return out.str();
}

Report parse_report_json(std::string_view text) {
  try {
    const json o = json::parse(text);
    Report r;
    r.task = o.at("task").get<std::string>();
    r.metrics = read_double_map(o, "metrics");
    r.sentence_metrics = read_double_map(o, "sentence_metrics");
    r.metric_stds = read_double_map(o, "metric_stds");
    const json &counts = o.at("counts");
    r.evaluated = counts.at("evaluated").get<std::size_t>();
    r.skipped = counts.at("skipped").get<std::size_t>();
    if (counts.contains("skip_reasons"))
      r.skip_reasons = counts.at("skip_reasons").get<std::map<std::string, std::size_t>>();
    if (o.contains("inputs"))
      r.digests = o.at("inputs").get<std::map<std::string, std::string>>();
    return r;
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kFormatError, std::string("not a report: ") + e.what());
  }
}

Report merge_reports(std::span<const Report> runs) {
  if (runs.empty())
    throw Error(ErrorKind::kEmptyCorpus, "no reports to merge");
  Report merged;
  merged.task = runs.front().task;
  for (const Report &r: runs) {
    if (r.task != merged.task)
      throw Error(ErrorKind::kInvalidArgument, "cannot merge reports of different tasks");
    if (r.metrics.size() != runs.front().metrics.size())
      throw Error(ErrorKind::kInvalidArgument, "reports have different metric sets");
  }
  auto mean_std = [&](auto member, std::map<std::string, double> &mean_out,
                      std::map<std::string, double> *std_out) {
    for (const auto &[name, first]: runs.front().*member) {
      std::vector<double> values;
      for (const Report &r: runs) {
        auto it = (r.*member).find(name);
        if (it == (r.*member).end())
          throw Error(ErrorKind::kInvalidArgument, "metric '" + name + "' missing from a run");
        values.push_back(it->second);
      }
      double sum = 0.0;
      for (double v: values)
        sum += v;
      const double mean = sum / static_cast<double>(values.size());
      mean_out[name] = mean;
      if (std_out != nullptr) {
        double sq = 0.0;
        for (double v: values)
          sq += (v - mean) * (v - mean);
        (*std_out)[name] =
            values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
      }
    }
  };
  mean_std(&Report::metrics, merged.metrics, &merged.metric_stds);
  mean_std(&Report::sentence_metrics, merged.sentence_metrics, nullptr);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    merged.evaluated += runs[k].evaluated;
    merged.skipped += runs[k].skipped;
    for (const auto &[reason, n]: runs[k].skip_reasons)
      merged.skip_reasons[reason] += n;
    for (const auto &[path, digest]: runs[k].digests)
      merged.digests["run" + std::to_string(k + 1) + ":" + path] = digest;
  }
  return merged;
}

}  // namespace molbench
