//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "molbench/error.hpp"
#include "molbench/harness.hpp"
#include "molbench/molgraph.hpp"
#include "molbench/selfies.hpp"
#include "molbench/smiles.hpp"

namespace molbench {
namespace {

using nlohmann::json;

constexpr std::size_t kTopScaffolds = 10;

constexpr TokenScheme kLengthSchemes[] = {
  TokenScheme::kWhitespace,
  TokenScheme::kSmilesRegex,
  TokenScheme::kSelfiesBracket,
};

void add_lengths(std::map<std::string, std::map<std::size_t, std::size_t>> &hist,
                 const std::string &text) {
  ++hist["chars"][tokenize(text, TokenScheme::kChar).tokens.size()];
  for (TokenScheme scheme: kLengthSchemes)
    ++hist[std::string(token_scheme_name(scheme))][tokenize(text, scheme).tokens.size()];
}

std::string canonical_split(const std::string &name) {
  if (name == "validation" || name == "val" || name == "dev")
    return "valid";
  return name;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

Summary summarize(std::vector<double> values) {
  if (values.empty())
    throw Error(ErrorKind::kEmptySequence, "summary of no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median =
      n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  return { values.front(), median, values.back() };
}

ProfileReport profile_dataset(std::span<const ProfileRecord> records) {
  ProfileReport p;
  p.records = records.size();
  std::map<std::string, std::size_t> scaffolds;
  std::map<std::string, std::vector<double>> descriptor_values;
  bool any_split = false;
  for (const ProfileRecord &r: records) {
    add_lengths(p.lengths["smiles"], r.smiles);
    if (r.selfies)
      add_lengths(p.lengths["selfies"], *r.selfies);
    if (r.iupac)
      add_lengths(p.lengths["iupac"], *r.iupac);
    if (r.caption)
      add_lengths(p.lengths["caption"], *r.caption);
    if (r.split) {
      any_split = true;
      ++p.split_counts[canonical_split(*r.split)];
    } else {
      ++p.split_counts["(none)"];
    }

    MolGraph g;
    try {
      g = parse_smiles(r.smiles);
    } catch (const Error &e) {
      p.exclusions.emplace_back(r.id, "invalid-smiles: " + std::string(error_kind_name(e.kind())));
      continue;
    }
    if (!is_valid(g)) {
      p.exclusions.emplace_back(r.id, "invalid-valence");
      continue;
    }
    try {
      encode_selfies_string(g);
    } catch (const Error &e) {
      p.exclusions.emplace_back(r.id,
                                "selfies-not-encodable: " + std::string(error_kind_name(e.kind())));
      continue;
    }
    std::string scaffold;
    try {
      scaffold = canonical_smiles(murcko_scaffold(g));
    } catch (const Error &e) {
      p.exclusions.emplace_back(r.id, "no-canonical-scaffold: " +
                                          std::string(error_kind_name(e.kind())));
      continue;
    }
    ++scaffolds[scaffold];
    const Descriptors d = descriptors(g);
    descriptor_values["mol_weight"].push_back(d.mol_weight);
    descriptor_values["rings"].push_back(d.rings);
    descriptor_values["aromatic_rings"].push_back(d.aromatic_rings);
    descriptor_values["heavy_atoms"].push_back(d.heavy_atoms);
  }

  std::vector<std::pair<std::string, std::size_t>> ranked(scaffolds.begin(), scaffolds.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  if (ranked.size() > kTopScaffolds)
    ranked.resize(kTopScaffolds);
  p.top_scaffolds = std::move(ranked);
  for (auto &[name, values]: descriptor_values)
    p.descriptors[name] = summarize(std::move(values));

  if (any_split) {
    const auto total = static_cast<double>(records.size());
    const std::map<std::string, double> expected { { "train", 0.8 }, { "valid", 0.1 },
                                                   { "test", 0.1 } };
    bool passes = true;
    for (const auto &[name, count]: p.split_counts) {
      if (expected.count(name) == 0)
        passes = false;
    }
    for (const auto &[name, share]: expected) {
      auto it = p.split_counts.find(name);
      const double actual = it == p.split_counts.end() ? 0.0 : static_cast<double>(it->second) / total;
      if (std::fabs(actual - share) > kSplitTolerance)
        passes = false;
    }
    p.split_check = passes;
  } else {
    p.split_counts.clear();
  }
  return p;
}

std::string render_profile(const ProfileReport &p, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json o = json::object();
    o["task"] = "profile";
    o["version"] = std::string(kToolVersion);
    o["records"] = p.records;
    json lengths = json::object();
    for (const auto &[modality, measures]: p.lengths) {
      for (const auto &[measure, hist]: measures) {
        json rows = json::array();
        for (const auto &[len, count]: hist)
          rows.push_back({ len, count });
        lengths[modality][measure] = rows;
      }
    }
    o["lengths"] = lengths;
    json scaffolds = json::array();
    for (const auto &[smiles, count]: p.top_scaffolds)
      scaffolds.push_back({ { "scaffold", smiles }, { "count", count } });
    o["top_scaffolds"] = scaffolds;
    json desc = json::object();
    for (const auto &[name, s]: p.descriptors)
      desc[name] = { { "min", report_round(s.min) },
                     { "median", report_round(s.median) },
                     { "max", report_round(s.max) } };
    o["descriptors"] = desc;
    if (p.split_check)
      o["split"] = { { "counts", p.split_counts }, { "passes", *p.split_check } };
    json excl = json::array();
    for (const auto &[id, reason]: p.exclusions)
      excl.push_back({ { "id", id }, { "reason", reason } });
    o["exclusions"] = excl;
    o["inputs"] = p.digests;
    return o.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << "section,key,value\n";
    out << "records,," << p.records << '\n';
    for (const auto &[smiles, count]: p.top_scaffolds)
      out << "scaffold," << json(smiles).dump() << ',' << count << '\n';
    for (const auto &[name, s]: p.descriptors) {
      out << "descriptor," << name << ":min," << fmt(s.min) << '\n';
      out << "descriptor," << name << ":median," << fmt(s.median) << '\n';
      out << "descriptor," << name << ":max," << fmt(s.max) << '\n';
    }
    if (p.split_check)
      out << "split,passes," << (*p.split_check ? "true" : "false") << '\n';
    for (const auto &[id, reason]: p.exclusions)
      out << "exclusion," << json(id).dump() << ',' << json(reason).dump() << '\n';
    return out.str();
  }
  out << "# profile\n\nrecords: " << p.records << "\n\n## top scaffolds\n\n| scaffold | count |\n|---|---|\n";
  for (const auto &[smiles, count]: p.top_scaffolds)
    out << "| `" << (smiles.empty() ? "(acyclic)" : smiles) << "` | " << count << " |\n";
  out << "\n## descriptors\n\n| descriptor | min | median | max |\n|---|---|---|---|\n";
  for (const auto &[name, s]: p.descriptors)
    out << "| " << name << " | " << fmt(s.min) << " | " << fmt(s.median) << " | " << fmt(s.max)
        << " |\n";
  if (p.split_check) {
    out << "\n## split\n\n";
    for (const auto &[name, count]: p.split_counts)
      out << "- " << name << ": " << count << '\n';
    out << "- 8:1:1 check: " << (*p.split_check ? "passes" : "fails") << '\n';
  }
  if (!p.exclusions.empty()) {
    out << "\n## exclusions\n\n";
    for (const auto &[id, reason]: p.exclusions)
      out << "- " << id << ": " << reason << '\n';
  }
  return out.str();
}

}  // namespace molbench
