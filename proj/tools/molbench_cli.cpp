//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "molbench/error.hpp"
#include "molbench/harness.hpp"
#include "molbench/molgraph.hpp"
#include "molbench/selfies.hpp"
#include "molbench/smiles.hpp"

namespace {

using nlohmann::json;
using namespace molbench;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// --out takes a format name or a file path whose extension selects the format.
struct OutputTarget {
  ReportFormat format = ReportFormat::kJson;
  std::optional<std::string> path;
};

OutputTarget resolve_output(const std::string &out) {
  if (auto f = parse_report_format(out))
    return { *f, std::nullopt };
  const std::size_t dot = out.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : out.substr(dot + 1);
  if (ext == "md")
    return { ReportFormat::kMarkdown, out };
  if (ext == "csv")
    return { ReportFormat::kCsv, out };
  return { ReportFormat::kJson, out };
}

void emit(const OutputTarget &target, const std::string &text) {
  if (!target.path) {
    std::cout << text;
    return;
  }
  std::ofstream file(*target.path, std::ios::binary);
  if (!file || !(file << text))
    throw Error(ErrorKind::kIoError, "cannot write '" + *target.path + "'");
}

// Reads a file and records its digest.
std::string load(const std::string &path, std::map<std::string, std::string> &digests) {
  std::string data = read_file(path);
  digests[path] = sha256_hex(data);
  return data;
}

std::vector<std::string> collect_inputs(const std::vector<std::string> &args,
                                        const std::string &file) {
  std::vector<std::string> inputs = args;
  if (!file.empty()) {
    std::istringstream in(read_file(file));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (!line.empty())
        inputs.push_back(line);
    }
  }
  return inputs;
}

json error_json(const Error &e) {
  json o = { { "error", std::string(error_kind_name(e.kind())) }, { "message", e.what() } };
  if (e.position())
    o["position"] = *e.position();
  return o;
}

std::string json_lines(const std::vector<json> &rows) {
  std::string out;
  for (const json &row: rows)
    out += row.dump() + "\n";
  return out;
}

json parse_entry(const std::string &smiles) {
  json o = { { "input", smiles } };
  try {
    const MolGraph g = parse_smiles(smiles);
    o["valid"] = is_valid(g);
    o["atoms"] = g.atom_count();
    o["bonds"] = g.bond_count();
    o["components"] = g.component_count();
    const Descriptors d = descriptors(g);
    o["mol_weight"] = report_round(d.mol_weight);
    o["heavy_atoms"] = d.heavy_atoms;
    o["rings"] = d.rings;
    o["aromatic_rings"] = d.aromatic_rings;
    try {
      o["canonical"] = canonical_smiles(g);
    } catch (const Error &e) {
      o["canonical_error"] = error_json(e);
    }
  } catch (const Error &e) {
    o.update(error_json(e));
  }
  return o;
}

json convert_entry(const std::string &text, const std::string &from, const std::string &to) {
  json o = { { "input", text } };
  try {
    const MolGraph g = from == "smiles" ? parse_smiles(text) : decode_selfies_string(text);
    o["output"] = to == "selfies" ? encode_selfies_string(g) : canonical_smiles(g);
  } catch (const Error &e) {
    o.update(error_json(e));
  }
  return o;
}

std::string render_rows(const std::vector<json> &rows, const std::vector<std::string> &columns,
                        ReportFormat format) {
  if (format == ReportFormat::kJson)
    return json(rows).dump(2) + "\n";
  auto cell = [](const json &v) {
    if (v.is_null())
      return std::string();
    if (v.is_string())
      return v.get<std::string>();
    if (v.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
      return std::string(buf);
    }
    return v.dump();
  };
  std::ostringstream out;
  const bool md = format == ReportFormat::kMarkdown;
  for (std::size_t k = 0; k < columns.size(); ++k)
    out << (md ? "| " : (k ? "," : "")) << columns[k] << (md ? " " : "");
  out << (md ? "|\n" : "\n");
  if (md) {
    for (std::size_t k = 0; k < columns.size(); ++k)
      out << "|---";
    out << "|\n";
  }
  for (const json &row: rows) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      const json v = row.contains(columns[k]) ? row[columns[k]] : json();
      out << (md ? "| " : (k ? "," : "")) << cell(v) << (md ? " " : "");
    }
    out << (md ? "|\n" : "\n");
  }
  return out.str();
}

json optional_number(const std::optional<double> &v) {
  return v ? json(report_round(*v)) : json();
}

json matrix_json(const MappingMatrix &m) {
  double top = 0.0;
  for (double v: m.counts())
    top = std::max(top, v);
  json counts = json::array();
  json normalized = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    json nrow = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row.push_back(m.at(i, j));
      nrow.push_back(top > 0.0 ? report_round(m.at(i, j) / top) : 0.0);
    }
    counts.push_back(row);
    normalized.push_back(nrow);
  }
  return { { "rows", m.row_tokens() }, { "cols", m.col_tokens() }, { "counts", counts },
           { "normalized", normalized }, { "truncated", m.truncated } };
}

MappingMatrix load_mapping_matrix(const std::string &path,
                                  std::map<std::string, std::string> &digests) {
  const std::string text = load(path, digests);
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{')
    return import_mapping_matrix(text);
  try {
    const json o = json::parse(text);
    std::vector<double> counts;
    for (const json &row: o.at("counts")) {
      for (const json &v: row)
        counts.push_back(v.get<double>());
    }
    return MappingMatrix(o.at("rows").get<std::vector<std::string>>(),
                         o.at("cols").get<std::vector<std::string>>(), std::move(counts));
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kFormatError, std::string("bad mapping matrix: ") + e.what());
  }
}

std::string transition_json(const TransitionMatrix &m, const std::map<std::string, std::string> &digests) {
  json values = json::object();
  json rules = json::object();
  for (Modality row: kAllModalities) {
    for (Modality col: kAllModalities) {
      const TransitionCell &c = m.at(row, col);
      const std::string r(modality_name(row));
      const std::string k(modality_name(col));
      values[r][k] = c.value ? json(report_round(*c.value)) : json();
      rules[r][k] = std::string(cell_rule_name(c.rule)) +
                    (c.rule == CellRule::kMeasured ? ":" + c.metric : "");
    }
  }
  json o = { { "task", "transition" }, { "version", std::string(kToolVersion) },
             { "matrix", values }, { "provenance", rules }, { "inputs", digests } };
  return o.dump(2) + "\n";
}

std::string transition_markdown(const TransitionMatrix &m) {
  std::ostringstream out;
  out << "| input \\ output |";
  for (Modality col: kAllModalities)
    out << ' ' << modality_name(col) << " |";
  out << "\n|---|";
  for (std::size_t k = 0; k < kModalityCount; ++k)
    out << "---|";
  out << '\n';
  for (Modality row: kAllModalities) {
    out << "| " << modality_name(row) << " |";
    for (Modality col: kAllModalities) {
      char buf[16] = "";
      if (const auto &v = m.at(row, col).value)
        std::snprintf(buf, sizeof buf, "%.3f", *v);
      out << ' ' << buf << " |";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "molbench: molecular language-model evaluation toolkit" };
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "Flat key=value file; flags given on the command line win");
  app.require_subcommand(1);
  app.fallthrough();
  // parse and convert read their inputs from the unmatched arguments so that
  // bracketed SELFIES are not read as CLI11 list syntax.
  app.allow_extras();

  std::string out = "json";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  unsigned long seed = 0;
  app.add_option("--out", out, "json, md, csv, or an output file path (format from extension)");
  app.add_option("--threads", threads, "Worker threads for record scoring")->check(CLI::Range(1u, 64u));
  app.add_option("--seed", seed, "Seed for randomized steps; no current subcommand samples");

  // parse
  auto *parse_cmd = app.add_subcommand("parse", "Parse SMILES and report graph facts");
  std::string parse_file;
  parse_cmd->usage("molbench parse [SMILES...] [--file FILE]");
  parse_cmd->add_option("--file", parse_file, "File with one SMILES per line");

  // convert
  auto *convert_cmd = app.add_subcommand("convert", "Convert between SMILES and SELFIES");
  std::string convert_file;
  std::string from = "smiles";
  std::string to = "selfies";
  convert_cmd->usage("molbench convert [STRINGS...] [--from smiles|selfies] [--to smiles|selfies]");
  convert_cmd->add_option("--file", convert_file, "File with one string per line");
  convert_cmd->add_option("--from", from)->check(CLI::IsMember({ "smiles", "selfies" }));
  convert_cmd->add_option("--to", to)->check(CLI::IsMember({ "smiles", "selfies" }));

  // profile
  auto *profile_cmd = app.add_subcommand("profile", "Profile a molecule dataset");
  std::string profile_records;
  profile_cmd->add_option("--records", profile_records, "JSON-lines dataset")->required();

  // eval
  auto *eval_cmd = app.add_subcommand("eval", "Evaluate model outputs");
  std::vector<std::string> merge_inputs;
  eval_cmd->add_option("--repeat-merge", merge_inputs,
                       "Merge JSON reports of repeated runs into mean and std");
  eval_cmd->require_subcommand(0, 1);
  auto *gen_cmd = eval_cmd->add_subcommand("gen", "Generation metrics");
  std::string gen_records;
  std::string gen_target;
  gen_cmd->add_option("--records", gen_records, "JSON-lines generation records")->required();
  gen_cmd->add_option("--target", gen_target, "molecule or text (default from output modality)")
      ->check(CLI::IsMember({ "molecule", "text" }));
  auto *retr_cmd = eval_cmd->add_subcommand("retrieval", "Embedding retrieval metrics");
  std::string queries_path;
  std::string targets_path;
  std::string gold_path;
  retr_cmd->add_option("--queries", queries_path)->required();
  retr_cmd->add_option("--targets", targets_path)->required();
  retr_cmd->add_option("--gold", gold_path)->required();
  auto *prop_cmd = eval_cmd->add_subcommand("property", "Property prediction metrics");
  std::string prop_records;
  double f1_threshold = 0.5;
  prop_cmd->add_option("--records", prop_records)->required();
  prop_cmd->add_option("--threshold", f1_threshold, "F1 decision threshold");

  // transition
  auto *trans_cmd = app.add_subcommand("transition", "Modal transition matrix");
  trans_cmd->require_subcommand(1);
  auto *trans_build = trans_cmd->add_subcommand("build", "Build the matrix from task results");
  std::string results_path;
  std::string provenance_path;
  trans_build->add_option("--results", results_path, "JSON-lines task results");
  trans_build->add_option("--provenance", provenance_path, "Provenance CSV output path");

  // tokenmap
  auto *tok_cmd = app.add_subcommand("tokenmap", "Token mapping matrix analysis");
  tok_cmd->require_subcommand(1);
  auto *tok_build = tok_cmd->add_subcommand("build", "Build a mapping matrix from token pairs");
  std::string pairs_path;
  std::string scheme_name = "whitespace";
  int top_k = kDefaultTopK;
  std::string stoplist_path;
  bool occurrence = false;
  tok_build->add_option("--pairs", pairs_path)->required();
  tok_build->add_option("--scheme", scheme_name, "whitespace, smiles_regex, selfies_bracket, char");
  tok_build->add_option("--top-k", top_k);
  tok_build->add_option("--stoplist", stoplist_path, "Stoplist file (default built in)");
  tok_build->add_flag("--occurrence", occurrence, "Count token occurrences instead of presence");
  auto *tok_sweep = tok_cmd->add_subcommand("sweep", "Threshold sweep");
  std::string matrix_path;
  std::string grid_text = "0:5:0.05";
  tok_sweep->add_option("--matrix", matrix_path, "Matrix from tokenmap build")->required();
  tok_sweep->add_option("--grid", grid_text, "start:stop:step");
  auto *tok_select = tok_cmd->add_subcommand("select", "Flagged mapping pairs at one threshold");
  double select_t = 0.0;
  tok_select->add_option("--matrix", matrix_path)->required();
  tok_select->add_option("--T", select_t)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    // Only parse and convert take free arguments.
    if (!*parse_cmd && !*convert_cmd && !app.remaining().empty())
      throw CLI::ExtrasError(app.remaining());
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    const OutputTarget target = resolve_output(out);
    std::map<std::string, std::string> digests;

    if (*parse_cmd) {
      std::vector<json> rows;
      bool failed = false;
      for (const std::string &s: collect_inputs(app.remaining(), parse_file)) {
        rows.push_back(parse_entry(s));
        failed = failed || rows.back().contains("error");
      }
      emit(target, target.format == ReportFormat::kJson
                       ? json_lines(rows)
                       : render_rows(rows, { "input", "canonical", "valid", "atoms", "bonds",
                                             "mol_weight", "error" },
                                     target.format));
      return failed ? kExitData : 0;
    }

    if (*convert_cmd) {
      std::vector<json> rows;
      bool failed = false;
      for (const std::string &s: collect_inputs(app.remaining(), convert_file)) {
        rows.push_back(convert_entry(s, from, to));
        failed = failed || rows.back().contains("error");
      }
      emit(target, target.format == ReportFormat::kJson
                       ? json_lines(rows)
                       : render_rows(rows, { "input", "output", "error" }, target.format));
      return failed ? kExitData : 0;
    }

    if (*profile_cmd) {
      const auto records = parse_profile_records(load(profile_records, digests));
      ProfileReport p = profile_dataset(records);
      p.digests = digests;
      emit(target, render_profile(p, target.format));
      return 0;
    }

    if (*eval_cmd) {
      Report report;
      if (!merge_inputs.empty()) {
        std::vector<Report> runs;
        for (const std::string &path: merge_inputs)
          runs.push_back(parse_report_json(load(path, digests)));
        report = merge_reports(runs);
      } else if (*gen_cmd) {
        const auto records = parse_gen_records(load(gen_records, digests));
        const TargetKind kind = gen_target.empty()
                                    ? default_target_kind(records.front().output_modality)
                                    : (gen_target == "molecule" ? TargetKind::kMolecule
                                                                : TargetKind::kText);
        report = eval_generation(records, kind, threads);
        report.digests = digests;
      } else if (*retr_cmd) {
        const EmbeddingMatrix q = parse_embeddings(load(queries_path, digests));
        const EmbeddingMatrix t = parse_embeddings(load(targets_path, digests));
        const auto gold = parse_gold(load(gold_path, digests));
        report = eval_retrieval(q, t, gold);
        report.digests = digests;
      } else if (*prop_cmd) {
        const PropertyData data = parse_property_records(load(prop_records, digests));
        report = eval_property(data, f1_threshold);
        report.digests = digests;
      } else {
        throw CLI::CallForHelp();
      }
      emit(target, render_report(report, target.format));
      return 0;
    }

    if (*trans_build) {
      std::vector<TaskResult> results;
      if (!results_path.empty())
        results = parse_task_results(load(results_path, digests));
      const TransitionMatrix m = build_matrix(results);
      if (target.format == ReportFormat::kCsv) {
        emit(target, export_matrix(m));
        std::string prov_path = provenance_path;
        if (prov_path.empty() && target.path) {
          const std::size_t dot = target.path->rfind('.');
          prov_path = target.path->substr(0, dot) + ".provenance.csv";
        }
        if (!prov_path.empty())
          emit({ ReportFormat::kCsv, prov_path }, export_provenance(m));
        else
          std::cout << '\n' << export_provenance(m);
      } else if (target.format == ReportFormat::kMarkdown) {
        emit(target, transition_markdown(m));
      } else {
        emit(target, transition_json(m, digests));
      }
      return 0;
    }

    if (*tok_build) {
      const auto scheme = parse_token_scheme(scheme_name);
      if (!scheme)
        throw Error(ErrorKind::kInvalidArgument, "unknown token scheme '" + scheme_name + "'");
      const auto pairs = parse_token_pairs(load(pairs_path, digests), *scheme);
      const auto stoplist =
          stoplist_path.empty() ? default_stoplist() : parse_stoplist(load(stoplist_path, digests));
      const MappingMatrix m = build_mapping_matrix(
          pairs, top_k, stoplist, occurrence ? CountMode::kOccurrence : CountMode::kPresence);
      if (m.truncated)
        std::cerr << "warning: TooFewTokens: fewer than " << top_k
                  << " tokens on an axis, matrix is " << m.rows() << "x" << m.cols() << '\n';
      if (target.format == ReportFormat::kCsv) {
        emit(target, export_mapping_matrix(m));
      } else {
        json o = matrix_json(m);
        o["inputs"] = digests;
        o["version"] = std::string(kToolVersion);
        emit(target, o.dump(2) + "\n");
      }
      return 0;
    }

    if (*tok_sweep) {
      const MappingMatrix m = load_mapping_matrix(matrix_path, digests);
      const auto grid = parse_grid(grid_text);
      std::vector<json> rows;
      for (const SweepRow &r: sweep_threshold(m, grid)) {
        rows.push_back({ { "T", report_round(r.threshold) },
                         { "flag_count", r.flag_count },
                         { "unique_pair_count", r.unique_pair_count },
                         { "z", optional_number(r.z) },
                         { "confidence", optional_number(r.confidence) } });
      }
      if (target.format == ReportFormat::kJson) {
        json o = { { "task", "tokenmap-sweep" }, { "version", std::string(kToolVersion) },
                   { "rows", rows }, { "inputs", digests } };
        emit(target, o.dump(2) + "\n");
      } else {
        emit(target, render_rows(rows, { "T", "flag_count", "unique_pair_count", "z", "confidence" },
                                 target.format));
      }
      return 0;
    }

    if (*tok_select) {
      const MappingMatrix m = load_mapping_matrix(matrix_path, digests);
      const FilterStats stats = local_filter(m, select_t);
      const auto pairs = select_pairs(m, stats);
      std::vector<json> rows;
      for (const MappingPair &p: pairs) {
        rows.push_back({ { "input", p.input_token },
                         { "output", p.output_token },
                         { "value", p.value },
                         { "group", p.group_key ? json(*p.group_key) : json() } });
      }
      if (target.format == ReportFormat::kJson) {
        json groups = json::array();
        for (const MappingGroup &g: group_pairs(pairs))
          groups.push_back({ { "key", g.key }, { "members", g.members } });
        json o = { { "task", "tokenmap-select" },
                   { "version", std::string(kToolVersion) },
                   { "T", select_t },
                   { "flag_count", stats.flag_count },
                   { "p_actual", report_round(stats.p_actual) },
                   { "p_expected", report_round(stats.p_expected) },
                   { "z", optional_number(stats.z) },
                   { "confidence", optional_number(stats.confidence) },
                   { "pairs", rows },
                   { "groups", groups },
                   { "inputs", digests } };
        emit(target, o.dump(2) + "\n");
      } else {
        emit(target, render_rows(rows, { "input", "output", "value", "group" }, target.format));
      }
      return 0;
    }
    return kExitUsage;
  } catch (const CLI::CallForHelp &) {
    std::cerr << app.help();
    return kExitUsage;
  } catch (const Error &e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::kInvalidArgument ? kExitUsage : kExitData;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
