//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <openssl/evp.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "molbench/error.hpp"
#include "molbench/harness.hpp"

namespace molbench {
namespace {

using nlohmann::json;

std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n";
  const std::size_t first = s.find_first_not_of(ws);
  if (first == std::string_view::npos)
    return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

// Calls handle(object, line) for each non-blank line.
template<class Handler>
void for_each_json_line(std::string_view text, Handler handle) {
  std::size_t line = 0;
  std::size_t records = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    ++line;
    const std::string_view body = trim(text.substr(start, end - start));
    start = end + 1;
    if (body.empty())
      continue;
    json object;
    try {
      object = json::parse(body);
    } catch (const json::exception &) {
      throw Error(ErrorKind::kSchemaError, line_prefix(line) + "not valid JSON", line);
    }
    if (!object.is_object())
      throw Error(ErrorKind::kSchemaError, line_prefix(line) + "record is not a JSON object",
                  line);
    try {
      handle(object, line);
    } catch (const json::exception &e) {
      throw Error(ErrorKind::kSchemaError, line_prefix(line) + e.what(), line);
    } catch (const Error &e) {
      if (e.kind() == ErrorKind::kSchemaError)
        throw;
      throw Error(ErrorKind::kSchemaError, line_prefix(line) + e.what(), line);
    }
    ++records;
  }
  if (records == 0)
    throw Error(ErrorKind::kEmptyFile, "file contains no records");
}

const json &field(const json &object, const char *key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end())
    throw Error(ErrorKind::kSchemaError,
                line_prefix(line) + "missing field '" + std::string(key) + "'", line);
  return *it;
}

std::string string_field(const json &object, const char *key, std::size_t line) {
  const json &v = field(object, key, line);
  if (!v.is_string())
    throw Error(ErrorKind::kSchemaError,
                line_prefix(line) + "field '" + std::string(key) + "' must be a string", line);
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json &object, const char *key,
                                           std::size_t line) {
  if (!object.contains(key) || object[key].is_null())
    return std::nullopt;
  return string_field(object, key, line);
}

double number_field(const json &object, const char *key, std::size_t line) {
  const json &v = field(object, key, line);
  if (!v.is_number() || !std::isfinite(v.get<double>()))
    throw Error(ErrorKind::kSchemaError,
                line_prefix(line) + "field '" + std::string(key) + "' must be a finite number",
                line);
  return v.get<double>();
}

Modality modality_field(const json &object, const char *key, std::size_t line) {
  const std::string name = string_field(object, key, line);
  try {
    return parse_modality(name);
  } catch (const Error &) {
    throw Error(ErrorKind::kSchemaError, line_prefix(line) + "unknown modality '" + name + "'",
                line);
  }
}

std::vector<std::string> token_field(const json &object, const char *key, std::size_t line,
                                     TokenScheme scheme) {
  const json &v = field(object, key, line);
  if (v.is_string())
    return tokenize(v.get<std::string>(), scheme).tokens;
  if (!v.is_array())
    throw Error(ErrorKind::kSchemaError,
                line_prefix(line) + "field '" + std::string(key) +
                    "' must be a string or a list of strings",
                line);
  std::vector<std::string> tokens;
  for (const json &t: v) {
    if (!t.is_string())
      throw Error(ErrorKind::kSchemaError,
                  line_prefix(line) + "field '" + std::string(key) + "' has a non-string token",
                  line);
    tokens.push_back(t.get<std::string>());
  }
  return tokens;
}

std::uint32_t read_u32_le(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

EmbeddingMatrix parse_binary_embeddings(std::string_view bytes) {
  if (bytes.size() < 12)
    throw Error(ErrorKind::kFormatError, "embedding file is truncated");
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  const std::uint64_t rows = read_u32_le(p + 4);
  const std::uint64_t dim = read_u32_le(p + 8);
  if (dim == 0)
    throw Error(ErrorKind::kFormatError, "embedding dimension is 0");
  const std::uint64_t payload = bytes.size() - 12;
  if (rows > payload / 4 / dim)
    throw Error(ErrorKind::kFormatError, "embedding file is truncated");
  std::vector<double> values;
  values.reserve(rows * dim);
  for (std::uint64_t k = 0; k < rows * dim; ++k) {
    const std::uint32_t bits = read_u32_le(p + 12 + 4 * k);
    float f = 0.0f;
    std::memcpy(&f, &bits, sizeof f);
    if (!std::isfinite(f))
      throw Error(ErrorKind::kFormatError, "embedding value is not finite");
    values.push_back(static_cast<double>(f));
  }
  std::string_view id_text = bytes.substr(12 + rows * dim * 4);
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start < id_text.size()) {
    std::size_t end = id_text.find('\n', start);
    if (end == std::string_view::npos)
      end = id_text.size();
    ids.emplace_back(id_text.substr(start, end - start));
    start = end + 1;
  }
  if (ids.size() != rows)
    throw Error(ErrorKind::kFormatError, "embedding id count does not match row count");
  try {
    return EmbeddingMatrix(std::move(ids), dim, std::move(values));
  } catch (const Error &e) {
    throw Error(ErrorKind::kFormatError, e.what());
  }
}

EmbeddingMatrix parse_csv_embeddings(std::string_view text) {
  std::vector<std::string> ids;
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t line = 0;
  std::istringstream in { std::string(text) };
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view body = trim(raw);
    if (body.empty() || body.front() == '#')
      continue;
    std::vector<std::string> fields;
    std::string cell;
    std::istringstream cells { std::string(body) };
    while (std::getline(cells, cell, ','))
      fields.push_back(std::string(trim(cell)));
    if (fields.size() < 2)
      throw Error(ErrorKind::kFormatError, line_prefix(line) + "expected id and values", line);
    if (dim == 0)
      dim = fields.size() - 1;
    if (fields.size() - 1 != dim)
      throw Error(ErrorKind::kFormatError, line_prefix(line) + "row dimension differs", line);
    ids.push_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[k], &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != fields[k].size() || used == 0 || !std::isfinite(v))
        throw Error(ErrorKind::kFormatError,
                    line_prefix(line) + "bad value '" + fields[k] + "'", line);
      values.push_back(v);
    }
  }
  if (ids.empty())
    throw Error(ErrorKind::kFormatError, "embedding file has no rows");
  try {
    return EmbeddingMatrix(std::move(ids), dim, std::move(values));
  } catch (const Error &e) {
    throw Error(ErrorKind::kFormatError, e.what());
  }
}

}  // namespace

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::kIoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw Error(ErrorKind::kIoError, "cannot read '" + path + "'");
  return buf.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::kIoError, "SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out.push_back(kHex[digest[k] >> 4]);
    out.push_back(kHex[digest[k] & 0xf]);
  }
  return out;
}

std::vector<GenRecord> parse_gen_records(std::string_view text) {
  std::vector<GenRecord> records;
  std::set<std::string> seen;
  for_each_json_line(text, [&](const json &o, std::size_t line) {
    GenRecord r;
    r.id = string_field(o, "id", line);
    if (!seen.insert(r.id).second)
      throw Error(ErrorKind::kSchemaError, line_prefix(line) + "duplicate id '" + r.id + "'",
                  line);
    r.input_modality = modality_field(o, "input_modality", line);
    r.output_modality = modality_field(o, "output_modality", line);
    r.prediction = string_field(o, "prediction", line);
    if (o.contains("references")) {
      const json &refs = o["references"];
      if (!refs.is_array() || refs.empty())
        throw Error(ErrorKind::kSchemaError,
                    line_prefix(line) + "'references' must be a non-empty list", line);
      for (const json &ref: refs) {
        if (!ref.is_string())
          throw Error(ErrorKind::kSchemaError,
                      line_prefix(line) + "'references' must hold strings", line);
        r.references.push_back(ref.get<std::string>());
      }
    } else {
      r.references.push_back(string_field(o, "reference", line));
    }
    records.push_back(std::move(r));
  });
  return records;
}

EmbeddingMatrix parse_embeddings(std::string_view bytes) {
  if (bytes.substr(0, 4) == "EMB1")
    return parse_binary_embeddings(bytes);
  return parse_csv_embeddings(bytes);
}

std::map<std::string, std::string> parse_gold(std::string_view text) {
  std::map<std::string, std::string> gold;
  for_each_json_line(text, [&](const json &o, std::size_t line) {
    const std::string query = string_field(o, "query", line);
    if (!gold.emplace(query, string_field(o, "target", line)).second)
      throw Error(ErrorKind::kSchemaError, line_prefix(line) + "duplicate query '" + query + "'",
                  line);
  });
  return gold;
}

PropertyData parse_property_records(std::string_view text) {
  PropertyData data;
  std::map<std::string, std::size_t> task_index;
  for_each_json_line(text, [&](const json &o, std::size_t line) {
    const std::string task = string_field(o, "task", line);
    if (o.contains("label")) {
      const json &label = o["label"];
      if (!label.is_number_integer() || (label.get<long>() != 0 && label.get<long>() != 1))
        throw Error(ErrorKind::kSchemaError, line_prefix(line) + "'label' must be 0 or 1", line);
      auto [it, fresh] = task_index.emplace(task, data.classification.size());
      if (fresh)
        data.classification.push_back({ {}, {}, task });
      ScoredLabels &s = data.classification[it->second];
      s.labels.push_back(static_cast<int>(label.get<long>()));
      s.scores.push_back(number_field(o, "score", line));
    } else {
      data.truth.push_back(number_field(o, "target", line));
      data.predicted.push_back(number_field(o, "prediction", line));
    }
  });
  return data;
}

std::vector<TaskResult> parse_task_results(std::string_view text) {
  std::vector<TaskResult> results;
  for_each_json_line(text, [&](const json &o, std::size_t line) {
    TaskResult r;
    r.input = modality_field(o, "input", line);
    r.output = modality_field(o, "output", line);
    r.metric = string_field(o, "metric", line);
    r.value = number_field(o, "value", line);
    results.push_back(std::move(r));
  });
  return results;
}

std::vector<TokenPair> parse_token_pairs(std::string_view text, TokenScheme scheme) {
  std::vector<TokenPair> pairs;
  for_each_json_line(text, [&](const json &o, std::size_t line) {
    pairs.push_back(
        { token_field(o, "input", line, scheme), token_field(o, "output", line, scheme) });
  });
  return pairs;
}

std::vector<ProfileRecord> parse_profile_records(std::string_view text) {
  std::vector<ProfileRecord> records;
  std::set<std::string> seen;
  for_each_json_line(text, [&](const json &o, std::size_t line) {
    ProfileRecord r;
    r.id = string_field(o, "id", line);
    if (!seen.insert(r.id).second)
      throw Error(ErrorKind::kSchemaError, line_prefix(line) + "duplicate id '" + r.id + "'",
                  line);
    r.smiles = string_field(o, "smiles", line);
    r.selfies = optional_string(o, "selfies", line);
    r.iupac = optional_string(o, "iupac", line);
    r.caption = optional_string(o, "caption", line);
    r.split = optional_string(o, "split", line);
    records.push_back(std::move(r));
  });
  return records;
}

std::set<std::string> parse_stoplist(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in { std::string(text) };
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string_view body = trim(raw);
    if (body.empty() || body.front() == '#')
      continue;
    out.emplace(body);
  }
  return out;
}

std::set<std::string> default_stoplist() {
  return { ".", ",", ";", ":", "!", "?", "'", "\"", "(", ")", "[", "]", "{", "}",
           "-", "=", "#", "/", "\\", "+", "@", "%", "*", "1", "2", "3", "4",
           "5", "6", "7", "8", "9", "0", "the", "a", "an", "of", "is", "and", "in",
           "to", "with", "as", "by", "it", "from", "that", "which", "<s>", "</s>", "<pad>",
           "<unk>" };
}

std::string export_mapping_matrix(const MappingMatrix &m) {
  std::ostringstream out;
  out << "token";
  for (const std::string &c: m.col_tokens())
    out << ',' << json(c).dump();
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << json(m.row_tokens()[i]).dump();
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << ',' << json(m.at(i, j)).dump();
    out << '\n';
  }
  return out.str();
}

MappingMatrix import_mapping_matrix(std::string_view csv) {
  // Tokens are JSON string literals, so split on commas outside quotes.
  auto split = [](std::string_view line) {
    std::vector<std::string> fields;
    std::string cell;
    bool quoted = false;
    bool escaped = false;
    for (char c: line) {
      if (quoted) {
        cell.push_back(c);
        if (escaped)
          escaped = false;
        else if (c == '\\')
          escaped = true;
        else if (c == '"')
          quoted = false;
      } else if (c == ',') {
        fields.push_back(cell);
        cell.clear();
      } else if (c != '\r') {
        if (c == '"')
          quoted = true;
        cell.push_back(c);
      }
    }
    fields.push_back(cell);
    return fields;
  };
  auto token = [](const std::string &field, std::size_t line) {
    try {
      const json v = json::parse(field);
      if (v.is_string())
        return v.get<std::string>();
    } catch (const json::exception &) {
    }
    throw Error(ErrorKind::kFormatError, line_prefix(line) + "bad token cell", line);
  };
  std::vector<std::string> lines;
  std::istringstream in { std::string(csv) };
  std::string raw;
  while (std::getline(in, raw)) {
    if (!trim(raw).empty())
      lines.push_back(raw);
  }
  if (lines.size() < 3)
    throw Error(ErrorKind::kFormatError, "mapping matrix CSV needs a header and 2 rows");
  const auto header = split(lines[0]);
  std::vector<std::string> cols;
  for (std::size_t k = 1; k < header.size(); ++k)
    cols.push_back(token(header[k], 1));
  std::vector<std::string> rows;
  std::vector<double> counts;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split(lines[li]);
    if (fields.size() != header.size())
      throw Error(ErrorKind::kFormatError, line_prefix(li + 1) + "wrong field count", li + 1);
    rows.push_back(token(fields[0], li + 1));
    for (std::size_t k = 1; k < fields.size(); ++k) {
      try {
        const json v = json::parse(fields[k]);
        if (!v.is_number())
          throw Error(ErrorKind::kFormatError, "", li + 1);
        counts.push_back(v.get<double>());
      } catch (const std::exception &) {
        throw Error(ErrorKind::kFormatError, line_prefix(li + 1) + "bad count", li + 1);
      }
    }
  }
  try {
    return MappingMatrix(std::move(rows), std::move(cols), std::move(counts));
  } catch (const Error &e) {
    throw Error(ErrorKind::kFormatError, e.what());
  }
}

}  // namespace molbench
