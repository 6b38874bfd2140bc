//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. argv[1] is the molbench CLI binary.
//

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "isomorphism.hpp"
#include "molbench/error.hpp"
#include "molbench/interpret.hpp"
#include "molbench/predmetrics.hpp"
#include "molbench/selfies.hpp"
#include "molbench/smiles.hpp"
#include "molbench/textmetrics.hpp"
#include "molbench/transition.hpp"
#include "oracles.hpp"
#include "random_molecules.hpp"

namespace {

using namespace molbench;
using Clock = std::chrono::steady_clock;

// Tolerances and sizes.
constexpr double kCdfLow2758 = 0.99661;
constexpr double kCdfHigh2758 = 0.99761;
constexpr double kCdfLow2476 = 0.99287;
constexpr double kCdfHigh2476 = 0.99387;
constexpr double kAnchorBudgetMs = 1.0;
constexpr double kOracleTolerance = 1e-9;
constexpr int kOracleInstances = 200;
constexpr double kOracleBudgetS = 10.0;
constexpr int kScaleMatrices = 50;
constexpr double kScales[] = { 0.5, 3.7, 100.0 };
constexpr double kScaleThresholds[] = { 0.5, 1.0, 2.0, 3.5 };
constexpr int kPlantedTrials = 20;
constexpr int kPlantedSize = 20;
constexpr int kPlantedCells = 5;
constexpr double kPlantedValue = 50.0;
constexpr const char *kPlantedGrid = "0:20:0.25";
constexpr int kRandomStreams = 10000;
constexpr int kMaxStreamLength = 50;
constexpr int kRoundTrips = 1000;
constexpr double kSelfiesBudgetS = 30.0;
constexpr int kCanonicalMolecules = 100;
constexpr int kPermutationsPerMolecule = 100;
constexpr int kSortTrials = 200;
constexpr int kSortSize = 20;
constexpr double kSortPassShare = 0.95;
constexpr int kFixtureRecords = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::vector<std::string> names(const std::string &prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i)
    out.push_back(prefix + (i < 10 ? "0" : "") + std::to_string(i));
  return out;
}

// 1. Z to confidence anchors.
Outcome z_anchors() {
  const auto start = Clock::now();
  const double a = normal_cdf(2.758);
  const double b = normal_cdf(2.476);
  const double ms = seconds_since(start) * 1000.0;
  const bool pass = a >= kCdfLow2758 && a <= kCdfHigh2758 && b >= kCdfLow2476 && b <= kCdfHigh2476 &&
                    ms < kAnchorBudgetMs;
  return { pass, "Phi(2.758)=" + fmt("%.6f", a) + " Phi(2.476)=" + fmt("%.6f", b) + " in " +
                     fmt("%.4f", ms) + " ms" };
}

// 2. Transition matrix fill rules and quoted cells.
Outcome transition_rules() {
  using M = Modality;
  int wrong = 0;
  const TransitionMatrix empty = build_matrix({});
  for (M r: kAllModalities) {
    for (M c: kAllModalities) {
      const TransitionCell &cell = empty.at(r, c);
      std::optional<double> want;
      if (r == c || (r != M::kProperty && ((is_internal(r) && is_internal(c)) ||
                                           (r == M::kGraph && c == M::kImage))))
        want = 1.0;
      else if (r == M::kProperty)
        want = 0.0;
      if (cell.value != want)
        ++wrong;
    }
  }
  const std::vector<TaskResult> quoted { { M::kIupac, M::kSmiles, "bleu", 0.881 },
                                         { M::kSmiles, M::kCaption, "meteor", 0.563 } };
  const TransitionMatrix filled = build_matrix(quoted);
  for (M c: { M::kSmiles, M::kInchi, M::kSelfies, M::kGraph })
    if (filled.at(M::kIupac, c).value != 0.881)
      ++wrong;
  if (filled.at(M::kSmiles, M::kCaption).value != 0.563)
    ++wrong;
  const std::string csv = export_matrix(filled);
  if (csv.find("iupac,0.881,0.881,0.881,0.881,,1.000,,") == std::string::npos)
    ++wrong;
  return { wrong == 0, std::to_string(wrong) + " cells off rule; graph->image counted as tool" };
}

// 3. Metric oracle equivalence.
Outcome metric_oracles() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1003);
  static const std::vector<std::string> kVocab = { "the", "cat", "cats", "sat", "sitting", "on",
                                                   "mat", "acid", "acids", "a" };
  std::uniform_int_distribution<std::size_t> word(0, kVocab.size() - 1);
  std::uniform_int_distribution<std::size_t> len(1, 10);
  auto sentence = [&] {
    testing::Words w(len(rng));
    for (std::string &s: w)
      s = kVocab[word(rng)];
    return w;
  };
  std::map<std::string, double> worst;
  std::map<std::string, int> mismatches;
  auto record = [&](const std::string &name, double got, double want) {
    const double d = std::fabs(got - want);
    worst[name] = std::max(worst[name], d);
    if (d > kOracleTolerance)
      ++mismatches[name];
  };
  for (int trial = 0; trial < kOracleInstances; ++trial) {
    std::vector<Tokens> cands;
    std::vector<std::vector<Tokens>> refs;
    for (int s = 0; s < 3; ++s) {
      cands.push_back(sentence());
      refs.push_back({ sentence(), sentence() });
    }
    for (int n: { 2, 4 })
      record("bleu", corpus_bleu(cands, refs, n), testing::oracle_corpus_bleu(cands, refs, n));
    const Tokens c = sentence();
    const Tokens r = sentence();
    record("rouge-1", rouge(c, r, RougeVariant::kR1), testing::oracle_rouge_n(c, r, 1));
    record("rouge-2", rouge(c, r, RougeVariant::kR2), testing::oracle_rouge_n(c, r, 2));
    record("rouge-l", rouge(c, r, RougeVariant::kRL), testing::oracle_rouge_l(c, r));
    record("meteor", meteor_lite(c, r), testing::oracle_meteor(c, r));

    std::string a;
    std::string b;
    for (std::size_t k = len(rng); k > 0; --k)
      a += static_cast<char>('a' + word(rng) % 4);
    for (std::size_t k = len(rng); k > 0; --k)
      b += static_cast<char>('a' + word(rng) % 4);
    if (levenshtein(a, b) != testing::oracle_levenshtein(a, b))
      ++mismatches["levenshtein"];

    const int items = std::uniform_int_distribution<int>(2, 200)(rng);
    ScoredLabels s;
    for (int i = 0; i < items; ++i) {
      s.labels.push_back(i == 0 ? 1 : i == 1 ? 0 : static_cast<int>(word(rng) % 2));
      s.scores.push_back(static_cast<double>(word(rng)) / 10.0);
    }
    record("roc-auc", roc_auc(s), testing::oracle_roc_auc(s.labels, s.scores));
    record("pr-auc", pr_auc(s), testing::oracle_pr_auc(s.labels, s.scores));

    std::normal_distribution<double> normal(0.0, 1.0);
    const int nt = std::uniform_int_distribution<int>(1, 200)(rng);
    const int nq = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<std::string> tids = names("t", nt);
    std::vector<std::string> qids = names("q", nq);
    std::vector<std::vector<double>> tv(nt, std::vector<double>(3));
    std::vector<std::vector<double>> qv(nq, std::vector<double>(3));
    std::vector<double> tflat;
    std::vector<double> qflat;
    for (auto &v: tv)
      for (double &x: v)
        tflat.push_back(x = normal(rng));
    for (auto &v: qv)
      for (double &x: v)
        qflat.push_back(x = normal(rng));
    std::map<std::string, std::string> gold;
    for (const std::string &q: qids)
      gold[q] = tids[std::uniform_int_distribution<std::size_t>(0, tids.size() - 1)(rng)];
    const std::vector<int> ks { 1, 5, 10 };
    const RetrievalResult got =
        retrieval_eval(EmbeddingMatrix(qids, 3, qflat), EmbeddingMatrix(tids, 3, tflat), gold, ks);
    const testing::OracleRetrieval want = testing::oracle_retrieval(qids, qv, tids, tv, gold, ks);
    record("mrr", got.mrr, want.mrr);
    for (int k: ks)
      record("r@k", got.recall_at.at(k), want.recall_at.at(k));
  }
  const double secs = seconds_since(start);
  int total = 0;
  std::string detail;
  for (const auto &[name, n]: mismatches) {
    total += n;
    detail += name + ":" + std::to_string(n) + " ";
  }
  double max_delta = 0.0;
  for (const auto &[name, d]: worst)
    max_delta = std::max(max_delta, d);
  return { total == 0 && secs < kOracleBudgetS,
           std::to_string(kOracleInstances) + " instances per metric, mismatches " +
               (detail.empty() ? "none" : detail) + ", max delta " + fmt("%.3g", max_delta) + ", " +
               fmt("%.2f", secs) + " s" };
}

MappingMatrix poisson_matrix(std::mt19937_64 &rng, int rows, int cols) {
  std::poisson_distribution<int> count(8.0);
  std::vector<double> v(static_cast<std::size_t>(rows * cols));
  for (double &x: v)
    x = count(rng);
  return MappingMatrix(names("r", rows), names("c", cols), v);
}

// 4. Filter scale invariance.
Outcome scale_invariance() {
  std::mt19937_64 rng(1004);
  int differing = 0;
  int checks = 0;
  for (int trial = 0; trial < kScaleMatrices; ++trial) {
    const int rows = std::uniform_int_distribution<int>(3, 20)(rng);
    const int cols = std::uniform_int_distribution<int>(3, 20)(rng);
    const MappingMatrix m = poisson_matrix(rng, rows, cols);
    for (double t: kScaleThresholds) {
      const std::vector<bool> base = local_filter(m, t).flags;
      for (double c: kScales) {
        ++checks;
        if (local_filter(m.scaled(c), t).flags != base)
          ++differing;
      }
    }
  }
  return { differing == 0, std::to_string(checks) + " scaled comparisons, " + std::to_string(differing) +
                               " differ" };
}

// 20x20 N(10,1) background with planted cells at 50 that are pairwise
// non-adjacent (Moore neighborhood) in the sorted layout the filter uses.
std::pair<MappingMatrix, std::set<std::pair<std::string, std::string>>> planted_matrix(std::mt19937_64 &rng) {
  std::normal_distribution<double> background(10.0, 1.0);
  std::uniform_int_distribution<int> cell(0, kPlantedSize * kPlantedSize - 1);
  const auto rows = names("r", kPlantedSize);
  const auto cols = names("c", kPlantedSize);
  for (;;) {
    std::vector<double> v(static_cast<std::size_t>(kPlantedSize * kPlantedSize));
    for (double &x: v)
      x = background(rng);
    std::set<int> planted;
    while (static_cast<int>(planted.size()) < kPlantedCells)
      planted.insert(cell(rng));
    std::set<std::pair<std::string, std::string>> hot;
    for (int k: planted) {
      v[static_cast<std::size_t>(k)] = kPlantedValue;
      hot.emplace(rows[static_cast<std::size_t>(k / kPlantedSize)], cols[static_cast<std::size_t>(k % kPlantedSize)]);
    }
    const MappingMatrix m(rows, cols, v);
    const MappingMatrix s = sort_matrix(m);
    std::vector<std::pair<int, int>> where;
    for (int i = 0; i < kPlantedSize; ++i)
      for (int j = 0; j < kPlantedSize; ++j)
        if (hot.count({ s.row_tokens()[static_cast<std::size_t>(i)], s.col_tokens()[static_cast<std::size_t>(j)] }))
          where.emplace_back(i, j);
    bool apart = true;
    for (std::size_t a = 0; a < where.size(); ++a)
      for (std::size_t b = a + 1; b < where.size(); ++b)
        if (std::abs(where[a].first - where[b].first) <= 1 && std::abs(where[a].second - where[b].second) <= 1)
          apart = false;
    if (apart)
      return { m, hot };
  }
}

// 5. Planted anomaly recovery and sweep monotonicity.
Outcome planted_recovery() {
  std::mt19937_64 rng(1005);
  const std::vector<double> grid = parse_grid(kPlantedGrid);
  int recovered = 0;
  int non_monotone = 0;
  for (int trial = 0; trial < kPlantedTrials; ++trial) {
    const auto [m, hot] = planted_matrix(rng);
    const std::vector<SweepRow> rows = sweep_threshold(m, grid);
    for (std::size_t k = 1; k < rows.size(); ++k)
      if (rows[k].flag_count > rows[k - 1].flag_count) {
        ++non_monotone;
        break;
      }
    for (double t: grid) {
      const FilterStats s = filter_cells(m, t);
      std::set<std::pair<std::string, std::string>> flagged;
      for (std::size_t i = 0; i < s.matrix.rows(); ++i)
        for (std::size_t j = 0; j < s.matrix.cols(); ++j)
          if (s.flagged(i, j))
            flagged.emplace(s.matrix.row_tokens()[i], s.matrix.col_tokens()[j]);
      if (flagged == hot) {
        ++recovered;
        break;
      }
    }
  }
  return { recovered == kPlantedTrials && non_monotone == 0,
           std::to_string(recovered) + "/" + std::to_string(kPlantedTrials) + " recovered exactly, " +
               std::to_string(non_monotone) + " non-monotone sweeps" };
}

// 6. SELFIES robustness and round trip.
Outcome selfies_robustness() {
  const auto start = Clock::now();
  static const std::vector<std::string> kAlphabet = {
    "[C]", "[=C]", "[#C]", "[N]", "[=N]", "[#N]", "[O]", "[=O]", "[S]", "[=S]", "[F]", "[Cl]", "[Br]",
    "[I]", "[P]", "[=P]", "[B]", "[=B]", "[O-1]", "[N+1]", "[=N+1]", "[C-1]", "[NH1]", "[Ring1]",
    "[Ring2]", "[=Ring1]", "[#Ring2]", "[Branch1]", "[Branch2]", "[Branch3]", "[=Branch1]",
    "[#Branch1]", "[=Branch3]", "[nop]", "[Q]", "[\\C]", "[/N]", "[C@H1]",
  };
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::uniform_int_distribution<int> length(1, kMaxStreamLength);
  int errors = 0;
  int invalid = 0;
  for (int trial = 0; trial < kRandomStreams; ++trial) {
    SelfiesStream s;
    for (int k = length(rng); k > 0; --k)
      s.tokens.push_back(make_selfies_token(kAlphabet[pick(rng)]));
    try {
      if (!is_valid(decode_selfies(s)))
        ++invalid;
    } catch (const Error &) {
      ++errors;
    }
  }
  int failed_round_trips = 0;
  for (int trial = 0; trial < kRoundTrips; ++trial) {
    const MolGraph g = testing::random_molecule(rng);
    try {
      if (!testing::isomorphic(decode_selfies(encode_selfies(g)), kekulize(g)))
        ++failed_round_trips;
    } catch (const Error &) {
      ++failed_round_trips;
    }
  }
  const double secs = seconds_since(start);
  return { errors == 0 && invalid == 0 && failed_round_trips == 0 && secs < kSelfiesBudgetS,
           std::to_string(kRandomStreams) + " streams: " + std::to_string(errors) + " errors, " +
               std::to_string(invalid) + " invalid; " + std::to_string(kRoundTrips) + " round trips: " +
               std::to_string(failed_round_trips) + " failed; " + fmt("%.2f", secs) + " s" };
}

// 7. Canonicalization invariance and round trip.
Outcome canonical_invariance() {
  std::mt19937_64 rng(1007);
  std::vector<MolGraph> molecules;
  for (const std::string &s: testing::curated_smiles()) {
    if (static_cast<int>(molecules.size()) >= kCanonicalMolecules / 2)
      break;
    molecules.push_back(parse_smiles(s));
  }
  while (static_cast<int>(molecules.size()) < kCanonicalMolecules)
    molecules.push_back(testing::random_molecule(rng));
  int non_unique = 0;
  int bad_round_trip = 0;
  for (const MolGraph &g: molecules) {
    std::set<std::string> seen { canonical_smiles(g) };
    for (int k = 0; k < kPermutationsPerMolecule; ++k)
      seen.insert(canonical_smiles(g.permuted(testing::random_permutation(rng, g.atom_count()))));
    if (seen.size() != 1)
      ++non_unique;
    if (!testing::isomorphic(parse_smiles(*seen.begin()), g))
      ++bad_round_trip;
  }
  return { non_unique == 0 && bad_round_trip == 0,
           std::to_string(molecules.size()) + " molecules x " + std::to_string(kPermutationsPerMolecule) +
               " permutations: " + std::to_string(non_unique) + " with several strings, " +
               std::to_string(bad_round_trip) + " round-trip failures" };
}

double adjacent_mean_abs_diff(const MappingMatrix &m) {
  double sum = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j + 1 < m.cols()) {
        sum += std::fabs(m.at(i, j) - m.at(i, j + 1));
        n += 1.0;
      }
      if (i + 1 < m.rows()) {
        sum += std::fabs(m.at(i, j) - m.at(i + 1, j));
        n += 1.0;
      }
    }
  }
  return sum / n;
}

// 8. Sorting brings adjacent cells closer.
Outcome sorting_tendency() {
  std::mt19937_64 rng(1008);
  std::normal_distribution<double> entry(10.0, 1.0);
  int closer = 0;
  double mean_change = 0.0;
  for (int trial = 0; trial < kSortTrials; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(kSortSize * kSortSize));
    for (double &x: v)
      x = entry(rng);
    const MappingMatrix m(names("r", kSortSize), names("c", kSortSize), v);
    const double before = adjacent_mean_abs_diff(m);
    const double after = adjacent_mean_abs_diff(sort_matrix(m));
    if (after <= before)
      ++closer;
    mean_change += (after - before) / kSortTrials;
  }
  const double share = static_cast<double>(closer) / kSortTrials;
  return { share >= kSortPassShare, "sorted no rougher in " + std::to_string(closer) + "/" +
                                        std::to_string(kSortTrials) + " trials (" + fmt("%.1f", 100 * share) +
                                        "%, need 95%), mean change " + fmt("%+.4f", mean_change) };
}

// 9. Consolidation of flagged pairs through the full filter. The background
// is a smooth row/column gradient so the hot cells stay apart after sorting.
Outcome consolidation() {
  constexpr int kSide = 12;
  constexpr double kGradientStep = 5.0;
  constexpr double kHotExtra = 40.0;
  std::mt19937_64 rng(1009);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<std::string> rows = names("in", kSide);
  std::vector<std::string> cols = names("out", kSide);
  rows[6] = "acid";
  rows[3] = "oxy";
  cols[2] = "box";
  cols[8] = "lic";
  cols[5] = "oxy";
  std::vector<double> v;
  for (int i = 0; i < kSide; ++i)
    for (int j = 0; j < kSide; ++j)
      v.push_back(20.0 + kGradientStep * (i + j) + noise(rng));
  auto heat = [&](int i, int j) { v[static_cast<std::size_t>(i * kSide + j)] += kHotExtra; };
  heat(6, 2);
  heat(6, 8);
  heat(3, 5);
  const MappingMatrix m(rows, cols, v);
  for (double t: parse_grid("0:10:0.25")) {
    const FilterStats s = filter_cells(m, t);
    if (s.flag_count != 3)
      continue;
    const std::vector<MappingPair> pairs = select_pairs(m, s);
    const std::vector<MappingGroup> groups = group_pairs(pairs);
    const bool oxy_dropped = std::none_of(pairs.begin(), pairs.end(), [](const MappingPair &p) {
      return p.input_token == p.output_token;
    });
    const bool grouped = groups.size() == 1 && groups[0].key == "acid" &&
                         groups[0].members == std::vector<std::string> { "box", "lic" };
    return { oxy_dropped && grouped, "at T=" + fmt("%.2f", t) + ": " + std::to_string(groups.size()) +
                                         " group(s), first " +
                                         (groups.empty() ? std::string("none") : groups[0].key) +
                                         ", identical-name pair " + (oxy_dropped ? "dropped" : "kept") };
  }
  return { false, "no threshold flags exactly the three planted cells" };
}

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run(const std::string &command) {
  RunResult r;
  FILE *pipe = popen(command.c_str(), "r");
  if (pipe == nullptr)
    return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
    r.output.append(buf, n);
  const int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string quoted(const std::string &s) { return "'" + s + "'"; }

// 10. CLI determinism and line-numbered schema errors.
Outcome harness_determinism(const std::string &cli) {
  if (cli.empty())
    return { false, "CLI path not given" };
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("molbench_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::mt19937_64 rng(1010);
  const auto &pool = testing::curated_smiles();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<std::string> lines;
  for (int i = 0; i < kFixtureRecords; ++i) {
    const std::string ref = pool[pick(rng)];
    const std::string pred = i % 4 == 0 ? pool[pick(rng)] : i % 7 == 0 ? "C1CC" : ref;
    std::ostringstream line;
    line << R"({"id":"rec)" << i << R"(","input_modality":"caption","output_modality":"smiles",)"
         << R"("prediction":")" << pred << R"(","references":[")" << ref << R"("]})";
    std::string text = line.str();
    // Backslashes in SMILES bond directions need JSON escaping.
    for (std::size_t p = 0; (p = text.find('\\', p)) != std::string::npos; p += 2)
      text.insert(p, "\\");
    lines.push_back(text);
  }
  auto write = [&](const fs::path &path, const std::vector<std::string> &content) {
    std::ofstream out(path, std::ios::binary);
    for (const std::string &l: content)
      out << l << '\n';
  };
  const fs::path fixture = dir / "records.jsonl";
  write(fixture, lines);
  const std::string base = quoted(cli) + " eval gen --records " + quoted(fixture.string()) + " --out json";
  const RunResult first = run(base + " 2>/dev/null");
  const RunResult second = run(base + " --threads 3 2>/dev/null");
  const bool identical = first.status == 0 && second.status == 0 && !first.output.empty() &&
                         first.output == second.output;

  // Corrupt one line at a time, cycling through corruption styles.
  const std::vector<std::function<std::string(const std::string &)>> corruptions {
    [](const std::string &l) { return l.substr(0, l.size() / 2); },
    [](const std::string &) { return std::string(R"({"id":"x","prediction":"C"})"); },
    [](const std::string &) { return std::string("[1,2,3]"); },
    [](const std::string &l) {
      std::string out = l;
      out.replace(out.find("\"references\""), 12, "\"refs\"");
      return out;
    },
  };
  std::vector<int> targets { 1, 2, kFixtureRecords / 2, kFixtureRecords };
  for (int k = 0; k < 12; ++k)
    targets.push_back(std::uniform_int_distribution<int>(1, kFixtureRecords)(rng));
  int named = 0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<std::string> broken = lines;
    const int line_no = targets[t];
    broken[static_cast<std::size_t>(line_no - 1)] = corruptions[t % corruptions.size()](broken[static_cast<std::size_t>(line_no - 1)]);
    const fs::path bad = dir / "broken.jsonl";
    write(bad, broken);
    const RunResult r = run(quoted(cli) + " eval gen --records " + quoted(bad.string()) + " 2>&1 >/dev/null");
    if (r.status == 2 && r.output.find("SchemaError") != std::string::npos &&
        r.output.find("line " + std::to_string(line_no) + ":") != std::string::npos)
      ++named;
  }
  fs::remove_all(dir);
  return { identical && named == static_cast<int>(targets.size()),
           std::string("reports ") + (identical ? "byte-identical" : "DIFFER") + " (" +
               std::to_string(first.output.size()) + " bytes); " + std::to_string(named) + "/" +
               std::to_string(targets.size()) + " corrupted lines named in SchemaError" };
}

}  // namespace

int main(int argc, char **argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria {
    { "z-confidence anchors", z_anchors },
    { "transition matrix rules", transition_rules },
    { "metric oracle equivalence", metric_oracles },
    { "filter scale invariance", scale_invariance },
    { "planted anomaly recovery", planted_recovery },
    { "selfies robustness", selfies_robustness },
    { "canonicalization invariance", canonical_invariance },
    { "sorting tendency", sorting_tendency },
    { "consolidation semantics", consolidation },
    { "harness determinism", [&] { return harness_determinism(cli); } },
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception &e) {
      o = { false, std::string("threw: ") + e.what() };
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first << " - "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria pass" << std::endl;
  return failures == 0 ? 0 : 1;
}
