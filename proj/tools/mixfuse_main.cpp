// tools/mixfuse_main.cpp
//
// Copyright 2026  The mixfuse authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.
//
// The mixfuse command line: validate transcriptions against the
// orthography, fuse novice and ASR hypotheses, combine systems with
// ROVER voting, score against references, classify character errors,
// and inject synthetic errors for testing.
//
// Exit codes: 0 success, 1 validation findings, 2 usage error, 3 I/O.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mixfuse/mixfuse.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

mixfuse::Grammar load_grammar_or_default(const std::string& path) {
  if (path.empty()) return mixfuse::Grammar::yoloxochitl_mixtec();
  return mixfuse::Grammar::load(path);
}

// Input format options shared by every subcommand; outputs are always
// canonical "UTTID<TAB>text" tables.
struct InputFormat {
  std::string format = "tab";  // tab | elan
  mixfuse::ElanColumns columns;
};

InputFormat g_input;

mixfuse::UtteranceTable load_table_checked(const std::string& path) {
  if (g_input.format == "elan") {
    return mixfuse::load_table(path, mixfuse::TableFormat::ElanExportTsv,
                               g_input.columns);
  }
  return mixfuse::load_table(path);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw mixfuse::IoError(mixfuse::IoErrorKind::WriteFailed,
                           "cannot write: " + path);
  }
  out << content;
  if (!out) {
    throw mixfuse::IoError(mixfuse::IoErrorKind::WriteFailed,
                           "write failed: " + path);
  }
}

// Runs fn(i) for i in [0, n) on `jobs` threads. Results land in
// caller-owned slots, so output order never depends on scheduling.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::size_t workers = std::min<std::size_t>(jobs, n);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

// ---- validate -----------------------------------------------------------

int cmd_validate(const std::string& table_path, const std::string& grammar,
                 const std::string& mode) {
  mixfuse::Grammar g = load_grammar_or_default(grammar);
  mixfuse::UtteranceTable table = load_table_checked(table_path);
  if (table.size() == 0) {
    std::cerr << "validate: table is empty: " << table_path << "\n";
    return kExitUsage;
  }
  const bool strict_report = mode == "strict";

  std::map<std::string, std::int64_t> histogram;
  std::int64_t findings = 0;
  for (const auto& [id, text] : table.entries) {
    std::map<std::string, int> per_utt;
    for (const std::string& word : mixfuse::split_words(text)) {
      try {
        mixfuse::Token t =
            mixfuse::parse_token(word, mixfuse::ParseMode::Lenient, g);
        if (t.kind != mixfuse::TokenKind::Mixtec) continue;
        if (strict_report) {
          for (const auto& f : mixfuse::detail::strict_findings(*t.word)) {
            ++per_utt[mixfuse::parse_error_name(f.code)];
          }
        } else {
          for (mixfuse::Anomaly a : t.word->all_anomalies()) {
            ++per_utt[mixfuse::anomaly_name(a)];
          }
          if (!t.word->separator_order_ok) ++per_utt["SeparatorOrder"];
        }
      } catch (const mixfuse::ParseError& e) {
        ++per_utt[mixfuse::parse_error_name(e.code)];
      }
    }
    if (!per_utt.empty()) {
      std::cout << id;
      for (const auto& [name, n] : per_utt) {
        std::cout << '\t' << name << '=' << n;
        histogram[name] += n;
        findings += n;
      }
      std::cout << '\n';
    }
  }
  std::cout << "# utterances\t" << table.size() << '\n';
  for (const auto& [name, n] : histogram) {
    std::cout << "# total\t" << name << '\t' << n << '\n';
  }
  return findings == 0 ? kExitOk : kExitFindings;
}

// ---- fuse ---------------------------------------------------------------

int cmd_fuse(const std::string& novice_path, const std::string& asr_path,
             const std::string& mode_name, const std::string& rules_path,
             const std::string& grammar, const std::string& output,
             const std::string& trace_path, int jobs) {
  mixfuse::Grammar g = load_grammar_or_default(grammar);
  mixfuse::RuleSet rules = rules_path.empty() ? mixfuse::RuleSet::all()
                                              : mixfuse::RuleSet::load(rules_path);
  mixfuse::FusionMode mode = mode_name == "fusion1"
                                 ? mixfuse::FusionMode::Fusion1
                                 : mixfuse::FusionMode::Fusion2;

  mixfuse::UtteranceTable novice = load_table_checked(novice_path);
  mixfuse::UtteranceTable asr = load_table_checked(asr_path);
  auto join = mixfuse::join_systems({&novice, &asr});
  if (join.dropped_per_table[0] || join.dropped_per_table[1]) {
    std::cerr << "fuse: dropped " << join.dropped_per_table[0]
              << " novice / " << join.dropped_per_table[1]
              << " asr utterances without a counterpart\n";
  }
  if (join.empty_intersection) {
    std::cerr << "fuse: warning: no utterance ids in common\n";
  }

  std::vector<mixfuse::FusionResult> results(join.common_ids.size());
  parallel_for(join.common_ids.size(), jobs, [&](std::size_t i) {
    const std::string& id = join.common_ids[i];
    results[i] = mixfuse::fuse(novice.entries.at(id), asr.entries.at(id), mode,
                               rules, g, id);
  });

  mixfuse::UtteranceTable fused;
  std::string trace_tsv;
  for (std::size_t i = 0; i < join.common_ids.size(); ++i) {
    fused.entries[join.common_ids[i]] = results[i].fused;
    trace_tsv += results[i].trace.to_tsv();
  }
  mixfuse::save_table(fused, output);
  if (!trace_path.empty()) write_file(trace_path, trace_tsv);
  std::cerr << "fuse: wrote " << fused.size() << " utterances to " << output
            << "\n";
  return kExitOk;
}

// ---- rover ----------------------------------------------------------------

int cmd_rover(const std::vector<std::string>& hyps,
              const std::string& priority_csv, const std::string& output) {
  std::vector<std::pair<std::string, mixfuse::UtteranceTable>> systems;
  for (const std::string& arg : hyps) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--hyp wants NAME=PATH, got '" + arg + "'");
    }
    systems.emplace_back(arg.substr(0, eq),
                         load_table_checked(arg.substr(eq + 1)));
  }
  if (systems.empty()) throw UsageError("rover needs at least one --hyp");

  mixfuse::VoteConfig config;
  if (priority_csv.empty()) {
    for (const auto& [name, table] : systems) config.priority.push_back(name);
  } else {
    std::string cur;
    for (char c : priority_csv + ",") {
      if (c == ',') {
        if (!cur.empty()) config.priority.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  }

  std::vector<const mixfuse::UtteranceTable*> tables;
  for (const auto& [name, table] : systems) tables.push_back(&table);
  auto join = mixfuse::join_systems(tables);
  for (std::size_t t = 0; t < systems.size(); ++t) {
    if (join.dropped_per_table[t]) {
      std::cerr << "rover: " << systems[t].first << " dropped "
                << join.dropped_per_table[t] << " utterances\n";
    }
  }
  if (join.empty_intersection) {
    std::cerr << "rover: warning: no utterance ids in common\n";
  }

  mixfuse::UtteranceTable combined;
  for (const std::string& id : join.common_ids) {
    std::vector<std::pair<std::string, std::vector<std::string>>> utt_hyps;
    for (const auto& [name, table] : systems) {
      utt_hyps.emplace_back(name, mixfuse::split_words(table.entries.at(id)));
    }
    combined.entries[id] =
        mixfuse::join_words(mixfuse::rover_combine(utt_hyps, config));
  }
  mixfuse::save_table(combined, output);
  std::cerr << "rover: wrote " << combined.size() << " utterances to "
            << output << "\n";
  return kExitOk;
}

// ---- score / classify-errors ---------------------------------------------

int cmd_score(const std::string& ref_path, const std::string& hyp_path,
              const std::string& grammar, const std::string& json_path,
              const std::string& per_utt_path, bool categories_only) {
  mixfuse::Grammar g = load_grammar_or_default(grammar);
  mixfuse::UtteranceTable ref = load_table_checked(ref_path);
  mixfuse::UtteranceTable hyp = load_table_checked(hyp_path);

  mixfuse::ErrorReport report = mixfuse::score(ref, hyp, g);
  if (categories_only) {
    std::printf("%-12s %8s\n", "category", "errors");
    for (std::size_t i = 0; i < mixfuse::kCategoryCount; ++i) {
      auto c = static_cast<mixfuse::ErrorCategory>(i);
      std::printf("%-12s %8lld\n", mixfuse::category_name(c),
                  static_cast<long long>(report.categories[c]));
    }
    std::printf("%-12s %8lld\n", "Total",
                static_cast<long long>(report.categories.total()));
  } else {
    std::cout << report.to_json().dump(2) << "\n";
  }
  if (!json_path.empty()) write_file(json_path, report.to_json().dump(2) + "\n");
  if (!per_utt_path.empty()) {
    write_file(per_utt_path, mixfuse::per_utterance_tsv(ref, hyp, g));
  }
  return kExitOk;
}

// ---- inject ---------------------------------------------------------------

int cmd_inject(const std::string& ref_path, const std::string& category,
               int count, unsigned seed, const std::string& grammar,
               const std::string& output) {
  mixfuse::Grammar g = load_grammar_or_default(grammar);
  mixfuse::UtteranceTable ref = load_table_checked(ref_path);

  std::optional<mixfuse::ErrorCategory> cat;
  for (std::size_t i = 0; i < mixfuse::kCategoryCount; ++i) {
    auto c = static_cast<mixfuse::ErrorCategory>(i);
    if (category == mixfuse::category_name(c)) cat = c;
  }
  if (!cat) throw UsageError("unknown category '" + category + "'");

  std::mt19937 rng(seed);
  mixfuse::UtteranceTable out;
  std::int64_t injected = 0;
  for (const auto& [id, text] : ref.entries) {
    auto [corrupted, n] =
        mixfuse::inject_category_errors(text, *cat, count, rng, g);
    out.entries[id] = corrupted;
    injected += n;
  }
  mixfuse::save_table(out, output);
  std::cerr << "inject: " << injected << " " << category << " errors into "
            << out.size() << " utterances -> " << output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Transcription correction toolkit for tonal practical orthographies: "
      "novice/ASR fusion, ROVER voting, and WER/CER scoring over utterance "
      "tables (UTTID<TAB>text)."};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string grammar;
  app.add_option("--grammar", grammar,
                 "Grammar/alphabet file (default: built-in Yoloxochitl "
                 "Mixtec orthography)");
  app.add_option("--format", g_input.format,
                 "Input table format: tab (UTTID<TAB>text) | elan "
                 "(tab-delimited export, see --id-col/--text-col)")
      ->check(CLI::IsMember({"tab", "elan"}));
  app.add_option("--id-col", g_input.columns.id_column,
                 "1-based id column for --format elan (default 1)");
  app.add_option("--text-col", g_input.columns.text_column,
                 "1-based text column for --format elan (default 4)");

  // validate
  auto* validate = app.add_subcommand(
      "validate", "Parse every token; report anomalies per utterance");
  std::string v_table;
  std::string v_mode = "strict";
  validate->add_option("--table", v_table, "Utterance table")->required();
  validate->add_option("--mode", v_mode, "strict|lenient (report style)")
      ->check(CLI::IsMember({"strict", "lenient"}));

  // fuse
  auto* fuse = app.add_subcommand(
      "fuse", "Correct a novice table with an ASR hypothesis table");
  std::string f_novice;
  std::string f_asr;
  std::string f_mode = "fusion2";
  std::string f_rules;
  std::string f_output;
  std::string f_trace;
  int f_jobs = 1;
  fuse->add_option("--novice", f_novice, "Novice table")->required();
  fuse->add_option("--asr", f_asr, "ASR hypothesis table")->required();
  fuse->add_option("--mode", f_mode, "fusion1 (naive) | fusion2 (hierarchical)")
      ->check(CLI::IsMember({"fusion1", "fusion2"}));
  fuse->add_option("--rules", f_rules, "Rule-set file (default: all rules on)");
  fuse->add_option("--output", f_output, "Fused table path")->required();
  fuse->add_option("--trace", f_trace, "Rule-firing trace TSV path");
  fuse->add_option("--jobs", f_jobs, "Worker threads (default 1)");

  // rover
  auto* rover = app.add_subcommand(
      "rover", "Combine N hypothesis tables by word-transition-network vote");
  std::vector<std::string> r_hyps;
  std::string r_priority;
  std::string r_output;
  rover->add_option("--hyp", r_hyps, "NAME=PATH, repeatable, order matters")
      ->required();
  rover->add_option("--priority", r_priority,
                    "Tie-break order, comma-separated system names "
                    "(default: --hyp order)");
  rover->add_option("--output", r_output, "Combined table path")->required();

  // score
  auto* score = app.add_subcommand("score", "WER/CER + error categories");
  std::string s_ref;
  std::string s_hyp;
  std::string s_json;
  std::string s_per_utt;
  score->add_option("--ref", s_ref, "Reference table")->required();
  score->add_option("--hyp", s_hyp, "Hypothesis table")->required();
  score->add_option("--json", s_json, "Also write the JSON report here");
  score->add_option("--per-utt", s_per_utt, "Per-utterance TSV breakdown");

  // classify-errors
  auto* classify = app.add_subcommand(
      "classify-errors", "Character error-type distribution only");
  std::string c_ref;
  std::string c_hyp;
  std::string c_json;
  classify->add_option("--ref", c_ref, "Reference table")->required();
  classify->add_option("--hyp", c_hyp, "Hypothesis table")->required();
  classify->add_option("--json", c_json, "Also write the JSON report here");

  // inject
  auto* inject = app.add_subcommand(
      "inject", "Inject synthetic errors of one category (testing tool)");
  std::string i_ref;
  std::string i_category;
  int i_count = 1;
  unsigned i_seed = 0;
  std::string i_output;
  inject->add_option("--ref", i_ref, "Reference table")->required();
  inject
      ->add_option("--category", i_category,
                   "Enclitics|Prefixes|GlottalStop|Parenthesis|Tone|"
                   "StemNasal|Others")
      ->required();
  inject->add_option("--count", i_count, "Errors per utterance (default 1)");
  inject->add_option("--seed", i_seed, "Random seed (default 0)");
  inject->add_option("--output", i_output, "Corrupted table path")->required();

  // --grammar may come before or after the subcommand name.
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(v_table, grammar, v_mode);
    if (*fuse) {
      return cmd_fuse(f_novice, f_asr, f_mode, f_rules, grammar, f_output,
                      f_trace, f_jobs);
    }
    if (*rover) return cmd_rover(r_hyps, r_priority, r_output);
    if (*score) {
      return cmd_score(s_ref, s_hyp, grammar, s_json, s_per_utt, false);
    }
    if (*classify) return cmd_score(c_ref, c_hyp, grammar, c_json, "", true);
    if (*inject) {
      return cmd_inject(i_ref, i_category, i_count, i_seed, grammar, i_output);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mixfuse::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const mixfuse::GrammarError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mixfuse::RuleSetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
