// mixfuse/corpus_io.hpp
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
// Utterance tables: "UTTID<TAB>text" files (the canonical interchange
// format), plus a reader for tab-separated ELAN exports with a
// configurable column layout. Text is canonicalized on ingestion.

#ifndef MIXFUSE_CORPUS_IO_HPP_
#define MIXFUSE_CORPUS_IO_HPP_

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixfuse/textutil.hpp"

namespace mixfuse {

enum class IoErrorKind {
  FileNotFound,
  NotUtf8,
  MalformedLine,
  DuplicateUtteranceId,
  WriteFailed,
};

struct IoError : std::runtime_error {
  IoError(IoErrorKind k, const std::string& what, int line_no = 0)
      : std::runtime_error(what), kind(k), line(line_no) {}
  IoErrorKind kind;
  int line;
};

struct UtteranceTable {
  std::map<std::string, std::string> entries;  // id -> normalized text
  std::string source_path;

  bool contains(const std::string& id) const { return entries.count(id) != 0; }
  std::size_t size() const { return entries.size(); }
};

enum class TableFormat { TabSeparated, ElanExportTsv };

// 1-based column positions in an ELAN tab-delimited export.
struct ElanColumns {
  int id_column = 1;
  int text_column = 4;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

inline void insert_entry(UtteranceTable& table, const std::string& raw_id,
                         const std::string& raw_text, const std::string& path,
                         int line_no) {
  std::string id = normalize_text(raw_id);
  if (id.empty() || id.find(' ') != std::string::npos) {
    throw IoError(IoErrorKind::MalformedLine,
                  path + ":" + std::to_string(line_no) +
                      ": utterance id must be one non-empty token",
                  line_no);
  }
  if (table.entries.count(id)) {
    throw IoError(IoErrorKind::DuplicateUtteranceId,
                  path + ":" + std::to_string(line_no) +
                      ": duplicate utterance id '" + id + "'",
                  line_no);
  }
  table.entries[id] = normalize_text(raw_text);
}

}  // namespace detail

inline UtteranceTable load_table(const std::string& path,
                                 TableFormat format = TableFormat::TabSeparated,
                                 ElanColumns columns = ElanColumns{}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(IoErrorKind::FileNotFound, "cannot open: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  if (!content.empty() && content.substr(0, 3) == "\xEF\xBB\xBF") {
    content.erase(0, 3);
  }
  if (!is_valid_utf8(content)) {
    throw IoError(IoErrorKind::NotUtf8, path + ": not valid UTF-8");
  }

  UtteranceTable table;
  table.source_path = path;
  std::istringstream lines(content);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (normalize_text(line).empty()) continue;  // blank lines skipped
    std::vector<std::string> cols = detail::split_tabs(line);
    if (format == TableFormat::TabSeparated) {
      if (cols.size() < 2) {
        throw IoError(IoErrorKind::MalformedLine,
                      path + ":" + std::to_string(line_no) +
                          ": expected 'UTTID<TAB>text'",
                      line_no);
      }
      // Text may itself contain tabs in sloppy exports; rejoin.
      std::string text = cols[1];
      for (std::size_t k = 2; k < cols.size(); ++k) text += " " + cols[k];
      detail::insert_entry(table, cols[0], text, path, line_no);
    } else {
      int need = std::max(columns.id_column, columns.text_column);
      if (columns.id_column < 1 || columns.text_column < 1 ||
          static_cast<int>(cols.size()) < need) {
        throw IoError(IoErrorKind::MalformedLine,
                      path + ":" + std::to_string(line_no) + ": expected >= " +
                          std::to_string(need) + " tab-separated columns",
                      line_no);
      }
      detail::insert_entry(table, cols[columns.id_column - 1],
                           cols[columns.text_column - 1], path, line_no);
    }
  }
  return table;
}

// Canonical form: sorted by utterance id, UTF-8, trailing newline.
inline void save_table(const UtteranceTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(IoErrorKind::WriteFailed, "cannot write: " + path);
  }
  for (const auto& [id, text] : table.entries) {
    out << id << '\t' << text << '\n';
  }
  if (!out) {
    throw IoError(IoErrorKind::WriteFailed, "write failed: " + path);
  }
}

// Ids present in every table, plus how many each table dropped. An empty
// intersection is reported, not thrown; callers decide how loud to be.
struct JoinResult {
  std::vector<std::string> common_ids;  // sorted
  std::vector<std::size_t> dropped_per_table;
  bool empty_intersection = false;
};

inline JoinResult join_systems(const std::vector<const UtteranceTable*>& tables) {
  if (tables.empty()) {
    throw std::invalid_argument("join_systems: no tables");
  }
  JoinResult result;
  for (const auto& [id, text] : tables[0]->entries) {
    bool everywhere = true;
    for (std::size_t t = 1; t < tables.size(); ++t) {
      if (!tables[t]->contains(id)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) result.common_ids.push_back(id);
  }
  result.dropped_per_table.resize(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    result.dropped_per_table[t] = tables[t]->size() - result.common_ids.size();
  }
  result.empty_intersection = result.common_ids.empty();
  return result;
}

}  // namespace mixfuse

#endif  // MIXFUSE_CORPUS_IO_HPP_
