#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "core/graph.hpp"
#include "core/lexicon.hpp"

namespace ng {

enum class ContextMode { sentence, whole_message };

struct MineOptions {
  ContextMode mode = ContextMode::sentence;
  // Contexts matching more names than this are discarded (guards against
  // list-like pages exploding quadratically). <= 0 disables the cap.
  std::int32_t max_names_per_context = 1000;
  int threads = 1;
};

// One context unit: the distinct lexicon ids found in one sentence/message.
using ContextUnit = std::vector<std::int32_t>;

// Splits a document into sentences on terminal punctuation (. ! ?) followed
// by whitespace, or yields the whole document in whole_message mode.
std::vector<std::string_view> segment_document(std::string_view document,
                                               ContextMode mode);

// Distinct lexicon ids whose canonical form equals a token of the text
// (exact, case-sensitive token match). Result is sorted.
ContextUnit match_names(std::string_view text, const Lexicon& lexicon);

// Contexts of a document after matching; empty contexts are dropped,
// over-long contexts discarded per options.
std::vector<ContextUnit> segment_contexts(std::string_view document,
                                          const Lexicon& lexicon,
                                          const MineOptions& options);

// Counts co-occurrences over a stream of documents. Each context contributes
// weight one to every unordered pair of distinct names it contains.
Graph count_cooccurrences(const std::vector<std::string_view>& documents,
                          std::shared_ptr<const Lexicon> lexicon,
                          const MineOptions& options);

// Splits raw corpus text into documents: one per line, or blocks separated by
// blank lines.
std::vector<std::string_view> split_documents(std::string_view corpus,
                                              bool blank_line_delimited);

// Convenience: mine a corpus file end to end.
Graph mine_cooccurrence_file(const std::string& corpus_path,
                             std::shared_ptr<const Lexicon> lexicon,
                             bool blank_line_delimited,
                             const MineOptions& options);

}  // namespace ng
