#include "core/textmine.hpp"

#include <algorithm>

#include "core/common.hpp"
#include "core/parallel.hpp"
#include "core/strings.hpp"
#include "core/table.hpp"

namespace ng {

std::vector<std::string_view> segment_document(std::string_view document,
                                               ContextMode mode) {
  std::vector<std::string_view> out;
  if (mode == ContextMode::whole_message) {
    out.push_back(document);
    return out;
  }
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < document.size()) {
    const char c = document[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i + 1;
      while (j < document.size() &&
             (document[j] == '.' || document[j] == '!' || document[j] == '?'))
        ++j;
      // boundary only when the punctuation run is followed by whitespace
      std::size_t k = j;
      auto cp = utf8_decode(document, k);
      if (j >= document.size() || (cp && is_space_cp(*cp))) {
        out.push_back(document.substr(start, j - start));
        start = j;
        i = j;
        continue;
      }
      i = j;
      continue;
    }
    ++i;
  }
  if (start < document.size()) out.push_back(document.substr(start));
  return out;
}

namespace {

// Tokens are maximal runs of word codepoints; '-' and apostrophes join two
// word codepoints so hyphenated and elided names stay whole.
template <typename Emit>
void for_each_token(std::string_view text, Emit&& emit) {
  std::size_t i = 0;
  std::size_t token_start = std::string_view::npos;
  std::size_t prev_end = 0;
  bool prev_was_word = false;
  while (i < text.size()) {
    const std::size_t cp_start = i;
    auto cp = utf8_decode(text, i);
    if (!cp) {  // skip malformed byte
      if (token_start != std::string_view::npos) {
        emit(text.substr(token_start, prev_end - token_start));
        token_start = std::string_view::npos;
      }
      prev_was_word = false;
      ++i;
      continue;
    }
    bool word = is_word_cp(*cp);
    if (!word && (*cp == U'-' || *cp == U'\'' || *cp == 0x2019) &&
        prev_was_word) {
      // joiner only if the next codepoint is a word character
      std::size_t peek = i;
      auto next_cp = utf8_decode(text, peek);
      if (next_cp && is_word_cp(*next_cp)) word = true;
    }
    if (word) {
      if (token_start == std::string_view::npos) token_start = cp_start;
      prev_end = i;
      prev_was_word = is_word_cp(*cp);
    } else {
      if (token_start != std::string_view::npos) {
        emit(text.substr(token_start, prev_end - token_start));
        token_start = std::string_view::npos;
      }
      prev_was_word = false;
    }
  }
  if (token_start != std::string_view::npos)
    emit(text.substr(token_start, prev_end - token_start));
}

}  // namespace

ContextUnit match_names(std::string_view text, const Lexicon& lexicon) {
  ContextUnit ids;
  for_each_token(text, [&](std::string_view token) {
    const std::int32_t id = lexicon.id_of(token);
    if (id >= 0) ids.push_back(id);
  });
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<ContextUnit> segment_contexts(std::string_view document,
                                          const Lexicon& lexicon,
                                          const MineOptions& options) {
  std::vector<ContextUnit> contexts;
  for (std::string_view sentence : segment_document(document, options.mode)) {
    ContextUnit ids = match_names(sentence, lexicon);
    if (ids.empty()) continue;
    if (options.max_names_per_context > 0 &&
        static_cast<std::int32_t>(ids.size()) > options.max_names_per_context)
      continue;
    contexts.push_back(std::move(ids));
  }
  return contexts;
}

Graph count_cooccurrences(const std::vector<std::string_view>& documents,
                          std::shared_ptr<const Lexicon> lexicon,
                          const MineOptions& options) {
  const std::int64_t n = static_cast<std::int64_t>(documents.size());
  const std::int64_t blocks = block_count(n, 256);
  std::vector<EdgeAccumulator> partial(static_cast<std::size_t>(blocks));
  parallel_blocks(n, 256, options.threads,
                  [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
                    EdgeAccumulator& acc = partial[static_cast<std::size_t>(b)];
                    for (std::int64_t d = lo; d < hi; ++d) {
                      for (const ContextUnit& ctx : segment_contexts(
                               documents[static_cast<std::size_t>(d)], *lexicon,
                               options)) {
                        for (std::size_t i = 0; i < ctx.size(); ++i)
                          for (std::size_t j = i + 1; j < ctx.size(); ++j)
                            acc.add(ctx[i], ctx[j], 1.0);
                      }
                    }
                  });
  EdgeAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return Graph::build(std::move(lexicon), total);
}

std::vector<std::string_view> split_documents(std::string_view corpus,
                                              bool blank_line_delimited) {
  std::vector<std::string_view> docs;
  if (!blank_line_delimited) {
    std::size_t pos = 0;
    while (pos < corpus.size()) {
      std::size_t eol = corpus.find('\n', pos);
      if (eol == std::string_view::npos) eol = corpus.size();
      std::string_view line = chomp_cr(corpus.substr(pos, eol - pos));
      if (!line.empty()) docs.push_back(line);
      pos = eol + 1;
    }
    return docs;
  }
  std::size_t pos = 0;
  std::size_t doc_start = 0;
  bool in_doc = false;
  while (pos <= corpus.size()) {
    std::size_t eol = corpus.find('\n', pos);
    if (eol == std::string_view::npos) eol = corpus.size();
    std::string_view line = trim(corpus.substr(pos, eol - pos));
    if (line.empty()) {
      if (in_doc) {
        docs.push_back(corpus.substr(doc_start, pos - doc_start));
        in_doc = false;
      }
    } else if (!in_doc) {
      doc_start = pos;
      in_doc = true;
    }
    if (eol == corpus.size()) break;
    pos = eol + 1;
  }
  if (in_doc) docs.push_back(corpus.substr(doc_start));
  return docs;
}

Graph mine_cooccurrence_file(const std::string& corpus_path,
                             std::shared_ptr<const Lexicon> lexicon,
                             bool blank_line_delimited,
                             const MineOptions& options) {
  const std::string corpus = read_file(corpus_path);
  if (!utf8_valid(corpus))
    fail(Errc::parse, "corpus is not valid UTF-8: " + corpus_path);
  auto docs = split_documents(corpus, blank_line_delimited);
  return count_cooccurrences(docs, std::move(lexicon), options);
}

}  // namespace ng
