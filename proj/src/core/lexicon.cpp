#include "core/lexicon.hpp"

#include "core/common.hpp"
#include "core/strings.hpp"
#include "core/table.hpp"

namespace ng {

std::shared_ptr<const Lexicon> Lexicon::load_file(const std::string& path) {
  return from_text(read_file(path));
}

std::shared_ptr<const Lexicon> Lexicon::from_text(std::string_view text) {
  auto lex = std::make_shared<Lexicon>();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = trim(chomp_cr(text.substr(pos, eol - pos)));
    pos = eol + 1;
    if (pos > text.size() && line.empty()) break;
    if (line.empty()) continue;
    if (!utf8_valid(line))
      fail(Errc::parse,
           "invalid UTF-8 in lexicon at line " + format_int(static_cast<std::int64_t>(line_no)));
    lex->add(line);
  }
  return lex;
}

std::shared_ptr<const Lexicon> Lexicon::from_names(
    std::vector<std::string> names) {
  auto lex = std::make_shared<Lexicon>();
  for (auto& n : names) lex->add(n);
  return lex;
}

std::int32_t Lexicon::add(std::string_view name) {
  std::string folded = fold_case(name);
  auto it = folded_.find(std::string_view(folded));
  if (it != folded_.end()) return it->second;
  const std::int32_t id = static_cast<std::int32_t>(entries_.size());
  entries_.emplace_back(name);
  exact_.emplace(entries_.back(), id);
  folded_.emplace(std::move(folded), id);
  return id;
}

std::int32_t Lexicon::id_of(std::string_view name) const {
  auto it = exact_.find(name);
  return it == exact_.end() ? -1 : it->second;
}

std::int32_t Lexicon::id_of_folded(std::string_view name) const {
  const std::string folded = fold_case(name);
  auto it = folded_.find(std::string_view(folded));
  return it == folded_.end() ? -1 : it->second;
}

}  // namespace ng
