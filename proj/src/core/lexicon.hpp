#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ng {

// Canonical universe of names with dense contiguous ids. Duplicates are
// collapsed on a case-folded key; the first occurrence's casing is kept as
// the canonical form.
class Lexicon {
 public:
  Lexicon() = default;

  // One name per line, UTF-8. Blank lines are skipped. Throws Error(parse)
  // with the line number on invalid encoding.
  static std::shared_ptr<const Lexicon> load_file(const std::string& path);
  static std::shared_ptr<const Lexicon> from_text(std::string_view text);

  // Builds a lexicon from already-distinct canonical strings (ids follow the
  // given order). Used for graphs loaded from edge lists.
  static std::shared_ptr<const Lexicon> from_names(
      std::vector<std::string> names);

  // Returns the id, inserting if the (folded) name is new.
  std::int32_t add(std::string_view name);

  std::int32_t size() const { return static_cast<std::int32_t>(entries_.size()); }
  const std::string& name(std::int32_t id) const { return entries_[static_cast<std::size_t>(id)]; }
  const std::vector<std::string>& entries() const { return entries_; }

  // Exact match against the canonical form; -1 if absent.
  std::int32_t id_of(std::string_view name) const;
  // Case-insensitive match via the folded key; -1 if absent.
  std::int32_t id_of_folded(std::string_view name) const;

 private:
  struct SvHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>()(s);
    }
  };
  struct SvEq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const {
      return a == b;
    }
  };
  using Map = std::unordered_map<std::string, std::int32_t, SvHash, SvEq>;

  std::vector<std::string> entries_;
  Map exact_;
  Map folded_;
};

}  // namespace ng
