#include "core/usage.hpp"

#include <algorithm>

#include "core/common.hpp"
#include "core/parallel.hpp"
#include "core/strings.hpp"
#include "core/table.hpp"

namespace ng {

const char* activity_name(Activity a) {
  switch (a) {
    case Activity::enter: return "ENTER";
    case Activity::click: return "CLICK";
    case Activity::favorite: return "FAVORITE";
  }
  return "?";
}

Activity parse_activity(std::string_view token) {
  if (token == "ENTER" || token == "enter") return Activity::enter;
  if (token == "CLICK" || token == "click") return Activity::click;
  if (token == "FAVORITE" || token == "favorite") return Activity::favorite;
  fail(Errc::parse, "unknown activity class: '" + std::string(token) + "'");
}

bool InteractionMatrix::has(std::int32_t u, std::int32_t i) const {
  auto row = user_items(u);
  return std::binary_search(row.begin(), row.end(), i);
}

InteractionMatrix InteractionMatrix::build(
    std::int32_t users, std::int32_t names,
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  InteractionMatrix m;
  m.n_ = users;
  m.m_ = names;
  m.user_off_.assign(static_cast<std::size_t>(users) + 1, 0);
  m.item_off_.assign(static_cast<std::size_t>(names) + 1, 0);
  for (const auto& [u, i] : pairs) {
    ++m.user_off_[static_cast<std::size_t>(u) + 1];
    ++m.item_off_[static_cast<std::size_t>(i) + 1];
  }
  for (std::size_t k = 1; k < m.user_off_.size(); ++k) m.user_off_[k] += m.user_off_[k - 1];
  for (std::size_t k = 1; k < m.item_off_.size(); ++k) m.item_off_[k] += m.item_off_[k - 1];
  m.items_.resize(pairs.size());
  m.users_.resize(pairs.size());
  std::vector<std::int64_t> ucur(m.user_off_.begin(), m.user_off_.end() - 1);
  std::vector<std::int64_t> icur(m.item_off_.begin(), m.item_off_.end() - 1);
  for (const auto& [u, i] : pairs) {
    m.items_[static_cast<std::size_t>(ucur[static_cast<std::size_t>(u)]++)] = i;
    m.users_[static_cast<std::size_t>(icur[static_cast<std::size_t>(i)]++)] = u;
  }
  return m;
}

ActivityLog ActivityLog::load_file(const std::string& path,
                                   std::shared_ptr<const Lexicon> lexicon) {
  return parse(read_file(path), path, std::move(lexicon));
}

ActivityLog ActivityLog::parse(std::string_view text, const std::string& origin,
                               std::shared_ptr<const Lexicon> lexicon) {
  ActivityLog log;
  const bool external_lexicon = lexicon != nullptr;
  auto names = std::make_shared<Lexicon>();
  // user ids are opaque strings; matched exactly, not case-folded
  std::unordered_map<std::string, std::int32_t> users;

  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = chomp_cr(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, '\t');
    if (parts.size() != 4)
      fail(Errc::parse, origin + ":" + format_int(static_cast<std::int64_t>(line_no)) +
                            ": expected 4 tab-separated fields");
    auto ts = parse_iso8601_ms(parts[0]);
    if (!ts)
      fail(Errc::parse, origin + ":" + format_int(static_cast<std::int64_t>(line_no)) +
                            ": bad ISO-8601 timestamp '" + std::string(parts[0]) + "'");
    const Activity act = parse_activity(parts[2]);
    std::int32_t name_id;
    if (external_lexicon) {
      name_id = lexicon->id_of(parts[3]);
      if (name_id < 0) {
        ++log.skipped_names_;
        continue;
      }
    } else {
      name_id = names->add(parts[3]);
    }
    auto [it, inserted] = users.emplace(
        std::string(parts[1]), static_cast<std::int32_t>(log.user_names_.size()));
    if (inserted) log.user_names_.emplace_back(parts[1]);
    log.records_.push_back({*ts, it->second, act, name_id});
  }
  log.names_ = external_lexicon ? std::move(lexicon)
                                : std::shared_ptr<const Lexicon>(std::move(names));
  log.finalize();
  return log;
}

void ActivityLog::finalize() {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const ActivityRecord& a, const ActivityRecord& b) {
                     if (a.user != b.user) return a.user < b.user;
                     return a.timestamp_ms < b.timestamp_ms;
                   });
  const std::int32_t n = user_count();
  user_record_off_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& r : records_) ++user_record_off_[static_cast<std::size_t>(r.user) + 1];
  for (std::size_t k = 1; k < user_record_off_.size(); ++k)
    user_record_off_[k] += user_record_off_[k - 1];

  for (int a = 0; a < 3; ++a) {
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    for (const auto& r : records_)
      if (static_cast<int>(r.activity) == a) pairs.emplace_back(r.user, r.name);
    matrices_[static_cast<std::size_t>(a)] =
        InteractionMatrix::build(n, names_->size(), std::move(pairs));
  }
}

std::int32_t ActivityLog::user_id(std::string_view name) const {
  for (std::size_t i = 0; i < user_names_.size(); ++i)
    if (user_names_[i] == name) return static_cast<std::int32_t>(i);
  return -1;
}

std::span<const ActivityRecord> ActivityLog::user_records(std::int32_t u) const {
  return {records_.data() + user_record_off_[static_cast<std::size_t>(u)],
          records_.data() + user_record_off_[static_cast<std::size_t>(u) + 1]};
}

std::vector<std::int32_t> ActivityLog::history(std::int32_t u, Activity a) const {
  std::vector<std::int32_t> h;
  std::vector<bool> seen(static_cast<std::size_t>(names_->size()), false);
  for (const auto& r : user_records(u)) {
    if (r.activity != a) continue;
    if (seen[static_cast<std::size_t>(r.name)]) continue;
    seen[static_cast<std::size_t>(r.name)] = true;
    h.push_back(r.name);
  }
  return h;
}

Graph build_projection(const ActivityLog& log, Activity a, int threads) {
  const InteractionMatrix& m = log.matrix(a);
  const std::int64_t n = m.user_count();
  const std::int64_t blocks = block_count(n, 64);
  std::vector<EdgeAccumulator> partial(static_cast<std::size_t>(blocks));
  parallel_blocks(n, 64, threads,
                  [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
                    EdgeAccumulator& acc = partial[static_cast<std::size_t>(b)];
                    for (std::int64_t u = lo; u < hi; ++u) {
                      auto items = m.user_items(static_cast<std::int32_t>(u));
                      for (std::size_t i = 0; i < items.size(); ++i)
                        for (std::size_t j = i + 1; j < items.size(); ++j)
                          acc.add(items[i], items[j], 1.0);
                    }
                  });
  EdgeAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return Graph::build(log.names_ptr(), total);
}

}  // namespace ng
