#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/lexicon.hpp"

namespace ng {

enum class Activity : std::uint8_t { enter = 0, click = 1, favorite = 2 };

const char* activity_name(Activity a);
// Parses ENTER|CLICK|FAVORITE (exact) or lowercase CLI spellings.
Activity parse_activity(std::string_view token);

struct ActivityRecord {
  std::int64_t timestamp_ms;
  std::int32_t user;
  Activity activity;
  std::int32_t name;
};

// Binary user-name matrix for one activity class, indexable both ways.
class InteractionMatrix {
 public:
  std::int32_t user_count() const { return n_; }
  std::int32_t name_count() const { return m_; }
  // M_u: distinct names user u is affiliated with (sorted by id).
  std::span<const std::int32_t> user_items(std::int32_t u) const {
    return {items_.data() + user_off_[static_cast<std::size_t>(u)],
            items_.data() + user_off_[static_cast<std::size_t>(u) + 1]};
  }
  // N_i: users affiliated with name i (sorted by id).
  std::span<const std::int32_t> item_users(std::int32_t i) const {
    return {users_.data() + item_off_[static_cast<std::size_t>(i)],
            users_.data() + item_off_[static_cast<std::size_t>(i) + 1]};
  }
  bool has(std::int32_t u, std::int32_t i) const;
  std::int64_t nnz() const { return static_cast<std::int64_t>(items_.size()); }

  static InteractionMatrix build(std::int32_t users, std::int32_t names,
                                 std::vector<std::pair<std::int32_t, std::int32_t>> pairs);

 private:
  std::int32_t n_ = 0, m_ = 0;
  std::vector<std::int64_t> user_off_, item_off_;
  std::vector<std::int32_t> items_, users_;
};

// Nameling-style activity log. Records are kept grouped per user in
// timestamp order (stable for equal timestamps). Name ids come from the
// supplied lexicon when given, otherwise from first appearance in the file.
class ActivityLog {
 public:
  // TSV: timestamp_iso8601 \t user_id \t activity \t name. Lines starting
  // with '#' are skipped. Records whose name is missing from an externally
  // supplied lexicon are dropped (counted in skipped_names()).
  static ActivityLog load_file(const std::string& path,
                               std::shared_ptr<const Lexicon> lexicon = nullptr);
  static ActivityLog parse(std::string_view text, const std::string& origin,
                           std::shared_ptr<const Lexicon> lexicon = nullptr);

  std::int32_t user_count() const { return static_cast<std::int32_t>(user_names_.size()); }
  const std::string& user_name(std::int32_t u) const { return user_names_[static_cast<std::size_t>(u)]; }
  std::int32_t user_id(std::string_view name) const;
  const Lexicon& names() const { return *names_; }
  std::shared_ptr<const Lexicon> names_ptr() const { return names_; }
  std::int64_t record_count() const { return static_cast<std::int64_t>(records_.size()); }
  std::int64_t skipped_names() const { return skipped_names_; }

  std::span<const ActivityRecord> user_records(std::int32_t u) const;

  // Distinct names of one activity class in chronological order (first
  // occurrence kept).
  std::vector<std::int32_t> history(std::int32_t u, Activity a) const;

  const InteractionMatrix& matrix(Activity a) const {
    return matrices_[static_cast<std::size_t>(a)];
  }

 private:
  std::shared_ptr<const Lexicon> names_;
  std::vector<std::string> user_names_;
  std::vector<ActivityRecord> records_;           // grouped by user, time-sorted
  std::vector<std::int64_t> user_record_off_;     // size user_count()+1
  InteractionMatrix matrices_[3];
  std::int64_t skipped_names_ = 0;

  void finalize();
};

// Projection graph: edge (i,j) weighted by the number of distinct users
// affiliated with both names under the activity class. All names of the
// log's lexicon are kept as vertices (isolated when unconnected).
Graph build_projection(const ActivityLog& log, Activity a, int threads = 1);

}  // namespace ng
