#pragma once

// On-disk project journals: one JSON record per line,
//   {"seq":N,"ts":"<ISO-8601 UTC>","kind":"<EventKind>","payload":{...}}
// stored as <data_dir>/<project_id>.journal, append-only.

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kv/lifecycle.hpp"

namespace kv::journal {

/// One record, without the trailing newline.
std::string encode_event(const lifecycle::JournalEvent& event);
/// Throws JournalCorrupt citing `line_no`.
lifecycle::JournalEvent decode_event(std::string_view line, std::size_t line_no);

std::string serialize(std::span<const lifecycle::JournalEvent> events);
/// Every record must end in '\n'; a torn trailing line is reported, not dropped.
std::vector<lifecycle::JournalEvent> parse(std::string_view text);
std::vector<lifecycle::JournalEvent> parse(std::istream& in);

enum class LockMode {
  Wait,      // block until the other writer finishes
  FailFast,  // throw LockError immediately
};

/// <KV_DATA_DIR> or ./kv-data.
std::filesystem::path default_data_dir();

/// Exclusive (writer) or shared (reader) handle on one project's journal,
/// held for the lifetime of the object via flock(2).
class JournalFile {
 public:
  enum class Access { Read, Write };

  JournalFile(JournalFile&&) noexcept;
  JournalFile& operator=(JournalFile&&) noexcept;
  JournalFile(const JournalFile&) = delete;
  JournalFile& operator=(const JournalFile&) = delete;
  ~JournalFile();

  const std::filesystem::path& path() const noexcept { return path_; }

  std::vector<lifecycle::JournalEvent> load() const;
  /// Writes one record and flushes it to the file.
  void append(const lifecycle::JournalEvent& event);

 private:
  friend class JournalStore;
  JournalFile(std::filesystem::path path, int fd);

  std::filesystem::path path_;
  int fd_ = -1;
};

class JournalStore {
 public:
  explicit JournalStore(std::filesystem::path data_dir, LockMode lock_mode = LockMode::Wait);

  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }
  std::filesystem::path journal_path(std::string_view project_id) const;
  bool exists(std::string_view project_id) const;
  /// Project ids with a journal in the data directory, sorted.
  std::vector<std::string> list_projects() const;

  /// Creates a new journal; throws ValidationError if one already exists.
  JournalFile create(std::string_view project_id);
  /// Throws Error if the journal is missing, LockError on contention in FailFast mode.
  JournalFile open(std::string_view project_id, JournalFile::Access access);

 private:
  std::filesystem::path data_dir_;
  LockMode lock_mode_;
};

}  // namespace kv::journal
