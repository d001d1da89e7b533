#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "confirm/ingest.hpp"

namespace confirm::io {

/// One JSON document per scenario in a single directory, named <id>.json.
/// Writes go through a temporary file and a hard link, so readers never see a
/// partial document. Writers are serialized; reads may run concurrently.
class ScenarioStore {
 public:
  /// Creates the directory if needed.
  explicit ScenarioStore(std::filesystem::path directory);

  const std::filesystem::path& directory() const { return dir_; }

  /// Throws ConflictError if the id is taken.
  void save(const ScenarioRecord& record);

  /// Throws NotFoundError for an unknown id. A document that no longer
  /// parses or validates raises an Internal error naming the file.
  ScenarioRecord load(const std::string& id) const;

  bool contains(const std::string& id) const;

  /// All records, ordered by created_at, then id.
  std::vector<ScenarioRecord> list() const;
  std::vector<std::string> list_ids() const;

 private:
  std::filesystem::path path_for(const std::string& id) const;
  ScenarioRecord read_file(const std::filesystem::path& file, const std::string& expected_id) const;

  std::filesystem::path dir_;
  std::mutex write_mutex_;
};

}  // namespace confirm::io
