#include "confirm/scenario_store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "confirm/error.hpp"

namespace confirm::io {

namespace fs = std::filesystem;

namespace {

constexpr const char* kExtension = ".json";

std::string temp_suffix() {
  static std::atomic<unsigned long> counter{0};
  return ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
}

}  // namespace

ScenarioStore::ScenarioStore(fs::path directory) : dir_(std::move(directory)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw Error(ErrorCode::Internal, "cannot open scenario store at " + dir_.string());
  }
}

fs::path ScenarioStore::path_for(const std::string& id) const { return dir_ / (id + kExtension); }

void ScenarioStore::save(const ScenarioRecord& record) {
  record.validate();
  const std::string text = serialize_scenario(record);
  const fs::path target = path_for(record.id);

  std::lock_guard lock(write_mutex_);
  if (fs::exists(target)) throw ConflictError("scenario '" + record.id + "' already exists");

  const fs::path tmp = dir_ / ("." + record.id + temp_suffix());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) {
      std::error_code ignore;
      fs::remove(tmp, ignore);
      throw Error(ErrorCode::Internal, "failed to write " + tmp.string());
    }
  }
  // A hard link publishes the finished file atomically and, unlike rename,
  // refuses to replace an entry created by another process meanwhile.
  std::error_code ec;
  fs::create_hard_link(tmp, target, ec);
  std::error_code ignore;
  fs::remove(tmp, ignore);
  if (ec == std::errc::file_exists) throw ConflictError("scenario '" + record.id + "' already exists");
  if (ec) throw Error(ErrorCode::Internal, "failed to publish " + target.string() + ": " + ec.message());
}

ScenarioRecord ScenarioStore::read_file(const fs::path& file, const std::string& expected_id) const {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw NotFoundError("scenario '" + expected_id + "' not found");
  std::ostringstream buf;
  buf << in.rdbuf();
  ScenarioRecord record;
  try {
    record = parse_scenario(buf.str());
  } catch (const Error& e) {
    std::string where = e.field_path().empty() ? "" : " at " + e.field_path();
    throw Error(ErrorCode::Internal, "corrupt scenario file " + file.string() + where + ": " + e.what());
  }
  if (record.id != expected_id) {
    throw Error(ErrorCode::Internal,
                "corrupt scenario file " + file.string() + ": id '" + record.id + "' does not match file name");
  }
  return record;
}

ScenarioRecord ScenarioStore::load(const std::string& id) const {
  if (!is_valid_scenario_id(id)) throw NotFoundError("scenario '" + id + "' not found");
  const fs::path file = path_for(id);
  if (!fs::is_regular_file(file)) throw NotFoundError("scenario '" + id + "' not found");
  return read_file(file, id);
}

bool ScenarioStore::contains(const std::string& id) const {
  return is_valid_scenario_id(id) && fs::is_regular_file(path_for(id));
}

std::vector<ScenarioRecord> ScenarioStore::list() const {
  std::vector<ScenarioRecord> out;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != kExtension) continue;
    const std::string id = entry.path().stem().string();
    if (!is_valid_scenario_id(id)) continue;
    out.push_back(read_file(entry.path(), id));
  }
  std::sort(out.begin(), out.end(), [](const ScenarioRecord& a, const ScenarioRecord& b) {
    return a.created_at != b.created_at ? a.created_at < b.created_at : a.id < b.id;
  });
  return out;
}

std::vector<std::string> ScenarioStore::list_ids() const {
  std::vector<std::string> ids;
  for (const ScenarioRecord& r : list()) ids.push_back(r.id);
  return ids;
}

}  // namespace confirm::io
