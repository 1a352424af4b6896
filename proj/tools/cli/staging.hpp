#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace apir::cli {

/// Collects output files under temporary names and renames them into place
/// only on commit(). Without a commit the temporaries are removed, so a
/// failing run leaves no partial outputs behind.
class StagedOutputs {
public:
  explicit StagedOutputs(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  StagedOutputs(const StagedOutputs&) = delete;
  StagedOutputs& operator=(const StagedOutputs&) = delete;

  ~StagedOutputs() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) std::filesystem::remove(tmp, ec);
  }

  /// Temporary path to write; `name` is the final file name inside the dir.
  /// The temporary keeps the final extension so format inference still works.
  std::filesystem::path add(const std::string& name) {
    const std::filesystem::path final_path = dir_ / name;
    std::filesystem::path tmp = dir_ / (".partial-" + name);
    files_.emplace_back(tmp, final_path);
    return tmp;
  }

  void commit() {
    for (const auto& [tmp, final_path] : files_) std::filesystem::rename(tmp, final_path);
    committed_ = true;
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }

private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> files_;
  bool committed_ = false;
};

}  // namespace apir::cli
