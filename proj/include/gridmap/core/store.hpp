#pragma once

#include "gridmap/core/model.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace gridmap {

/// Writes `content` to `target` via a sibling temp file and rename(2), so a
/// reader sees either the old or the new file. The two phases are separate
/// to let tests stop between them.
class AtomicFileWriter {
public:
    explicit AtomicFileWriter(std::filesystem::path target);
    ~AtomicFileWriter();

    AtomicFileWriter(const AtomicFileWriter&) = delete;
    AtomicFileWriter& operator=(const AtomicFileWriter&) = delete;

    /// Writes and fsyncs the temp file.
    void stage(std::string_view content);

    /// Renames the temp file over the target.
    void commit();

    /// Forget the temp file without removing it, as a crash would.
    void abandon() noexcept { temp_.clear(); }

    const std::filesystem::path& temp_path() const noexcept { return temp_; }

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
};

void write_file_atomic(const std::filesystem::path& target, std::string_view content);

void save_state(const PortalState& state, const std::filesystem::path& path);

/// Throws StoreError for an absent or corrupt file, VersionError for a
/// version this build does not know.
PortalState load_state(const std::filesystem::path& path);

/// A state directory:
///
///   DIR/portal.json        configuration, written by the server and CLI
///   DIR/state/<id>.json    latest ResourceInfo, written by the monitor
///
/// Reads never lock. Writes from one Store are serialized; across processes
/// each file class has a single writer.
class Store {
public:
    explicit Store(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path portal_path() const { return dir_ / "portal.json"; }
    std::filesystem::path info_dir() const { return dir_ / "state"; }
    std::filesystem::path info_path(std::string_view id) const;

    /// Creates the directory layout and a default portal.json if missing.
    void initialize();

    PortalState load() const;
    void save(const PortalState& state);

    /// Load, apply `change`, validate and save under the write lock.
    PortalState modify(const std::function<void(PortalState&)>& change);

    void record_info(const ResourceInfo& info);

    /// Throws NotFoundError if the resource was never polled.
    ResourceInfo get_info(std::string_view id) const;
    std::optional<ResourceInfo> find_info(std::string_view id) const;

    /// Latest info for each resource in `state` that has one.
    std::map<std::string, ResourceInfo> infos_for(const PortalState& state) const;

    /// Returns true if a file was removed.
    bool delete_info(std::string_view id);

private:
    std::filesystem::path dir_;
    mutable std::recursive_mutex write_mutex_;
};

}  // namespace gridmap
