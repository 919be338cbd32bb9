#include "gridmap/core/store.hpp"

#include "gridmap/core/errors.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gridmap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string errno_text()
{
    return std::strerror(errno);
}

std::optional<std::string> read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw StoreError("cannot read " + path.string());
    return buf.str();
}

}  // namespace

// --------------------------------------------------------------------

AtomicFileWriter::AtomicFileWriter(fs::path target) : target_(std::move(target)) {}

AtomicFileWriter::~AtomicFileWriter()
{
    if (!temp_.empty()) {
        std::error_code ec;
        fs::remove(temp_, ec);
    }
}

void AtomicFileWriter::stage(std::string_view content)
{
    temp_ = target_;
    temp_ += ".tmp-" + generate_id().substr(0, 12);

    int fd = ::open(temp_.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0)
        throw StoreError("cannot create " + temp_.string() + ": " + errno_text());
    const char* data = content.data();
    std::size_t left = content.size();
    while (left > 0) {
        auto n = ::write(fd, data, left);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            auto err = errno_text();
            ::close(fd);
            throw StoreError("cannot write " + temp_.string() + ": " + err);
        }
        data += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        auto err = errno_text();
        ::close(fd);
        throw StoreError("cannot sync " + temp_.string() + ": " + err);
    }
    ::close(fd);
}

void AtomicFileWriter::commit()
{
    if (temp_.empty())
        throw StoreError("commit without staged content for " + target_.string());
    if (::rename(temp_.c_str(), target_.c_str()) != 0)
        throw StoreError("cannot rename " + temp_.string() + " to " + target_.string() + ": " + errno_text());
    temp_.clear();
}

void write_file_atomic(const fs::path& target, std::string_view content)
{
    AtomicFileWriter writer(target);
    writer.stage(content);
    writer.commit();
}

void save_state(const PortalState& state, const fs::path& path)
{
    validate(state);
    write_file_atomic(path, json(state).dump(2) + "\n");
}

PortalState load_state(const fs::path& path)
{
    auto text = read_file(path);
    if (!text)
        throw StoreError("cannot open " + path.string());
    json j;
    try {
        j = json::parse(*text);
    } catch (const json::parse_error& e) {
        throw StoreError(path.string() + " is corrupt: " + e.what());
    }
    try {
        auto state = j.get<PortalState>();
        validate(state);
        return state;
    } catch (const VersionError& e) {
        throw VersionError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw StoreError(path.string() + " is invalid: " + e.what());
    }
}

// --------------------------------------------------------------------

Store::Store(fs::path dir) : dir_(std::move(dir)) {}

fs::path Store::info_path(std::string_view id) const
{
    if (!is_valid_id(id))
        throw NotFoundError("no resource with id '" + std::string(id) + "'");
    return info_dir() / (std::string(id) + ".json");
}

void Store::initialize()
{
    std::lock_guard lock(write_mutex_);
    std::error_code ec;
    fs::create_directories(info_dir(), ec);
    if (ec)
        throw StoreError("cannot create " + info_dir().string() + ": " + ec.message());
    if (!fs::exists(portal_path()))
        save_state(PortalState{}, portal_path());
}

PortalState Store::load() const
{
    return load_state(portal_path());
}

void Store::save(const PortalState& state)
{
    std::lock_guard lock(write_mutex_);
    save_state(state, portal_path());
}

PortalState Store::modify(const std::function<void(PortalState&)>& change)
{
    std::lock_guard lock(write_mutex_);
    auto state = load_state(portal_path());
    change(state);
    save_state(state, portal_path());
    return state;
}

void Store::record_info(const ResourceInfo& info)
{
    validate(info);
    auto path = info_path(info.resource_id);
    std::lock_guard lock(write_mutex_);
    std::error_code ec;
    fs::create_directories(info_dir(), ec);
    write_file_atomic(path, info_to_json(info).dump() + "\n");
}

std::optional<ResourceInfo> Store::find_info(std::string_view id) const
{
    if (!is_valid_id(id))
        return std::nullopt;
    auto path = info_path(id);
    auto text = read_file(path);
    if (!text)
        return std::nullopt;
    try {
        return info_from_json(json::parse(*text), std::string(id));
    } catch (const json::exception& e) {
        throw StoreError(path.string() + " is corrupt: " + e.what());
    } catch (const ValidationError& e) {
        throw StoreError(path.string() + " is invalid: " + e.what());
    }
}

ResourceInfo Store::get_info(std::string_view id) const
{
    auto info = find_info(id);
    if (!info)
        throw NotFoundError("no info recorded for resource '" + std::string(id) + "'");
    return *info;
}

std::map<std::string, ResourceInfo> Store::infos_for(const PortalState& state) const
{
    std::map<std::string, ResourceInfo> out;
    for (const auto& r : state.resources)
        if (auto info = find_info(r.id))
            out.emplace(r.id, std::move(*info));
    return out;
}

bool Store::delete_info(std::string_view id)
{
    if (!is_valid_id(id))
        return false;
    std::lock_guard lock(write_mutex_);
    std::error_code ec;
    bool removed = fs::remove(info_path(id), ec);
    if (ec)
        throw StoreError("cannot remove " + info_path(id).string() + ": " + ec.message());
    return removed;
}

}  // namespace gridmap
