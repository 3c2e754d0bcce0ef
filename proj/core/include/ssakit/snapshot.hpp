#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "ssakit/session.hpp"

namespace ssa {

/// Binary snapshot layout version. Readers reject any other value.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotOptions {
    bool include_cache = false;  ///< also store cached elementary series
};

/// Little-endian binary dump of the series, window, backend choice, config,
/// eigentriples and (optionally) cached elementary series. Doubles are copied
/// bit for bit.
void save_snapshot(const Session& session, std::ostream& out, SnapshotOptions options = {});
void save_snapshot(const Session& session, const std::filesystem::path& path, SnapshotOptions options = {});

/// Throws FormatError on a bad magic, truncated data or version mismatch.
Session load_snapshot(std::istream& in);
Session load_snapshot(const std::filesystem::path& path);

}  // namespace ssa
