#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "drinfeld/cli/serialize.hpp"

namespace drinfeld::cli {

/// 64-bit FNV-1a.
uint64_t fnv1a64(std::string_view s);

/// Artifacts stored as `<dir>/<artifact>-<digest>.txt`, the digest taken over
/// the canonical text of the configuration the artifact depends on.  Each
/// file starts with `# config = <text>`; a file whose stored configuration
/// differs from the requested one is rejected with InconsistencyError.
/// An empty directory disables the cache.
class Cache {
public:
    explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }
    std::filesystem::path path(std::string_view artifact, std::string_view config) const;
    std::optional<Record> load(std::string_view artifact, std::string_view config) const;
    /// Writes atomically (temporary file, then rename).
    void store(std::string_view artifact, std::string_view config, const Record& r) const;

private:
    std::filesystem::path dir_;
};

}  // namespace drinfeld::cli
