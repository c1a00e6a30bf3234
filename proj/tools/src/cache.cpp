#include "drinfeld/cli/cache.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace drinfeld::cli {

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::filesystem::path Cache::path(std::string_view artifact, std::string_view config) const {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(config)));
    return dir_ / (std::string(artifact) + "-" + hex + ".txt");
}

std::optional<Record> Cache::load(std::string_view artifact, std::string_view config) const {
    if (!enabled()) return std::nullopt;
    const auto p = path(artifact, config);
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::string header;
    std::getline(in, header);
    if (header != "# config = " + std::string(config))
        throw InconsistencyError("cache: " + p.string() + " was written for a different configuration");
    const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return Record::parse(body);
}

void Cache::store(std::string_view artifact, std::string_view config, const Record& r) const {
    if (!enabled()) return;
    std::filesystem::create_directories(dir_);
    const auto p = path(artifact, config);
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cache: cannot write " + tmp.string());
        out << "# config = " << config << "\n" << r.to_text();
        if (!out) throw InvalidInput("cache: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, p);
}

}  // namespace drinfeld::cli
