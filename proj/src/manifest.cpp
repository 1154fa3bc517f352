/// @file manifest.cpp
/// @brief Checksums and deterministic manifest serialization.

#include "ekman/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ekman {

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::uint64_t checksum_file(const std::string& path) {
    return fnv1a64(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read failed: " + path);
    return buf.str();
}

void Manifest::add_file(const std::string& dir, const std::string& name) {
    const std::string content = read_text_file(dir + "/" + name);
    artifacts.push_back({name, content.size(), hash_hex(fnv1a64(content))});
}

std::string Manifest::text() const {
    std::vector<ArtifactEntry> sorted = artifacts;
    std::sort(sorted.begin(), sorted.end(),
              [](const ArtifactEntry& a, const ArtifactEntry& b) { return a.name < b.name; });
    nlohmann::json files = nlohmann::json::object();
    for (const auto& a : sorted)
        files[a.name] = {{"bytes", a.bytes}, {"fnv1a64", a.hash}};
    nlohmann::json doc = {
        {"artifacts", files},
        {"command", command},
        {"config", config_hash},
    };
    return doc.dump(2) + "\n";
}

void Manifest::write(const std::string& path) const { write_text_file(path, text()); }

}  // namespace ekman
