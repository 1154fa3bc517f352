/// @file manifest.hpp
/// @brief Run manifests: FNV-1a checksums of produced artifacts plus the
///        configuration hash, written as deterministic JSON text.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ekman {

/// 64-bit FNV-1a over a byte range.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(const std::string& s);

/// 16 lowercase hex digits, zero padded.
std::string hash_hex(std::uint64_t h);

/// Checksum of a file's bytes; throws std::runtime_error when unreadable.
std::uint64_t checksum_file(const std::string& path);

/// Writes bytes exactly as given; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& content);

/// Whole file as a string; throws std::runtime_error when unreadable.
std::string read_text_file(const std::string& path);

struct ArtifactEntry {
    std::string name;     // file name relative to the run directory
    std::uint64_t bytes;  // size on disk
    std::string hash;     // hex FNV-1a of the contents
};

/// The record a run leaves behind. Contains no timestamps or host data, so
/// identical configurations produce byte-identical manifests.
struct Manifest {
    std::string command;      // subcommand that produced the run
    std::string config_hash;  // hex FNV-1a of the canonical config text
    std::vector<ArtifactEntry> artifacts;

    /// Checksums dir/name and records it under its bare name.
    void add_file(const std::string& dir, const std::string& name);

    /// Deterministic JSON text: keys sorted, artifacts sorted by name.
    std::string text() const;

    void write(const std::string& path) const;
};

}  // namespace ekman
