#pragma once

#include <filesystem>
#include <string>

#include "f2p/encoder.hpp"

namespace f2p {

// On-disk feature store, one stack per frame (or clip):
//   <root>/<encoder_id>/<dataset>/<video>/<frame>.f32   little-endian float32,
//                                                       row-major k x D
//   <root>/<encoder_id>/<dataset>/<video>/<frame>.json  {"k","D","regions","crc32"}
// Writes are atomic (temp file + rename); reads verify the payload CRC.
class FeatureCache {
public:
    explicit FeatureCache(std::filesystem::path root) : root_(std::move(root)) {}

    const std::filesystem::path& root() const { return root_; }

    static std::string key_for(const std::string& encoder_id, const StackKey& source);

    // Returns the cache key. Last write wins.
    std::string put(const FeatureStack& stack);

    // Throws KeyNotFound, CacheCorrupt (checksum or sidecar mismatch).
    FeatureStack get(const std::string& key) const;

    bool contains(const std::string& key) const;

    // Cheap integrity probe: payload present and CRC matches the sidecar.
    bool valid(const std::string& key) const;

    std::filesystem::path payload_path(const std::string& key) const;
    std::filesystem::path sidecar_path(const std::string& key) const;

private:
    std::filesystem::path root_;
};

}  // namespace f2p
