#include "f2p/feature_cache.hpp"

#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "f2p/crc32.hpp"
#include "f2p/errors.hpp"

namespace f2p {

namespace fs = std::filesystem;
using nlohmann::json;

std::string FeatureCache::key_for(const std::string& encoder_id, const StackKey& source) {
    return encoder_id + "/" + source.dataset_id + "/" + source.video_id + "/" +
           std::to_string(source.frame_index);
}

fs::path FeatureCache::payload_path(const std::string& key) const {
    return root_ / (key + ".f32");
}

fs::path FeatureCache::sidecar_path(const std::string& key) const {
    return root_ / (key + ".json");
}

namespace {

std::uint32_t payload_crc(const FeatureStack& s) {
    return crc32(s.rows.data(), sizeof(float) * static_cast<std::size_t>(s.rows.size()));
}

void atomic_write(const fs::path& path, const void* data, std::size_t len) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
        if (!out) throw Error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace

std::string FeatureCache::put(const FeatureStack& stack) {
    const std::string key = key_for(stack.encoder_id, stack.source);
    const fs::path payload = payload_path(key);
    fs::create_directories(payload.parent_path());

    atomic_write(payload, stack.rows.data(),
                 sizeof(float) * static_cast<std::size_t>(stack.rows.size()));

    json meta;
    meta["k"] = stack.k();
    meta["D"] = stack.dim();
    json regions = json::array();
    for (RegionId r : stack.region_ids) regions.push_back(std::string(region_name(r)));
    meta["regions"] = regions;
    meta["crc32"] = payload_crc(stack);
    const std::string text = meta.dump();
    atomic_write(sidecar_path(key), text.data(), text.size());
    return key;
}

bool FeatureCache::contains(const std::string& key) const {
    return fs::exists(payload_path(key)) && fs::exists(sidecar_path(key));
}

FeatureStack FeatureCache::get(const std::string& key) const {
    if (!contains(key)) throw KeyNotFound(key);

    json meta;
    {
        std::ifstream in(sidecar_path(key));
        meta = json::parse(in, nullptr, false);
        if (meta.is_discarded()) throw CacheCorrupt(key);
    }
    Index k = 0, dim = 0;
    std::uint32_t expect_crc = 0;
    std::vector<RegionId> regions;
    try {
        k = meta.at("k").get<Index>();
        dim = meta.at("D").get<Index>();
        expect_crc = meta.at("crc32").get<std::uint32_t>();
        for (const auto& name : meta.at("regions")) {
            auto r = region_from_name(name.get<std::string>());
            if (!r) throw CacheCorrupt(key);
            regions.push_back(*r);
        }
    } catch (const json::exception&) {
        throw CacheCorrupt(key);
    }
    if (k <= 0 || dim <= 0 || static_cast<Index>(regions.size()) != k) throw CacheCorrupt(key);

    FeatureStack s;
    s.rows.resize(k, dim);
    {
        std::ifstream in(payload_path(key), std::ios::binary);
        in.read(reinterpret_cast<char*>(s.rows.data()),
                static_cast<std::streamsize>(sizeof(float) * static_cast<std::size_t>(s.rows.size())));
        if (!in || in.gcount() != static_cast<std::streamsize>(sizeof(float) * s.rows.size()))
            throw CacheCorrupt(key);
        char extra;
        if (in.read(&extra, 1)) throw CacheCorrupt(key);  // trailing bytes
    }
    if (payload_crc(s) != expect_crc) throw CacheCorrupt(key);

    s.region_ids = std::move(regions);
    // encoder/<dataset>/<video>/<frame>
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= key.size()) {
        std::size_t next = key.find('/', pos);
        if (next == std::string::npos) next = key.size();
        parts.push_back(key.substr(pos, next - pos));
        pos = next + 1;
    }
    if (parts.size() != 4) throw CacheCorrupt(key);
    s.encoder_id = parts[0];
    s.source = StackKey{parts[1], parts[2], std::stoll(parts[3])};
    return s;
}

bool FeatureCache::valid(const std::string& key) const {
    if (!contains(key)) return false;
    try {
        get(key);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace f2p
