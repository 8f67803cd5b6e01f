#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "f2p/errors.hpp"
#include "f2p/feature_cache.hpp"
#include "f2p/rng.hpp"
#include "helpers.hpp"

using namespace f2p;
using testutil::TempDir;

namespace {

FeatureStack random_stack(Rng& rng, Index k, Index dim, const StackKey& source) {
    FeatureStack s;
    s.rows.resize(k, dim);
    for (Index i = 0; i < s.rows.size(); ++i)
        s.rows.data()[i] = static_cast<float>(rng.uniform(-2.0, 2.0));
    s.region_ids.assign(kAllRegions.begin(), kAllRegions.begin() + k);
    s.encoder_id = "test-stat";
    s.source = source;
    return s;
}

}  // namespace

TEST_CASE("put then get reproduces the stack bit-exactly with metadata") {
    TempDir dir("cache");
    FeatureCache cache(dir.path());
    Rng rng(1);
    const FeatureStack s = random_stack(rng, 6, 6, {"ds", "vid", 12});

    const std::string key = cache.put(s);
    CHECK(key == "test-stat/ds/vid/12");
    CHECK(cache.contains(key));
    CHECK(cache.valid(key));

    const FeatureStack back = cache.get(key);
    CHECK(back.rows == s.rows);
    CHECK(back.region_ids == s.region_ids);
    CHECK(back.encoder_id == s.encoder_id);
    CHECK(back.source == s.source);
}

TEST_CASE("missing keys and tampered payloads are detected") {
    TempDir dir("cache");
    FeatureCache cache(dir.path());
    Rng rng(2);
    const std::string key = cache.put(random_stack(rng, 6, 8, {"ds", "v", 0}));

    SUBCASE("unknown key") { CHECK_THROWS_AS(cache.get("test-stat/ds/v/999"), KeyNotFound); }
    SUBCASE("flipped payload byte") {
        std::fstream f(cache.payload_path(key), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(7);
        char b;
        f.seekg(7);
        f.read(&b, 1);
        b = static_cast<char>(b ^ 0x40);
        f.seekp(7);
        f.write(&b, 1);
        f.close();
        CHECK_THROWS_AS(cache.get(key), CacheCorrupt);
        CHECK_FALSE(cache.valid(key));
    }
    SUBCASE("truncated payload") {
        std::filesystem::resize_file(cache.payload_path(key), 10);
        CHECK_THROWS_AS(cache.get(key), CacheCorrupt);
    }
    SUBCASE("garbled sidecar") {
        testutil::write_text(cache.sidecar_path(key), "{broken");
        CHECK_THROWS_AS(cache.get(key), CacheCorrupt);
    }
}

TEST_CASE("1000 random stacks round-trip exactly") {
    TempDir dir("cache");
    FeatureCache cache(dir.path());
    Rng rng(3);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Index k = 1 + static_cast<Index>(rng.below(6));
        const Index dim = 1 + static_cast<Index>(rng.below(16));
        const FeatureStack s =
            random_stack(rng, k, dim, {"d" + std::to_string(i % 7), "v" + std::to_string(i), i});
        const FeatureStack back = cache.get(cache.put(s));
        if (!(back.rows == s.rows && back.region_ids == s.region_ids &&
              back.encoder_id == s.encoder_id && back.source == s.source))
            ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("last write wins") {
    TempDir dir("cache");
    FeatureCache cache(dir.path());
    Rng rng(4);
    const StackKey src{"ds", "v", 3};
    cache.put(random_stack(rng, 6, 6, src));
    const FeatureStack second = random_stack(rng, 6, 6, src);
    const std::string key = cache.put(second);
    CHECK(cache.get(key).rows == second.rows);
}
