#include "f2p/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "f2p/crc32.hpp"
#include "f2p/errors.hpp"

namespace f2p {

namespace {

constexpr char kMagic[4] = {'F', '2', 'P', 'K'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kKindTripletNet = 1;
constexpr std::uint32_t kKindClassifier = 2;

struct Writer {
    std::ofstream out;
    explicit Writer(const std::filesystem::path& path) : out(path, std::ios::binary | std::ios::trunc) {
        if (!out) throw Error("cannot write checkpoint: " + path.string());
    }
    void raw(const void* p, std::size_t n) { out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
};

struct Reader {
    std::ifstream in;
    std::string path;
    explicit Reader(const std::filesystem::path& p) : in(p, std::ios::binary), path(p.string()) {
        if (!in) throw Error("cannot read checkpoint: " + path);
    }
    void raw(void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!in) throw CacheCorrupt(path);
    }
    std::uint32_t u32() { std::uint32_t v; raw(&v, 4); return v; }
    std::uint64_t u64() { std::uint64_t v; raw(&v, 8); return v; }
};

void write_file(const std::filesystem::path& path, std::uint32_t kind, std::uint64_t seed,
                const std::vector<std::uint32_t>& meta, const VectorF& payload) {
    Writer w(path);
    w.raw(kMagic, 4);
    w.u32(kVersion);
    w.u32(kind);
    w.u64(seed);
    w.u32(static_cast<std::uint32_t>(meta.size()));
    for (std::uint32_t m : meta) w.u32(m);
    w.u64(static_cast<std::uint64_t>(payload.size()));
    w.raw(payload.data(), sizeof(float) * static_cast<std::size_t>(payload.size()));
    w.u32(crc32(payload.data(), sizeof(float) * static_cast<std::size_t>(payload.size())));
    if (!w.out) throw Error("short write to checkpoint: " + path.string());
}

struct FileContents {
    std::uint32_t kind = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> meta;
    VectorF payload;
};

FileContents read_file(const std::filesystem::path& path, std::uint32_t expect_kind) {
    Reader r(path);
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw CacheCorrupt(r.path);
    if (r.u32() != kVersion) throw CacheCorrupt(r.path);

    FileContents f;
    f.kind = r.u32();
    if (f.kind != expect_kind) throw CacheCorrupt(r.path);
    f.seed = r.u64();
    f.meta.resize(r.u32());
    for (auto& m : f.meta) m = r.u32();
    const std::uint64_t n = r.u64();
    f.payload.resize(static_cast<Index>(n));
    r.raw(f.payload.data(), sizeof(float) * n);
    const std::uint32_t want = r.u32();
    if (crc32(f.payload.data(), sizeof(float) * n) != want) throw CacheCorrupt(r.path);
    return f;
}

}  // namespace

void save_triplet_checkpoint(const TripletNet<float>& net, const std::filesystem::path& path) {
    const auto k = static_cast<std::uint32_t>(net.k());
    const auto dim = static_cast<std::uint32_t>(net.dim());
    const std::vector<std::uint32_t> meta = {
        k,
        dim,
        static_cast<std::uint32_t>(net.attention.gate_mode),
        2 * k,
        2 * k,
        k,
        static_cast<std::uint32_t>(kEmbedderHidden),
        static_cast<std::uint32_t>(kEmbeddingDim),
    };
    write_file(path, kKindTripletNet, net.embedder.rng_seed, meta, pack_params(net));
}

TripletNet<float> load_triplet_checkpoint(const std::filesystem::path& path) {
    const FileContents f = read_file(path, kKindTripletNet);
    if (f.meta.size() != 8) throw CacheCorrupt(path.string());
    const Index k = f.meta[0];
    const Index dim = f.meta[1];
    TripletNet<float> net = init_triplet_net<float>(k, dim, f.seed, static_cast<GateMode>(f.meta[2]));
    if (param_count(net) != f.payload.size()) throw CacheCorrupt(path.string());
    unpack_params(f.payload, net);
    net.embedder.rng_seed = f.seed;
    return net;
}

void save_classifier_checkpoint(const ClassifierState& clf, const std::filesystem::path& path) {
    const std::vector<std::uint32_t> meta = {static_cast<std::uint32_t>(clf.input_dim()),
                                             static_cast<std::uint32_t>(clf.hidden)};
    VectorF payload(clf.w1.size() + clf.b1.size() + clf.w2.size() + 1);
    Index at = 0;
    if (clf.hidden > 0) {
        payload.segment(at, clf.w1.size()) = Eigen::Map<const VectorF>(clf.w1.data(), clf.w1.size());
        at += clf.w1.size();
        payload.segment(at, clf.b1.size()) = clf.b1;
        at += clf.b1.size();
    }
    payload.segment(at, clf.w2.size()) = clf.w2;
    at += clf.w2.size();
    payload[at] = clf.b2;
    write_file(path, kKindClassifier, 0, meta, payload);
}

ClassifierState load_classifier_checkpoint(const std::filesystem::path& path) {
    const FileContents f = read_file(path, kKindClassifier);
    if (f.meta.size() != 2) throw CacheCorrupt(path.string());
    const Index in = f.meta[0];
    const int hidden = static_cast<int>(f.meta[1]);

    ClassifierState clf;
    clf.hidden = hidden;
    Index at = 0;
    const auto need = [&](Index n) {
        if (at + n > f.payload.size()) throw CacheCorrupt(path.string());
    };
    if (hidden > 0) {
        clf.w1.resize(hidden, in);
        need(clf.w1.size());
        Eigen::Map<VectorF>(clf.w1.data(), clf.w1.size()) = f.payload.segment(at, clf.w1.size());
        at += clf.w1.size();
        clf.b1.resize(hidden);
        need(hidden);
        clf.b1 = f.payload.segment(at, hidden);
        at += hidden;
        clf.w2.resize(hidden);
    } else {
        clf.w2.resize(in);
    }
    need(clf.w2.size() + 1);
    clf.w2 = f.payload.segment(at, clf.w2.size());
    at += clf.w2.size();
    clf.b2 = f.payload[at++];
    if (at != f.payload.size()) throw CacheCorrupt(path.string());
    return clf;
}

}  // namespace f2p
