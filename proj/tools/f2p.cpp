// Command-line front end: extract -> featurize -> train -> evaluate/ablate,
// driven by flags plus an optional config file (flags win).
//
// Exit codes: 0 success, 1 fatal, 2 completed with skips.
// Logs go to stderr, machine-readable results to files, one summary line to
// stdout.

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "f2p/checkpoint.hpp"
#include "f2p/errors.hpp"
#include "f2p/evaluate.hpp"
#include "f2p/feature_cache.hpp"
#include "f2p/image.hpp"
#include "f2p/landmarks.hpp"
#include "f2p/log.hpp"
#include "f2p/manifest.hpp"
#include "f2p/regions.hpp"
#include "f2p/synthetic.hpp"
#include "f2p/train.hpp"

namespace fs = std::filesystem;
using namespace f2p;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitSkips = 2;

struct RunConfig {
    std::string manifest_path;
    std::string cache_dir = "cache";
    std::string crops_dir;  // default <cache>/crops
    std::string out_dir = "out";
    std::string checkpoint_dir;  // default <out>
    std::string encoder_id = "test-stat";
    std::string provider_id = "synthetic";
    std::string regions_csv = "frame,face,left_eye,right_eye,lips,nose";
    std::string gate = "sigmoid";
    std::string log_level = "warn";
    std::uint64_t seed = 0;
    float margin = 0.0f;
    int epochs = 20;
    int batch_size = 100;
    float lr = 1e-4f;
    int frame_budget = 32;
    int clf_epochs = 50;
    float clf_lr = 1e-3f;
    int clf_hidden = 0;
    std::string protocol = "intra";
    std::string train_target;
    std::string test_target;

    fs::path crops_root() const {
        return crops_dir.empty() ? fs::path(cache_dir) / "crops" : fs::path(crops_dir);
    }
    fs::path ckpt_root() const {
        return checkpoint_dir.empty() ? fs::path(out_dir) : fs::path(checkpoint_dir);
    }
    std::vector<RegionId> regions() const { return canonical_regions(regions_from_string(regions_csv)); }
    GateMode gate_mode() const {
        return gate == "softmax" ? GateMode::Softmax : GateMode::Sigmoid;
    }

    TrainConfig train_config() const {
        TrainConfig cfg;
        cfg.margin = margin;
        cfg.learning_rate = lr;
        cfg.batch_size = batch_size;
        cfg.epochs = epochs;
        cfg.seed = seed;
        cfg.active_regions = regions();
        cfg.gate_mode = gate_mode();
        return cfg;
    }
    ClassifierConfig classifier_config() const {
        ClassifierConfig cfg;
        cfg.epochs = clf_epochs;
        cfg.learning_rate = clf_lr;
        cfg.hidden = clf_hidden;
        cfg.seed = derive_seed(seed, 0xC1F5EEDULL);
        return cfg;
    }

    // Semantic knobs only; paths and log level do not change results.
    std::string fingerprint() const {
        nlohmann::json j;
        j["encoder"] = encoder_id;
        j["regions"] = regions_csv;
        j["seed"] = seed;
        j["margin"] = margin;
        j["epochs"] = epochs;
        j["batch_size"] = batch_size;
        j["lr"] = lr;
        j["frame_budget"] = frame_budget;
        j["clf_epochs"] = clf_epochs;
        j["clf_lr"] = clf_lr;
        j["clf_hidden"] = clf_hidden;
        j["gate"] = gate;
        j["protocol"] = protocol;
        j["train_target"] = train_target;
        j["test_target"] = test_target;
        return config_fingerprint(j.dump());
    }
};

// Single-writer guard on a cache root; stale locks need manual removal.
class CacheLock {
public:
    explicit CacheLock(const fs::path& root) : path_(root / ".lock") {
        fs::create_directories(root);
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0)
            throw Error("cache is locked by another writer: " + path_.string() +
                        " (remove the file if the owner is gone)");
        const std::string pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] ssize_t n = ::write(fd_, pid.data(), pid.size());
    }
    ~CacheLock() {
        if (fd_ >= 0) {
            ::close(fd_);
            ::unlink(path_.c_str());
        }
    }
    CacheLock(const CacheLock&) = delete;
    CacheLock& operator=(const CacheLock&) = delete;

private:
    fs::path path_;
    int fd_ = -1;
};

fs::path crop_dir_for(const RunConfig& cfg, const FrameRecord& r) {
    return cfg.crops_root() / r.dataset_id / r.video_id / std::to_string(r.frame_index);
}

bool crops_complete(const fs::path& dir) {
    for (RegionId region : kAllRegions)
        if (!fs::exists(dir / (std::string(region_name(region)) + ".png"))) return false;
    return true;
}

std::vector<FrameRecord> working_set(const Manifest& manifest, const RunConfig& cfg) {
    std::vector<FrameRecord> out;
    for (const std::string& video : manifest.video_order()) {
        const int budget = cfg.frame_budget > 0
                               ? cfg.frame_budget
                               : static_cast<int>(frames_for_video(manifest, video).size());
        for (const FrameRecord& r : sample_frames(manifest, video, budget, cfg.seed))
            out.push_back(r);
    }
    return out;
}

int cmd_extract(const RunConfig& cfg) {
    const Manifest manifest = load_manifest(cfg.manifest_path);
    CacheLock lock(fs::path(cfg.cache_dir));
    auto provider = make_landmark_provider(cfg.provider_id);

    long extracted = 0, skipped = 0;
    for (const FrameRecord& r : working_set(manifest, cfg)) {
        const fs::path dir = crop_dir_for(cfg, r);
        if (crops_complete(dir)) {
            ++extracted;  // idempotent rerun, nothing to redo
            continue;
        }
        try {
            const Image image = load_image(r.image_path);
            const LandmarkSet lm = detect_landmarks(image, *provider);
            const RegionSet set = crop_regions(image, lm, {}, r.key());
            fs::create_directories(dir);
            for (const auto& [region, crop] : set.crops)
                save_png(crop, dir / (std::string(region_name(region)) + ".png"));
            ++extracted;
        } catch (const ImageUnreadable& e) {
            log_warn(std::string("skipping ") + r.image_path + ": " + e.what());
            ++skipped;
        } catch (const NoFaceDetected&) {
            log_warn("skipping " + r.image_path + ": no face detected");
            ++skipped;
        } catch (const DegenerateRegion&) {
            log_warn("skipping " + r.image_path + ": degenerate face box");
            ++skipped;
        }
    }
    std::printf("extracted=%ld skipped=%ld\n", extracted, skipped);
    return skipped > 0 ? kExitSkips : kExitOk;
}

int cmd_featurize(const RunConfig& cfg) {
    const Manifest manifest = load_manifest(cfg.manifest_path);
    CacheLock lock(fs::path(cfg.cache_dir));
    auto encoder = make_encoder(cfg.encoder_id);
    const EncoderSpec& spec = encoder->spec();
    FeatureCache cache{fs::path(cfg.cache_dir)};

    long cached = 0, fresh = 0, repaired = 0, skipped = 0;
    for (const FrameRecord& r : working_set(manifest, cfg)) {
        const std::string key = FeatureCache::key_for(cfg.encoder_id, r.key());
        const bool present = cache.contains(key);
        if (present && cache.valid(key)) {
            ++cached;
            continue;
        }

        const fs::path dir = crop_dir_for(cfg, r);
        if (!crops_complete(dir)) {
            log_warn("skipping " + key + ": crops missing (run extract first)");
            ++skipped;
            continue;
        }
        std::map<RegionId, VectorF> features;
        for (RegionId region : kAllRegions) {
            const Image crop = load_image(dir / (std::string(region_name(region)) + ".png"));
            const Image ready = preprocess(crop, spec.mean, spec.stdev);
            features[region] = encode({{ready}}, spec, *encoder).front();
        }
        cache.put(stack_features(features, cfg.encoder_id, r.key()));
        if (present) {
            log_warn("repaired corrupt cache entry " + key);
            ++repaired;
        } else {
            ++fresh;
        }
    }
    std::printf("cached=%ld fresh=%ld repaired=%ld skipped=%ld\n", cached, fresh, repaired,
                skipped);
    return skipped > 0 ? kExitSkips : kExitOk;
}

int cmd_train(const RunConfig& cfg) {
    const Manifest manifest = load_manifest(cfg.manifest_path);
    const StackSourceFn source = cache_source(FeatureCache{fs::path(cfg.cache_dir)}, cfg.encoder_id);
    const TrainConfig tc = cfg.train_config();

    const StackDataset train =
        build_dataset(manifest, Split::Train, source, tc.active_regions, cfg.frame_budget, tc.seed);
    const TripletTrainResult result = train_triplet(train, tc);

    const ClassifierState clf =
        train_classifier(embed_dataset(train, result.net), train.labels, cfg.classifier_config());

    fs::create_directories(cfg.out_dir);
    const fs::path net_path = fs::path(cfg.out_dir) / "triplet.ckpt";
    const fs::path clf_path = fs::path(cfg.out_dir) / "classifier.ckpt";
    save_triplet_checkpoint(result.net, net_path);
    save_classifier_checkpoint(clf, clf_path);
    write_loss_csv(result.epoch_loss, fs::path(cfg.out_dir) / "loss.csv");

    std::printf("trained epochs=%d final_loss=%.6g checkpoint=%s\n", cfg.epochs,
                result.epoch_loss.empty() ? 0.0 : static_cast<double>(result.epoch_loss.back()),
                net_path.c_str());
    return kExitOk;
}

ProtocolSpec protocol_from(const RunConfig& cfg) {
    ProtocolSpec spec;
    if (cfg.protocol == "intra") spec.kind = Protocol::Intra;
    else if (cfg.protocol == "inter") spec.kind = Protocol::Inter;
    else if (cfg.protocol == "inter_manipulation") spec.kind = Protocol::InterManipulation;
    else throw Error("unknown protocol: " + cfg.protocol);
    spec.train_target = cfg.train_target;
    spec.test_target = cfg.test_target;
    if (spec.kind != Protocol::Intra && cfg.test_target.empty())
        throw Error("--test-target is required for protocol " + cfg.protocol);
    return spec;
}

void write_report_files(const EvalReport& report, const fs::path& out_dir,
                        const std::string& stem) {
    fs::create_directories(out_dir);
    std::ofstream json_out(out_dir / (stem + ".json"), std::ios::binary);
    json_out << report_to_json(report).dump(2) << "\n";
    std::ofstream table_out(out_dir / (stem + ".txt"), std::ios::binary);
    table_out << report_table(report);
}

int cmd_evaluate(const RunConfig& cfg) {
    const ProtocolSpec protocol = protocol_from(cfg);  // flag validation before heavy I/O
    const Manifest manifest = load_manifest(cfg.manifest_path);
    const StackSourceFn source = cache_source(FeatureCache{fs::path(cfg.cache_dir)}, cfg.encoder_id);
    const TripletNet<float> net = load_triplet_checkpoint(cfg.ckpt_root() / "triplet.ckpt");
    const ClassifierState clf = load_classifier_checkpoint(cfg.ckpt_root() / "classifier.ckpt");

    const EvalReport report = evaluate(manifest, source, net, clf, cfg.regions(), protocol,
                                       cfg.frame_budget, cfg.seed, cfg.fingerprint());
    write_report_files(report, cfg.out_dir, "report");
    std::printf("evaluated datasets=%zu report=%s\n", report.per_dataset.size(),
                (fs::path(cfg.out_dir) / "report.json").c_str());
    return kExitOk;
}

int cmd_ablate(const RunConfig& cfg) {
    const Manifest manifest = load_manifest(cfg.manifest_path);
    const StackSourceFn source = cache_source(FeatureCache{fs::path(cfg.cache_dir)}, cfg.encoder_id);

    const std::vector<AblationRow> rows =
        ablate_levels(manifest, source, cfg.train_config(), level_combo_grid(),
                      cfg.classifier_config(), cfg.frame_budget);

    fs::create_directories(cfg.out_dir);
    for (const AblationRow& row : rows) {
        std::string stem = "ablation_" + row.combo;
        for (char& c : stem)
            if (c == ',') c = '_';
        write_report_files(row.report, cfg.out_dir, stem);
    }
    std::ofstream table_out(fs::path(cfg.out_dir) / "ablation.txt", std::ios::binary);
    table_out << ablation_table(rows);

    std::printf("ablated combos=%zu report=%s\n", rows.size(),
                (fs::path(cfg.out_dir) / "ablation.txt").c_str());
    return kExitOk;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, bool needs_manifest = true) {
    auto* m = cmd->add_option("--manifest", cfg.manifest_path, "JSON-lines manifest path");
    if (needs_manifest) m->required();
    cmd->add_option("--cache", cfg.cache_dir, "cache root directory")
        ->envname("F2P_CACHE")
        ->capture_default_str();
    cmd->add_option("--crops", cfg.crops_dir, "crop directory (default <cache>/crops)");
    cmd->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--checkpoint", cfg.checkpoint_dir, "checkpoint directory (default <out>)");
    cmd->add_option("--encoder", cfg.encoder_id, "encoder id")->capture_default_str();
    cmd->add_option("--provider", cfg.provider_id, "landmark provider id")->capture_default_str();
    cmd->add_option("--regions", cfg.regions_csv, "comma-separated region subset")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--margin", cfg.margin, "triplet loss margin")->capture_default_str();
    cmd->add_option("--epochs", cfg.epochs, "triplet training epochs")->capture_default_str();
    cmd->add_option("--batch-size", cfg.batch_size, "triplet batch size")->capture_default_str();
    cmd->add_option("--lr", cfg.lr, "triplet learning rate")->capture_default_str();
    cmd->add_option("--frame-budget", cfg.frame_budget, "frames sampled per video (<=0: all)")
        ->capture_default_str();
    cmd->add_option("--clf-epochs", cfg.clf_epochs, "classifier epochs")->capture_default_str();
    cmd->add_option("--clf-lr", cfg.clf_lr, "classifier learning rate")->capture_default_str();
    cmd->add_option("--clf-hidden", cfg.clf_hidden, "classifier hidden width (0: linear)")
        ->capture_default_str();
    cmd->add_option("--gate", cfg.gate, "attention gate: sigmoid|softmax")->capture_default_str();
    cmd->add_option("--log-level", cfg.log_level, "error|warn|info|debug")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical facial-region deepfake detection pipeline"};
    app.require_subcommand(1);
    // TOML-style file with one [section] per subcommand; flags win over file
    // values.
    app.set_config("--config", "", "config file")->expected(0, 1);

    RunConfig cfg;
    int (*run)(const RunConfig&) = nullptr;

    auto* extract = app.add_subcommand("extract", "detect landmarks and cache region crops");
    add_common_options(extract, cfg);
    extract->callback([&] { run = cmd_extract; });

    auto* featurize = app.add_subcommand("featurize", "encode cached crops into feature stacks");
    add_common_options(featurize, cfg);
    featurize->callback([&] { run = cmd_featurize; });

    auto* train = app.add_subcommand("train", "train the embedding network, then the classifier");
    add_common_options(train, cfg);
    train->callback([&] { run = cmd_train; });

    auto* evaluate = app.add_subcommand("evaluate", "score a test split and report AUC");
    add_common_options(evaluate, cfg);
    evaluate->add_option("--protocol", cfg.protocol, "intra|inter|inter_manipulation")
        ->capture_default_str();
    evaluate->add_option("--train-target", cfg.train_target, "trained-on dataset/manipulation");
    evaluate->add_option("--test-target", cfg.test_target, "tested-on dataset/manipulation");
    evaluate->callback([&] { run = cmd_evaluate; });

    auto* ablate = app.add_subcommand("ablate", "train+evaluate every level combination");
    add_common_options(ablate, cfg);
    ablate->callback([&] { run = cmd_ablate; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFatal;
    }

    LogLevel level = LogLevel::Warn;
    if (!log_level_from_string(cfg.log_level, level)) {
        std::fprintf(stderr, "error: unknown log level '%s'\n", cfg.log_level.c_str());
        return kExitFatal;
    }
    log_threshold() = level;

    try {
        return run(cfg);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFatal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFatal;
    }
}
