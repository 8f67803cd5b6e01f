#include "f2p/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "f2p/crc32.hpp"
#include "f2p/metrics.hpp"
#include "f2p/rng.hpp"

namespace f2p {

std::string_view protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Intra: return "intra";
        case Protocol::Inter: return "inter";
        case Protocol::InterManipulation: return "inter_manipulation";
    }
    return "?";
}

namespace {

DatasetMetrics score_group(const StackDataset& group, const TripletNet<float>& net,
                           const ClassifierState& classifier) {
    const MatrixF embeddings = embed_dataset(group, net);
    const VectorD probs = classifier.predict_batch(embeddings);

    std::vector<double> frame_scores(probs.data(), probs.data() + probs.size());
    DatasetMetrics m;
    m.n_frames = static_cast<std::int64_t>(group.size());
    m.frame_auc = frame_auc(frame_scores, group.labels);

    // Per-video aggregation, first-appearance order.
    std::vector<VideoGroup> groups;
    std::vector<int> video_labels;
    std::map<std::string, std::size_t> at;
    for (std::size_t i = 0; i < group.size(); ++i) {
        auto [it, fresh] = at.try_emplace(group.video_ids[i], groups.size());
        if (fresh) {
            groups.push_back(VideoGroup{group.video_ids[i], {}});
            video_labels.push_back(group.labels[i]);
        }
        groups[it->second].frame_scores.push_back(frame_scores[i]);
    }
    const std::vector<double> means = video_scores(groups);
    m.video_auc = frame_auc(means, video_labels);
    m.n_videos = static_cast<std::int64_t>(groups.size());
    return m;
}

}  // namespace

EvalReport evaluate(const Manifest& manifest, const StackSourceFn& source,
                    const TripletNet<float>& net, const ClassifierState& classifier,
                    const std::vector<RegionId>& regions, const ProtocolSpec& protocol,
                    int frame_budget, std::uint64_t seed, const std::string& fingerprint) {
    EvalReport report;
    report.protocol = std::string(protocol_name(protocol.kind));
    report.train_target = protocol.train_target;
    report.test_target = protocol.test_target;
    report.regions = canonical_regions(regions);
    report.config_fingerprint = fingerprint;

    std::set<std::string> eval_datasets;
    for (const FrameRecord& r : manifest.records())
        if (r.split == Split::Test) eval_datasets.insert(r.dataset_id);

    switch (protocol.kind) {
        case Protocol::Intra:
            if (eval_datasets.empty()) throw ProtocolDataMissing("manifest has no test split");
            break;
        case Protocol::Inter:
            if (!eval_datasets.count(protocol.test_target))
                throw ProtocolDataMissing("no test records for dataset '" + protocol.test_target +
                                          "'");
            eval_datasets = {protocol.test_target};
            break;
        case Protocol::InterManipulation: {
            bool any = false;
            for (const FrameRecord& r : manifest.records())
                any = any || (r.split == Split::Test && r.manipulation_id &&
                              *r.manipulation_id == protocol.test_target);
            if (!any)
                throw ProtocolDataMissing("no test records for manipulation '" +
                                          protocol.test_target + "'");
            break;
        }
    }

    for (const std::string& dataset : eval_datasets) {
        std::function<bool(const FrameRecord&)> keep;
        std::string key = dataset;
        if (protocol.kind == Protocol::InterManipulation) {
            key = dataset + "/" + protocol.test_target;
            keep = [&](const FrameRecord& r) {
                return r.dataset_id == dataset &&
                       (r.label == 0 || (r.manipulation_id && *r.manipulation_id == protocol.test_target));
            };
        } else {
            keep = [&](const FrameRecord& r) { return r.dataset_id == dataset; };
        }
        const StackDataset group = build_dataset_filtered(manifest, Split::Test, source, report.regions,
                                                          frame_budget, seed, keep);
        if (group.size() == 0) {
            if (protocol.kind == Protocol::InterManipulation) continue;
            throw ProtocolDataMissing("no test records for dataset '" + dataset + "'");
        }
        report.per_dataset[key] = score_group(group, net, classifier);
    }
    if (report.per_dataset.empty()) throw ProtocolDataMissing("protocol selected no data");
    return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["protocol"] = report.protocol;
    j["train_target"] = report.train_target;
    j["test_target"] = report.test_target;
    j["regions"] = nlohmann::json::array();
    for (RegionId r : report.regions) j["regions"].push_back(std::string(region_name(r)));
    j["config_fingerprint"] = report.config_fingerprint;
    j["per_dataset"] = nlohmann::json::object();
    for (const auto& [name, m] : report.per_dataset) {
        nlohmann::json d;
        d["frame_auc"] = m.frame_auc;
        d["video_auc"] = m.video_auc;
        d["n_frames"] = m.n_frames;
        d["n_videos"] = m.n_videos;
        j["per_dataset"][name] = d;
    }
    return j;
}

std::string report_table(const EvalReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-28s %10s %10s %9s %9s\n", "dataset", "F-AUC", "V-AUC",
                  "frames", "videos");
    out += line;
    for (const auto& [name, m] : report.per_dataset) {
        std::snprintf(line, sizeof(line), "%-28s %10.4f %10.4f %9lld %9lld\n", name.c_str(),
                      m.frame_auc, m.video_auc, static_cast<long long>(m.n_frames),
                      static_cast<long long>(m.n_videos));
        out += line;
    }
    return out;
}

std::vector<std::vector<RegionId>> level_combo_grid() {
    const std::vector<std::vector<int>> level_sets = {{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
    std::vector<std::vector<RegionId>> out;
    for (const auto& levels : level_sets) out.push_back(regions_for_levels(levels));
    return out;
}

std::string combo_name(const std::vector<RegionId>& regions) {
    const std::vector<RegionId> canon = canonical_regions(regions);
    std::vector<int> levels;
    for (int l : {1, 2, 3}) {
        for (RegionId r : canon)
            if (region_level(r) == l) {
                levels.push_back(l);
                break;
            }
    }
    if (canonical_regions(regions_for_levels(levels)) == canon) {
        std::string name;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (i) name += ',';
            name += std::to_string(levels[i]);
        }
        return name;
    }
    return regions_to_string(canon);
}

std::vector<AblationRow> ablate_levels(const Manifest& manifest, const StackSourceFn& source,
                                       const TrainConfig& base,
                                       const std::vector<std::vector<RegionId>>& combos,
                                       const ClassifierConfig& clf_cfg, int frame_budget) {
    std::vector<AblationRow> rows;
    for (std::size_t i = 0; i < combos.size(); ++i) {
        TrainConfig cfg = base;
        cfg.active_regions = canonical_regions(combos[i]);
        cfg.seed = base.seed + i;  // independent but reproducible per combo

        const StackDataset train =
            build_dataset(manifest, Split::Train, source, cfg.active_regions, frame_budget, cfg.seed);
        const TripletTrainResult trained = train_triplet(train, cfg);

        ClassifierConfig cc = clf_cfg;
        cc.seed = derive_seed(cfg.seed, 0xC1F5EEDULL);
        const ClassifierState clf =
            train_classifier(embed_dataset(train, trained.net), train.labels, cc);

        ProtocolSpec protocol;
        protocol.kind = Protocol::Intra;
        AblationRow row;
        row.combo = combo_name(cfg.active_regions);
        row.regions = cfg.active_regions;
        row.report = evaluate(manifest, source, trained.net, clf, cfg.active_regions, protocol,
                              frame_budget, cfg.seed);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string ablation_table(const std::vector<AblationRow>& rows) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %-28s %10s %10s\n", "levels", "dataset", "F-AUC",
                  "V-AUC");
    out += line;
    for (const AblationRow& row : rows) {
        for (const auto& [name, m] : row.report.per_dataset) {
            std::snprintf(line, sizeof(line), "%-12s %-28s %10.4f %10.4f\n", row.combo.c_str(),
                          name.c_str(), m.frame_auc, m.video_auc);
            out += line;
        }
    }
    return out;
}

std::string config_fingerprint(const std::string& canonical_config) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08x",
                  crc32(canonical_config.data(), canonical_config.size()));
    return buf;
}

}  // namespace f2p
