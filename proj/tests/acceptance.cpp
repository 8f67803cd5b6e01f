// Acceptance suite: every release criterion as one pass/fail line, tolerances
// pinned in code. Runs on synthetic data only; no downloads, no GPUs.
//
//  1. margin-ranking loss equals max(0, d_ap - d_an + margin), float64-exact,
//     10,000-point grid with ties, < 1 s
//  2. full-network gradient vs central finite differences (h = 1e-5,
//     float64), max relative error < 1e-4, 20 random 2-triplet batches
//     (k = 6, D = 6), < 30 s
//  3. frame AUC equals the O(n^2) pairwise oracle to 1e-12, 100 random
//     instances, n <= 300, tie-heavy included, < 10 s
//  4. per-video aggregation equals scalar means to 1e-12; one frame per video
//     collapses V-AUC to F-AUC exactly
//  5. stack shape contract: 6xD canonical order, subset shapes over the
//     7-combo grid, 256-D embeddings
//  6. lips-offset synthetic set (200 videos x 8 frames), defaults margin 0 /
//     lr 1e-4 / batch 100 / 20 epochs: F-AUC >= 0.95, V-AUC >= 0.98, < 5 min
//  7. directional ablation on the same set: AUC(1,2,3) and AUC(lips) each
//     >= AUC(face) + 0.10 at frame level
//  8. margins {0, 0.1, 0.2, 0.3} all train finitely; 4-row table printed;
//     margin 0 within 0.05 of the best margin's F-AUC
//  9. determinism and persistence: same config + seed twice => bit-identical
//     checkpoints and reports; cache and checkpoint round-trips CRC-verified
// 10. 500 sampled batches: label(P) = label(A), label(N) != label(A), P != A,
//     anchor balance |real - fake| <= 1

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "f2p/checkpoint.hpp"
#include "f2p/evaluate.hpp"
#include "f2p/feature_cache.hpp"
#include "f2p/metrics.hpp"
#include "f2p/rng.hpp"
#include "f2p/sampler.hpp"
#include "f2p/synthetic.hpp"
#include "f2p/train.hpp"
#include "gradcheck.hpp"
#include "helpers.hpp"

using namespace f2p;

namespace {

struct Criterion {
    std::string name;
    std::function<std::string()> run;  // returns "" on pass, reason on fail
    double limit_seconds = 0.0;        // 0 = no stated bound
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// --- shared synthetic dataset (criteria 6-8) -------------------------------

const SyntheticSpec& acceptance_spec() {
    static const SyntheticSpec spec = [] {
        SyntheticSpec s;
        s.n_videos = 200;
        s.frames_per_video = 8;
        s.train_fraction = 0.7;
        s.offset = 0.30f;
        s.noise = 0.08f;
        s.seed = 7;
        return s;
    }();
    return spec;
}

const SyntheticData& acceptance_data() {
    static const SyntheticData data = make_offset_dataset(acceptance_spec());
    return data;
}

TrainConfig paper_defaults(std::uint64_t seed, const std::vector<RegionId>& regions) {
    TrainConfig cfg;  // margin 0, lr 1e-4, batch 100, 20 epochs by default
    cfg.seed = seed;
    cfg.active_regions = regions;
    return cfg;
}

struct PipelineResult {
    double frame_auc = 0.0;
    double video_auc = 0.0;
    std::vector<float> epoch_loss;
};

PipelineResult run_pipeline(const SyntheticData& data, const TrainConfig& cfg) {
    const StackDataset train =
        build_dataset(data.manifest(), Split::Train, data.source(), cfg.active_regions, 0, cfg.seed);
    const TripletTrainResult trained = train_triplet(train, cfg);

    ClassifierConfig cc;  // shipped defaults: 50 epochs, lr 1e-3, linear head
    cc.seed = derive_seed(cfg.seed, 0xC1F5EEDULL);
    const ClassifierState clf =
        train_classifier(embed_dataset(train, trained.net), train.labels, cc);

    const EvalReport report = evaluate(data.manifest(), data.source(), trained.net, clf,
                                       cfg.active_regions, {Protocol::Intra});
    const DatasetMetrics& m = report.per_dataset.at(acceptance_spec().dataset_id);
    return {m.frame_auc, m.video_auc, trained.epoch_loss};
}

// --- criteria ---------------------------------------------------------------

std::string criterion_loss_oracle() {
    Rng rng(101);
    for (int i = 0; i < 10000; ++i) {
        const double d_ap = rng.uniform(0.0, 4.0);
        double d_an = rng.uniform(0.0, 4.0);
        if (i % 4 == 0) d_an = d_ap;  // exact ties
        const double margin = i % 3 == 0 ? 0.1 * static_cast<double>(rng.below(4))
                                         : rng.uniform(0.0, 0.5);
        const double got = margin_ranking_loss(d_ap, d_an, margin);
        const double want = std::max(0.0, (d_ap - d_an) + margin);
        if (got != want) return fmt("mismatch at d_ap=%.17g d_an=%.17g", d_ap, d_an);
    }
    return "";
}

std::string criterion_gradient_check() {
    Rng rng(202);
    double worst = 0.0;
    long checked = 0, skipped = 0, total = 0;
    for (int batch = 0; batch < 20; ++batch) {
        const TripletNet<double> net = init_triplet_net<double>(6, 6, 5000 + batch);
        std::vector<MatrixD> a, p, n;
        for (int t = 0; t < 2; ++t) {
            const auto draw = [&] {
                MatrixD s(6, 6);
                for (Index i = 0; i < s.size(); ++i) s.data()[i] = rng.uniform(-1.0, 1.0);
                return s;
            };
            a.push_back(draw());
            p.push_back(draw());
            n.push_back(draw());
        }
        const double margin = batch % 2 == 0 ? 0.0 : 0.3;
        if (batch == 0) {
            const double drift = gradcheck::incremental_self_check(net, a, p, n, margin);
            if (drift > 1e-12) return fmt("incremental FD harness drifts by %.3g", drift);
        }
        const gradcheck::Result res = gradcheck::check_triplet_gradient(net, a, p, n, margin);
        worst = std::max(worst, res.max_rel_err);
        checked += res.checked;
        skipped += res.skipped_kinks;
        total += res.total;
        if (res.max_rel_err >= 1e-4)
            return fmt("batch %g: max rel err %.3g (param %g)", batch, res.max_rel_err,
                       static_cast<double>(res.worst_param));
    }
    if (skipped * 1000 > total) return fmt("too many kink skips: %g of %g", skipped, total);
    std::fprintf(stderr, "        [criterion 2] %ld params checked, %ld kink-straddling skipped, "
                         "max rel err %.3g\n",
                 checked, skipped, worst);
    return "";
}

std::string criterion_auc_oracle() {
    Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(299));
        const bool tie_heavy = trial % 2 == 0;
        std::vector<double> scores;
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) {
            scores.push_back(tie_heavy ? 0.25 * static_cast<double>(rng.below(4))
                                       : rng.uniform01());
            labels.push_back(static_cast<int>(rng.below(2)));
        }
        labels[0] = 0;
        if (n > 1) labels[1] = 1;

        double wins = 0.0;
        long n_pos = 0, n_neg = 0;
        for (int i = 0; i < n; ++i) {
            if (labels[i] == 1) ++n_pos;
            else ++n_neg;
        }
        for (int i = 0; i < n; ++i) {
            if (labels[i] != 1) continue;
            for (int j = 0; j < n; ++j) {
                if (labels[j] != 0) continue;
                if (scores[i] > scores[j]) wins += 1.0;
                else if (scores[i] == scores[j]) wins += 0.5;
            }
        }
        const double oracle = wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
        const double fast = frame_auc(scores, labels);
        if (std::abs(fast - oracle) > 1e-12)
            return fmt("trial n=%g: |%.17g - %.17g| > 1e-12", n, fast, oracle);
    }
    return "";
}

std::string criterion_video_aggregation() {
    Rng rng(404);
    std::vector<VideoGroup> groups;
    for (int v = 0; v < 150; ++v) {
        VideoGroup g{"v" + std::to_string(v), {}};
        const int frames = 1 + static_cast<int>(rng.below(16));
        for (int f = 0; f < frames; ++f) g.frame_scores.push_back(rng.uniform01());
        groups.push_back(g);
    }
    const std::vector<double> means = video_scores(groups);
    for (std::size_t v = 0; v < groups.size(); ++v) {
        double sum = 0.0;
        for (double s : groups[v].frame_scores) sum += s;
        if (std::abs(means[v] - sum / groups[v].frame_scores.size()) > 1e-12)
            return fmt("video %g mean off by more than 1e-12", static_cast<double>(v));
    }

    // Degenerate case: one frame per video makes V-AUC equal F-AUC exactly.
    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<VideoGroup> singles;
    for (int i = 0; i < 301; ++i) {
        scores.push_back(rng.uniform01());
        labels.push_back(static_cast<int>(rng.below(2)));
        singles.push_back({"s" + std::to_string(i), {scores.back()}});
    }
    labels[0] = 0;
    labels[1] = 1;
    if (frame_auc(video_scores(singles), labels) != frame_auc(scores, labels))
        return "one-frame-per-video V-AUC != F-AUC";
    return "";
}

std::string criterion_stack_shapes() {
    Rng rng(505);
    for (const Index dim : {6, 17}) {
        std::map<RegionId, VectorF> features;
        for (RegionId r : kAllRegions) {
            VectorF f(dim);
            for (Index i = 0; i < dim; ++i) f[i] = static_cast<float>(rng.uniform(-1, 1));
            features[r] = f;
        }
        const FeatureStack full = stack_features(features, "test-stat");
        if (full.k() != 6 || full.dim() != dim) return "full stack is not 6xD";
        if (full.region_ids != std::vector<RegionId>(kAllRegions.begin(), kAllRegions.end()))
            return "full stack region order is not canonical";

        const std::vector<std::size_t> expected_rows = {1, 1, 4, 2, 5, 5, 6};
        const auto grid = level_combo_grid();
        if (grid.size() != 7) return "level grid does not have 7 combos";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const FeatureStack sub = subset_stack(full, grid[i]);
            if (static_cast<std::size_t>(sub.k()) != expected_rows[i] || sub.dim() != dim)
                return fmt("combo %g has shape %gx%g", static_cast<double>(i),
                           static_cast<double>(sub.k()), static_cast<double>(sub.dim()));
        }

        const TripletNet<float> net = init_triplet_net<float>(6, dim, 99);
        if (embed(full, net).size() != 256) return "embedding is not 256-D";
    }
    return "";
}

std::string criterion_synthetic_separability() {
    const std::vector<RegionId> all(kAllRegions.begin(), kAllRegions.end());
    const PipelineResult r = run_pipeline(acceptance_data(), paper_defaults(7, all));
    std::fprintf(stderr, "        [criterion 6] F-AUC %.4f V-AUC %.4f first-loss %.4f "
                         "final-loss %.4f\n",
                 r.frame_auc, r.video_auc, static_cast<double>(r.epoch_loss.front()),
                 static_cast<double>(r.epoch_loss.back()));
    if (r.frame_auc < 0.95) return fmt("F-AUC %.4f < 0.95", r.frame_auc);
    if (r.video_auc < 0.98) return fmt("V-AUC %.4f < 0.98", r.video_auc);
    return "";
}

std::string criterion_directional_ablation() {
    const std::vector<std::vector<RegionId>> combos = {
        {RegionId::Face},
        {RegionId::Lips},
        std::vector<RegionId>(kAllRegions.begin(), kAllRegions.end()),
    };
    double auc[3];
    for (int i = 0; i < 3; ++i) {
        const PipelineResult r =
            run_pipeline(acceptance_data(), paper_defaults(7 + i, combos[i]));
        auc[i] = r.frame_auc;
    }
    std::fprintf(stderr,
                 "        [criterion 7] F-AUC face %.4f lips %.4f full %.4f\n", auc[0], auc[1],
                 auc[2]);
    if (auc[2] < auc[0] + 0.10) return fmt("AUC(1,2,3)=%.4f < AUC(face)=%.4f + 0.10", auc[2], auc[0]);
    if (auc[1] < auc[0] + 0.10) return fmt("AUC(lips)=%.4f < AUC(face)=%.4f + 0.10", auc[1], auc[0]);
    return "";
}

std::string criterion_margin_study() {
    const std::vector<RegionId> all(kAllRegions.begin(), kAllRegions.end());
    const float margins[] = {0.0f, 0.1f, 0.2f, 0.3f};
    double auc[4];
    std::fprintf(stderr, "        margin   F-AUC    V-AUC\n");
    for (int i = 0; i < 4; ++i) {
        TrainConfig cfg = paper_defaults(70 + i, all);
        cfg.margin = margins[i];
        try {
            const PipelineResult r = run_pipeline(acceptance_data(), cfg);
            auc[i] = r.frame_auc;
            std::fprintf(stderr, "        %.1f      %.4f   %.4f\n",
                         static_cast<double>(margins[i]), r.frame_auc, r.video_auc);
        } catch (const NonFiniteLoss& e) {
            return fmt("margin %.1f: non-finite loss", static_cast<double>(margins[i]));
        }
    }
    const double best = std::max(std::max(auc[0], auc[1]), std::max(auc[2], auc[3]));
    if (auc[0] < best - 0.05)
        return fmt("margin-0 F-AUC %.4f more than 0.05 below best %.4f", auc[0], best);
    return "";
}

std::string criterion_determinism() {
    SyntheticSpec spec;
    spec.n_videos = 40;
    spec.frames_per_video = 4;
    spec.seed = 11;
    const SyntheticData data = make_offset_dataset(spec);
    const std::vector<RegionId> all(kAllRegions.begin(), kAllRegions.end());

    testutil::TempDir dir("acceptance");
    std::string ckpt_bytes[2], clf_bytes[2], report_bytes[2];
    for (int run = 0; run < 2; ++run) {
        TrainConfig cfg = paper_defaults(99, all);
        cfg.epochs = 5;
        cfg.batch_size = 20;
        const StackDataset train =
            build_dataset(data.manifest(), Split::Train, data.source(), all, 0, cfg.seed);
        const TripletTrainResult trained = train_triplet(train, cfg);
        ClassifierConfig cc;
        cc.seed = derive_seed(cfg.seed, 0xC1F5EEDULL);
        const ClassifierState clf =
            train_classifier(embed_dataset(train, trained.net), train.labels, cc);

        const auto net_path = dir.file("net" + std::to_string(run) + ".ckpt");
        const auto clf_path = dir.file("clf" + std::to_string(run) + ".ckpt");
        save_triplet_checkpoint(trained.net, net_path);
        save_classifier_checkpoint(clf, clf_path);
        ckpt_bytes[run] = testutil::read_text(net_path);
        clf_bytes[run] = testutil::read_text(clf_path);

        const EvalReport report = evaluate(data.manifest(), data.source(), trained.net, clf, all,
                                           {Protocol::Intra}, 0, 0, "determinism");
        report_bytes[run] = report_to_json(report).dump(2);

        // Bit-exact reload through the CRC-verified container.
        const TripletNet<float> back = load_triplet_checkpoint(net_path);
        if (pack_params(back) != pack_params(trained.net)) return "checkpoint reload differs";
        const ClassifierState clf_back = load_classifier_checkpoint(clf_path);
        if (clf_back.w2 != clf.w2 || clf_back.b2 != clf.b2) return "classifier reload differs";
    }
    if (ckpt_bytes[0] != ckpt_bytes[1]) return "triplet checkpoints differ across runs";
    if (clf_bytes[0] != clf_bytes[1]) return "classifier checkpoints differ across runs";
    if (report_bytes[0] != report_bytes[1]) return "EvalReports differ across runs";

    // Feature-cache round-trip, CRC verified inside get().
    FeatureCache cache(dir.file("cache"));
    Rng rng(606);
    for (int i = 0; i < 50; ++i) {
        FeatureStack s;
        s.rows.resize(6, 6);
        for (Index j = 0; j < s.rows.size(); ++j)
            s.rows.data()[j] = static_cast<float>(rng.uniform(-3.0, 3.0));
        s.region_ids.assign(kAllRegions.begin(), kAllRegions.end());
        s.encoder_id = "test-stat";
        s.source = StackKey{"acc", "v" + std::to_string(i), i};
        const FeatureStack back = cache.get(cache.put(s));
        if (std::memcmp(back.rows.data(), s.rows.data(), sizeof(float) * 36) != 0)
            return "cache round-trip not bit-exact";
    }
    return "";
}

std::string criterion_triplet_constraints() {
    Rng rng(707);
    for (int b = 0; b < 500; ++b) {
        std::vector<int> labels;
        const int n_real = 2 + static_cast<int>(rng.below(40));
        const int n_fake = 2 + static_cast<int>(rng.below(40));
        for (int i = 0; i < n_real; ++i) labels.push_back(0);
        for (int i = 0; i < n_fake; ++i) labels.push_back(1);
        const int batch_size = 1 + static_cast<int>(rng.below(64));

        const TripletIndexBatch batch = sample_triplet_indices(labels, batch_size, 9000 + b);
        int reals = 0, fakes = 0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const Index ai = batch.anchors[i], pi = batch.positives[i], ni = batch.negatives[i];
            if (labels[pi] != labels[ai]) return fmt("batch %g: label(P) != label(A)", b);
            if (labels[ni] == labels[ai]) return fmt("batch %g: label(N) == label(A)", b);
            if (pi == ai) return fmt("batch %g: P == A", b);
            (labels[ai] == 0 ? reals : fakes) += 1;
        }
        if (std::abs(reals - fakes) > 1) return fmt("batch %g: anchor imbalance", b);
    }
    return "";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"loss oracle: margin_ranking_loss exact on 10k grid with ties", criterion_loss_oracle, 1.0},
        {"gradient check: FD (h=1e-5, float64) rel err < 1e-4, 20 batches", criterion_gradient_check, 30.0},
        {"AUC oracle: pairwise Mann-Whitney match to 1e-12, 100 instances", criterion_auc_oracle, 10.0},
        {"aggregation: per-video means to 1e-12; 1-frame case V-AUC == F-AUC", criterion_video_aggregation, 0.0},
        {"stack shapes: 6xD canonical, 7-combo subsets, 256-D embedding", criterion_stack_shapes, 0.0},
        {"synthetic separability: defaults reach F-AUC >= 0.95, V-AUC >= 0.98", criterion_synthetic_separability, 300.0},
        {"directional ablation: full and lips beat face-only by >= 0.10", criterion_directional_ablation, 0.0},
        {"margin study: {0,.1,.2,.3} finite; margin 0 within 0.05 of best", criterion_margin_study, 0.0},
        {"determinism: bit-identical checkpoints/reports; CRC round-trips", criterion_determinism, 0.0},
        {"triplet constraints: 500 batches all valid and balanced", criterion_triplet_constraints, 0.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string reason;
        try {
            reason = criteria[i].run();
        } catch (const std::exception& e) {
            reason = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (reason.empty() && criteria[i].limit_seconds > 0.0 &&
            seconds > criteria[i].limit_seconds)
            reason = fmt("runtime %.1f s exceeds %.0f s bound", seconds, criteria[i].limit_seconds);

        std::printf("%s %2zu. %s (%.2f s)%s%s\n", reason.empty() ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), seconds, reason.empty() ? "" : " -- ",
                    reason.c_str());
        std::fflush(stdout);
        failures += !reason.empty();
    }
    if (failures) std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
