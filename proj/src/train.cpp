#include "f2p/train.hpp"

#include <cmath>
#include <fstream>

#include "f2p/adam.hpp"
#include "f2p/rng.hpp"

namespace f2p {

TripletTrainResult train_triplet(const StackDataset& train, const TrainConfig& cfg) {
    if (cfg.optimizer != "adam") throw Error("unknown optimizer: " + cfg.optimizer);
    if (train.size() == 0) throw InsufficientClassSamples(0);
    const Index k = train.k();
    const Index dim = train.dim();
    for (const FeatureStack& s : train.stacks)
        if (s.k() != k || s.dim() != dim)
            throw DimensionMismatch("training stacks disagree on k x D");

    TripletTrainResult result;
    result.net = init_triplet_net<float>(k, dim, cfg.seed, cfg.gate_mode);

    VectorF params = pack_params(result.net);
    Adam<float> opt(params.size(), cfg.learning_rate);
    const int steps_per_epoch =
        static_cast<int>((train.size() + cfg.batch_size - 1) / static_cast<std::size_t>(cfg.batch_size));

    std::vector<MatrixF> a, p, n;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_sum = 0.0;
        for (int step = 0; step < steps_per_epoch; ++step) {
            const std::uint64_t batch_seed =
                derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch) * 0x10001ULL +
                                          static_cast<std::uint64_t>(step),
                            0xB47C4ULL);
            const TripletIndexBatch idx =
                sample_triplet_indices(train.labels, cfg.batch_size, batch_seed);
            a.clear(); p.clear(); n.clear();
            for (std::size_t i = 0; i < idx.size(); ++i) {
                a.push_back(train.stacks[static_cast<std::size_t>(idx.anchors[i])].rows);
                p.push_back(train.stacks[static_cast<std::size_t>(idx.positives[i])].rows);
                n.push_back(train.stacks[static_cast<std::size_t>(idx.negatives[i])].rows);
            }

            NetGrads<float> grads = zero_grads_like(result.net);
            const float loss = triplet_loss_and_grads(a, p, n, result.net, cfg.margin, grads);
            if (!std::isfinite(loss))
                throw NonFiniteLoss("epoch " + std::to_string(epoch) + " step " +
                                    std::to_string(step));
            epoch_sum += loss;

            opt.step(params, pack_grads(result.net, grads));
            unpack_params(params, result.net);
        }
        result.epoch_loss.push_back(static_cast<float>(epoch_sum / steps_per_epoch));
    }
    return result;
}

TripletTrainResult train_triplet(const Manifest& manifest, const StackSourceFn& source,
                                 const TrainConfig& cfg, int frame_budget) {
    const StackDataset train =
        build_dataset(manifest, Split::Train, source, cfg.active_regions, frame_budget, cfg.seed);
    return train_triplet(train, cfg);
}

ClassifierState train_classifier(const MatrixF& embeddings, const std::vector<int>& labels,
                                 const ClassifierConfig& cfg) {
    const Index n = embeddings.rows();
    if (static_cast<Index>(labels.size()) != n)
        throw LengthMismatch(n, static_cast<Index>(labels.size()));
    bool any_real = false, any_fake = false;
    for (int l : labels) (l == 0 ? any_real : any_fake) = true;
    if (!any_real || !any_fake) throw SingleClassTrainingSet();

    const Index in = embeddings.cols();
    ClassifierState clf;
    clf.hidden = cfg.hidden;
    Rng rng(derive_seed(cfg.seed, 0xC1A55ULL));
    if (cfg.hidden > 0) {
        clf.w1.resize(cfg.hidden, in);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        for (Index i = 0; i < clf.w1.size(); ++i)
            clf.w1.data()[i] = static_cast<float>(rng.uniform(-bound, bound));
        clf.b1 = VectorF::Zero(cfg.hidden);
        clf.w2 = VectorF::Zero(cfg.hidden);
    } else {
        clf.w2 = VectorF::Zero(in);
    }
    clf.b2 = 0.0f;

    VectorF y(n);
    for (Index i = 0; i < n; ++i) y[i] = static_cast<float>(labels[static_cast<std::size_t>(i)]);

    // Flat parameter vector: [w1, b1,] w2, b2.
    const Index n_params = clf.w1.size() + clf.b1.size() + clf.w2.size() + 1;
    VectorF params(n_params);
    const auto pack = [&] {
        Index at = 0;
        if (cfg.hidden > 0) {
            params.segment(at, clf.w1.size()) =
                Eigen::Map<const VectorF>(clf.w1.data(), clf.w1.size());
            at += clf.w1.size();
            params.segment(at, clf.b1.size()) = clf.b1;
            at += clf.b1.size();
        }
        params.segment(at, clf.w2.size()) = clf.w2;
        at += clf.w2.size();
        params[at] = clf.b2;
    };
    const auto unpack = [&] {
        Index at = 0;
        if (cfg.hidden > 0) {
            Eigen::Map<VectorF>(clf.w1.data(), clf.w1.size()) = params.segment(at, clf.w1.size());
            at += clf.w1.size();
            clf.b1 = params.segment(at, clf.b1.size());
            at += clf.b1.size();
        }
        clf.w2 = params.segment(at, clf.w2.size());
        at += clf.w2.size();
        clf.b2 = params[at];
    };
    pack();

    Adam<float> opt(n_params, cfg.learning_rate);
    const float inv_n = 1.0f / static_cast<float>(n);
    VectorF grads(n_params);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // dBCE/dz = p - y, averaged over the batch.
        VectorF dz(n);
        MatrixF h;  // hidden activations when configured
        if (cfg.hidden > 0) {
            h = ((clf.w1 * embeddings.transpose()).colwise() + clf.b1).cwiseMax(0.0f).transpose();
            for (Index i = 0; i < n; ++i) {
                const float z = clf.w2.dot(h.row(i).transpose()) + clf.b2;
                dz[i] = (1.0f / (1.0f + std::exp(-z)) - y[i]) * inv_n;
            }
        } else {
            const VectorF z = (embeddings * clf.w2).array() + clf.b2;
            for (Index i = 0; i < n; ++i)
                dz[i] = (1.0f / (1.0f + std::exp(-z[i])) - y[i]) * inv_n;
        }

        Index at = 0;
        if (cfg.hidden > 0) {
            MatrixF dh = dz * clf.w2.transpose();              // n x hidden
            dh.array() *= (h.array() > 0.0f).cast<float>();
            const MatrixF gw1 = dh.transpose() * embeddings;   // hidden x in
            grads.segment(at, gw1.size()) = Eigen::Map<const VectorF>(gw1.data(), gw1.size());
            at += gw1.size();
            grads.segment(at, cfg.hidden) = dh.colwise().sum().transpose();
            at += cfg.hidden;
            grads.segment(at, clf.w2.size()) = h.transpose() * dz;
            at += clf.w2.size();
        } else {
            grads.segment(at, clf.w2.size()) = embeddings.transpose() * dz;
            at += clf.w2.size();
        }
        grads[at] = dz.sum();

        opt.step(params, grads);
        unpack();
    }
    return clf;
}

MatrixF embed_dataset(const StackDataset& dataset, const TripletNet<float>& net) {
    MatrixF out(static_cast<Index>(dataset.size()), kEmbeddingDim);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const VectorF e = embed(dataset.stacks[i], net);
        if (!e.allFinite())
            throw NonFiniteLoss("embedding of " + dataset.video_ids[i] + "/" +
                                std::to_string(dataset.stacks[i].source.frame_index));
        out.row(static_cast<Index>(i)) = e.transpose();
    }
    return out;
}

void write_loss_csv(const std::vector<float>& epoch_loss, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write loss curve: " + path.string());
    out << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < epoch_loss.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i, static_cast<double>(epoch_loss[i]));
        out << buf;
    }
}

}  // namespace f2p
