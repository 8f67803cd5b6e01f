#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "f2p/classifier.hpp"
#include "f2p/dataset.hpp"
#include "f2p/sampler.hpp"
#include "f2p/triplet.hpp"

namespace f2p {

struct TrainConfig {
    float margin = 0.0f;
    float learning_rate = 1e-4f;
    int batch_size = 100;
    int epochs = 20;
    std::string optimizer = "adam";
    std::uint64_t seed = 0;
    std::vector<RegionId> active_regions{kAllRegions.begin(), kAllRegions.end()};
    GateMode gate_mode = GateMode::Sigmoid;
};

struct TripletTrainResult {
    TripletNet<float> net;
    std::vector<float> epoch_loss;  // mean batch loss per epoch
};

// Phase-2 training: ceil(n/batch_size) freshly sampled batches per epoch,
// Adam on the shared network. Deterministic per (dataset, config) under
// single-worker execution. Throws NonFiniteLoss with diagnostics.
TripletTrainResult train_triplet(const StackDataset& train, const TrainConfig& cfg);

TripletTrainResult train_triplet(const Manifest& manifest, const StackSourceFn& source,
                                 const TrainConfig& cfg, int frame_budget = 0);

struct ClassifierConfig {
    int epochs = 50;
    float learning_rate = 1e-3f;
    int hidden = 0;  // 0 = plain logistic head
    std::uint64_t seed = 0;
};

// Phase-3: binary cross-entropy on frozen embeddings, full-batch Adam.
// Throws SingleClassTrainingSet.
ClassifierState train_classifier(const MatrixF& embeddings, const std::vector<int>& labels,
                                 const ClassifierConfig& cfg = {});

// Embeddings of every dataset sample under frozen parameters, one row each.
MatrixF embed_dataset(const StackDataset& dataset, const TripletNet<float>& net);

void write_loss_csv(const std::vector<float>& epoch_loss, const std::filesystem::path& path);

}  // namespace f2p
