#pragma once

#include <filesystem>

#include "f2p/classifier.hpp"
#include "f2p/triplet.hpp"

namespace f2p {

// Single-file binary checkpoints, bit-exact on reload:
//   "F2PK" | u32 version | u32 kind | u64 seed | u32 n_meta | u32 meta[]
//   | u64 n_params | f32 payload[] | u32 crc32(payload)
// kind 1 (embedding net): meta = [k, D, gate_mode, 2k, 2k, k, hidden, out]
// kind 2 (classifier):    meta = [input_dim, hidden]
void save_triplet_checkpoint(const TripletNet<float>& net, const std::filesystem::path& path);
TripletNet<float> load_triplet_checkpoint(const std::filesystem::path& path);

void save_classifier_checkpoint(const ClassifierState& clf, const std::filesystem::path& path);
ClassifierState load_classifier_checkpoint(const std::filesystem::path& path);

}  // namespace f2p
