#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "f2p/classifier.hpp"
#include "f2p/dataset.hpp"
#include "f2p/train.hpp"
#include "f2p/triplet.hpp"

namespace f2p {

enum class Protocol : std::uint8_t { Intra = 0, Inter = 1, InterManipulation = 2 };

std::string_view protocol_name(Protocol p);

struct ProtocolSpec {
    Protocol kind = Protocol::Intra;
    std::string train_target;  // bookkeeping: dataset or manipulation trained on
    std::string test_target;   // dataset (inter) or manipulation (inter_manipulation)
};

struct DatasetMetrics {
    double frame_auc = 0.0;
    double video_auc = 0.0;
    std::int64_t n_frames = 0;
    std::int64_t n_videos = 0;
};

struct EvalReport {
    std::string protocol;
    std::string train_target;
    std::string test_target;
    std::vector<RegionId> regions;
    std::string config_fingerprint;
    std::map<std::string, DatasetMetrics> per_dataset;
};

// Scores the protocol's test records with the frozen network + classifier and
// reports frame-level and video-level AUC per test target.
//   intra:               every dataset's test split, keyed by dataset
//   inter:               test split of test_target only
//   inter_manipulation:  test split, reals plus fakes of test_target,
//                        keyed "<dataset>/<manipulation>"
// Throws ProtocolDataMissing, SingleClassEval.
EvalReport evaluate(const Manifest& manifest, const StackSourceFn& source,
                    const TripletNet<float>& net, const ClassifierState& classifier,
                    const std::vector<RegionId>& regions, const ProtocolSpec& protocol,
                    int frame_budget = 0, std::uint64_t seed = 0,
                    const std::string& fingerprint = "");

nlohmann::json report_to_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

// Full train+evaluate cycle per region combination; seeds derived per combo
// index so rows are independent but the table reproduces exactly.
struct AblationRow {
    std::string combo;
    std::vector<RegionId> regions;
    EvalReport report;
};

std::vector<AblationRow> ablate_levels(const Manifest& manifest, const StackSourceFn& source,
                                       const TrainConfig& base,
                                       const std::vector<std::vector<RegionId>>& combos,
                                       const ClassifierConfig& clf_cfg = {},
                                       int frame_budget = 0);

// The seven level combinations {1},{2},{3},{1,2},{1,3},{2,3},{1,2,3}.
std::vector<std::vector<RegionId>> level_combo_grid();

std::string combo_name(const std::vector<RegionId>& regions);
std::string ablation_table(const std::vector<AblationRow>& rows);

// Short stable fingerprint (hex CRC-32 of a canonical config dump).
std::string config_fingerprint(const std::string& canonical_config);

}  // namespace f2p
