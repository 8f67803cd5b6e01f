#pragma once

#include <string>
#include <vector>

namespace f2p {

// Rank-based ROC AUC (Mann-Whitney), ties credited 0.5. Labels are 0/1 with
// 1 the positive class. Throws LengthMismatch, SingleClassEval.
double frame_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct VideoGroup {
    std::string video_id;
    std::vector<double> frame_scores;
};

// Arithmetic mean per video, group order preserved. Throws EmptyVideo.
std::vector<double> video_scores(const std::vector<VideoGroup>& groups);

}  // namespace f2p
