#include "f2p/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "f2p/errors.hpp"
#include "f2p/types.hpp"

namespace f2p {

double frame_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw LengthMismatch(static_cast<Index>(scores.size()), static_cast<Index>(labels.size()));

    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += l == 1;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw SingleClassEval();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks within tie groups; the rank sum of positives gives the
    // Mann-Whitney statistic. Average ranks are half-integers, so the sums
    // below are exact in double for any realistic n.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t)
            if (labels[order[t]] == 1) pos_rank_sum += avg_rank;
        i = j + 1;
    }

    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<double> video_scores(const std::vector<VideoGroup>& groups) {
    std::vector<double> out;
    out.reserve(groups.size());
    for (const VideoGroup& g : groups) {
        if (g.frame_scores.empty()) throw EmptyVideo(g.video_id);
        double sum = 0.0;
        for (double s : g.frame_scores) sum += s;
        out.push_back(sum / static_cast<double>(g.frame_scores.size()));
    }
    return out;
}

}  // namespace f2p
