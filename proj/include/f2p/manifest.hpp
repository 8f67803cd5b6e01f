#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "f2p/types.hpp"

namespace f2p {

enum class Split : std::uint8_t { Train = 0, Test = 1 };

std::string_view split_name(Split s);
std::optional<Split> split_from_name(std::string_view name);

// One labeled frame of one video; the ingestion unit.
struct FrameRecord {
    std::string dataset_id;
    std::string video_id;
    std::int64_t frame_index = 0;
    std::string image_path;
    int label = 0;  // 0 = real, 1 = fake
    Split split = Split::Train;
    std::optional<std::string> manipulation_id;

    bool operator==(const FrameRecord&) const = default;

    StackKey key() const { return StackKey{dataset_id, video_id, frame_index}; }
};

struct SplitCounts {
    std::int64_t real = 0;
    std::int64_t fake = 0;
    bool operator==(const SplitCounts&) const = default;
};

struct ManifestCounts {
    SplitCounts train;
    SplitCounts test;
    bool operator==(const ManifestCounts&) const = default;
};

// Immutable after construction; all invariants checked up front.
class Manifest {
public:
    // Validates: per-(dataset,video) frame_index uniqueness, one label and one
    // split per video_id, both labels present in the train split.
    static Manifest from_records(std::vector<FrameRecord> records);

    const std::vector<FrameRecord>& records() const { return records_; }
    std::set<std::string> datasets() const;
    std::set<std::string> manipulations() const;

    // Recomputed from records on every call; nothing stored that could diverge.
    ManifestCounts counts() const;

    bool has_video(const std::string& video_id) const;
    int video_label(const std::string& video_id) const;    // UnknownVideo
    Split video_split(const std::string& video_id) const;  // UnknownVideo

    // Video ids in order of first appearance in the record stream.
    std::vector<std::string> video_order() const;

private:
    Manifest() = default;
    std::vector<FrameRecord> records_;
    std::map<std::string, int> video_label_;
    std::map<std::string, Split> video_split_;
};

// JSON-lines, one record per line, UTF-8, LF. Throws ManifestIoError,
// MalformedRecord, SplitLeak, LabelConflict, DuplicateFrame, MissingClass.
Manifest load_manifest(const std::filesystem::path& path);

// Canonical serialization; load_manifest(save_manifest(m)) == m field-for-field.
void save_manifest(const Manifest& m, const std::filesystem::path& path);
std::string record_to_json_line(const FrameRecord& r);

// All frames of a video, ascending frame_index. Throws UnknownVideo.
std::vector<FrameRecord> frames_for_video(const Manifest& m, const std::string& video_id);

// min(n, available) frames, uniformly spaced over the sorted frame list:
// position i -> floor(i * (T-1) / (n-1)); a single sample takes the middle
// frame. The spacing rule is deterministic; `seed` is accepted for interface
// stability and does not influence the result.
std::vector<FrameRecord> sample_frames(const Manifest& m, const std::string& video_id, int n,
                                       std::uint64_t seed);

}  // namespace f2p
