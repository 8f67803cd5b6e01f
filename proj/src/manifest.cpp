#include "f2p/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "f2p/errors.hpp"

namespace f2p {

using nlohmann::json;

std::string_view split_name(Split s) { return s == Split::Train ? "train" : "test"; }

std::optional<Split> split_from_name(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "test") return Split::Test;
    return std::nullopt;
}

Manifest Manifest::from_records(std::vector<FrameRecord> records) {
    Manifest m;
    std::unordered_set<std::string> seen_frames;  // "<dataset>\x1f<video>\x1f<index>"
    for (const auto& r : records) {
        const std::string fk =
            r.dataset_id + '\x1f' + r.video_id + '\x1f' + std::to_string(r.frame_index);
        if (!seen_frames.insert(fk).second) throw DuplicateFrame(r.video_id, r.frame_index);

        auto [lit, lnew] = m.video_label_.try_emplace(r.video_id, r.label);
        if (!lnew && lit->second != r.label) throw LabelConflict(r.video_id);
        auto [sit, snew] = m.video_split_.try_emplace(r.video_id, r.split);
        if (!snew && sit->second != r.split) throw SplitLeak(r.video_id);
    }

    bool train_real = false, train_fake = false;
    for (const auto& r : records) {
        if (r.split != Split::Train) continue;
        (r.label == 0 ? train_real : train_fake) = true;
    }
    if (!train_real || !train_fake) throw MissingClass("train");

    m.records_ = std::move(records);
    return m;
}

std::set<std::string> Manifest::datasets() const {
    std::set<std::string> out;
    for (const auto& r : records_) out.insert(r.dataset_id);
    return out;
}

std::set<std::string> Manifest::manipulations() const {
    std::set<std::string> out;
    for (const auto& r : records_)
        if (r.manipulation_id) out.insert(*r.manipulation_id);
    return out;
}

ManifestCounts Manifest::counts() const {
    ManifestCounts c;
    for (const auto& r : records_) {
        SplitCounts& sc = r.split == Split::Train ? c.train : c.test;
        (r.label == 0 ? sc.real : sc.fake) += 1;
    }
    return c;
}

bool Manifest::has_video(const std::string& video_id) const {
    return video_label_.count(video_id) > 0;
}

int Manifest::video_label(const std::string& video_id) const {
    auto it = video_label_.find(video_id);
    if (it == video_label_.end()) throw UnknownVideo(video_id);
    return it->second;
}

Split Manifest::video_split(const std::string& video_id) const {
    auto it = video_split_.find(video_id);
    if (it == video_split_.end()) throw UnknownVideo(video_id);
    return it->second;
}

std::vector<std::string> Manifest::video_order() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& r : records_)
        if (seen.insert(r.video_id).second) out.push_back(r.video_id);
    return out;
}

namespace {

FrameRecord parse_record(const json& j, std::size_t line_no) {
    FrameRecord r;
    try {
        r.dataset_id = j.at("dataset_id").get<std::string>();
        r.video_id = j.at("video_id").get<std::string>();
        r.frame_index = j.at("frame_index").get<std::int64_t>();
        r.image_path = j.at("image_path").get<std::string>();
        const int label = j.at("label").get<int>();
        if (label != 0 && label != 1)
            throw MalformedRecord(line_no, "label must be 0 or 1");
        r.label = label;
        const auto split = split_from_name(j.at("split").get<std::string>());
        if (!split) throw MalformedRecord(line_no, "split must be 'train' or 'test'");
        r.split = *split;
        const auto& manip = j.at("manipulation_id");
        if (!manip.is_null()) r.manipulation_id = manip.get<std::string>();
    } catch (const json::exception& e) {
        throw MalformedRecord(line_no, e.what());
    }
    if (r.frame_index < 0) throw MalformedRecord(line_no, "frame_index must be non-negative");
    // Dataset and video ids become cache path components.
    for (const std::string* id : {&r.dataset_id, &r.video_id}) {
        if (id->empty() || id->find('/') != std::string::npos || *id == "." || *id == "..")
            throw MalformedRecord(line_no, "dataset_id/video_id must be non-empty and path-safe");
    }
    return r;
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ManifestIoError(path.string());

    std::vector<FrameRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw MalformedRecord(line_no, "not a JSON object");
        records.push_back(parse_record(j, line_no));
    }
    return Manifest::from_records(std::move(records));
}

std::string record_to_json_line(const FrameRecord& r) {
    nlohmann::ordered_json j;
    j["dataset_id"] = r.dataset_id;
    j["video_id"] = r.video_id;
    j["frame_index"] = r.frame_index;
    j["image_path"] = r.image_path;
    j["label"] = r.label;
    j["split"] = std::string(split_name(r.split));
    if (r.manipulation_id)
        j["manipulation_id"] = *r.manipulation_id;
    else
        j["manipulation_id"] = nullptr;
    return j.dump();
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw ManifestIoError(path.string());
    for (const auto& r : m.records()) out << record_to_json_line(r) << '\n';
}

std::vector<FrameRecord> frames_for_video(const Manifest& m, const std::string& video_id) {
    if (!m.has_video(video_id)) throw UnknownVideo(video_id);
    std::vector<FrameRecord> out;
    for (const auto& r : m.records())
        if (r.video_id == video_id) out.push_back(r);
    std::sort(out.begin(), out.end(),
              [](const FrameRecord& a, const FrameRecord& b) { return a.frame_index < b.frame_index; });
    return out;
}

std::vector<FrameRecord> sample_frames(const Manifest& m, const std::string& video_id, int n,
                                       std::uint64_t /*seed*/) {
    if (n <= 0) throw std::invalid_argument("sample_frames: n must be positive");
    const std::vector<FrameRecord> frames = frames_for_video(m, video_id);
    const std::int64_t total = static_cast<std::int64_t>(frames.size());
    if (n >= total) return frames;

    std::vector<FrameRecord> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(frames[static_cast<std::size_t>((total - 1) / 2)]);
        return out;
    }
    for (std::int64_t i = 0; i < n; ++i)
        out.push_back(frames[static_cast<std::size_t>(i * (total - 1) / (n - 1))]);
    return out;
}

}  // namespace f2p
