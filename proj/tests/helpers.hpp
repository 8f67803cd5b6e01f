#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("f2p_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string manifest_line(const std::string& dataset, const std::string& video, long frame,
                                 int label, const std::string& split,
                                 const std::string& manip = "", const std::string& path = "") {
    std::string p = path.empty() ? ("/img/" + video + "_" + std::to_string(frame) + ".png") : path;
    std::string m = manip.empty() ? "null" : ("\"" + manip + "\"");
    return "{\"dataset_id\":\"" + dataset + "\",\"video_id\":\"" + video +
           "\",\"frame_index\":" + std::to_string(frame) + ",\"image_path\":\"" + p +
           "\",\"label\":" + std::to_string(label) + ",\"split\":\"" + split +
           "\",\"manipulation_id\":" + m + "}\n";
}

}  // namespace testutil
