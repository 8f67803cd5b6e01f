#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "f2p/types.hpp"

namespace f2p {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- manifest ---

struct ManifestIoError : Error {
    explicit ManifestIoError(const std::string& path)
        : Error("cannot open manifest: " + path), path(path) {}
    std::string path;
};

struct MalformedRecord : Error {
    MalformedRecord(std::size_t line_no, const std::string& detail)
        : Error("malformed record at line " + std::to_string(line_no) + ": " + detail),
          line_no(line_no) {}
    std::size_t line_no;
};

struct SplitLeak : Error {
    explicit SplitLeak(const std::string& video_id)
        : Error("video appears in both splits: " + video_id), video_id(video_id) {}
    std::string video_id;
};

struct LabelConflict : Error {
    explicit LabelConflict(const std::string& video_id)
        : Error("video has conflicting labels: " + video_id), video_id(video_id) {}
    std::string video_id;
};

struct DuplicateFrame : Error {
    DuplicateFrame(const std::string& video_id, std::int64_t frame_index)
        : Error("duplicate frame_index " + std::to_string(frame_index) + " in video " + video_id),
          video_id(video_id),
          frame_index(frame_index) {}
    std::string video_id;
    std::int64_t frame_index;
};

struct MissingClass : Error {
    explicit MissingClass(const std::string& split)
        : Error("split '" + split + "' lacks one of the two labels"), split(split) {}
    std::string split;
};

struct UnknownVideo : Error {
    explicit UnknownVideo(const std::string& video_id)
        : Error("unknown video: " + video_id), video_id(video_id) {}
    std::string video_id;
};

// --- images, landmarks, regions ---

struct ImageUnreadable : Error {
    explicit ImageUnreadable(const std::string& path)
        : Error("cannot read image: " + path), path(path) {}
    std::string path;
};

struct NoFaceDetected : Error {
    NoFaceDetected() : Error("no face detected") {}
};

struct DegenerateRegion : Error {
    explicit DegenerateRegion(RegionId region)
        : Error("degenerate region box with no usable fallback"), region(region) {}
    RegionId region;
};

struct NonFiniteInput : Error {
    NonFiniteInput() : Error("input contains non-finite values") {}
};

// --- encoders, stacks, cache ---

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& detail) : Error("shape mismatch: " + detail) {}
};

struct BackendFailure : Error {
    explicit BackendFailure(const std::string& detail) : Error("encoder backend failure: " + detail) {}
};

struct MissingRegion : Error {
    explicit MissingRegion(RegionId region)
        : Error("missing region in feature set"), region(region) {}
    RegionId region;
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& detail) : Error("dimension mismatch: " + detail) {}
};

struct EmptySubset : Error {
    EmptySubset() : Error("region subset is empty") {}
};

struct UnknownRegion : Error {
    explicit UnknownRegion(const std::string& detail) : Error("unknown region: " + detail) {}
};

struct CacheCorrupt : Error {
    explicit CacheCorrupt(const std::string& key)
        : Error("cache entry corrupt: " + key), key(key) {}
    std::string key;
};

struct KeyNotFound : Error {
    explicit KeyNotFound(const std::string& key)
        : Error("cache key not found: " + key), key(key) {}
    std::string key;
};

// --- network ---

struct RowCountMismatch : Error {
    RowCountMismatch(Index expected, Index got)
        : Error("stack row count " + std::to_string(got) + " does not match attention k=" +
                std::to_string(expected)) {}
};

struct WidthMismatch : Error {
    WidthMismatch(Index expected, Index got)
        : Error("flattened stack width " + std::to_string(got) + " does not match head input " +
                std::to_string(expected)) {}
};

struct LengthMismatch : Error {
    LengthMismatch(Index a, Index b)
        : Error("vector lengths differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct NegativeDistance : Error {
    NegativeDistance() : Error("distances must be non-negative") {}
};

struct NonFiniteLoss : Error {
    explicit NonFiniteLoss(const std::string& detail) : Error("non-finite loss: " + detail) {}
};

// --- training / evaluation ---

struct InsufficientClassSamples : Error {
    explicit InsufficientClassSamples(int label)
        : Error("class " + std::to_string(label) + " has fewer than 2 train samples"),
          label(label) {}
    int label;
};

struct SingleClassTrainingSet : Error {
    SingleClassTrainingSet() : Error("classifier training set has a single class") {}
};

struct SingleClassEval : Error {
    SingleClassEval() : Error("evaluation set has a single class") {}
};

struct EmptyVideo : Error {
    explicit EmptyVideo(const std::string& video_id)
        : Error("video has no scored frames: " + video_id), video_id(video_id) {}
    std::string video_id;
};

struct ProtocolDataMissing : Error {
    explicit ProtocolDataMissing(const std::string& detail)
        : Error("protocol data missing: " + detail) {}
};

}  // namespace f2p
