#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "afrnet/types.hpp"

namespace afrnet {

struct RecordRef {
    std::string category;   // "Real", "Easy", ...
    std::string record_id;  // "6.png"

    std::string str() const { return category + "/" + record_id; }
    bool operator==(const RecordRef&) const = default;
    auto operator<=>(const RecordRef&) const = default;
};

struct EmbeddingVector {
    RecordRef record_ref;
    std::vector<float> values;
    std::string extractor_id;

    std::size_t dim() const { return values.size(); }
    bool operator==(const EmbeddingVector&) const = default;
};

// 224x224x3 float tensor, channel-major (c, y, x). Channels are identical
// grayscale before per-channel mean subtraction.
struct PreprocessedImage {
    static constexpr int kSide = 224;
    std::vector<float> tensor;  // 3 * 224 * 224
    RecordRef provenance;

    float at(int c, int y, int x) const {
        return tensor[(static_cast<std::size_t>(c) * kSide + y) * kSide + x];
    }
};

// ImageNet channel means (RGB) of the pretrained backbone's training set.
inline constexpr std::array<float, 3> kChannelMeans = {123.68f, 116.779f, 103.939f};

PreprocessedImage preprocess(const FingerprintRecord& record);

// Weight-free reference extractor: 128x128 resize, central-difference
// gradients, magnitude-weighted 9-bin orientation histograms over a 16x16
// cell grid, L2-normalized. dim = 2304.
inline constexpr const char* kBaselineExtractorId = "baseline-ghist-v1";
inline constexpr std::size_t kBaselineDim = 2304;
EmbeddingVector extract_baseline(const FingerprintRecord& record);

using Extractor = std::function<EmbeddingVector(const FingerprintRecord&)>;

// Order-preserving; batching is a throughput detail only. Extraction errors
// are rethrown with the offending record ref prepended.
std::vector<EmbeddingVector> batch_extract(const std::vector<FingerprintRecord>& records,
                                           const Extractor& extractor,
                                           std::size_t batch_size = 32,
                                           std::size_t jobs = 1);

// Cache file: magic "AFRE", u16 version=1, u16 id length + extractor_id,
// u32 dim, u32 count; per record u16 ref length + "category/record_id",
// dim little-endian IEEE-754 f32.
void cache_save(const std::vector<EmbeddingVector>& vectors, std::ostream& out);
std::vector<EmbeddingVector> cache_load(std::istream& in);
void cache_save_file(const std::vector<EmbeddingVector>& vectors, const std::string& path);
std::vector<EmbeddingVector> cache_load_file(const std::string& path);

}  // namespace afrnet
