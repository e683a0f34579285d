#include "afrnet/features.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "afrnet/dataset.hpp"
#include "afrnet/errors.hpp"

namespace afrnet {

namespace {

RecordRef ref_of(const FingerprintRecord& record) {
    return {to_string(record.alteration.level), record.record_id};
}

}  // namespace

PreprocessedImage preprocess(const FingerprintRecord& record) {
    if (record.pixels.empty()) throw EmptyImage("preprocess: empty image for " + record.record_id);

    constexpr int side = PreprocessedImage::kSide;
    Image resized = (record.pixels.width == side && record.pixels.height == side)
                        ? record.pixels
                        : resize_bilinear(record.pixels, side, side);

    PreprocessedImage out;
    out.provenance = ref_of(record);
    out.tensor.resize(3u * side * side);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x)
                out.tensor[(static_cast<std::size_t>(c) * side + y) * side + x] =
                    static_cast<float>(resized.at(x, y)) - kChannelMeans[static_cast<std::size_t>(c)];
    return out;
}

EmbeddingVector extract_baseline(const FingerprintRecord& record) {
    if (record.pixels.empty())
        throw EmptyImage("extract_baseline: empty image for " + record.record_id);

    constexpr int side = 128, cells = 16, cell_px = side / cells, bins = 9;
    Image img = resize_bilinear(record.pixels, side, side);

    std::vector<double> hist(static_cast<std::size_t>(cells) * cells * bins, 0.0);
    const double pi = std::acos(-1.0);
    auto px = [&](int x, int y) {
        return static_cast<double>(img.at(std::clamp(x, 0, side - 1), std::clamp(y, 0, side - 1)));
    };
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            double gx = (px(x + 1, y) - px(x - 1, y)) / 2.0;
            double gy = (px(x, y + 1) - px(x, y - 1)) / 2.0;
            double mag = std::sqrt(gx * gx + gy * gy);
            if (mag == 0.0) continue;
            double theta = std::atan2(gy, gx);  // unsigned orientation in [0, pi)
            if (theta < 0) theta += pi;
            if (theta >= pi) theta -= pi;
            int bin = std::min(bins - 1, static_cast<int>(theta / pi * bins));
            int cx = x / cell_px, cy = y / cell_px;
            hist[(static_cast<std::size_t>(cy) * cells + cx) * bins + bin] += mag;
        }
    }

    double norm_sq = 0.0;
    for (double h : hist) norm_sq += h * h;
    if (norm_sq == 0.0)
        throw DegenerateEmbedding("constant image yields a zero embedding: " + record.record_id);
    double inv_norm = 1.0 / std::sqrt(norm_sq);

    EmbeddingVector v;
    v.record_ref = ref_of(record);
    v.extractor_id = kBaselineExtractorId;
    v.values.reserve(hist.size());
    for (double h : hist) v.values.push_back(static_cast<float>(h * inv_norm));
    return v;
}

std::vector<EmbeddingVector> batch_extract(const std::vector<FingerprintRecord>& records,
                                           const Extractor& extractor, std::size_t batch_size,
                                           std::size_t jobs) {
    if (batch_size < 1) throw BadParameter("batch_size must be >= 1");
    std::vector<EmbeddingVector> out(records.size());

    auto run_one = [&](std::size_t i) {
        try {
            out[i] = extractor(records[i]);
        } catch (const Error& e) {
            throw Error(ref_of(records[i]).str() + ": " + e.what());
        }
    };

    for (std::size_t start = 0; start < records.size(); start += batch_size) {
        std::size_t end = std::min(start + batch_size, records.size());
        if (jobs <= 1) {
            for (std::size_t i = start; i < end; ++i) run_one(i);
        } else {
            std::vector<std::thread> workers;
            std::exception_ptr first_error;
            std::mutex mu;
            std::atomic<std::size_t> next{start};
            for (std::size_t w = 0; w < std::min(jobs, end - start); ++w) {
                workers.emplace_back([&] {
                    for (std::size_t i = next++; i < end; i = next++) {
                        try {
                            run_one(i);
                        } catch (...) {
                            std::lock_guard lock(mu);
                            if (!first_error) first_error = std::current_exception();
                            return;
                        }
                    }
                });
            }
            for (auto& t : workers) t.join();
            if (first_error) std::rethrow_exception(first_error);
        }
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'A', 'F', 'R', 'E'};
constexpr std::uint16_t kVersion = 1;

void wr_u16(std::ostream& out, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    out.write(b, 2);
}
void wr_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>(v >> 24)};
    out.write(b, 4);
}
std::uint16_t rd_u16(std::istream& in) {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    if (!in) throw CorruptCache("truncated cache");
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}
std::uint32_t rd_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw CorruptCache("truncated cache");
    return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
}

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

}  // namespace

void cache_save(const std::vector<EmbeddingVector>& vectors, std::ostream& out) {
    if (vectors.empty()) throw BadParameter("cannot save an empty cache");
    const std::string& id = vectors.front().extractor_id;
    const std::size_t dim = vectors.front().dim();
    for (const auto& v : vectors) {
        if (v.extractor_id != id)
            throw MixedExtractors("mixed extractor ids: " + id + " vs " + v.extractor_id);
        if (v.dim() != dim) throw DimMismatch("inconsistent dims in cache");
    }

    out.write(kMagic, 4);
    wr_u16(out, kVersion);
    wr_u16(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    wr_u32(out, static_cast<std::uint32_t>(dim));
    wr_u32(out, static_cast<std::uint32_t>(vectors.size()));
    for (const auto& v : vectors) {
        std::string ref = v.record_ref.str();
        wr_u16(out, static_cast<std::uint16_t>(ref.size()));
        out.write(ref.data(), static_cast<std::streamsize>(ref.size()));
        for (float f : v.values) {
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            wr_u32(out, bits);
        }
    }
}

std::vector<EmbeddingVector> cache_load(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw CorruptCache("bad magic");
    if (rd_u16(in) != kVersion) throw CorruptCache("unsupported cache version");

    std::uint16_t id_len = rd_u16(in);
    std::string id(id_len, '\0');
    in.read(id.data(), id_len);
    if (!in) throw CorruptCache("truncated extractor id");
    std::uint32_t dim = rd_u32(in);
    std::uint32_t count = rd_u32(in);

    std::vector<EmbeddingVector> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint16_t ref_len = rd_u16(in);
        std::string ref(ref_len, '\0');
        in.read(ref.data(), ref_len);
        if (!in) throw CorruptCache("truncated record ref");
        auto slash = ref.find('/');
        if (slash == std::string::npos) throw CorruptCache("malformed record ref: " + ref);

        EmbeddingVector v;
        v.record_ref = {ref.substr(0, slash), ref.substr(slash + 1)};
        v.extractor_id = id;
        v.values.resize(dim);
        for (std::uint32_t d = 0; d < dim; ++d) {
            std::uint32_t bits = rd_u32(in);
            std::memcpy(&v.values[d], &bits, 4);
        }
        out.push_back(std::move(v));
    }
    return out;
}

void cache_save_file(const std::vector<EmbeddingVector>& vectors, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open cache for writing: " + path);
    cache_save(vectors, out);
}

std::vector<EmbeddingVector> cache_load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptCache("cannot open cache: " + path);
    return cache_load(in);
}

}  // namespace afrnet
