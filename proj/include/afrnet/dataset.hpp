#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "afrnet/types.hpp"

namespace afrnet {

struct ParsedName {
    IdentityKey identity;
    AlterationLevel alteration;  // Real when no method suffix; Easy as a
                                 // placeholder tier otherwise (the real tier
                                 // comes from the directory, see relabel)
};

// Parses a SOCOFing basename such as "1__M_Left_index_finger.BMP" or
// "1__M_Left_index_finger_Obl.BMP". Throws UnparseableName /
// UnknownAlterationTag.
ParsedName parse_socofing_name(const std::string& filename);

// Assigns canonical record ids "1.png", "2.png", ... over the listing sorted
// lexicographically by source name. The category tier overrides whatever the
// filenames imply. Throws DuplicateSource on a repeated source name.
Manifest relabel(std::vector<std::string> source_listing, Level category);

// CSV: header source_name,record_id,subject,gender,hand,finger,level,method_tag
void save_manifest_csv(const Manifest& m, std::ostream& out);
Manifest load_manifest_csv(std::istream& in);

// Deterministic seeded shuffle then floor(train_fraction * n) split.
struct Split {
    std::vector<FingerprintRecord> train;
    std::vector<FingerprintRecord> test;
};
Split split(const std::vector<FingerprintRecord>& records, double train_fraction,
            std::uint64_t seed);

// Augmentation ops. Rotation/scale resample bilinearly; exposed corners fill
// with 255 (fingerprint scans are dark ridges on white).
struct Rotate {
    double degrees = 0.0;
};
struct Scale {
    double factor = 1.0;
};
struct FlipHorizontal {};
struct FlipVertical {};
struct GaussianNoise {
    double sigma = 0.0;
};
using AugmentOp = std::variant<Rotate, Scale, FlipHorizontal, FlipVertical, GaussianNoise>;

std::vector<Image> augment(const Image& input, const std::vector<AugmentOp>& ops,
                           std::uint64_t seed);

struct CategoryCounts {
    std::map<Level, std::size_t> per_level;
    std::size_t total = 0;
};
CategoryCounts category_counts(const std::vector<Manifest>& manifests);

// Shared bilinear resampler (also used by the feature extractors).
Image resize_bilinear(const Image& input, int out_width, int out_height);

}  // namespace afrnet
