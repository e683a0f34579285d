#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace afrnet {

// 8-bit grayscale image, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // height * width

    Image() = default;
    Image(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    bool empty() const { return width <= 0 || height <= 0; }

    bool operator==(const Image&) const = default;
};

enum class Gender { M, F };
enum class Hand { Left, Right };
enum class Finger { Thumb, Index, Middle, Ring, Little };

struct IdentityKey {
    int subject_id = 0;  // >= 1
    Gender gender = Gender::M;
    Hand hand = Hand::Left;
    Finger finger = Finger::Thumb;

    bool operator==(const IdentityKey&) const = default;
    auto operator<=>(const IdentityKey&) const = default;
};

enum class Level { Real, Easy, Medium, Hard };

struct AlterationLevel {
    Level level = Level::Real;
    std::optional<std::string> method_tag;  // absent iff level == Real

    bool operator==(const AlterationLevel&) const = default;
};

std::string to_string(Gender g);
std::string to_string(Hand h);
std::string to_string(Finger f);
std::string to_string(Level l);

std::optional<Level> parse_level(const std::string& s);  // case-insensitive

struct FingerprintRecord {
    std::string record_id;  // canonical name, e.g. "6.png"
    IdentityKey identity;
    AlterationLevel alteration;
    Image pixels;
    std::string source_name;  // original filename
};

struct ManifestEntry {
    std::string source_name;
    std::string record_id;
    IdentityKey identity;
    AlterationLevel alteration;

    bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
    std::string created_at;  // ISO-8601; empty in deterministic mode
    std::map<Level, std::size_t> category_counts;
};

}  // namespace afrnet
