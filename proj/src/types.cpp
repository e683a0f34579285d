#include "afrnet/types.hpp"

#include <algorithm>
#include <cctype>

namespace afrnet {

std::string to_string(Gender g) { return g == Gender::M ? "M" : "F"; }
std::string to_string(Hand h) { return h == Hand::Left ? "Left" : "Right"; }

std::string to_string(Finger f) {
    switch (f) {
        case Finger::Thumb: return "thumb";
        case Finger::Index: return "index";
        case Finger::Middle: return "middle";
        case Finger::Ring: return "ring";
        case Finger::Little: return "little";
    }
    return {};
}

std::string to_string(Level l) {
    switch (l) {
        case Level::Real: return "Real";
        case Level::Easy: return "Easy";
        case Level::Medium: return "Medium";
        case Level::Hard: return "Hard";
    }
    return {};
}

std::optional<Level> parse_level(const std::string& s) {
    std::string lower;
    lower.reserve(s.size());
    std::transform(s.begin(), s.end(), std::back_inserter(lower),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "real") return Level::Real;
    if (lower == "easy") return Level::Easy;
    if (lower == "medium") return Level::Medium;
    if (lower == "hard") return Level::Hard;
    return std::nullopt;
}

}  // namespace afrnet
