#include "afrnet/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "afrnet/errors.hpp"

namespace afrnet {

namespace {

std::vector<std::string> split_tokens(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip_extension(const std::string& name) {
    auto dot = name.rfind('.');
    if (dot == std::string::npos || dot == 0)
        throw UnparseableName("missing extension: " + name);
    return name.substr(0, dot);
}

const std::set<std::string> kKnownMethods = {"Obl", "CR", "Zcut"};

}  // namespace

ParsedName parse_socofing_name(const std::string& filename) {
    if (filename.empty()) throw UnparseableName("empty filename");
    std::string stem = strip_extension(filename);

    // <subject>__<G>_<Hand>_<finger>_finger[_<Method>]
    auto sep = stem.find("__");
    if (sep == std::string::npos) throw UnparseableName("no subject separator: " + filename);

    IdentityKey id;
    try {
        std::size_t consumed = 0;
        id.subject_id = std::stoi(stem.substr(0, sep), &consumed);
        if (consumed != sep || id.subject_id < 1)
            throw UnparseableName("bad subject id: " + filename);
    } catch (const std::logic_error&) {
        throw UnparseableName("bad subject id: " + filename);
    }

    auto tokens = split_tokens(stem.substr(sep + 2), '_');
    if (tokens.size() < 4) throw UnparseableName("too few tokens: " + filename);

    if (tokens[0] == "M")
        id.gender = Gender::M;
    else if (tokens[0] == "F")
        id.gender = Gender::F;
    else
        throw UnparseableName("bad gender token: " + filename);

    if (tokens[1] == "Left")
        id.hand = Hand::Left;
    else if (tokens[1] == "Right")
        id.hand = Hand::Right;
    else
        throw UnparseableName("bad hand token: " + filename);

    if (tokens[2] == "thumb")
        id.finger = Finger::Thumb;
    else if (tokens[2] == "index")
        id.finger = Finger::Index;
    else if (tokens[2] == "middle")
        id.finger = Finger::Middle;
    else if (tokens[2] == "ring")
        id.finger = Finger::Ring;
    else if (tokens[2] == "little")
        id.finger = Finger::Little;
    else
        throw UnparseableName("bad finger token: " + filename);

    if (tokens[3] != "finger") throw UnparseableName("missing 'finger' token: " + filename);

    ParsedName parsed;
    parsed.identity = id;
    if (tokens.size() == 4) {
        parsed.alteration = {Level::Real, std::nullopt};
    } else if (tokens.size() == 5) {
        if (!kKnownMethods.contains(tokens[4]))
            throw UnknownAlterationTag("unknown alteration tag '" + tokens[4] + "' in " + filename);
        // tier placeholder; the caller owns the Easy/Medium/Hard decision
        parsed.alteration = {Level::Easy, tokens[4]};
    } else {
        throw UnparseableName("trailing tokens: " + filename);
    }
    return parsed;
}

Manifest relabel(std::vector<std::string> source_listing, Level category) {
    std::sort(source_listing.begin(), source_listing.end());
    Manifest m;
    std::set<std::string> seen;
    int next = 1;
    for (const auto& name : source_listing) {
        if (!seen.insert(name).second) throw DuplicateSource("duplicate source: " + name);
        ParsedName parsed = parse_socofing_name(name);
        if (category == Level::Real && parsed.alteration.method_tag)
            throw UnparseableName("altered filename in Real category: " + name);
        AlterationLevel alt{category, parsed.alteration.method_tag};
        m.entries.push_back(
            {name, std::to_string(next++) + ".png", parsed.identity, alt});
    }
    m.category_counts[category] = m.entries.size();

    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    m.created_at = buf;
    return m;
}

void save_manifest_csv(const Manifest& m, std::ostream& out) {
    out << "source_name,record_id,subject,gender,hand,finger,level,method_tag\n";
    for (const auto& e : m.entries) {
        out << e.source_name << ',' << e.record_id << ',' << e.identity.subject_id << ','
            << to_string(e.identity.gender) << ',' << to_string(e.identity.hand) << ','
            << to_string(e.identity.finger) << ',' << to_string(e.alteration.level) << ','
            << e.alteration.method_tag.value_or("") << '\n';
    }
}

Manifest load_manifest_csv(std::istream& in) {
    Manifest m;
    std::string line;
    if (!std::getline(in, line) ||
        line != "source_name,record_id,subject,gender,hand,finger,level,method_tag")
        throw Error("bad manifest header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_tokens(line, ',');
        if (f.size() != 8) throw Error("bad manifest row: " + line);
        ManifestEntry e;
        e.source_name = f[0];
        e.record_id = f[1];
        e.identity.subject_id = std::stoi(f[2]);
        e.identity.gender = f[3] == "M" ? Gender::M : Gender::F;
        e.identity.hand = f[4] == "Left" ? Hand::Left : Hand::Right;
        if (f[5] == "thumb") e.identity.finger = Finger::Thumb;
        else if (f[5] == "index") e.identity.finger = Finger::Index;
        else if (f[5] == "middle") e.identity.finger = Finger::Middle;
        else if (f[5] == "ring") e.identity.finger = Finger::Ring;
        else e.identity.finger = Finger::Little;
        auto level = parse_level(f[5 + 1]);
        if (!level) throw Error("bad level in manifest: " + line);
        e.alteration.level = *level;
        if (!f[7].empty()) e.alteration.method_tag = f[7];
        m.entries.push_back(e);
        m.category_counts[e.alteration.level]++;
    }
    return m;
}

Split split(const std::vector<FingerprintRecord>& records, double train_fraction,
            std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidFraction("train_fraction must be in (0,1)");
    if (records.empty()) throw InvalidFraction("empty record list");

    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    // Fisher-Yates with an explicit engine so the split is stable everywhere.
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(order[i], order[j]);
    }

    auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(records.size())));
    Split s;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_train ? s.train : s.test).push_back(records[order[i]]);
    return s;
}

Image resize_bilinear(const Image& input, int out_width, int out_height) {
    if (input.empty()) throw EmptyImage("resize on empty image");
    if (out_width < 1 || out_height < 1) throw BadParameter("bad resize target");

    Image out(out_width, out_height);
    const double sx = static_cast<double>(input.width) / out_width;
    const double sy = static_cast<double>(input.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        int y0c = std::clamp(y0, 0, input.height - 1);
        int y1c = std::clamp(y0 + 1, 0, input.height - 1);
        for (int x = 0; x < out_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            int x0c = std::clamp(x0, 0, input.width - 1);
            int x1c = std::clamp(x0 + 1, 0, input.width - 1);
            double v = (1 - wy) * ((1 - wx) * input.at(x0c, y0c) + wx * input.at(x1c, y0c)) +
                       wy * ((1 - wx) * input.at(x0c, y1c) + wx * input.at(x1c, y1c));
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

namespace {

Image rotate_image(const Image& in, double degrees) {
    const double rad = degrees * std::acos(-1.0) / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const double cx = (in.width - 1) / 2.0, cy = (in.height - 1) / 2.0;
    Image out(in.width, in.height);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            // inverse map: rotate the destination point back into the source
            double dx = x - cx, dy = y - cy;
            double sxf = c * dx + s * dy + cx;
            double syf = -s * dx + c * dy + cy;
            double v;
            if (sxf < 0 || syf < 0 || sxf > in.width - 1 || syf > in.height - 1) {
                v = 255.0;  // white background, like the scans
            } else {
                int x0 = static_cast<int>(std::floor(sxf));
                int y0 = static_cast<int>(std::floor(syf));
                double wx = sxf - x0, wy = syf - y0;
                int x1 = std::min(x0 + 1, in.width - 1);
                int y1 = std::min(y0 + 1, in.height - 1);
                v = (1 - wy) * ((1 - wx) * in.at(x0, y0) + wx * in.at(x1, y0)) +
                    wy * ((1 - wx) * in.at(x0, y1) + wx * in.at(x1, y1));
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

}  // namespace

std::vector<Image> augment(const Image& input, const std::vector<AugmentOp>& ops,
                           std::uint64_t seed) {
    if (input.empty()) throw EmptyImage("augment on empty image");
    std::mt19937_64 rng(seed);
    std::vector<Image> out;
    out.reserve(ops.size());
    for (const auto& op : ops) {
        if (auto* r = std::get_if<Rotate>(&op)) {
            out.push_back(rotate_image(input, r->degrees));
        } else if (auto* sc = std::get_if<Scale>(&op)) {
            if (sc->factor <= 0.0) throw BadParameter("scale factor must be > 0");
            int w = std::max(1, static_cast<int>(std::lround(input.width * sc->factor)));
            int h = std::max(1, static_cast<int>(std::lround(input.height * sc->factor)));
            out.push_back(resize_bilinear(input, w, h));
        } else if (std::get_if<FlipHorizontal>(&op)) {
            Image img(input.width, input.height);
            for (int y = 0; y < input.height; ++y)
                for (int x = 0; x < input.width; ++x)
                    img.at(x, y) = input.at(input.width - 1 - x, y);
            out.push_back(std::move(img));
        } else if (std::get_if<FlipVertical>(&op)) {
            Image img(input.width, input.height);
            for (int y = 0; y < input.height; ++y)
                for (int x = 0; x < input.width; ++x)
                    img.at(x, y) = input.at(x, input.height - 1 - y);
            out.push_back(std::move(img));
        } else if (auto* g = std::get_if<GaussianNoise>(&op)) {
            if (g->sigma < 0.0) throw BadParameter("noise sigma must be >= 0");
            std::normal_distribution<double> noise(0.0, g->sigma);
            Image img = input;
            for (auto& px : img.pixels) {
                double v = px + (g->sigma > 0.0 ? noise(rng) : 0.0);
                px = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
            out.push_back(std::move(img));
        }
    }
    return out;
}

CategoryCounts category_counts(const std::vector<Manifest>& manifests) {
    CategoryCounts c;
    for (const auto& m : manifests) {
        for (const auto& [level, n] : m.category_counts) {
            c.per_level[level] += n;
            c.total += n;
        }
    }
    return c;
}

}  // namespace afrnet
