#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "afrnet/dataset.hpp"
#include "afrnet/errors.hpp"
#include "support/synthetic.hpp"

using namespace afrnet;

TEST_CASE("parse_socofing_name: real filename") {
    auto parsed = parse_socofing_name("1__M_Left_index_finger.BMP");
    CHECK(parsed.identity.subject_id == 1);
    CHECK(parsed.identity.gender == Gender::M);
    CHECK(parsed.identity.hand == Hand::Left);
    CHECK(parsed.identity.finger == Finger::Index);
    CHECK(parsed.alteration.level == Level::Real);
    CHECK(!parsed.alteration.method_tag);
}

TEST_CASE("parse_socofing_name: altered filename carries the method tag") {
    auto parsed = parse_socofing_name("1__M_Left_index_finger_Obl.BMP");
    CHECK(parsed.identity.subject_id == 1);
    CHECK(parsed.alteration.method_tag == "Obl");
}

TEST_CASE("parse_socofing_name: failures") {
    CHECK_THROWS_AS(parse_socofing_name("garbage.txt"), UnparseableName);
    CHECK_THROWS_AS(parse_socofing_name(""), UnparseableName);
    CHECK_THROWS_AS(parse_socofing_name("0__M_Left_index_finger.BMP"), UnparseableName);
    CHECK_THROWS_AS(parse_socofing_name("1__X_Left_index_finger.BMP"), UnparseableName);
    CHECK_THROWS_AS(parse_socofing_name("1__M_Left_index_finger_Wiggle.BMP"),
                    UnknownAlterationTag);
}

TEST_CASE("relabel: lexicographic numbering") {
    std::vector<std::string> listing = {"2__M_Left_index_finger.BMP", "1__M_Left_index_finger.BMP",
                                        "3__M_Left_index_finger.BMP"};
    Manifest m = relabel(listing, Level::Real);
    REQUIRE(m.entries.size() == 3);
    CHECK(m.entries[0].source_name == "1__M_Left_index_finger.BMP");
    CHECK(m.entries[0].record_id == "1.png");
    CHECK(m.entries[1].record_id == "2.png");
    CHECK(m.entries[2].record_id == "3.png");
    CHECK(m.category_counts.at(Level::Real) == 3);
}

TEST_CASE("relabel: duplicate source rejected") {
    std::vector<std::string> listing = {"1__M_Left_index_finger.BMP",
                                        "1__M_Left_index_finger.BMP"};
    CHECK_THROWS_AS(relabel(listing, Level::Real), DuplicateSource);
}

TEST_CASE("relabel round trip: manifest identity equals reparse of source name") {
    std::vector<std::string> listing;
    for (const auto& id : testsupport::all_identities())
        listing.push_back(testsupport::socofing_name(id, "CR"));
    Manifest m = relabel(listing, Level::Medium);
    for (const auto& e : m.entries) {
        auto parsed = parse_socofing_name(e.source_name);
        CHECK(parsed.identity == e.identity);
        CHECK(parsed.alteration.method_tag == e.alteration.method_tag);
        CHECK(e.alteration.level == Level::Medium);
    }
}

TEST_CASE("manifest CSV round trip") {
    std::vector<std::string> listing = {"4__F_Right_little_finger_Zcut.BMP",
                                        "2__M_Left_thumb_finger_Obl.BMP"};
    Manifest m = relabel(listing, Level::Hard);
    std::stringstream ss;
    save_manifest_csv(m, ss);
    Manifest loaded = load_manifest_csv(ss);
    CHECK(loaded.entries == m.entries);
    CHECK(loaded.category_counts == m.category_counts);
}

namespace {

std::vector<FingerprintRecord> dummy_records(std::size_t n) {
    std::vector<FingerprintRecord> recs(n);
    for (std::size_t i = 0; i < n; ++i) {
        recs[i].record_id = std::to_string(i + 1) + ".png";
        recs[i].pixels = Image(2, 2, 100);
    }
    return recs;
}

std::set<std::string> ids_of(const std::vector<FingerprintRecord>& recs) {
    std::set<std::string> out;
    for (const auto& r : recs) out.insert(r.record_id);
    return out;
}

}  // namespace

TEST_CASE("split: exact fraction") {
    auto s = split(dummy_records(10), 0.8, 7);
    CHECK(s.train.size() == 8);
    CHECK(s.test.size() == 2);
}

TEST_CASE("split: floor rule, 89 records") {
    auto s = split(dummy_records(89), 0.8, 7);
    CHECK(s.train.size() == 71);
    CHECK(s.test.size() == 18);
}

TEST_CASE("split: determinism and partition over many seeds") {
    auto recs = dummy_records(23);
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 999ull}) {
        auto a = split(recs, 0.6, seed);
        auto b = split(recs, 0.6, seed);
        // same order, not just same membership
        for (std::size_t i = 0; i < a.train.size(); ++i)
            CHECK(a.train[i].record_id == b.train[i].record_id);
        for (std::size_t i = 0; i < a.test.size(); ++i)
            CHECK(a.test[i].record_id == b.test[i].record_id);

        auto train_ids = ids_of(a.train), test_ids = ids_of(a.test);
        std::set<std::string> all = train_ids;
        all.insert(test_ids.begin(), test_ids.end());
        CHECK(all.size() == recs.size());
        CHECK(train_ids.size() + test_ids.size() == recs.size());
    }
}

TEST_CASE("split: invalid fraction") {
    CHECK_THROWS_AS(split(dummy_records(5), 0.0, 1), InvalidFraction);
    CHECK_THROWS_AS(split(dummy_records(5), 1.0, 1), InvalidFraction);
    CHECK_THROWS_AS(split({}, 0.5, 1), InvalidFraction);
}

TEST_CASE("augment: involutions and identities are bit-exact") {
    std::mt19937_64 rng(5);
    Image img = testsupport::random_image(rng, 17, 23);

    auto once = augment(img, {FlipHorizontal{}}, 0);
    auto twice = augment(once[0], {FlipHorizontal{}}, 0);
    CHECK(twice[0] == img);

    auto v_once = augment(img, {FlipVertical{}}, 0);
    auto v_twice = augment(v_once[0], {FlipVertical{}}, 0);
    CHECK(v_twice[0] == img);

    CHECK(augment(img, {Rotate{0.0}}, 0)[0] == img);
    CHECK(augment(img, {Scale{1.0}}, 0)[0] == img);
}

TEST_CASE("augment: noise is seed-deterministic") {
    std::mt19937_64 rng(6);
    Image img = testsupport::random_image(rng, 12, 12);
    auto a = augment(img, {GaussianNoise{2.0}}, 123);
    auto b = augment(img, {GaussianNoise{2.0}}, 123);
    CHECK(a[0] == b[0]);
    auto c = augment(img, {GaussianNoise{2.0}}, 124);
    CHECK(a[0] != c[0]);
}

TEST_CASE("augment: rotation fills exposed corners with white") {
    Image img(21, 21, 0);  // all-black square
    auto rotated = augment(img, {Rotate{45.0}}, 0);
    CHECK(rotated[0].at(0, 0) == 255);
    CHECK(rotated[0].at(20, 20) == 255);
    CHECK(rotated[0].at(10, 10) == 0);
}

TEST_CASE("augment: bad parameters") {
    Image img(4, 4, 10);
    CHECK_THROWS_AS(augment(img, {Scale{0.0}}, 0), BadParameter);
    CHECK_THROWS_AS(augment(img, {Scale{-2.0}}, 0), BadParameter);
    CHECK_THROWS_AS(augment(img, {GaussianNoise{-1.0}}, 0), BadParameter);
    CHECK_THROWS_AS(augment(Image{}, {FlipHorizontal{}}, 0), EmptyImage);
}

TEST_CASE("augment: one output per op, deterministic as a whole") {
    std::mt19937_64 rng(7);
    Image img = testsupport::random_image(rng, 30, 40);
    std::vector<AugmentOp> ops = {Rotate{15.0}, Scale{0.5}, FlipHorizontal{}, FlipVertical{},
                                  GaussianNoise{3.0}};
    auto a = augment(img, ops, 9);
    auto b = augment(img, ops, 9);
    REQUIRE(a.size() == ops.size());
    CHECK(a == b);
    CHECK(a[1].width == 15);
    CHECK(a[1].height == 20);
}

TEST_CASE("category_counts: reference subset layout sums to 301") {
    std::vector<Manifest> manifests;
    auto ids = testsupport::all_identities();

    std::vector<std::string> real_listing;
    for (const auto& id : ids) real_listing.push_back(testsupport::socofing_name(id));
    manifests.push_back(relabel(real_listing, Level::Real));

    const std::vector<std::string> methods = {"Obl", "CR", "Zcut"};
    struct Cat {
        Level tier;
        std::size_t count;
    };
    for (const Cat& cat : {Cat{Level::Easy, 90}, Cat{Level::Medium, 89}, Cat{Level::Hard, 82}}) {
        std::vector<std::string> listing;
        for (std::size_t k = 0; listing.size() < cat.count; ++k)
            listing.push_back(
                testsupport::socofing_name(ids[k % ids.size()], methods[k / ids.size()]));
        manifests.push_back(relabel(listing, cat.tier));
    }

    auto counts = category_counts(manifests);
    CHECK(counts.per_level.at(Level::Real) == 40);
    CHECK(counts.per_level.at(Level::Easy) == 90);
    CHECK(counts.per_level.at(Level::Medium) == 89);
    CHECK(counts.per_level.at(Level::Hard) == 82);
    CHECK(counts.total == 301);

    CHECK(category_counts({}).total == 0);
}
