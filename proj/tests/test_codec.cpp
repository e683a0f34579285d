#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "afrnet/errors.hpp"
#include "afrnet/image_codec.hpp"
#include "support/synthetic.hpp"

using namespace afrnet;

TEST_CASE("png: tiny matrices round trip exactly") {
    Image img(2, 2);
    img.at(0, 0) = 0;
    img.at(1, 0) = 255;
    img.at(0, 1) = 128;
    img.at(1, 1) = 7;
    CHECK(decode_png(encode_png(img)) == img);

    Image one(1, 1, 0);
    CHECK(decode_png(encode_png(one)) == one);
}

TEST_CASE("png: zero-dimension input fails to encode") {
    CHECK_THROWS_AS(encode_png(Image{}), EncodeFailure);
}

TEST_CASE("png: garbage fails to decode") {
    CHECK_THROWS_AS(decode_png({1, 2, 3, 4}), DecodeFailure);
    CHECK_THROWS_AS(decode_png({}), DecodeFailure);
}

TEST_CASE("png: lossless on random matrices (property)") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        int w = 1 + static_cast<int>(rng() % 64);
        int h = 1 + static_cast<int>(rng() % 64);
        Image img = testsupport::random_image(rng, w, h);
        CHECK(decode_png(encode_png(img)) == img);
    }
}

TEST_CASE("bmp: gray8 encode/decode round trip") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
        Image img = testsupport::random_image(rng, 1 + static_cast<int>(rng() % 40),
                                              1 + static_cast<int>(rng() % 40));
        CHECK(decode_bmp(encode_bmp_gray8(img)) == img);
    }
}

TEST_CASE("bmp: garbage rejected") {
    CHECK_THROWS_AS(decode_bmp({'B', 'M', 0, 0}), DecodeFailure);
    CHECK_THROWS_AS(decode_bmp({'X', 'Y'}), DecodeFailure);
}
