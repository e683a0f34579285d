#include "afrnet/image_codec.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>

#include "afrnet/errors.hpp"

namespace afrnet {

namespace {

struct PngReadState {
    const std::vector<std::uint8_t>* bytes;
    std::size_t offset;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->offset + n > st->bytes->size()) png_error(png, "short read");
    std::memcpy(out, st->bytes->data() + st->offset, n);
    st->offset += n;
}

void png_mem_write(png_structp png, png_bytep data, png_size_t n) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + n);
}

void png_mem_flush(png_structp) {}

std::uint32_t rd_u32le(const std::uint8_t* p) {
    return p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t(p[3]) << 24);
}
std::uint16_t rd_u16le(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint8_t to_gray(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (r == g && g == b) return r;
    return static_cast<std::uint8_t>(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
    if (img.empty()) throw EncodeFailure("cannot encode empty image");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw EncodeFailure("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw EncodeFailure("png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw EncodeFailure("libpng write error");
    }
    png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(&img.pixels[static_cast<std::size_t>(y) * img.width]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw DecodeFailure("not a PNG stream");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DecodeFailure("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeFailure("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeFailure("libpng read error");
    }

    PngReadState st{&bytes, 0};
    png_set_read_fn(png, &st, png_mem_read);
    png_read_info(png, info);

    // normalize everything to 8-bit gray
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    int color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1, -1);
    png_read_update_info(png, info);

    Image img(static_cast<int>(png_get_image_width(png, info)),
              static_cast<int>(png_get_image_height(png, info)));
    for (int y = 0; y < img.height; ++y)
        png_read_row(png, &img.pixels[static_cast<std::size_t>(y) * img.width], nullptr);
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

Image decode_bmp(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 54 || bytes[0] != 'B' || bytes[1] != 'M')
        throw DecodeFailure("not a BMP stream");
    const std::uint8_t* p = bytes.data();
    std::uint32_t data_offset = rd_u32le(p + 10);
    std::uint32_t header_size = rd_u32le(p + 14);
    if (header_size < 40) throw DecodeFailure("unsupported BMP header");
    std::int32_t width = static_cast<std::int32_t>(rd_u32le(p + 18));
    std::int32_t height = static_cast<std::int32_t>(rd_u32le(p + 22));
    std::uint16_t bpp = rd_u16le(p + 28);
    std::uint32_t compression = rd_u32le(p + 30);
    if (compression != 0) throw DecodeFailure("compressed BMP unsupported");
    if (bpp != 8 && bpp != 24 && bpp != 32) throw DecodeFailure("unsupported BMP bit depth");

    bool top_down = height < 0;
    std::int32_t abs_h = top_down ? -height : height;
    if (width <= 0 || abs_h <= 0) throw DecodeFailure("bad BMP dimensions");

    std::uint32_t palette_count = rd_u32le(p + 46);
    if (bpp == 8 && palette_count == 0) palette_count = 256;
    const std::uint8_t* palette = p + 14 + header_size;

    std::size_t row_bytes = ((static_cast<std::size_t>(width) * bpp / 8) + 3) & ~std::size_t{3};
    if (data_offset + row_bytes * abs_h > bytes.size()) throw DecodeFailure("truncated BMP");

    Image img(width, abs_h);
    for (std::int32_t row = 0; row < abs_h; ++row) {
        std::int32_t y = top_down ? row : abs_h - 1 - row;
        const std::uint8_t* src = p + data_offset + row_bytes * row;
        for (std::int32_t x = 0; x < width; ++x) {
            std::uint8_t v;
            if (bpp == 8) {
                std::uint8_t idx = src[x];
                if (idx >= palette_count) throw DecodeFailure("BMP palette index out of range");
                const std::uint8_t* e = palette + 4 * idx;  // BGRA
                v = to_gray(e[2], e[1], e[0]);
            } else {
                const std::uint8_t* e = src + x * (bpp / 8);  // BGR(A)
                v = to_gray(e[2], e[1], e[0]);
            }
            img.at(x, y) = v;
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_bmp_gray8(const Image& img) {
    if (img.empty()) throw EncodeFailure("cannot encode empty image");
    std::size_t row_bytes = (static_cast<std::size_t>(img.width) + 3) & ~std::size_t{3};
    std::uint32_t data_offset = 14 + 40 + 256 * 4;
    std::uint32_t file_size = static_cast<std::uint32_t>(data_offset + row_bytes * img.height);

    std::vector<std::uint8_t> out(file_size, 0);
    auto wr_u32 = [&](std::size_t at, std::uint32_t v) {
        out[at] = v & 0xff;
        out[at + 1] = (v >> 8) & 0xff;
        out[at + 2] = (v >> 16) & 0xff;
        out[at + 3] = (v >> 24) & 0xff;
    };
    out[0] = 'B';
    out[1] = 'M';
    wr_u32(2, file_size);
    wr_u32(10, data_offset);
    wr_u32(14, 40);
    wr_u32(18, static_cast<std::uint32_t>(img.width));
    wr_u32(22, static_cast<std::uint32_t>(img.height));
    out[26] = 1;            // planes
    out[28] = 8;            // bpp
    wr_u32(46, 256);        // palette entries
    for (int i = 0; i < 256; ++i) {
        std::size_t at = 54 + 4 * static_cast<std::size_t>(i);
        out[at] = out[at + 1] = out[at + 2] = static_cast<std::uint8_t>(i);  // gray ramp
    }
    for (int row = 0; row < img.height; ++row) {
        int y = img.height - 1 - row;  // bottom-up
        std::memcpy(out.data() + data_offset + row_bytes * row,
                    &img.pixels[static_cast<std::size_t>(y) * img.width],
                    static_cast<std::size_t>(img.width));
    }
    return out;
}

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeFailure("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

Image load_image(const std::string& path) {
    std::string ext;
    auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        ext = path.substr(dot + 1);
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
    auto bytes = read_file(path);
    if (ext == "png") return decode_png(bytes);
    if (ext == "bmp") return decode_bmp(bytes);
    throw DecodeFailure("unsupported image extension: " + path);
}

void save_png(const Image& img, const std::string& path) {
    auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EncodeFailure("cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace afrnet
