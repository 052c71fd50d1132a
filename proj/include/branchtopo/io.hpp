#pragma once

// Point-cloud ingestion from CSV, PGM (P2/P5) and PNG files. Image pixels are
// foreground when their luminance reaches the binarization threshold
// (default 128); foreground pixel (col, row) becomes the point (col, row).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <png.h>

#include "error.hpp"
#include "geometry.hpp"
#include "image.hpp"

namespace branchtopo {

enum class InputFormat { Csv, Pgm, Png };

inline InputFormat input_format_from_string(std::string_view name)
{
    if (name == "csv") return InputFormat::Csv;
    if (name == "pgm") return InputFormat::Pgm;
    if (name == "png") return InputFormat::Png;
    throw std::invalid_argument("unknown input format '" + std::string(name) + "'");
}

inline constexpr double kDefaultBinarizeThreshold = 128.0;

struct LoadOptions {
    /// On the 0..255 luminance scale.
    double binarize_threshold = kDefaultBinarizeThreshold;
    /// Keep every stride-th foreground pixel in row-major order (images only).
    std::size_t stride = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

inline double parse_number(std::string_view field, std::size_t line)
{
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double v = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
        throw ParseError("line " + std::to_string(line) + ": '" + std::string(field) + "' is not a number", line);
    }
    return v;
}

inline std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in)
{
    std::ifstream in(path, mode);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return in;
}

}  // namespace detail

/// One "x,y" pair per line; blank lines and text after '#' are ignored.
/// Throws ParseError (with the line number) or EmptyCloud.
inline PointCloud read_csv(std::istream& in)
{
    std::vector<Point2> pts;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text(raw);
        text = detail::trim(text.substr(0, text.find('#')));
        if (text.empty()) {
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("line " + std::to_string(line) + ": expected exactly two comma-separated values", line);
        }
        const Point2 p{detail::parse_number(text.substr(0, comma), line),
                       detail::parse_number(text.substr(comma + 1), line)};
        if (!is_finite(p)) {
            throw ParseError("line " + std::to_string(line) + ": coordinates must be finite", line);
        }
        pts.push_back(p);
    }
    if (pts.empty()) {
        throw EmptyCloud();
    }
    return PointCloud(pts);
}

/// Binary and ASCII graymaps; samples are rescaled from maxval to 0..255
/// before thresholding.
inline BinaryImage read_pgm(std::istream& in, double threshold = kDefaultBinarizeThreshold)
{
    std::size_t consumed = 0;
    const auto next = [&] {
        const int c = in.get();
        consumed += c == EOF ? 0 : 1;
        return c;
    };
    const auto fail = [&](const std::string& what) -> ParseError {
        return ParseError("pgm: " + what + " at byte " + std::to_string(consumed), 0, consumed);
    };

    // header tokens may be separated by whitespace and '#' comments
    const auto token = [&]() {
        std::string tok;
        int c = 0;
        while ((c = next()) != EOF) {
            if (c == '#') {
                while ((c = next()) != EOF && c != '\n') {
                }
                if (!tok.empty()) break;
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        return tok;
    };
    const auto header_int = [&](const char* name) {
        const std::string tok = token();
        unsigned long v = 0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size()) {
            throw fail(std::string("bad ") + name + " '" + tok + "'");
        }
        return v;
    };

    const std::string magic = token();
    if (magic != "P2" && magic != "P5") {
        throw fail("unsupported magic '" + magic + "'");
    }
    const unsigned long width = header_int("width");
    const unsigned long height = header_int("height");
    const unsigned long maxval = header_int("maxval");
    if (width == 0 || height == 0) {
        throw fail("image dimensions must be positive");
    }
    if (maxval == 0 || maxval > 65535) {
        throw fail("maxval must be in 1..65535");
    }
    if (width > (1ul << 20) || height > (1ul << 20) || width * height > (1ul << 28)) {
        throw fail("image too large");
    }

    BinaryImage image(width, height);
    const double scale = 255.0 / static_cast<double>(maxval);
    for (std::size_t row = 0; row < height; ++row) {
        for (std::size_t col = 0; col < width; ++col) {
            unsigned long v = 0;
            if (magic == "P2") {
                v = header_int("sample");
            } else {
                const int hi = next();
                const int lo = maxval > 255 ? next() : 0;
                if (hi == EOF || lo == EOF) {
                    throw fail("truncated pixel data");
                }
                v = maxval > 255 ? (static_cast<unsigned long>(hi) << 8 | static_cast<unsigned long>(lo))
                                 : static_cast<unsigned long>(hi);
            }
            if (v > maxval) {
                throw fail("sample exceeds maxval");
            }
            if (static_cast<double>(v) * scale >= threshold) {
                image.set(col, row);
            }
        }
    }
    return image;
}

/// 8-bit gray or RGB (any PNG is converted to 8-bit RGB; gray keeps R = G = B).
/// Foreground iff 0.299 R + 0.587 G + 0.114 B >= threshold, evaluated in
/// integers so gray values sit exactly on the threshold.
inline BinaryImage read_png(const std::string& path, double threshold = kDefaultBinarizeThreshold)
{
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        const std::string msg = img.message;
        png_image_free(&img);
        if (!std::ifstream(path)) {
            throw IoError("cannot open '" + path + "'");
        }
        throw ParseError("png: " + msg);
    }
    img.format = PNG_FORMAT_RGB;
    if (img.width == 0 || img.height == 0 || static_cast<std::uint64_t>(img.width) * img.height > (1ull << 28)) {
        png_image_free(&img);
        throw ParseError("png: bad or oversized dimensions");
    }
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
        const std::string msg = img.message;
        png_image_free(&img);
        throw ParseError("png: " + msg);
    }
    BinaryImage image(img.width, img.height);
    const double scaled = threshold * 1000.0;
    for (std::size_t row = 0; row < img.height; ++row) {
        for (std::size_t col = 0; col < img.width; ++col) {
            const png_byte* px = &buffer[(row * img.width + col) * 3];
            const long lum = 299L * px[0] + 587L * px[1] + 114L * px[2];
            if (static_cast<double>(lum) >= scaled) {
                image.set(col, row);
            }
        }
    }
    return image;
}

inline BinaryImage load_image(const std::string& path, InputFormat format,
                              double threshold = kDefaultBinarizeThreshold)
{
    switch (format) {
    case InputFormat::Pgm: {
        auto in = detail::open_input(path, std::ios::in | std::ios::binary);
        return read_pgm(in, threshold);
    }
    case InputFormat::Png:
        return read_png(path, threshold);
    case InputFormat::Csv:
        break;
    }
    throw std::invalid_argument("csv input is not an image");
}

/// Throws IoError for unreadable files, ParseError for malformed content and
/// EmptyCloud when nothing is foreground.
inline PointCloud load_point_cloud(const std::string& path, InputFormat format, const LoadOptions& options = {})
{
    if (options.stride == 0) {
        throw std::invalid_argument("stride must be positive");
    }
    if (format == InputFormat::Csv) {
        auto in = detail::open_input(path);
        return read_csv(in);
    }
    return load_image(path, format, options.binarize_threshold).to_cloud(options.stride);
}

}  // namespace branchtopo
