#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace feedsynth {

// 8-bit-origin RGB image held as doubles in [0,1], HWC layout.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // height * width * 3

    Image() = default;
    Image(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0) {}

    double& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    double at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool is_blank() const {
        for (double v : data)
            if (v != 0.0) return false;
        return true;
    }
};

inline Image blank_image(int size = 128) { return Image(size, size); }

// Binary PPM (P6), the raster interchange format used throughout.
inline void write_ppm(const Image& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write image: " + path);
    f << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> buf(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double v = std::clamp(img.data[i], 0.0, 1.0);
        buf[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline Image read_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read image: " + path);
    std::string magic;
    f >> magic;
    if (magic != "P6") throw std::runtime_error("unsupported image format in " + path);
    auto skip_ws_comments = [&f]() {
        while (true) {
            const int c = f.peek();
            if (c == '#') {
                std::string line;
                std::getline(f, line);
            } else if (std::isspace(c)) {
                f.get();
            } else {
                break;
            }
        }
    };
    int w = 0, h = 0, maxval = 0;
    skip_ws_comments();
    f >> w;
    skip_ws_comments();
    f >> h;
    skip_ws_comments();
    f >> maxval;
    f.get();  // single whitespace after header
    if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("bad PPM header in " + path);
    Image img(w, h);
    std::vector<unsigned char> buf(img.data.size());
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (f.gcount() != static_cast<std::streamsize>(buf.size()))
        throw std::runtime_error("truncated PPM data in " + path);
    for (std::size_t i = 0; i < buf.size(); ++i) img.data[i] = buf[i] / 255.0;
    return img;
}

// Box-filter resize; exact average when the scale is integral.
inline Image resize(const Image& src, int out_w, int out_h) {
    if (src.width == out_w && src.height == out_h) return src;
    Image dst(out_w, out_h);
    const double sx = static_cast<double>(src.width) / out_w;
    const double sy = static_cast<double>(src.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const int y0 = static_cast<int>(y * sy);
        const int y1 = std::max(y0 + 1, static_cast<int>((y + 1) * sy));
        for (int x = 0; x < out_w; ++x) {
            const int x0 = static_cast<int>(x * sx);
            const int x1 = std::max(x0 + 1, static_cast<int>((x + 1) * sx));
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                int n = 0;
                for (int yy = y0; yy < y1 && yy < src.height; ++yy)
                    for (int xx = x0; xx < x1 && xx < src.width; ++xx) {
                        acc += src.at(yy, xx, c);
                        ++n;
                    }
                dst.at(y, x, c) = n ? acc / n : 0.0;
            }
        }
    }
    return dst;
}

// Deterministic synthetic pattern whose palette tracks a sentiment class:
// warm/bright for positive, cold/dark for negative. Used by the corpus
// generator so pixels genuinely carry a class signal.
inline Image synth_pattern(std::uint64_t seed, int sentiment, int size = 128) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Image img(size, size);
    const double base = sentiment == 1 ? 0.65 : 0.15;
    const double freq = 2.0 + 6.0 * unit(rng);
    const double phase = 6.28318530717958647692 * unit(rng);
    const double cx = unit(rng), cy = unit(rng);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double u = static_cast<double>(x) / size;
            const double v = static_cast<double>(y) / size;
            const double wave = 0.5 + 0.5 * std::sin(freq * (u + v) * 3.14159 + phase);
            const double blob = std::exp(-8.0 * ((u - cx) * (u - cx) + (v - cy) * (v - cy)));
            const double lum = std::clamp(base + 0.25 * wave + 0.2 * blob, 0.0, 1.0);
            if (sentiment == 1) {
                img.at(y, x, 0) = lum;
                img.at(y, x, 1) = lum * 0.85;
                img.at(y, x, 2) = lum * 0.35;
            } else {
                img.at(y, x, 0) = lum * 0.35;
                img.at(y, x, 1) = lum * 0.55;
                img.at(y, x, 2) = lum;
            }
        }
    return img;
}

}  // namespace feedsynth
