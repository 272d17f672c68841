#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gencam {

// Interleaved 8-bit RGB raster. Storage keeps one spare byte past the last
// pixel so the gather-based bilinear kernel may read 4 bytes at any pixel.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3 + 1, 0) {}

    static Image solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        Image img(w, h);
        for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
            img.data[3 * i] = r;
            img.data[3 * i + 1] = g;
            img.data[3 * i + 2] = b;
        }
        return img;
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint8_t* pixel(int row, int col) {
        return data.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }
    const std::uint8_t* pixel(int row, int col) const {
        return data.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }

    bool same_size(const Image& other) const {
        return width == other.width && height == other.height;
    }
};

Image load_png(const std::string& path);
void save_png(const Image& img, const std::string& path);

}  // namespace gencam
