// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace gsforge {

// Dense row-major raster. (x, y) = (column, row), origin at the top-left
// pixel; continuous image coordinates coincide with integer pixel indices.
template <typename T>
class Image {
public:
    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    bool contains(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    bool operator==(const Image& o) const {
        return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

// Bilinear sample at continuous (x, y). Out-of-domain coordinates are the
// caller's problem; edge taps clamp so x == width-1 stays addressable.
inline double bilinear(const Image<double>& img, double x, double y) {
    int ix = std::clamp(static_cast<int>(std::floor(x)), 0, img.width() - 2);
    int iy = std::clamp(static_cast<int>(std::floor(y)), 0, img.height() - 2);
    const double dx = x - ix;
    const double dy = y - iy;
    const double v00 = img.at(ix, iy);
    const double v10 = img.at(ix + 1, iy);
    const double v01 = img.at(ix, iy + 1);
    const double v11 = img.at(ix + 1, iy + 1);
    return (1.0 - dy) * ((1.0 - dx) * v00 + dx * v10) + dy * ((1.0 - dx) * v01 + dx * v11);
}

// True when all four taps of a bilinear sample are strictly positive
// (sentinel-aware lookup for depth maps, where 0 marks invalid pixels).
inline bool bilinear_taps_valid(const Image<double>& img, double x, double y) {
    int ix = std::clamp(static_cast<int>(std::floor(x)), 0, img.width() - 2);
    int iy = std::clamp(static_cast<int>(std::floor(y)), 0, img.height() - 2);
    return img.at(ix, iy) > 0.0 && img.at(ix + 1, iy) > 0.0 && img.at(ix, iy + 1) > 0.0 &&
           img.at(ix + 1, iy + 1) > 0.0;
}

} // namespace gsforge
