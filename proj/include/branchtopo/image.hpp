#pragma once

// Binary foreground masks and their conversion to point clouds.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace branchtopo {

/// Row-major foreground mask; pixel (col, row) maps to the point (col, row),
/// y increasing downward.
class BinaryImage {
public:
    BinaryImage(std::size_t width, std::size_t height) : width_(width), height_(height), mask_(width * height, false)
    {
        if (width == 0 || height == 0) {
            throw std::invalid_argument("image dimensions must be positive");
        }
    }

    BinaryImage(std::size_t width, std::size_t height, std::vector<bool> mask)
        : width_(width), height_(height), mask_(std::move(mask))
    {
        if (width == 0 || height == 0 || mask_.size() != width * height) {
            throw std::invalid_argument("mask size must equal width * height");
        }
    }

    [[nodiscard]] std::size_t width() const { return width_; }
    [[nodiscard]] std::size_t height() const { return height_; }
    [[nodiscard]] bool at(std::size_t col, std::size_t row) const { return mask_[row * width_ + col]; }
    void set(std::size_t col, std::size_t row, bool value = true) { mask_[row * width_ + col] = value; }
    [[nodiscard]] const std::vector<bool>& mask() const { return mask_; }

    [[nodiscard]] std::size_t foreground_count() const
    {
        std::size_t n = 0;
        for (const bool b : mask_) {
            n += b ? 1 : 0;
        }
        return n;
    }

    /// Foreground pixel centres in row-major order, keeping every stride-th one.
    [[nodiscard]] std::vector<Point2> foreground_points(std::size_t stride = 1) const
    {
        if (stride == 0) {
            throw std::invalid_argument("stride must be positive");
        }
        std::vector<Point2> pts;
        std::size_t seen = 0;
        for (std::size_t row = 0; row < height_; ++row) {
            for (std::size_t col = 0; col < width_; ++col) {
                if (at(col, row) && seen++ % stride == 0) {
                    pts.push_back({static_cast<double>(col), static_cast<double>(row)});
                }
            }
        }
        return pts;
    }

    /// Throws EmptyCloud when no pixel is foreground.
    [[nodiscard]] PointCloud to_cloud(std::size_t stride = 1) const
    {
        auto pts = foreground_points(stride);
        if (pts.empty()) {
            throw EmptyCloud();
        }
        return PointCloud(pts);
    }

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<bool> mask_;
};

}  // namespace branchtopo
