#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chromasim {

// Error taxonomy. Each maps onto one failure class of the public operations;
// the CLI translates InputError into exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class DimensionError : public Error { public: using Error::Error; };
class ParameterError : public Error { public: using Error::Error; };
class GeometryError : public Error { public: using Error::Error; };
class InputError : public Error { public: using Error::Error; };
class MeasurementError : public Error { public: using Error::Error; };
class DegenerateError : public Error { public: using Error::Error; };

/// Row-major 2D lattice. Pixel (x, y) has its center at (x + 0.5, y + 0.5)
/// in continuous image coordinates.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw DimensionError("grid dimensions must be positive, got " +
                                 std::to_string(width) + "x" + std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    std::span<T> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }

    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    bool same_shape(const Grid& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using ScalarField = Grid<double>;
using BinaryMask = Grid<std::uint8_t>;
/// 0 = background, k = nucleus id k.
using InstanceMask = Grid<std::uint16_t>;

/// Planar multi-channel image with values nominally in [0, 1].
class Image {
public:
    Image() = default;
    Image(int channels, int width, int height, double fill = 0.0);

    int channels() const { return static_cast<int>(planes_.size()); }
    int width() const { return planes_.empty() ? 0 : planes_.front().width(); }
    int height() const { return planes_.empty() ? 0 : planes_.front().height(); }

    ScalarField& channel(int c) { return planes_.at(static_cast<std::size_t>(c)); }
    const ScalarField& channel(int c) const { return planes_.at(static_cast<std::size_t>(c)); }

    /// Channel mean; the intensity plane biomarkers operate on.
    ScalarField luminance() const;

    void clip01();

    friend bool operator==(const Image& a, const Image& b) { return a.planes_ == b.planes_; }

private:
    std::vector<ScalarField> planes_;
};

inline Image::Image(int channels, int width, int height, double fill) {
    if (channels != 1 && channels != 3) {
        throw DimensionError("images carry 1 or 3 channels, got " + std::to_string(channels));
    }
    planes_.reserve(static_cast<std::size_t>(channels));
    for (int c = 0; c < channels; ++c) planes_.emplace_back(width, height, fill);
}

inline ScalarField Image::luminance() const {
    if (channels() == 1) return planes_.front();
    ScalarField out(width(), height());
    auto& o = out.values();
    for (const auto& p : planes_) {
        const auto& v = p.values();
        for (std::size_t i = 0; i < o.size(); ++i) o[i] += v[i];
    }
    for (auto& x : o) x /= static_cast<double>(channels());
    return out;
}

inline void Image::clip01() {
    for (auto& p : planes_) {
        for (auto& v : p.values()) v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }
}

inline bool all_finite(const ScalarField& f) {
    for (double v : f.values()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace chromasim
