#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "isaacs/error.hpp"

namespace isaacs {

/// Uniform truncated lattice x_j = x_min + j dx, j = 0..nx, with time levels
/// t_n = n dt, n = 0..nt, dt = horizon / nt.
struct SpaceTimeGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t nx = 4;
    std::size_t nt = 1;
    double horizon = 1.0;

    static SpaceTimeGrid make(double x_min, double x_max, std::size_t nx, std::size_t nt, double horizon) {
        if (nx < 4) throw Error(ErrorKind::InvalidArgument, "grid needs nx >= 4");
        if (nt < 1) throw Error(ErrorKind::InvalidArgument, "grid needs nt >= 1");
        if (!(x_max > x_min)) throw Error(ErrorKind::InvalidArgument, "grid needs x_max > x_min");
        if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid needs a positive horizon");
        return SpaceTimeGrid{x_min, x_max, nx, nt, horizon};
    }

    double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
    double dt() const { return horizon / static_cast<double>(nt); }
    std::size_t nodes() const { return nx + 1; }
    std::size_t levels() const { return nt + 1; }
    double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
    double t(std::size_t n) const { return n == nt ? horizon : static_cast<double>(n) * dt(); }

    /// Nearest node to x, clamped to the lattice.
    std::size_t nearest_node(double xv) const {
        const double r = std::round((xv - x_min) / dx());
        return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(nx)));
    }
    /// Level whose interval [t_n, t_{n+1}) contains t, clamped to [0, nt].
    std::size_t level_of(double tv) const {
        const double r = std::floor(tv / dt() + 1e-9);
        return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(nt)));
    }
};

/// Which barrier, if any, a solution touches at a (level, node).
enum class Contact : unsigned char { Interior, Lower, Upper };

inline const char* to_string(Contact c) {
    switch (c) {
        case Contact::Lower: return "LOWER";
        case Contact::Upper: return "UPPER";
        default: return "INTERIOR";
    }
}

/// Contact classification with tolerance `tol` on the barrier distance.
inline Contact classify_contact(double value, double lower, double upper, double tol) {
    if (value - lower <= tol) return Contact::Lower;
    if (upper - value <= tol) return Contact::Upper;
    return Contact::Interior;
}

/// Row-major (level, node) array over a grid.
template <typename T>
class LevelField {
public:
    LevelField() = default;
    LevelField(std::size_t levels, std::size_t nodes, T fill = T{})
        : levels_(levels), nodes_(nodes), data_(levels * nodes, fill) {}

    std::size_t levels() const { return levels_; }
    std::size_t nodes() const { return nodes_; }
    T& operator()(std::size_t n, std::size_t j) { return data_[n * nodes_ + j]; }
    const T& operator()(std::size_t n, std::size_t j) const { return data_[n * nodes_ + j]; }
    std::span<T> level(std::size_t n) { return {data_.data() + n * nodes_, nodes_}; }
    std::span<const T> level(std::size_t n) const { return {data_.data() + n * nodes_, nodes_}; }
    const std::vector<T>& raw() const { return data_; }

private:
    std::size_t levels_ = 0;
    std::size_t nodes_ = 0;
    std::vector<T> data_;
};

}  // namespace isaacs
