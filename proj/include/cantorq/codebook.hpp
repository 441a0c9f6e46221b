#ifndef CANTORQ_CODEBOOK_HPP
#define CANTORQ_CODEBOOK_HPP

#include "cantorq/rational.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace cantorq {

/// Midpoints between consecutive points; these are the 1-D Voronoi boundaries.
inline std::vector<Rational> voronoi_boundaries(std::span<const Rational> points) {
    if (points.empty()) throw std::invalid_argument("codebook must contain at least one point");
    std::vector<Rational> mids;
    mids.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i - 1] < points[i]))
            throw std::invalid_argument("codebook points must be strictly increasing (index " + std::to_string(i) + ")");
        mids.push_back((points[i - 1] + points[i]) / 2);
    }
    return mids;
}

/// Sorted list of distinct code points with their Voronoi boundaries.
class Codebook {
public:
    Codebook() = default;

    /// Requires strictly increasing points.
    explicit Codebook(std::vector<Rational> points)
        : points_(std::move(points)), boundaries_(voronoi_boundaries(points_)) {}

    /// Sorts first; still rejects repeated points.
    static Codebook from_unsorted(std::vector<Rational> points) {
        std::sort(points.begin(), points.end());
        return Codebook(std::move(points));
    }

    const std::vector<Rational>& points() const { return points_; }
    const std::vector<Rational>& boundaries() const { return boundaries_; }
    std::size_t size() const { return points_.size(); }

    /// Index of the region containing x; a point exactly on a boundary goes left.
    std::size_t region_of(const Rational& x) const {
        return static_cast<std::size_t>(std::lower_bound(boundaries_.begin(), boundaries_.end(), x) - boundaries_.begin());
    }

    /// Distance from x to the closest code point.
    Rational distance_to_nearest(const Rational& x) const {
        const Rational d = x - points_[region_of(x)];
        return d < 0 ? Rational(-d) : d;
    }

    friend bool operator==(const Codebook&, const Codebook&) = default;

private:
    std::vector<Rational> points_;
    std::vector<Rational> boundaries_;
};

}  // namespace cantorq

#endif  // CANTORQ_CODEBOOK_HPP
