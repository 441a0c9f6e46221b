#ifndef CANTORQ_DISTORTION_HPP
#define CANTORQ_DISTORTION_HPP

#include "cantorq/codebook.hpp"
#include "cantorq/engine.hpp"
#include "cantorq/rational.hpp"
#include "cantorq/word.hpp"
#include "cantorq/word_measure.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace cantorq {

inline constexpr std::uint64_t kDefaultExpansionBudget = 1000000;

/// Certified enclosure lower <= integral of min_a (x - a)^2 dP <= upper.
struct DistortionEstimate {
    Rational lower;
    Rational upper;
    Rational requested_gap;
    std::uint64_t cylinders_expanded = 0;

    bool exact() const { return lower == upper; }
};

class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(std::uint64_t budget, DistortionEstimate partial)
        : std::runtime_error("distortion gap not reached within " + std::to_string(budget) + " cylinder expansions"),
          partial_(std::move(partial)) {}
    const DistortionEstimate& partial() const { return partial_; }

private:
    DistortionEstimate partial_;
};

struct EvaluateOptions {
    std::uint64_t budget = kDefaultExpansionBudget;
    /// Called after every expansion with the running (lower, upper).
    std::function<void(const Rational&, const Rational&)> on_expand;
};

namespace detail {

struct CylinderBounds {
    Word word;
    Rational lower;
    Rational upper;
    bool settled = false;  ///< lies inside one Voronoi region, so lower == upper
};

/// Bounds for one cylinder. Inside a single region the value is exact; a cylinder
/// that meets several regions gets
///   lower = p * (min over J of dist to codebook)^2   (0 if a code point lies in J)
///   upper = min_a p (s^2 V + (a(w) - a)^2)           (a single code serving all of J)
inline CylinderBounds bound_cylinder(const Codebook& cb, const Word& w) {
    const Cylinder cyl = cylinder(w);
    const auto& bounds = cb.boundaries();
    const std::size_t region = cb.region_of(cyl.right);
    const bool inside = region == 0 || bounds[region - 1] <= cyl.left;
    if (inside) {
        Rational v = interval_distortion(w, cb.points()[region]);
        return {w, v, v, true};
    }
    const Rational c = centroid(w);
    Rational upper = interval_distortion(w, cb.points()[cb.region_of(c)]);
    const auto& pts = cb.points();
    auto first = std::lower_bound(pts.begin(), pts.end(), cyl.left);
    Rational lower = 0;
    if (first == pts.end() || *first > cyl.right) {
        // No code point inside J: distance to the codebook is tent-shaped between
        // neighbouring codes, so its minimum over J sits at an endpoint.
        Rational dl = cb.distance_to_nearest(cyl.left);
        Rational dr = cb.distance_to_nearest(cyl.right);
        const Rational& g = dl < dr ? dl : dr;
        lower = cyl.prob * g * g;
    }
    return {w, std::move(lower), std::move(upper), false};
}

struct WiderGap {
    bool operator()(const CylinderBounds& a, const CylinderBounds& b) const {
        const Rational ga = a.upper - a.lower;
        const Rational gb = b.upper - b.lower;
        if (ga != gb) return ga < gb;
        return b.word < a.word;
    }
};

}  // namespace detail

/// Distortion of an arbitrary codebook against P, refined adaptively until
/// upper - lower <= gap. Throws BudgetExhausted after `budget` expansions.
inline DistortionEstimate evaluate_codebook(const Codebook& cb, const Rational& gap, const EvaluateOptions& opts = {}) {
    if (gap <= 0) throw std::invalid_argument("gap must be positive");
    if (cb.size() == 0) throw std::invalid_argument("codebook must contain at least one point");
    DistortionEstimate est;
    est.requested_gap = gap;
    std::priority_queue<detail::CylinderBounds, std::vector<detail::CylinderBounds>, detail::WiderGap> open;

    auto admit = [&](detail::CylinderBounds b) {
        est.lower += b.lower;
        est.upper += b.upper;
        if (!b.settled) open.push(std::move(b));
    };
    admit(detail::bound_cylinder(cb, Word{}));

    while (est.upper - est.lower > gap) {
        if (est.cylinders_expanded >= opts.budget) throw BudgetExhausted(opts.budget, est);
        detail::CylinderBounds top = open.top();
        open.pop();
        est.lower -= top.lower;
        est.upper -= top.upper;
        admit(detail::bound_cylinder(cb, top.word.child(1)));
        admit(detail::bound_cylinder(cb, top.word.child(2)));
        ++est.cylinders_expanded;
        if (opts.on_expand) opts.on_expand(est.lower, est.upper);
    }
    return est;
}

/// Sum of w(s) V over a complete cut: the distortion when each a(s) serves J_s.
inline Rational distortion_of_words(std::span<const Word> words) {
    if (words.empty() || !is_complete_cut(words))
        throw std::invalid_argument("distortion_of_words: words are not a complete prefix-free cut");
    return sum_weights(words) * moments().variance;
}

}  // namespace cantorq

#endif  // CANTORQ_DISTORTION_HPP
