#ifndef CANTORQ_WORD_MEASURE_HPP
#define CANTORQ_WORD_MEASURE_HPP

#include "cantorq/rational.hpp"
#include "cantorq/word.hpp"

#include <stdexcept>

namespace cantorq {

/// Two-map iterated function system S1(x) = r1 x, S2(x) = r2 x + (1 - r2)
/// with probabilities (p1, 1 - p1). The standard system is
/// p1 = 1/4, r1 = 1/4, r2 = 1/2; every other choice is only used by the
/// heuristic oracle mode.
struct Ifs {
    Rational p1{1, 4};
    Rational r1{1, 4};
    Rational r2{1, 2};

    Rational p2() const { return 1 - p1; }
    Rational shift2() const { return 1 - r2; }

    static const Ifs& standard() {
        static const Ifs ifs{};
        return ifs;
    }

    bool is_standard() const { return *this == standard(); }

    void validate() const {
        if (p1 <= 0 || p1 >= 1) throw std::invalid_argument("p1 must lie in (0,1)");
        if (r1 <= 0 || r2 <= 0) throw std::invalid_argument("contraction ratios must be positive");
        if (r1 + r2 >= 1) throw std::invalid_argument("r1 + r2 must be < 1 for disjoint cylinders");
    }

    friend bool operator==(const Ifs&, const Ifs&) = default;
};

struct Moments {
    Rational mean;
    Rational second_moment;
    Rational variance;
};

/// Mean and variance of the invariant measure, solved from the fixed-point
/// equations E = p1 E(S1 X) + p2 E(S2 X) and the analogue for E(X^2).
inline Moments solve_moments(const Ifs& ifs) {
    const Rational& p1 = ifs.p1;
    const Rational p2 = ifs.p2();
    const Rational& r1 = ifs.r1;
    const Rational& r2 = ifs.r2;
    const Rational t = ifs.shift2();
    Moments m;
    m.mean = p2 * t / (1 - p1 * r1 - p2 * r2);
    m.second_moment = p2 * (2 * r2 * t * m.mean + t * t) / (1 - p1 * r1 * r1 - p2 * r2 * r2);
    m.variance = m.second_moment - m.mean * m.mean;
    return m;
}

inline const Moments& moments() {
    static const Moments m = solve_moments(Ifs::standard());
    return m;
}

/// S_w(x) = S_{w_1} o ... o S_{w_k}(x); the rightmost symbol acts first.
inline Rational map_point(const Word& w, Rational x, const Ifs& ifs = Ifs::standard()) {
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i] == 1) x = ifs.r1 * x;
        else x = ifs.r2 * x + ifs.shift2();
    }
    return x;
}

/// Contraction ratio s_w of S_w (= length of J_w).
inline Rational scale(const Word& w, const Ifs& ifs = Ifs::standard()) {
    if (ifs.is_standard()) return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(w.size() + w.ones()));
    Rational s = 1;
    for (std::size_t i = 0; i < w.size(); ++i) s *= w[i] == 1 ? ifs.r1 : ifs.r2;
    return s;
}

/// p_w = P(J_w).
inline Rational prob(const Word& w, const Ifs& ifs = Ifs::standard()) {
    if (ifs.is_standard()) {
        return Rational(pow_int(3, static_cast<unsigned>(w.twos())), BigInt(1) << static_cast<unsigned>(2 * w.size()));
    }
    Rational p = 1;
    const Rational p2 = ifs.p2();
    for (std::size_t i = 0; i < w.size(); ++i) p *= w[i] == 1 ? ifs.p1 : p2;
    return p;
}

struct Cylinder {
    Word word;
    Rational left;
    Rational right;
    Rational prob;
    Rational length;
};

inline Cylinder cylinder(const Word& w, const Ifs& ifs = Ifs::standard()) {
    Cylinder c{w, map_point(w, 0, ifs), map_point(w, 1, ifs), prob(w, ifs), scale(w, ifs)};
    return c;
}

/// a(w) = S_w(E X), the conditional mean of X on J_w.
inline Rational centroid(const Word& w, const Ifs& ifs = Ifs::standard()) {
    if (ifs.is_standard()) return map_point(w, moments().mean, ifs);
    return map_point(w, solve_moments(ifs).mean, ifs);
}

/// E(X | X in J_a u J_b) for two disjoint cylinders.
inline Rational pair_centroid(const Word& a, const Word& b, const Ifs& ifs = Ifs::standard()) {
    if (a.is_prefix_of(b) || b.is_prefix_of(a))
        throw std::invalid_argument("pair_centroid: cylinders " + a.str() + " and " + b.str() + " overlap");
    const Rational pa = prob(a, ifs);
    const Rational pb = prob(b, ifs);
    return (pa * centroid(a, ifs) + pb * centroid(b, ifs)) / (pa + pb);
}

/// P(J_w) * length(J_w)^2. For the standard system this is 3^(|w|-c(w)) / 2^(4|w|+2c(w)).
inline Rational weight(const Word& w, const Ifs& ifs = Ifs::standard()) {
    if (ifs.is_standard()) {
        return Rational(pow_int(3, static_cast<unsigned>(w.twos())),
                        BigInt(1) << static_cast<unsigned>(4 * w.size() + 2 * w.ones()));
    }
    const Rational s = scale(w, ifs);
    return prob(w, ifs) * s * s;
}

/// Integral over J_w of (x - a)^2 dP = p_w (s_w^2 V + (a(w) - a)^2).
inline Rational interval_distortion(const Word& w, const Rational& a, const Ifs& ifs = Ifs::standard()) {
    const Moments m = ifs.is_standard() ? moments() : solve_moments(ifs);
    const Rational s = scale(w, ifs);
    const Rational d = map_point(w, m.mean, ifs) - a;
    return prob(w, ifs) * (s * s * m.variance + d * d);
}

}  // namespace cantorq

#endif  // CANTORQ_WORD_MEASURE_HPP
