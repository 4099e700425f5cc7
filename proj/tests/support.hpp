#pragma once

// Helpers shared by the test binaries: literal constructors, random
// generators and a few independent oracles that do not go through the
// library's own geometry.

#include "bll/config.hpp"
#include "bll/interval.hpp"
#include "bll/rational.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace testing {

using bll::Interval;
using bll::IntervalUnion;
using bll::Rational;
using bll::Vec;

inline Rational q(const std::string& text)
{
    return bll::parse_rational(text);
}

inline Rational q(long num, long den = 1)
{
    return bll::make_rational(num, den);
}

inline IntervalUnion U(std::vector<std::pair<std::string, std::string>> pieces)
{
    std::vector<Interval> out;
    for (const auto& [lo, hi] : pieces) {
        out.emplace_back(q(lo), q(hi));
    }
    return bll::normalize(std::move(out));
}

inline Vec V(std::vector<std::string> xs)
{
    Vec out;
    for (const auto& x : xs) {
        out.push_back(q(x));
    }
    return out;
}

/// Union of up to `max_components` random intervals with endpoints on a
/// 1/den grid inside [-span, span]. Never empty.
inline IntervalUnion random_union(bll::Rng& rng, int max_components, long span = 3,
                                  long den = 8)
{
    const int count = static_cast<int>(rng.uniform_int(1, max_components));
    std::vector<Interval> pieces;
    for (int i = 0; i < count; ++i) {
        long a = rng.uniform_int(-span * den, span * den);
        long len = rng.uniform_int(1, den * 2);
        pieces.emplace_back(q(a, den), q(a + len, den));
    }
    return bll::normalize(std::move(pieces));
}

/// Union with up to `max_components` components and exact total measure.
/// Components are laid out left to right with random positive gaps.
inline IntervalUnion random_union_with_measure(bll::Rng& rng, const Rational& total,
                                               int max_components, long den = 16)
{
    const int count = static_cast<int>(rng.uniform_int(1, max_components));
    std::vector<Rational> weights;
    Rational sum = 0;
    for (int i = 0; i < count; ++i) {
        weights.push_back(q(rng.uniform_int(1, 8)));
        sum += weights.back();
    }
    Rational x = q(rng.uniform_int(-2 * den, 0), den);
    std::vector<Interval> pieces;
    for (int i = 0; i < count; ++i) {
        Rational len = total * weights[i] / sum;
        pieces.emplace_back(x, x + len);
        x += len + q(rng.uniform_int(1, den), den);
    }
    return bll::normalize(std::move(pieces));
}

inline Vec random_vec(bll::Rng& rng, std::size_t n, long span = 3, long den = 7)
{
    Vec v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(q(rng.uniform_int(-span * den, span * den), den));
    }
    return v;
}

// Exact polygon clipping: start from a large square and cut by each
// half-plane a.x <= b (Sutherland-Hodgman), then take the shoelace area.
using Point = std::pair<Rational, Rational>;

inline std::vector<Point> clip(const std::vector<Point>& poly, const Rational& a0,
                               const Rational& a1, const Rational& b)
{
    std::vector<Point> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& r = poly[(i + 1) % n];
        Rational fp = a0 * p.first + a1 * p.second - b;
        Rational fr = a0 * r.first + a1 * r.second - b;
        if (fp <= 0) {
            out.push_back(p);
        }
        if ((fp < 0 && fr > 0) || (fp > 0 && fr < 0)) {
            Rational t = fp / (fp - fr);
            out.emplace_back(p.first + t * (r.first - p.first),
                             p.second + t * (r.second - p.second));
        }
    }
    return out;
}

inline Rational shoelace(const std::vector<Point>& poly)
{
    Rational twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& p = poly[i];
        const Point& r = poly[(i + 1) % poly.size()];
        twice += p.first * r.second - r.first * p.second;
    }
    return bll::abs(twice) / 2;
}

/// Area of { x in R^2 : lo_j <= rows_j . x <= hi_j }.
inline Rational clipped_area(const std::vector<Vec>& rows, const std::vector<Interval>& boxes)
{
    const Rational big = 1000;
    std::vector<Point> poly{{-big, -big}, {big, -big}, {big, big}, {-big, big}};
    for (std::size_t j = 0; j < rows.size() && !poly.empty(); ++j) {
        poly = clip(poly, rows[j][0], rows[j][1], boxes[j].hi);
        poly = clip(poly, -rows[j][0], -rows[j][1], -boxes[j].lo);
    }
    return poly.size() < 3 ? Rational(0) : shoelace(poly);
}

/// Phi for an m = 2 configuration by clipping every component tuple.
inline Rational clipped_phi(const bll::Configuration& config, const bll::SetTuple& sets)
{
    Rational total = 0;
    std::vector<std::size_t> idx(sets.size(), 0);
    while (true) {
        std::vector<Interval> boxes;
        for (std::size_t j = 0; j < sets.size(); ++j) {
            boxes.push_back(sets[j].components()[idx[j]]);
        }
        total += clipped_area(config.rows(), boxes);
        std::size_t j = 0;
        while (j < sets.size() && ++idx[j] == sets[j].size()) {
            idx[j++] = 0;
        }
        if (j == sets.size()) {
            break;
        }
    }
    return total;
}

inline double to_double(const Rational& x)
{
    return x.get_d();
}

}  // namespace testing
