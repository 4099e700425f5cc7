#pragma once

#include "bll/rational.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace bll {

/// Closed interval [lo, hi] with lo <= hi.
struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    Interval(Rational lo_, Rational hi_);

    Rational length() const { return hi - lo; }
    Rational center() const { return (lo + hi) / 2; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Centered interval of the given length.
Interval centered_interval(const Rational& length);

/// A finite union of closed intervals, kept as strictly increasing disjoint
/// components with positive gaps. Zero-length pieces are null sets and are
/// dropped on construction.
class IntervalUnion {
public:
    IntervalUnion() = default;
    IntervalUnion(Interval single);
    IntervalUnion(std::initializer_list<std::pair<Rational, Rational>> pieces);

    const std::vector<Interval>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    bool empty() const { return components_.empty(); }

    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

private:
    friend IntervalUnion normalize(std::vector<Interval> intervals);
    std::vector<Interval> components_;
};

IntervalUnion normalize(std::vector<Interval> intervals);

Rational measure(const IntervalUnion& e);

IntervalUnion set_union(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion set_intersection(const IntervalUnion& a, const IntervalUnion& b);

/// |A Δ B| by a sweep over the merged endpoint list.
Rational symmetric_difference_measure(const IntervalUnion& a, const IntervalUnion& b);

/// True when a \ b is a null set.
bool is_subset(const IntervalUnion& a, const IntervalUnion& b);

/// The centered interval of the same measure. Throws on zero measure.
IntervalUnion symmetrize(const IntervalUnion& e);

IntervalUnion translate(const IntervalUnion& e, const Rational& s);

std::string to_string(const IntervalUnion& e);

}  // namespace bll
