#include "bll/interval.hpp"

#include <algorithm>
#include <sstream>

namespace bll {

Interval::Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_))
{
    if (hi < lo) {
        throw input_error("interval with lo > hi: [" + lo.get_str() + ", " + hi.get_str() + "]");
    }
}

Interval centered_interval(const Rational& length)
{
    Rational half = length / 2;
    return Interval(-half, half);
}

IntervalUnion::IntervalUnion(Interval single)
{
    if (single.length() > 0) {
        components_.push_back(std::move(single));
    }
}

IntervalUnion::IntervalUnion(std::initializer_list<std::pair<Rational, Rational>> pieces)
{
    std::vector<Interval> v;
    for (const auto& [lo, hi] : pieces) {
        v.emplace_back(lo, hi);
    }
    *this = normalize(std::move(v));
}

IntervalUnion normalize(std::vector<Interval> intervals)
{
    std::erase_if(intervals, [](const Interval& i) { return i.length() == 0; });
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    IntervalUnion out;
    for (auto& iv : intervals) {
        auto& comps = out.components_;
        if (!comps.empty() && iv.lo <= comps.back().hi) {
            if (comps.back().hi < iv.hi) {
                comps.back().hi = iv.hi;
            }
        } else {
            comps.push_back(std::move(iv));
        }
    }
    return out;
}

Rational measure(const IntervalUnion& e)
{
    Rational total = 0;
    for (const auto& c : e.components()) {
        total += c.length();
    }
    return total;
}

IntervalUnion set_union(const IntervalUnion& a, const IntervalUnion& b)
{
    std::vector<Interval> all = a.components();
    all.insert(all.end(), b.components().begin(), b.components().end());
    return normalize(std::move(all));
}

IntervalUnion set_intersection(const IntervalUnion& a, const IntervalUnion& b)
{
    std::vector<Interval> out;
    const auto& x = a.components();
    const auto& y = b.components();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        Rational lo = max(x[i].lo, y[j].lo);
        Rational hi = min(x[i].hi, y[j].hi);
        if (lo < hi) {
            out.emplace_back(lo, hi);
        }
        if (x[i].hi < y[j].hi) {
            ++i;
        } else {
            ++j;
        }
    }
    return normalize(std::move(out));
}

Rational symmetric_difference_measure(const IntervalUnion& a, const IntervalUnion& b)
{
    // +1/-1 coverage changes at each endpoint; count length where exactly one
    // set covers.
    struct Event {
        Rational at;
        int da;
        int db;
    };
    std::vector<Event> events;
    events.reserve(2 * (a.size() + b.size()));
    for (const auto& c : a.components()) {
        events.push_back({c.lo, 1, 0});
        events.push_back({c.hi, -1, 0});
    }
    for (const auto& c : b.components()) {
        events.push_back({c.lo, 0, 1});
        events.push_back({c.hi, 0, -1});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& p, const Event& q) { return p.at < q.at; });
    Rational total = 0;
    int in_a = 0, in_b = 0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        if (k > 0 && (in_a != in_b)) {
            total += events[k].at - events[k - 1].at;
        }
        in_a += events[k].da;
        in_b += events[k].db;
    }
    return total;
}

bool is_subset(const IntervalUnion& a, const IntervalUnion& b)
{
    return measure(set_intersection(a, b)) == measure(a);
}

IntervalUnion symmetrize(const IntervalUnion& e)
{
    Rational mu = measure(e);
    if (mu <= 0) {
        throw error("degenerate set: symmetrization needs positive measure");
    }
    return IntervalUnion(centered_interval(mu));
}

IntervalUnion translate(const IntervalUnion& e, const Rational& s)
{
    std::vector<Interval> out;
    out.reserve(e.size());
    for (const auto& c : e.components()) {
        out.emplace_back(c.lo + s, c.hi + s);
    }
    return normalize(std::move(out));
}

std::string to_string(const IntervalUnion& e)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& c = e.components()[i];
        os << (i ? " U " : "") << '[' << c.lo.get_str() << ", " << c.hi.get_str() << ']';
    }
    os << '}';
    return os.str();
}

}  // namespace bll
