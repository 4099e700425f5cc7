#include "bll/flow.hpp"

#include "bll/functional.hpp"

#include <algorithm>
#include <optional>

namespace bll {

namespace {

struct Piece {
    Rational center;
    Rational half;
};

std::vector<Interval> place(const std::vector<Piece>& pieces, const Rational& scale)
{
    std::vector<Interval> out;
    out.reserve(pieces.size());
    for (const auto& p : pieces) {
        Rational c = p.center * scale;
        out.emplace_back(c - p.half, c + p.half);
    }
    return out;
}

// Runs the flow up to `target`, appending merge events with time <= target.
IntervalUnion simulate(const IntervalUnion& e, const Rational& target,
                       std::vector<FlowEvent>* events)
{
    if (target < 0 || target > 1) {
        throw error("flow time must lie in [0, 1]");
    }
    if (measure(e) <= 0) {
        throw error("degenerate set: flow needs positive measure");
    }
    std::vector<Piece> pieces;
    for (const auto& c : e.components()) {
        pieces.push_back({c.center(), c.length() / 2});
    }
    Rational t0 = 0;
    for (;;) {
        std::optional<Rational> next;
        for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
            Rational tk = 1 - (1 - t0) * (pieces[k].half + pieces[k + 1].half)
                                  / (pieces[k + 1].center - pieces[k].center);
            if (!next || tk < *next) {
                next = tk;
            }
        }
        if (!next || *next > target) {
            Rational scale = target == 1 ? Rational(0) : (1 - target) / (1 - t0);
            return normalize(place(pieces, scale));
        }
        const Rational scale = (1 - *next) / (1 - t0);
        auto placed = place(pieces, scale);
        std::vector<Piece> merged;
        std::vector<std::size_t> members;
        Interval run = placed[0];
        for (std::size_t k = 1; k <= placed.size(); ++k) {
            if (k < placed.size() && placed[k].lo <= run.hi) {
                if (members.empty()) {
                    members.push_back(k - 1);
                }
                members.push_back(k);
                run.hi = max(run.hi, placed[k].hi);
                continue;
            }
            merged.push_back({run.center(), run.length() / 2});
            if (k < placed.size()) {
                run = placed[k];
            }
        }
        pieces = std::move(merged);
        t0 = *next;
        if (events) {
            std::vector<Interval> now;
            for (const auto& p : pieces) {
                now.emplace_back(p.center - p.half, p.center + p.half);
            }
            events->push_back({t0, std::move(members), normalize(std::move(now))});
        }
    }
}

}  // namespace

IntervalUnion flow_state(const IntervalUnion& e, const Rational& t)
{
    return simulate(e, t, nullptr);
}

std::vector<FlowEvent> flow_events(const IntervalUnion& e)
{
    std::vector<FlowEvent> out;
    simulate(e, 1, &out);
    return out;
}

SetTuple flow_state(const SetTuple& sets, const Rational& t)
{
    SetTuple out;
    out.reserve(sets.size());
    for (const auto& s : sets) {
        out.push_back(flow_state(s, t));
    }
    return out;
}

std::vector<TracePoint> flow_trace(const Configuration& config, const SetTuple& sets,
                                   const Vec& grid)
{
    if (grid.empty()) {
        return {};
    }
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw error("flow grid must be sorted");
    }
    if (grid.front() < 0 || grid.back() > 1) {
        throw error("flow grid must lie in [0, 1]");
    }
    Vec event_times;
    for (const auto& s : sets) {
        for (const auto& ev : flow_events(s)) {
            if (ev.time >= grid.front() && ev.time <= grid.back()) {
                event_times.push_back(ev.time);
            }
        }
    }
    std::sort(event_times.begin(), event_times.end());
    event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());

    Vec times = grid;
    times.insert(times.end(), event_times.begin(), event_times.end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::vector<TracePoint> out;
    out.reserve(times.size());
    for (const auto& t : times) {
        bool is_event = std::binary_search(event_times.begin(), event_times.end(), t);
        out.push_back({t, phi(config, flow_state(sets, t)), is_event});
    }
    return out;
}

}  // namespace bll
