#pragma once

#include "bll/config.hpp"
#include "bll/interval.hpp"

#include <vector>

namespace bll {

/// Two or more adjacent components touched at `time` and were replaced by
/// their union.
struct FlowEvent {
    Rational time;
    std::vector<std::size_t> merged;  // component indices just before the merge
    IntervalUnion state;              // state right after the merge
};

/// Symmetrization flow: between events every component keeps its length and
/// its center follows c(t) = c(t0) (1-t)/(1-t0); touching components merge.
/// E(0) = E, E(1) = E*. Throws for t outside [0, 1] or zero measure.
IntervalUnion flow_state(const IntervalUnion& e, const Rational& t);

/// All merge events in (0, 1), in increasing time order.
std::vector<FlowEvent> flow_events(const IntervalUnion& e);

/// Slotwise flow with a shared time parameter.
SetTuple flow_state(const SetTuple& sets, const Rational& t);

struct TracePoint {
    Rational t;
    Rational phi;
    bool event = false;
};

/// Phi along the tuple flow on the grid refined by every merge time of every
/// slot (restricted to the grid's range).
std::vector<TracePoint> flow_trace(const Configuration& config, const SetTuple& sets,
                                   const Vec& grid);

}  // namespace bll
