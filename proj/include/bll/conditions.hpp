#pragma once

#include "bll/config.hpp"
#include "bll/polytope.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bll {

struct NondegeneracyReport {
    bool ok = true;
    std::vector<std::size_t> zero_rows;                             // clause (i)
    std::vector<std::pair<std::size_t, std::size_t>> proportional;  // clause (ii)
    std::vector<std::size_t> rank_deficient_without;                // clause (iii): j with rank{L_i : i != j} < m
};

NondegeneracyReport check_nondegenerate(const Configuration& config);

struct SlotAdmissibility {
    Rational max_value;  // max of L_k over K_e
    Rational half_measure;
    bool admissible = false;
    Vec witness;
};

struct AdmissibilityReport {
    bool ok = true;
    std::vector<SlotAdmissibility> slots;
};

/// Throws "degenerate configuration" when K_e is unbounded.
AdmissibilityReport check_admissible(const Configuration& config, const MeasureVector& e);

struct SlotStrictness {
    Rational slack;     // optimum of max delta s.t. L_j x = e_j/2, |L_i x| <= e_i/2 - delta
    Vec witness;
    bool slack_ok = false;
    std::optional<Rational> left_derivative;  // D^- K_j(e_j/2)
    std::string derivative_failure;
    bool derivative_ok = false;
    bool ok = false;
};

struct StrictAdmissibilityReport {
    bool ok = true;
    bool nondegenerate = true;
    std::vector<SlotStrictness> slots;
};

StrictAdmissibilityReport check_strictly_admissible(const Configuration& config,
                                                    const MeasureVector& e);

struct VertexGenericity {
    Vertex vertex;
    std::vector<std::size_t> active_slots;
    bool generic = false;
};

struct GenericityReport {
    bool ok = true;
    std::vector<VertexGenericity> vertices;
    std::optional<std::size_t> witness;  // first non-generic vertex
};

GenericityReport check_generic(const Configuration& config, const MeasureVector& e);

struct ConditionReport {
    NondegeneracyReport nondegenerate;
    std::optional<AdmissibilityReport> admissible;
    std::optional<StrictAdmissibilityReport> strictly_admissible;
    std::optional<GenericityReport> generic;

    /// All four hypotheses hold.
    bool all_ok() const;
};

/// Runs every check that its preconditions allow; later checks are skipped
/// (left empty) when K_e is unbounded.
ConditionReport check_conditions(const Configuration& config, const MeasureVector& e);

/// Vertices of K_e and the edges of its 1-skeleton.
struct SkeletonGraph {
    std::vector<Vertex> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Throws for non-generic (config, e): adjacency is read off shared active
/// sets, which is only valid for simple bodies.
SkeletonGraph skeleton_graph(const Configuration& config, const MeasureVector& e);

/// Breadth-first reachability. The empty graph counts as connected.
bool is_connected(const SkeletonGraph& g);

/// Distinct slots j with |L_j(x)| = e_j/2.
std::vector<std::size_t> active_slots(const Configuration& config, const MeasureVector& e,
                                      const Vec& x);

}  // namespace bll
