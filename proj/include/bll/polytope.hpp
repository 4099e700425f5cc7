#pragma once

#include "bll/config.hpp"
#include "bll/interval.hpp"
#include "bll/rational.hpp"

#include <vector>

namespace bll {

/// normal . x <= bound
struct Constraint {
    Vec normal;
    Rational bound;
};

/// H-representation polytope { x in R^dim : normal_i . x <= bound_i }.
/// Boundedness is a checked property, not a constructor invariant.
class Polytope {
public:
    Polytope() = default;
    /// Throws when dim == 0, a normal has the wrong length, or a normal is zero.
    Polytope(std::size_t dim, std::vector<Constraint> constraints);

    std::size_t dim() const { return dim_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    bool contains(const Vec& x) const;

private:
    std::size_t dim_ = 0;
    std::vector<Constraint> constraints_;
};

/// An extreme point together with every constraint it satisfies with equality.
struct Vertex {
    Vec point;
    std::vector<std::size_t> active;
};

/// { x : lo_j <= L_j(x) <= hi_j }. Constraint 2j is L_j(x) <= hi_j and
/// constraint 2j+1 is -L_j(x) <= -lo_j.
Polytope build_box_polytope(const Configuration& config, const std::vector<Interval>& boxes);

/// K_e = { x : |L_j(x)| <= e_j/2 for every j }.
Polytope measure_body(const Configuration& config, const MeasureVector& e);

bool is_bounded(const Polytope& p);

/// All vertices, deduplicated, by solving every dim-subset of constraints.
/// Throws on an unbounded polytope; an empty polytope yields an empty list.
std::vector<Vertex> enumerate_vertices(const Polytope& p);

/// Exact dim-dimensional volume. Lower-dimensional or empty bodies give 0.
Rational volume(const Polytope& p);

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    Vec point;
};

/// Exact two-phase simplex (Bland's rule) for max objective . x over p.
/// When p is bounded the reported point is a vertex.
LpResult lp_solve(const Polytope& p, const Vec& objective);

struct LpOptimum {
    Rational value;
    Vec point;
};

/// As lp_solve but throws on infeasible or unbounded problems.
LpOptimum lp_maximize(const Polytope& p, const Vec& objective);

/// (dim-1)-volume of p ∩ {functional . x = level}, normalized so that
/// integrating over level reproduces volume(p).
Rational slice_volume(const Polytope& p, const Vec& functional, const Rational& level);

/// (dim-2)-volume of p ∩ {f1 . x = l1, f2 . x = l2} with the same Fubini
/// normalization. Throws when f1 and f2 are linearly dependent.
Rational double_slice_volume(const Polytope& p, const Vec& f1, const Vec& f2,
                             const Rational& l1, const Rational& l2);

/// Codimension-k slice for k independent functionals (rows of `functionals`).
Rational multi_slice_volume(const Polytope& p, const Mat& functionals, const Vec& levels);

}  // namespace bll
