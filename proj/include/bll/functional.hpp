#pragma once

#include "bll/config.hpp"
#include "bll/interval.hpp"
#include "bll/polytope.hpp"

#include <utility>
#include <vector>

namespace bll {

/// Phi_L(E) = integral over R^m of prod_j 1_{E_j}(L_j x). Each choice of one
/// component per slot contributes the volume of a box polytope.
/// Throws for degenerate configurations before any volume is computed.
Rational phi(const Configuration& config, const SetTuple& sets);

/// Dense polynomial with exact coefficients, lowest degree first.
struct Polynomial {
    Vec coeffs;

    Rational operator()(const Rational& x) const;
    Rational derivative(const Rational& x) const;
    Rational integral(const Rational& a, const Rational& b) const;

    /// Interpolant through (x_i, y_i) with distinct x_i; degree < points.size().
    static Polynomial fit(const std::vector<std::pair<Rational, Rational>>& points);
};

/// { x : |L_i(x)| <= e_i/2 for i != j }
Polytope kernel_body(const Configuration& config, const MeasureVector& e, std::size_t j);

/// K_j(s): slice of the kernel body along L_j = s. e_j itself is unused.
Rational kernel_K(const Configuration& config, const MeasureVector& e, std::size_t j,
                  const Rational& s);

/// Sorted distinct levels L_j(p) over vertices p of the kernel body. K_j is a
/// polynomial of degree <= m-1 between consecutive levels and 0 outside.
Vec kernel_breakpoints(const Configuration& config, const MeasureVector& e, std::size_t j);

/// One polynomial piece of K_j.
struct KernelPiece {
    Interval support;
    Polynomial poly;
};

struct KernelTable {
    std::size_t slot = 0;
    std::vector<std::pair<Rational, Rational>> samples;
    std::vector<KernelPiece> pieces;
};

std::vector<KernelPiece> kernel_pieces(const Configuration& config, const MeasureVector& e,
                                       std::size_t j);

KernelTable kernel_table(const Configuration& config, const MeasureVector& e, std::size_t j,
                         const Vec& points);

inline constexpr int derivative_retry_budget = 24;

/// Exact D^- K_j(s) for s > 0 from a polynomial reconstruction on (s - h, s),
/// checked against extra samples; h is halved on mismatch. Throws
/// "breakpoint congestion" when the retry budget runs out.
Rational kernel_K_left_derivative(const Configuration& config, const MeasureVector& e,
                                  std::size_t j, const Rational& s);

/// Exact integral of K_j over a, piece by piece between breakpoints.
Rational integrate_kernel(const Configuration& config, const MeasureVector& e, std::size_t j,
                          const IntervalUnion& a);

/// L_{i,j}(s, t): codimension-2 slice of { |L_k| <= e_k/2, k not in {i,j} }
/// pinned at L_i = s, L_j = t.
Rational kernel_L(const Configuration& config, const MeasureVector& e, std::size_t i,
                  std::size_t j, const Rational& s, const Rational& t);

/// <K_j, f_j> with f_j = 1_{E_j} - 1_{E_j*}, as a difference of two Phi values.
Rational first_order_term(const Configuration& config, const MeasureVector& e,
                          const SetTuple& sets, std::size_t j);

/// <L_{i,j}, f_i (x) f_j> by inclusion-exclusion over four Phi values.
Rational second_order_term(const Configuration& config, const MeasureVector& e,
                           const SetTuple& sets, std::size_t i, std::size_t j);

/// Phi(E) - Phi(E*) - sum_j first - sum_{i<j} second.
Rational expansion_residual(const Configuration& config, const MeasureVector& e,
                            const SetTuple& sets);

/// Psi(v) = |{ x : L_j(x) in I_j + v_j }| with I_j centered of length e_j.
Rational psi(const Configuration& config, const MeasureVector& e, const Vec& v);

/// Moves a block of measure eta from just inside the endpoint of the
/// centered interval of length e_j to just outside (at distance gap beyond
/// it). side > 0 uses the right endpoint, side < 0 the left one.
IntervalUnion shell_perturbation(const Rational& ej, const Rational& eta, int side,
                                 const Rational& gap = 0);

}  // namespace bll
