#pragma once

#include "bll/conditions.hpp"
#include "bll/config.hpp"
#include "bll/interval.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bll {

/// s -> |E Δ (E* + s)|: piecewise linear with exact knots, constant outside
/// the knot range.
struct ShiftProfile {
    Vec knots;
    Vec values;

    Rational operator()(const Rational& s) const;
};

ShiftProfile shift_profile(const IntervalUnion& e);

struct OrbitDistance {
    Rational dist;
    Vec witness;             // v attaining the distance
    bool certified = false;  // exact global minimum
    std::size_t lp_solves = 0;
};

/// inf_v max_j |E_j Δ (E_j* + L_j(v))|. Exact branch-and-bound over the cells
/// of the breakpoint arrangement when m <= 3; multi-start pattern search
/// (uncertified) above that.
OrbitDistance dist_to_orbit(const Configuration& config, const SetTuple& sets);

/// max_j |E_j Δ (E_j* + L_j(v))|
Rational orbit_objective(const Configuration& config, const SetTuple& sets, const Vec& v);

struct DeficitReport {
    Rational phi;
    Rational phi_star;
    Rational deficit;
    std::optional<OrbitDistance> distance;
    std::optional<Rational> ratio;  // deficit / dist^2, present iff dist > 0
};

/// Requires |E_j| = e_j. Throws if the deficit were ever negative.
DeficitReport deficit(const Configuration& config, const MeasureVector& e, const SetTuple& sets,
                      bool with_distance = true);

enum class SamplerKind { mixed, shell, shift, orbit };

SamplerKind parse_sampler(const std::string& name);
std::string sampler_name(SamplerKind kind);

/// Random tuple near the orbit with max_j |E_j Δ E_j*| <= 0.2 min e.
/// `family` receives "shell", "shift", "mixed" or "orbit".
SetTuple sample_tuple(const Configuration& config, const MeasureVector& e, SamplerKind kind,
                      Rng& rng, std::string* family = nullptr);

struct ScanSample {
    std::size_t id = 0;
    std::string family;
    SetTuple sets;
    Rational dist;
    Rational deficit;
    std::optional<Rational> ratio;
};

struct ScanReport {
    std::string config_id;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::optional<Rational> min_ratio;
    std::optional<std::size_t> argmin;
    std::optional<Rational> min_ratio_shell;
    std::optional<Rational> min_ratio_shift;
    std::optional<Rational> min_ratio_mixed;
    std::size_t zero_deficit_off_orbit = 0;  // would contradict uniqueness
    Rational max_dist;
    std::vector<ScanSample> rows;
};

/// Refuses (hypothesis_error) unless (config, e) is nondegenerate, strictly
/// admissible and generic.
ScanReport stability_scan(const Configuration& config, const MeasureVector& e,
                          SamplerKind sampler, std::size_t n, std::uint64_t seed,
                          const std::string& config_id = "");

using TupleFamily = std::function<SetTuple(const Rational& delta)>;

/// E_j = E_j* + delta * direction_j
TupleFamily shift_family(const MeasureVector& e, Vec direction);
/// Shell perturbation of one slot with eta = delta.
TupleFamily shell_family(const MeasureVector& e, std::size_t slot, int side);
/// Shell perturbations of several slots at once.
TupleFamily multi_shell_family(const MeasureVector& e, std::vector<std::size_t> slots,
                               std::vector<int> sides);
/// E_j = E_j* + delta * L_j(y)
TupleFamily orbit_family(const Configuration& config, const MeasureVector& e, Vec y);

struct FitPoint {
    Rational delta;
    Rational dist;
    Rational deficit;
};

struct ExponentFit {
    double slope = 0;
    std::vector<FitPoint> points;
    std::optional<std::size_t> counterexample;  // dist > 0 with zero deficit
};

/// Least-squares slope of log(deficit) against log(dist). Throws when every
/// member of the family lies on the orbit.
ExponentFit exponent_fit(const Configuration& config, const MeasureVector& e,
                         const TupleFamily& family, const Vec& deltas);

/// Least-squares slope of log|y| against log x over points with y != 0.
double loglog_slope(const std::vector<std::pair<double, double>>& xy);

struct PsiEntry {
    Vec v;
    Rational psi;
    bool in_row_space = false;
    std::optional<Rational> dist;
    std::optional<Rational> ratio;  // (Psi(0) - Psi(v)) / dist^2
};

struct PsiScanReport {
    Rational psi0;
    std::vector<PsiEntry> entries;
    bool inequality_holds = true;       // Psi(v) <= Psi(0)
    bool equality_iff_row_space = true;
    bool quadratic_tested = false;
    std::optional<Rational> min_ratio;
};

/// Evaluates Psi(t d) for every direction d and scale t. Requires
/// admissibility; the quadratic lower-bound constant is only estimated when
/// (config, e) is also strictly admissible and generic.
PsiScanReport psi_scan(const Configuration& config, const MeasureVector& e,
                       const Mat& directions, const Vec& scales);

struct ShiftedKernelReport {
    Rational sup_difference;
    Rational max_offset;
    std::optional<Rational> ratio;  // sup_difference / max_offset
};

/// sup over sampled s of |K_{j,I}(s) - K_j(s)| where K_{j,I} is the kernel
/// with the intervals I_i (i != j) in place of the centered ones.
ShiftedKernelReport shifted_kernel_bound(const Configuration& config, const MeasureVector& e,
                                         const std::vector<Interval>& intervals, std::size_t j,
                                         const Vec& samples);

}  // namespace bll
