#include "bll/experiments.hpp"

#include "bll/functional.hpp"
#include "bll/linalg.hpp"
#include "bll/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bll {

Rational ShiftProfile::operator()(const Rational& s) const
{
    if (s <= knots.front()) {
        return values.front();
    }
    if (s >= knots.back()) {
        return values.back();
    }
    auto it = std::upper_bound(knots.begin(), knots.end(), s);
    std::size_t k = static_cast<std::size_t>(it - knots.begin());
    const Rational& x0 = knots[k - 1];
    const Rational& x1 = knots[k];
    return values[k - 1] + (values[k] - values[k - 1]) * (s - x0) / (x1 - x0);
}

ShiftProfile shift_profile(const IntervalUnion& e)
{
    IntervalUnion star = symmetrize(e);
    Rational half = measure(e) / 2;
    ShiftProfile p;
    for (const auto& c : e.components()) {
        for (const auto& a : {c.lo, c.hi}) {
            p.knots.push_back(a - half);
            p.knots.push_back(a + half);
        }
    }
    std::sort(p.knots.begin(), p.knots.end());
    p.knots.erase(std::unique(p.knots.begin(), p.knots.end()), p.knots.end());
    for (const auto& k : p.knots) {
        p.values.push_back(symmetric_difference_measure(e, translate(star, k)));
    }
    return p;
}

Rational orbit_objective(const Configuration& config, const SetTuple& sets, const Vec& v)
{
    Rational worst = 0;
    for (std::size_t j = 0; j < sets.size(); ++j) {
        worst = max(worst, symmetric_difference_measure(
                               sets[j], translate(symmetrize(sets[j]), config.apply(j, v))));
    }
    return worst;
}

namespace {

// One linear piece of a shift profile: value = slope * s + intercept for s
// in [lo, hi]; missing bounds are infinite.
struct ProfilePiece {
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    Rational slope;
    Rational intercept;
    Rational floor;  // minimum over the piece
};

std::vector<ProfilePiece> profile_pieces(const ShiftProfile& p)
{
    std::vector<ProfilePiece> out;
    out.push_back({std::nullopt, p.knots.front(), 0, p.values.front(), p.values.front()});
    for (std::size_t k = 0; k + 1 < p.knots.size(); ++k) {
        Rational slope = (p.values[k + 1] - p.values[k]) / (p.knots[k + 1] - p.knots[k]);
        out.push_back({p.knots[k], p.knots[k + 1], slope, p.values[k] - slope * p.knots[k],
                       min(p.values[k], p.values[k + 1])});
    }
    out.push_back({p.knots.back(), std::nullopt, 0, p.values.back(), p.values.back()});
    return out;
}

// Exact min over v of max_j g_j(L_j v), branching on one profile piece per
// slot and bounding with the cell LP.
class CellSearch {
public:
    CellSearch(const Configuration& config, const SetTuple& sets)
        : config_(config), m_(config.dim())
    {
        for (const auto& s : sets) {
            pieces_.push_back(profile_pieces(shift_profile(s)));
        }
        best_.witness.assign(m_, Rational(0));
        best_.dist = orbit_objective(config, sets, best_.witness);
    }

    OrbitDistance run()
    {
        order_.resize(pieces_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        auto live = [&](std::size_t j) {
            return std::count_if(pieces_[j].begin(), pieces_[j].end(),
                                 [&](const ProfilePiece& p) { return p.floor < best_.dist; });
        };
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return live(a) < live(b); });
        for (auto& list : pieces_) {
            std::stable_sort(list.begin(), list.end(),
                             [](const ProfilePiece& a, const ProfilePiece& b) {
                                 return a.floor < b.floor;
                             });
        }
        if (best_.dist > 0) {
            descend(0);
        }
        best_.certified = true;
        return best_;
    }

    // Cell LP optimum from a greedy dive, used to seed local search.
    std::vector<Vec> greedy_seeds(std::size_t count)
    {
        std::vector<Vec> seeds;
        for (std::size_t rank = 0; rank < count; ++rank) {
            constraints_.clear();
            bool ok = true;
            for (std::size_t j = 0; j < pieces_.size() && ok; ++j) {
                auto list = pieces_[j];
                std::stable_sort(list.begin(), list.end(),
                                 [](const ProfilePiece& a, const ProfilePiece& b) {
                                     return a.floor < b.floor;
                                 });
                bool placed = false;
                for (std::size_t k = std::min(rank, list.size() - 1); k < list.size(); ++k) {
                    std::size_t mark = constraints_.size();
                    push_piece(j, list[k]);
                    if (solve().status == LpStatus::optimal) {
                        placed = true;
                        break;
                    }
                    constraints_.resize(mark);
                }
                ok = placed;
            }
            if (ok) {
                auto r = solve();
                seeds.emplace_back(r.point.begin(), r.point.begin() + static_cast<long>(m_));
            }
        }
        return seeds;
    }

private:
    void push_piece(std::size_t j, const ProfilePiece& piece)
    {
        Vec up(m_ + 1), down(m_ + 1), epi(m_ + 1);
        for (std::size_t c = 0; c < m_; ++c) {
            up[c] = config_.row(j)[c];
            down[c] = -config_.row(j)[c];
            epi[c] = piece.slope * config_.row(j)[c];
        }
        if (piece.hi) {
            constraints_.push_back({up, *piece.hi});
        }
        if (piece.lo) {
            constraints_.push_back({down, -*piece.lo});
        }
        epi[m_] = -1;
        constraints_.push_back({std::move(epi), -piece.intercept});
    }

    LpResult solve()
    {
        ++best_.lp_solves;
        Vec objective(m_ + 1, Rational(0));
        objective[m_] = -1;
        auto r = lp_solve(Polytope(m_ + 1, constraints_), objective);
        if (r.status == LpStatus::optimal) {
            r.value = -r.value;
        }
        return r;
    }

    void descend(std::size_t depth)
    {
        const std::size_t j = order_[depth];
        for (const auto& piece : pieces_[j]) {
            if (piece.floor >= best_.dist) {
                break;  // sorted by floor
            }
            std::size_t mark = constraints_.size();
            push_piece(j, piece);
            auto r = solve();
            if (r.status == LpStatus::optimal && r.value < best_.dist) {
                if (depth + 1 == order_.size()) {
                    best_.dist = r.value;
                    best_.witness.assign(r.point.begin(), r.point.begin() + static_cast<long>(m_));
                } else {
                    descend(depth + 1);
                }
            } else if (r.status == LpStatus::unbounded) {
                throw error("orbit distance cell program is unbounded");
            }
            constraints_.resize(mark);
        }
    }

    const Configuration& config_;
    std::size_t m_;
    std::vector<std::vector<ProfilePiece>> pieces_;
    std::vector<std::size_t> order_;
    std::vector<Constraint> constraints_;
    OrbitDistance best_;
};

constexpr int pattern_search_levels = 30;
constexpr int polish_rounds = 8;

// Minimizes, over the cells touching v, the upper model that takes for each
// slot the max of the profile pieces adjacent to L_j(v). The model dominates
// the objective there and agrees with it at v, so the result never gets worse.
Vec polish(const Configuration& config, const std::vector<std::vector<ProfilePiece>>& pieces,
           const Vec& v)
{
    const std::size_t m = config.dim();
    std::vector<Constraint> cs;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
        const Rational s = config.apply(j, v);
        std::vector<const ProfilePiece*> near;
        for (const auto& piece : pieces[j]) {
            if ((!piece.lo || *piece.lo <= s) && (!piece.hi || s <= *piece.hi)) {
                near.push_back(&piece);
            }
        }
        std::optional<Rational> lo = near.front()->lo;
        std::optional<Rational> hi = near.back()->hi;
        Vec up(m + 1), down(m + 1);
        for (std::size_t c = 0; c < m; ++c) {
            up[c] = config.row(j)[c];
            down[c] = -config.row(j)[c];
        }
        if (hi) {
            cs.push_back({up, *hi});
        }
        if (lo) {
            cs.push_back({down, -*lo});
        }
        for (const auto* piece : near) {
            Vec epi(m + 1);
            for (std::size_t c = 0; c < m; ++c) {
                epi[c] = piece->slope * config.row(j)[c];
            }
            epi[m] = -1;
            cs.push_back({std::move(epi), -piece->intercept});
        }
    }
    Vec objective(m + 1, Rational(0));
    objective[m] = -1;
    const auto r = lp_solve(Polytope(m + 1, std::move(cs)), objective);
    if (r.status != LpStatus::optimal) {
        return v;
    }
    return Vec(r.point.begin(), r.point.begin() + static_cast<long>(m));
}

OrbitDistance pattern_search(const Configuration& config, const SetTuple& sets)
{
    const std::size_t m = config.dim();
    Mat directions;
    for (std::size_t i = 0; i < m; ++i) {
        for (int si : {1, -1}) {
            Vec d(m, Rational(0));
            d[i] = si;
            directions.push_back(d);
            for (std::size_t k = i + 1; k < m; ++k) {
                for (int sk : {1, -1}) {
                    Vec dd = d;
                    dd[k] = sk;
                    directions.push_back(std::move(dd));
                }
            }
        }
    }
    Rational scale = 0;
    std::vector<std::vector<ProfilePiece>> pieces;
    for (const auto& s : sets) {
        scale = max(scale, measure(s));
        pieces.push_back(profile_pieces(shift_profile(s)));
    }

    CellSearch cells(config, sets);
    std::vector<Vec> seeds{Vec(m, Rational(0))};
    for (auto& s : cells.greedy_seeds(3)) {
        seeds.push_back(std::move(s));
    }

    OrbitDistance best;
    best.witness = seeds.front();
    best.dist = orbit_objective(config, sets, best.witness);
    for (const auto& seed : seeds) {
        Vec v = seed;
        Rational value = orbit_objective(config, sets, v);
        for (int round = 0; round < polish_rounds && value > 0; ++round) {
            Rational step = scale / 4;
            for (int level = 0; level < pattern_search_levels && value > 0;) {
                bool improved = false;
                for (const auto& d : directions) {
                    Vec trial = v;
                    for (std::size_t c = 0; c < m; ++c) {
                        trial[c] += step * d[c];
                    }
                    Rational f = orbit_objective(config, sets, trial);
                    if (f < value) {
                        v = std::move(trial);
                        value = f;
                        improved = true;
                        break;
                    }
                }
                if (!improved) {
                    step /= 2;
                    ++level;
                }
            }
            Vec polished = polish(config, pieces, v);
            ++best.lp_solves;
            Rational f = orbit_objective(config, sets, polished);
            if (f >= value) {
                break;
            }
            v = std::move(polished);
            value = f;
        }
        if (value < best.dist) {
            best.dist = value;
            best.witness = v;
        }
    }
    best.certified = false;
    return best;
}

}  // namespace

OrbitDistance dist_to_orbit(const Configuration& config, const SetTuple& sets)
{
    if (sets.size() != config.slots()) {
        throw error("set tuple does not match configuration");
    }
    for (const auto& s : sets) {
        if (measure(s) <= 0) {
            throw error("orbit distance needs sets of positive measure");
        }
    }
    if (config.dim() <= 3) {
        return CellSearch(config, sets).run();
    }
    return pattern_search(config, sets);
}

DeficitReport deficit(const Configuration& config, const MeasureVector& e, const SetTuple& sets,
                      bool with_distance)
{
    if (sets.size() != e.size()) {
        throw error("set tuple and measure vector differ in length");
    }
    for (std::size_t j = 0; j < sets.size(); ++j) {
        if (measure(sets[j]) != e[j]) {
            throw error("|E_" + std::to_string(j + 1) + "| != e_" + std::to_string(j + 1));
        }
    }
    DeficitReport r;
    r.phi = phi(config, sets);
    r.phi_star = phi(config, centered_tuple(e));
    r.deficit = r.phi_star - r.phi;
    if (r.deficit < 0) {
        throw error("negative deficit: Phi(E) = " + r.phi.get_str()
                    + " exceeds Phi(E*) = " + r.phi_star.get_str());
    }
    if (with_distance) {
        r.distance = dist_to_orbit(config, sets);
        if (r.distance->dist > 0) {
            r.ratio = r.deficit / (r.distance->dist * r.distance->dist);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Sampling and scans

SamplerKind parse_sampler(const std::string& name)
{
    if (name == "mixed") return SamplerKind::mixed;
    if (name == "shell") return SamplerKind::shell;
    if (name == "shift") return SamplerKind::shift;
    if (name == "orbit") return SamplerKind::orbit;
    throw input_error("unknown sampler '" + name + "' (mixed, shell, shift, orbit)");
}

std::string sampler_name(SamplerKind kind)
{
    switch (kind) {
    case SamplerKind::mixed: return "mixed";
    case SamplerKind::shell: return "shell";
    case SamplerKind::shift: return "shift";
    case SamplerKind::orbit: return "orbit";
    }
    return "?";
}

namespace {

constexpr long sample_denominator = 1024;

SetTuple shell_sample(const MeasureVector& e, Rng& rng, const Rational& eta_max)
{
    const std::size_t n = e.size();
    std::vector<bool> hit(n);
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
        hit[j] = rng.coin();
        any = any || hit[j];
    }
    if (!any) {
        hit[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 1))] = true;
    }
    SetTuple out = centered_tuple(e);
    for (std::size_t j = 0; j < n; ++j) {
        if (!hit[j]) {
            continue;
        }
        Rational eta = rng.uniform_grid(make_rational(1, sample_denominator), eta_max, sample_denominator);
        int side = rng.coin() ? 1 : -1;
        Rational gap = rng.coin() ? Rational(0)
                                  : rng.uniform_grid(0, eta_max / 2, sample_denominator);
        out[j] = shell_perturbation(e[j], eta, side, gap);
    }
    return out;
}

}  // namespace

SetTuple sample_tuple(const Configuration& config, const MeasureVector& e, SamplerKind kind,
                      Rng& rng, std::string* family)
{
    Rational min_e = *std::min_element(e.values().begin(), e.values().end());
    SamplerKind k = kind;
    if (kind == SamplerKind::mixed) {
        switch (rng.uniform_int(0, 2)) {
        case 0: k = SamplerKind::shell; break;
        case 1: k = SamplerKind::shift; break;
        default: k = SamplerKind::mixed; break;
        }
    }
    if (family) {
        *family = sampler_name(k);
    }
    switch (k) {
    case SamplerKind::shell:
        return shell_sample(e, rng, min_e / 10);
    case SamplerKind::shift: {
        SetTuple out = centered_tuple(e);
        for (auto& s : out) {
            s = translate(s, rng.uniform_grid(-min_e / 10, min_e / 10, sample_denominator));
        }
        return out;
    }
    case SamplerKind::mixed: {
        SetTuple out = shell_sample(e, rng, min_e / 20);
        for (auto& s : out) {
            s = translate(s, rng.uniform_grid(-min_e / 20, min_e / 20, sample_denominator));
        }
        return out;
    }
    case SamplerKind::orbit: {
        Vec y(config.dim());
        for (auto& c : y) {
            c = rng.uniform_grid(-1, 1, sample_denominator);
        }
        SetTuple out = centered_tuple(e);
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = translate(out[j], config.apply(j, y));
        }
        return out;
    }
    }
    return {};
}

ScanReport stability_scan(const Configuration& config, const MeasureVector& e,
                          SamplerKind sampler, std::size_t n, std::uint64_t seed,
                          const std::string& config_id)
{
    auto conditions = check_conditions(config, e);
    if (!conditions.all_ok()) {
        throw hypothesis_error(
            "stability scan needs a nondegenerate, strictly admissible, generic configuration");
    }
    ScanReport r;
    r.config_id = config_id;
    r.seed = seed;
    r.samples = n;
    r.max_dist = 0;
    Rng rng(seed);
    auto track = [](std::optional<Rational>& slot, const Rational& value) {
        if (!slot || value < *slot) {
            slot = value;
        }
    };
    for (std::size_t id = 0; id < n; ++id) {
        ScanSample s;
        s.id = id;
        s.sets = sample_tuple(config, e, sampler, rng, &s.family);
        auto d = deficit(config, e, s.sets, true);
        s.dist = d.distance->dist;
        s.deficit = d.deficit;
        s.ratio = d.ratio;
        r.max_dist = max(r.max_dist, s.dist);
        if (s.dist > 0 && s.deficit == 0) {
            ++r.zero_deficit_off_orbit;
        }
        if (s.ratio) {
            if (!r.min_ratio || *s.ratio < *r.min_ratio) {
                r.min_ratio = *s.ratio;
                r.argmin = id;
            }
            if (s.family == "shell") track(r.min_ratio_shell, *s.ratio);
            if (s.family == "shift") track(r.min_ratio_shift, *s.ratio);
            if (s.family == "mixed") track(r.min_ratio_mixed, *s.ratio);
        }
        r.rows.push_back(std::move(s));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Families and fits

TupleFamily shift_family(const MeasureVector& e, Vec direction)
{
    return [e, direction = std::move(direction)](const Rational& delta) {
        SetTuple out = centered_tuple(e);
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = translate(out[j], delta * direction[j]);
        }
        return out;
    };
}

TupleFamily shell_family(const MeasureVector& e, std::size_t slot, int side)
{
    return multi_shell_family(e, {slot}, {side});
}

TupleFamily multi_shell_family(const MeasureVector& e, std::vector<std::size_t> slots,
                               std::vector<int> sides)
{
    return [e, slots = std::move(slots), sides = std::move(sides)](const Rational& delta) {
        SetTuple out = centered_tuple(e);
        for (std::size_t k = 0; k < slots.size(); ++k) {
            out[slots[k]] = shell_perturbation(e[slots[k]], delta, sides[k]);
        }
        return out;
    };
}

TupleFamily orbit_family(const Configuration& config, const MeasureVector& e, Vec y)
{
    return [config, e, y = std::move(y)](const Rational& delta) {
        SetTuple out = centered_tuple(e);
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = translate(out[j], delta * config.apply(j, y));
        }
        return out;
    };
}

double loglog_slope(const std::vector<std::pair<double, double>>& xy)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& [x, y] : xy) {
        if (y == 0 || x <= 0) {
            continue;
        }
        double lx = std::log(x), ly = std::log(std::fabs(y));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

ExponentFit exponent_fit(const Configuration& config, const MeasureVector& e,
                         const TupleFamily& family, const Vec& deltas)
{
    ExponentFit fit;
    bool any_off_orbit = false;
    std::vector<std::pair<double, double>> xy;
    for (const auto& delta : deltas) {
        auto d = deficit(config, e, family(delta), true);
        fit.points.push_back({delta, d.distance->dist, d.deficit});
        if (d.distance->dist > 0) {
            any_off_orbit = true;
            if (d.deficit == 0) {
                if (!fit.counterexample) {
                    fit.counterexample = fit.points.size() - 1;
                }
                continue;
            }
            xy.emplace_back(d.distance->dist.get_d(), d.deficit.get_d());
        }
    }
    if (!any_off_orbit) {
        throw error("family stays on the orbit: every member has dist 0");
    }
    fit.slope = loglog_slope(xy);
    return fit;
}

// ---------------------------------------------------------------------------

PsiScanReport psi_scan(const Configuration& config, const MeasureVector& e,
                       const Mat& directions, const Vec& scales)
{
    if (!check_nondegenerate(config).ok || !check_admissible(config, e).ok) {
        throw hypothesis_error("psi scan needs a nondegenerate admissible configuration");
    }
    PsiScanReport r;
    r.quadratic_tested = check_conditions(config, e).all_ok();
    r.psi0 = psi(config, e, Vec(config.slots(), Rational(0)));
    for (const auto& d : directions) {
        if (d.size() != config.slots()) {
            throw input_error("psi direction needs one entry per slot");
        }
        for (const auto& t : scales) {
            PsiEntry entry;
            for (const auto& x : d) {
                entry.v.push_back(t * x);
            }
            entry.psi = psi(config, e, entry.v);
            entry.in_row_space =
                linalg::solve_consistent(config.rows(), entry.v, config.dim()).has_value();
            if (entry.psi > r.psi0) {
                r.inequality_holds = false;
            }
            if ((entry.psi == r.psi0) != entry.in_row_space) {
                r.equality_iff_row_space = false;
            }
            if (r.quadratic_tested && !entry.in_row_space) {
                SetTuple sets = centered_tuple(e);
                for (std::size_t j = 0; j < sets.size(); ++j) {
                    sets[j] = translate(sets[j], entry.v[j]);
                }
                entry.dist = dist_to_orbit(config, sets).dist;
                if (*entry.dist > 0) {
                    entry.ratio = (r.psi0 - entry.psi) / (*entry.dist * *entry.dist);
                    if (!r.min_ratio || *entry.ratio < *r.min_ratio) {
                        r.min_ratio = entry.ratio;
                    }
                }
            }
            r.entries.push_back(std::move(entry));
        }
    }
    return r;
}

ShiftedKernelReport shifted_kernel_bound(const Configuration& config, const MeasureVector& e,
                                         const std::vector<Interval>& intervals, std::size_t j,
                                         const Vec& samples)
{
    if (intervals.size() != config.slots() || j >= config.slots()) {
        throw input_error("interval tuple does not match configuration");
    }
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (intervals[i].length() != e[i]) {
            throw input_error("|I_" + std::to_string(i + 1) + "| != e_" + std::to_string(i + 1));
        }
    }
    if (intervals[j].center() != 0) {
        throw input_error("the kernel slot must carry the centered interval");
    }
    std::vector<Constraint> cs;
    for (std::size_t i = 0; i < config.slots(); ++i) {
        if (i == j) {
            continue;
        }
        Vec neg = config.row(i);
        for (auto& x : neg) {
            x = -x;
        }
        cs.push_back({config.row(i), intervals[i].hi});
        cs.push_back({std::move(neg), -intervals[i].lo});
    }
    Polytope shifted(config.dim(), std::move(cs));
    Polytope centered = kernel_body(config, e, j);

    ShiftedKernelReport r;
    r.sup_difference = 0;
    r.max_offset = 0;
    for (const auto& iv : intervals) {
        r.max_offset = max(r.max_offset, abs(iv.center()));
    }
    for (const auto& s : samples) {
        Rational diff = abs(slice_volume(shifted, config.row(j), s)
                            - slice_volume(centered, config.row(j), s));
        r.sup_difference = max(r.sup_difference, diff);
    }
    if (r.max_offset > 0) {
        r.ratio = r.sup_difference / r.max_offset;
    }
    return r;
}

}  // namespace bll
