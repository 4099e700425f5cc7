#include "bll/functional.hpp"

#include "bll/conditions.hpp"
#include "bll/linalg.hpp"

#include <algorithm>

namespace bll {

namespace {

void require_nondegenerate(const Configuration& config)
{
    if (!check_nondegenerate(config).ok) {
        throw error("degenerate configuration");
    }
}

// Coordinates y = L_{J'}(x) for a basis subset J'. Every other row is a fixed
// combination of y, so interval arithmetic over the J' boxes bounds it exactly.
struct BasisScreen {
    std::vector<std::size_t> basis;
    std::vector<std::size_t> others;
    Mat coeffs;  // coeffs[k] expresses row others[k] in the basis rows

    explicit BasisScreen(const Configuration& config)
    {
        const std::size_t m = config.dim();
        Mat chosen;
        for (std::size_t j = 0; j < config.slots(); ++j) {
            Mat trial = chosen;
            trial.push_back(config.row(j));
            if (chosen.size() < m && linalg::rank(trial, m) == trial.size()) {
                chosen = std::move(trial);
                basis.push_back(j);
            } else {
                others.push_back(j);
            }
        }
        // row_j = c . M, solve M^T c = row_j
        Mat mt = linalg::transpose(chosen, m);
        for (auto j : others) {
            coeffs.push_back(*linalg::solve(mt, config.row(j)));
        }
    }

    // False when the box polytope certainly has zero volume.
    bool may_have_volume(const std::vector<Interval>& boxes) const
    {
        for (std::size_t k = 0; k < others.size(); ++k) {
            Rational lo = 0, hi = 0;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                const auto& c = coeffs[k][b];
                const auto& box = boxes[basis[b]];
                if (c > 0) {
                    lo += c * box.lo;
                    hi += c * box.hi;
                } else if (c < 0) {
                    lo += c * box.hi;
                    hi += c * box.lo;
                }
            }
            const auto& target = boxes[others[k]];
            if (hi <= target.lo || lo >= target.hi) {
                return false;
            }
        }
        return true;
    }
};

}  // namespace

Rational phi(const Configuration& config, const SetTuple& sets)
{
    if (sets.size() != config.slots()) {
        throw error("set tuple has " + std::to_string(sets.size()) + " slots, expected "
                    + std::to_string(config.slots()));
    }
    require_nondegenerate(config);
    for (const auto& s : sets) {
        if (s.empty()) {
            return 0;
        }
    }
    BasisScreen screen(config);
    const std::size_t n = sets.size();
    std::vector<std::size_t> pick(n, 0);
    std::vector<Interval> boxes(n);
    Rational total = 0;
    for (;;) {
        for (std::size_t j = 0; j < n; ++j) {
            boxes[j] = sets[j].components()[pick[j]];
        }
        if (screen.may_have_volume(boxes)) {
            total += volume(build_box_polytope(config, boxes));
        }
        std::size_t j = 0;
        while (j < n && ++pick[j] == sets[j].size()) {
            pick[j] = 0;
            ++j;
        }
        if (j == n) {
            break;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------

Rational Polynomial::operator()(const Rational& x) const
{
    Rational acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = acc * x + coeffs[i];
    }
    return acc;
}

Rational Polynomial::derivative(const Rational& x) const
{
    Rational acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 1;) {
        acc = acc * x + coeffs[i] * static_cast<long>(i);
    }
    return acc;
}

Rational Polynomial::integral(const Rational& a, const Rational& b) const
{
    auto antiderivative = [&](const Rational& x) -> Rational {
        Rational acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            acc = acc * x + coeffs[i] / static_cast<long>(i + 1);
        }
        return acc * x;
    };
    return antiderivative(b) - antiderivative(a);
}

Polynomial Polynomial::fit(const std::vector<std::pair<Rational, Rational>>& points)
{
    const std::size_t n = points.size();
    Mat v(n, Vec(n));
    Vec y(n);
    for (std::size_t r = 0; r < n; ++r) {
        Rational p = 1;
        for (std::size_t c = 0; c < n; ++c) {
            v[r][c] = p;
            p *= points[r].first;
        }
        y[r] = points[r].second;
    }
    auto sol = linalg::solve(std::move(v), std::move(y));
    if (!sol) {
        throw error("interpolation nodes must be distinct");
    }
    return Polynomial{std::move(*sol)};
}

// ---------------------------------------------------------------------------

Polytope kernel_body(const Configuration& config, const MeasureVector& e, std::size_t j)
{
    if (j >= config.slots()) {
        throw error("slot index out of range");
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
        cs.push_back({config.row(i), e[i] / 2});
        cs.push_back({std::move(neg), e[i] / 2});
    }
    return Polytope(config.dim(), std::move(cs));
}

Rational kernel_K(const Configuration& config, const MeasureVector& e, std::size_t j,
                  const Rational& s)
{
    require_nondegenerate(config);
    return slice_volume(kernel_body(config, e, j), config.row(j), s);
}

Vec kernel_breakpoints(const Configuration& config, const MeasureVector& e, std::size_t j)
{
    require_nondegenerate(config);
    Vec levels;
    for (const auto& v : enumerate_vertices(kernel_body(config, e, j))) {
        levels.push_back(config.apply(j, v.point));
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

namespace {

// K_j has degree <= m-1 on a piece; m+1 nodes over [a, b].
Polynomial fit_piece(const Configuration& config, std::size_t j, const Polytope& body,
                     const Rational& a, const Rational& b)
{
    const std::size_t nodes = config.dim() + 1;
    std::vector<std::pair<Rational, Rational>> pts;
    for (std::size_t k = 0; k < nodes; ++k) {
        Rational x = a + (b - a) * make_rational(static_cast<long>(k), static_cast<long>(nodes - 1));
        pts.emplace_back(x, slice_volume(body, config.row(j), x));
    }
    return Polynomial::fit(pts);
}

}  // namespace

std::vector<KernelPiece> kernel_pieces(const Configuration& config, const MeasureVector& e,
                                       std::size_t j)
{
    Vec levels = kernel_breakpoints(config, e, j);
    Polytope body = kernel_body(config, e, j);
    std::vector<KernelPiece> out;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        out.push_back({Interval(levels[k], levels[k + 1]),
                       fit_piece(config, j, body, levels[k], levels[k + 1])});
    }
    return out;
}

KernelTable kernel_table(const Configuration& config, const MeasureVector& e, std::size_t j,
                         const Vec& points)
{
    KernelTable t;
    t.slot = j;
    Polytope body = kernel_body(config, e, j);
    require_nondegenerate(config);
    for (const auto& s : points) {
        t.samples.emplace_back(s, slice_volume(body, config.row(j), s));
    }
    t.pieces = kernel_pieces(config, e, j);
    return t;
}

Rational kernel_K_left_derivative(const Configuration& config, const MeasureVector& e,
                                  std::size_t j, const Rational& s)
{
    if (s <= 0) {
        throw error("left derivative requires s > 0");
    }
    Vec levels = kernel_breakpoints(config, e, j);
    if (levels.empty() || s > levels.back()) {
        return 0;
    }
    Polytope body = kernel_body(config, e, j);
    auto K = [&](const Rational& x) { return slice_volume(body, config.row(j), x); };

    // Largest breakpoint strictly below s bounds the first window.
    Rational h = s;
    for (const auto& b : levels) {
        if (b < s) {
            h = s - b;
        }
    }
    const long nodes = static_cast<long>(config.dim()) + 1;
    for (int attempt = 0; attempt < derivative_retry_budget; ++attempt) {
        std::vector<std::pair<Rational, Rational>> pts;
        for (long k = 1; k <= nodes; ++k) {
            Rational x = s - h * make_rational(k, nodes + 1);
            pts.emplace_back(x, K(x));
        }
        Polynomial p = Polynomial::fit(pts);
        Rational probe = s - h * make_rational(1, 2 * (nodes + 1));
        if (p(probe) == K(probe) && p(s) == K(s)) {
            return p.derivative(s);
        }
        h /= 2;
    }
    throw error("breakpoint congestion: no polynomial window down to h = " + h.get_str());
}

Rational integrate_kernel(const Configuration& config, const MeasureVector& e, std::size_t j,
                          const IntervalUnion& a)
{
    auto pieces = kernel_pieces(config, e, j);
    Rational total = 0;
    for (const auto& comp : a.components()) {
        for (const auto& piece : pieces) {
            Rational lo = max(comp.lo, piece.support.lo);
            Rational hi = min(comp.hi, piece.support.hi);
            if (lo < hi) {
                total += piece.poly.integral(lo, hi);
            }
        }
    }
    return total;
}

Rational kernel_L(const Configuration& config, const MeasureVector& e, std::size_t i,
                  std::size_t j, const Rational& s, const Rational& t)
{
    if (i == j) {
        throw error("kernel_L needs distinct slots");
    }
    require_nondegenerate(config);
    std::vector<Constraint> cs;
    for (std::size_t k = 0; k < config.slots(); ++k) {
        if (k == i || k == j) {
            continue;
        }
        Vec neg = config.row(k);
        for (auto& x : neg) {
            x = -x;
        }
        cs.push_back({config.row(k), e[k] / 2});
        cs.push_back({std::move(neg), e[k] / 2});
    }
    return double_slice_volume(Polytope(config.dim(), std::move(cs)), config.row(i),
                               config.row(j), s, t);
}

// ---------------------------------------------------------------------------

namespace {

void require_measures(const MeasureVector& e, const SetTuple& sets)
{
    if (sets.size() != e.size()) {
        throw error("set tuple and measure vector differ in length");
    }
    for (std::size_t j = 0; j < sets.size(); ++j) {
        if (measure(sets[j]) != e[j]) {
            throw error("|E_" + std::to_string(j + 1) + "| != e_" + std::to_string(j + 1));
        }
    }
}

}  // namespace

Rational first_order_term(const Configuration& config, const MeasureVector& e,
                          const SetTuple& sets, std::size_t j)
{
    require_measures(e, sets);
    SetTuple star = centered_tuple(e);
    SetTuple mixed = star;
    mixed[j] = sets[j];
    return phi(config, mixed) - phi(config, star);
}

Rational second_order_term(const Configuration& config, const MeasureVector& e,
                           const SetTuple& sets, std::size_t i, std::size_t j)
{
    if (i == j) {
        throw error("second-order term needs distinct slots");
    }
    require_measures(e, sets);
    SetTuple star = centered_tuple(e);
    SetTuple both = star, only_i = star, only_j = star;
    both[i] = sets[i];
    both[j] = sets[j];
    only_i[i] = sets[i];
    only_j[j] = sets[j];
    return phi(config, both) - phi(config, only_i) - phi(config, only_j) + phi(config, star);
}

Rational expansion_residual(const Configuration& config, const MeasureVector& e,
                            const SetTuple& sets)
{
    require_measures(e, sets);
    const std::size_t n = sets.size();
    SetTuple star = centered_tuple(e);
    Rational phi_star = phi(config, star);
    Vec single(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (sets[j] == star[j]) {
            single[j] = phi_star;
            continue;
        }
        SetTuple t = star;
        t[j] = sets[j];
        single[j] = phi(config, t);
    }
    Rational residual = phi(config, sets) - phi_star;
    for (std::size_t j = 0; j < n; ++j) {
        residual -= single[j] - phi_star;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (sets[i] == star[i] || sets[j] == star[j]) {
                continue;  // f_i or f_j vanishes
            }
            SetTuple t = star;
            t[i] = sets[i];
            t[j] = sets[j];
            residual -= phi(config, t) - single[i] - single[j] + phi_star;
        }
    }
    return residual;
}

Rational psi(const Configuration& config, const MeasureVector& e, const Vec& v)
{
    if (v.size() != config.slots() || e.size() != config.slots()) {
        throw error("psi needs one shift and one measure per slot");
    }
    require_nondegenerate(config);
    std::vector<Interval> boxes;
    for (std::size_t j = 0; j < v.size(); ++j) {
        boxes.emplace_back(v[j] - e[j] / 2, v[j] + e[j] / 2);
    }
    return volume(build_box_polytope(config, boxes));
}

IntervalUnion shell_perturbation(const Rational& ej, const Rational& eta, int side,
                                 const Rational& gap)
{
    if (eta <= 0 || eta >= ej || gap < 0) {
        throw error("shell perturbation needs 0 < eta < e_j and gap >= 0");
    }
    Rational a = ej / 2;
    if (side >= 0) {
        return normalize({Interval(-a, a - eta), Interval(a + gap, a + gap + eta)});
    }
    return normalize({Interval(-a - gap - eta, -a - gap), Interval(-a + eta, a)});
}

}  // namespace bll
