#include "bll/polytope.hpp"

#include "bll/linalg.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace bll {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

bool is_zero(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

Vec sub(const Vec& a, const Vec& b)
{
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

}  // namespace

Polytope::Polytope(std::size_t dim, std::vector<Constraint> constraints)
    : dim_(dim), constraints_(std::move(constraints))
{
    if (dim_ == 0) {
        throw error("polytope dimension must be at least 1");
    }
    for (const auto& c : constraints_) {
        if (c.normal.size() != dim_) {
            throw error("constraint normal has wrong length");
        }
        if (is_zero(c.normal)) {
            throw error("constraint normal is zero");
        }
    }
}

bool Polytope::contains(const Vec& x) const
{
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [&](const Constraint& c) { return dot(c.normal, x) <= c.bound; });
}

Polytope build_box_polytope(const Configuration& config, const std::vector<Interval>& boxes)
{
    if (boxes.size() != config.slots()) {
        throw error("box count does not match slot count");
    }
    std::vector<Constraint> cs;
    cs.reserve(2 * boxes.size());
    for (std::size_t j = 0; j < boxes.size(); ++j) {
        Vec neg(config.dim());
        for (std::size_t k = 0; k < config.dim(); ++k) {
            neg[k] = -config.row(j)[k];
        }
        cs.push_back({config.row(j), boxes[j].hi});
        cs.push_back({std::move(neg), -boxes[j].lo});
    }
    return Polytope(config.dim(), std::move(cs));
}

Polytope measure_body(const Configuration& config, const MeasureVector& e)
{
    std::vector<Interval> boxes;
    for (const auto& ej : e.values()) {
        boxes.push_back(centered_interval(ej));
    }
    return build_box_polytope(config, boxes);
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

void pivot(Mat& t, std::vector<std::size_t>& basis, std::size_t row, std::size_t col)
{
    const std::size_t width = t[row].size();
    Rational inv = 1 / t[row][col];
    for (std::size_t c = 0; c < width; ++c) {
        t[row][c] *= inv;
    }
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (r == row || t[r][col] == 0) {
            continue;
        }
        Rational f = t[r][col];
        for (std::size_t c = 0; c < width; ++c) {
            if (t[row][c] != 0) {
                t[r][c] -= f * t[row][c];
            }
        }
    }
    basis[row] = col;
}

enum class Outcome { optimal, unbounded };

// Bland's rule: smallest-index entering column with positive reduced cost,
// ratio-test ties broken by smallest basic variable index.
Outcome run_simplex(Mat& t, std::vector<std::size_t>& basis, const Vec& obj,
                    const std::vector<bool>& allowed)
{
    const std::size_t ncols = obj.size();
    const std::size_t rhs = ncols;
    for (;;) {
        std::vector<bool> basic(ncols, false);
        for (auto b : basis) {
            basic[b] = true;
        }
        std::size_t enter = npos;
        for (std::size_t j = 0; j < ncols && enter == npos; ++j) {
            if (!allowed[j] || basic[j]) {
                continue;
            }
            Rational rc = obj[j];
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i][j] != 0) {
                    rc -= obj[basis[i]] * t[i][j];
                }
            }
            if (rc > 0) {
                enter = j;
            }
        }
        if (enter == npos) {
            return Outcome::optimal;
        }
        std::size_t leave = npos;
        Rational best;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i][enter] <= 0) {
                continue;
            }
            Rational ratio = t[i][rhs] / t[i][enter];
            if (leave == npos || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == npos) {
            return Outcome::unbounded;
        }
        pivot(t, basis, leave, enter);
    }
}

struct StandardResult {
    LpStatus status;
    Vec z;
};

// max c.z  s.t.  A z <= b, z >= 0
StandardResult simplex_standard(const Mat& a, const Vec& b, const Vec& c)
{
    const std::size_t rows = a.size();
    const std::size_t n = c.size();
    const std::size_t art = n + rows;
    const std::size_t ncols = art + 1;
    Mat t(rows, Vec(ncols + 1, Rational(0)));
    std::vector<std::size_t> basis(rows);
    std::size_t most_negative = npos;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            t[i][j] = a[i][j];
        }
        t[i][n + i] = 1;
        t[i][art] = -1;
        t[i][ncols] = b[i];
        basis[i] = n + i;
        if (b[i] < 0 && (most_negative == npos || b[i] < b[most_negative])) {
            most_negative = i;
        }
    }

    std::vector<bool> allowed(ncols, true);
    if (most_negative != npos) {
        pivot(t, basis, most_negative, art);
        Vec phase1(ncols, Rational(0));
        phase1[art] = -1;
        run_simplex(t, basis, phase1, allowed);
        for (std::size_t i = 0; i < rows; ++i) {
            if (basis[i] == art) {
                if (t[i][ncols] != 0) {
                    return {LpStatus::infeasible, {}};
                }
                for (std::size_t j = 0; j < art; ++j) {
                    if (t[i][j] != 0) {
                        pivot(t, basis, i, j);
                        break;
                    }
                }
            }
        }
    }
    allowed[art] = false;
    for (std::size_t i = 0; i < rows; ++i) {
        t[i][art] = 0;
    }

    Vec obj(ncols, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        obj[j] = c[j];
    }
    if (run_simplex(t, basis, obj, allowed) == Outcome::unbounded) {
        return {LpStatus::unbounded, {}};
    }
    Vec z(n, Rational(0));
    for (std::size_t i = 0; i < rows; ++i) {
        if (basis[i] < n) {
            z[basis[i]] = t[i][ncols];
        }
    }
    return {LpStatus::optimal, std::move(z)};
}

// Slide an optimal point along directions orthogonal to its tight normals
// until the tight set has full rank. The objective is constant along such
// directions at an optimum.
Vec crossover_to_vertex(const Polytope& p, Vec x)
{
    const auto& cs = p.constraints();
    for (;;) {
        Mat tight;
        for (const auto& c : cs) {
            if (dot(c.normal, x) == c.bound) {
                tight.push_back(c.normal);
            }
        }
        Mat dirs = linalg::null_space(tight, p.dim());
        if (dirs.empty()) {
            return x;
        }
        bool moved = false;
        for (int sign : {1, -1}) {
            Vec d = dirs.front();
            if (sign < 0) {
                for (auto& v : d) {
                    v = -v;
                }
            }
            std::size_t block = npos;
            Rational step;
            for (std::size_t i = 0; i < cs.size(); ++i) {
                Rational rate = dot(cs[i].normal, d);
                if (rate <= 0) {
                    continue;
                }
                Rational s = (cs[i].bound - dot(cs[i].normal, x)) / rate;
                if (block == npos || s < step) {
                    block = i;
                    step = s;
                }
            }
            if (block != npos) {
                for (std::size_t k = 0; k < x.size(); ++k) {
                    x[k] += step * d[k];
                }
                moved = true;
                break;
            }
        }
        if (!moved) {
            return x;  // the optimal face contains a line
        }
    }
}

}  // namespace

LpResult lp_solve(const Polytope& p, const Vec& objective)
{
    if (objective.size() != p.dim()) {
        throw error("objective has wrong length");
    }
    const std::size_t d = p.dim();
    Mat a;
    Vec b;
    for (const auto& c : p.constraints()) {
        Vec row(2 * d);
        for (std::size_t k = 0; k < d; ++k) {
            row[k] = c.normal[k];
            row[d + k] = -c.normal[k];
        }
        a.push_back(std::move(row));
        b.push_back(c.bound);
    }
    Vec c2(2 * d);
    for (std::size_t k = 0; k < d; ++k) {
        c2[k] = objective[k];
        c2[d + k] = -objective[k];
    }
    auto res = simplex_standard(a, b, c2);
    LpResult out;
    out.status = res.status;
    if (res.status != LpStatus::optimal) {
        return out;
    }
    Vec x(d);
    for (std::size_t k = 0; k < d; ++k) {
        x[k] = res.z[k] - res.z[d + k];
    }
    out.point = crossover_to_vertex(p, std::move(x));
    out.value = dot(objective, out.point);
    return out;
}

LpOptimum lp_maximize(const Polytope& p, const Vec& objective)
{
    auto r = lp_solve(p, objective);
    switch (r.status) {
    case LpStatus::infeasible:
        throw error("infeasible linear program");
    case LpStatus::unbounded:
        throw error("unbounded objective");
    case LpStatus::optimal:
        break;
    }
    return {std::move(r.value), std::move(r.point)};
}

// ---------------------------------------------------------------------------
// Vertices and volume

bool is_bounded(const Polytope& p)
{
    const auto& cs = p.constraints();
    // Fast path: every normal has an opposite partner and the normals span.
    bool paired = true;
    for (std::size_t i = 0; i < cs.size() && paired; ++i) {
        bool found = false;
        for (std::size_t k = 0; k < cs.size() && !found; ++k) {
            Rational ratio;
            bool ok = true;
            bool have = false;
            for (std::size_t c = 0; c < p.dim() && ok; ++c) {
                const auto& x = cs[i].normal[c];
                const auto& y = cs[k].normal[c];
                if (x == 0 || y == 0) {
                    ok = x == y;
                } else if (!have) {
                    ratio = y / x;
                    have = true;
                    ok = ratio < 0;
                } else {
                    ok = y == ratio * x;
                }
            }
            found = ok && have;
        }
        paired = found;
    }
    Mat normals;
    for (const auto& c : cs) {
        normals.push_back(c.normal);
    }
    if (linalg::rank(normals, p.dim()) < p.dim()) {
        // a nonempty set with non-spanning normals contains a line
        return lp_solve(p, Vec(p.dim(), Rational(0))).status == LpStatus::infeasible;
    }
    if (paired) {
        return true;
    }
    for (std::size_t k = 0; k < p.dim(); ++k) {
        for (int sign : {1, -1}) {
            Vec obj(p.dim(), Rational(0));
            obj[k] = sign;
            auto r = lp_solve(p, obj);
            if (r.status == LpStatus::infeasible) {
                return true;
            }
            if (r.status == LpStatus::unbounded) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Vertex> enumerate_vertices(const Polytope& p)
{
    if (!is_bounded(p)) {
        throw error("unbounded polytope");
    }
    const std::size_t d = p.dim();
    const auto& cs = p.constraints();
    std::set<Vec> points;
    if (cs.size() >= d) {
        std::vector<std::size_t> idx(d);
        for (std::size_t k = 0; k < d; ++k) {
            idx[k] = k;
        }
        Mat a(d);
        Vec b(d);
        for (;;) {
            for (std::size_t k = 0; k < d; ++k) {
                a[k] = cs[idx[k]].normal;
                b[k] = cs[idx[k]].bound;
            }
            if (auto x = linalg::solve(a, b); x && !points.contains(*x) && p.contains(*x)) {
                points.insert(std::move(*x));
            }
            // next combination
            std::size_t k = d;
            while (k > 0 && idx[k - 1] == cs.size() - d + (k - 1)) {
                --k;
            }
            if (k == 0) {
                break;
            }
            ++idx[k - 1];
            for (std::size_t r = k; r < d; ++r) {
                idx[r] = idx[r - 1] + 1;
            }
        }
    }
    std::vector<Vertex> out;
    out.reserve(points.size());
    for (const auto& pt : points) {
        Vertex v{pt, {}};
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (dot(cs[i].normal, pt) == cs[i].bound) {
                v.active.push_back(i);
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

std::size_t affine_rank(const std::vector<Vec>& pts, const std::vector<std::size_t>& idx,
                        std::size_t k)
{
    Mat diffs;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        diffs.push_back(sub(pts[idx[i]], pts[idx[0]]));
    }
    return linalg::rank(diffs, k);
}

// Volume of a full-dimensional k-polytope given by its vertices and their
// active constraint ids: sum over facets of cones from the vertex centroid.
Rational face_volume(const std::vector<Vec>& pts, const std::vector<std::vector<std::size_t>>& act,
                     std::size_t k)
{
    if (k == 1) {
        Rational lo = pts[0][0], hi = pts[0][0];
        for (const auto& q : pts) {
            lo = min(lo, q[0]);
            hi = max(hi, q[0]);
        }
        return hi - lo;
    }
    Vec centroid(k, Rational(0));
    for (const auto& q : pts) {
        for (std::size_t c = 0; c < k; ++c) {
            centroid[c] += q[c];
        }
    }
    for (auto& c : centroid) {
        c /= static_cast<long>(pts.size());
    }

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (auto id : act[i]) {
            members[id].push_back(i);
        }
    }
    std::set<std::vector<std::size_t>> seen;
    Rational total = 0;
    for (const auto& [id, idx] : members) {
        if (idx.size() < k || !seen.insert(idx).second) {
            continue;
        }
        Mat diffs;
        for (std::size_t i = 1; i < idx.size(); ++i) {
            diffs.push_back(sub(pts[idx[i]], pts[idx[0]]));
        }
        Mat ns = linalg::null_space(diffs, k);
        if (ns.size() != 1) {
            continue;  // not a facet
        }
        const Vec& n = ns.front();
        Rational height = abs(dot(n, centroid) - dot(n, pts[idx[0]]));
        if (height == 0) {
            continue;
        }
        std::size_t drop = 0;
        while (n[drop] == 0) {
            ++drop;
        }
        std::vector<Vec> proj;
        std::vector<std::vector<std::size_t>> sub_act;
        proj.reserve(idx.size());
        for (auto i : idx) {
            Vec q;
            q.reserve(k - 1);
            for (std::size_t c = 0; c < k; ++c) {
                if (c != drop) {
                    q.push_back(pts[i][c]);
                }
            }
            proj.push_back(std::move(q));
            sub_act.push_back(act[i]);
        }
        total += height / abs(n[drop]) * face_volume(proj, sub_act, k - 1);
    }
    return total / static_cast<long>(k);
}

}  // namespace

Rational volume(const Polytope& p)
{
    auto verts = enumerate_vertices(p);
    const std::size_t d = p.dim();
    if (verts.size() < d + 1) {
        return 0;
    }
    std::vector<Vec> pts;
    std::vector<std::vector<std::size_t>> act;
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        pts.push_back(verts[i].point);
        act.push_back(verts[i].active);
        all.push_back(i);
    }
    if (affine_rank(pts, all, d) < d) {
        return 0;
    }
    return face_volume(pts, act, d);
}

// ---------------------------------------------------------------------------
// Slices

Rational multi_slice_volume(const Polytope& p, const Mat& functionals, const Vec& levels)
{
    const std::size_t d = p.dim();
    const std::size_t k = functionals.size();
    if (k == 0 || levels.size() != k) {
        throw error("slice needs one level per functional");
    }
    for (const auto& f : functionals) {
        if (f.size() != d) {
            throw error("slice functional has wrong length");
        }
        if (is_zero(f)) {
            throw error("slice functional is zero");
        }
    }
    if (k > d) {
        throw error("more slice functionals than dimensions");
    }
    auto ech = linalg::rref(functionals, d);
    if (ech.pivots.size() < k) {
        throw error("colinear functionals");
    }

    // Columns w_i with F w_i = e_i (supported on the pivot columns) and a
    // kernel basis b_q for each free column q.
    Mat square(k, Vec(k));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            square[r][c] = functionals[r][ech.pivots[c]];
        }
    }
    Mat cols;
    for (std::size_t i = 0; i < k; ++i) {
        Vec unit(k, Rational(0));
        unit[i] = 1;
        auto sol = linalg::solve(square, unit);
        Vec w(d, Rational(0));
        for (std::size_t c = 0; c < k; ++c) {
            w[ech.pivots[c]] = (*sol)[c];
        }
        cols.push_back(std::move(w));
    }
    Mat kernel = linalg::null_space(functionals, d);
    for (const auto& b : kernel) {
        cols.push_back(b);
    }
    Rational jacobian = abs(linalg::determinant(linalg::transpose(cols, d)));

    Vec origin(d, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            origin[c] += levels[i] * cols[i][c];
        }
    }
    const std::size_t rd = d - k;
    std::vector<Constraint> reduced;
    for (const auto& c : p.constraints()) {
        Vec n(rd);
        for (std::size_t q = 0; q < rd; ++q) {
            n[q] = dot(c.normal, kernel[q]);
        }
        Rational rhs = c.bound - dot(c.normal, origin);
        if (is_zero(n)) {
            if (rhs < 0) {
                return 0;
            }
            continue;
        }
        reduced.push_back({std::move(n), std::move(rhs)});
    }
    if (rd == 0) {
        return jacobian;
    }
    return jacobian * volume(Polytope(rd, std::move(reduced)));
}

Rational slice_volume(const Polytope& p, const Vec& functional, const Rational& level)
{
    return multi_slice_volume(p, Mat{functional}, Vec{level});
}

Rational double_slice_volume(const Polytope& p, const Vec& f1, const Vec& f2,
                             const Rational& l1, const Rational& l2)
{
    if (p.dim() < 2) {
        throw error("double slice needs dimension at least 2");
    }
    return multi_slice_volume(p, Mat{f1, f2}, Vec{l1, l2});
}

}  // namespace bll
