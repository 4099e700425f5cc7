#include "support.hpp"

#include "bll/functional.hpp"
#include "bll/linalg.hpp"

#include <doctest.h>

#include <cmath>

using namespace bll;
using testing::q;
using testing::U;

namespace {

const MeasureVector rs_e{Vec{2, 2, 2}};

SetTuple random_tuple(Rng& rng, const Configuration& config, int max_components)
{
    SetTuple sets;
    for (std::size_t j = 0; j < config.slots(); ++j) {
        sets.push_back(testing::random_union(rng, max_components, 2, 4));
    }
    return sets;
}

std::vector<Configuration> test_configs()
{
    PresetParams p;
    p.n = 4;
    p.m = 3;
    p.seed = 9;
    return {riesz_sobolev(), gowers(2), builtin_config("random", p).config};
}

// Every size-m subset of {0..n-1}.
void subsets(std::size_t n, std::size_t m, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == m) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, m, i + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

TEST_CASE("phi examples")
{
    const auto rs = riesz_sobolev();
    CHECK(phi(rs, centered_tuple(rs_e)) == 3);
    const auto split = U({{"-3/2", "-1/2"}, {"1/2", "3/2"}});
    CHECK(phi(rs, {split, U({{"-1", "1"}}), U({{"-1", "1"}})}) == 2);
    CHECK(phi(rs, {U({{"0", "2"}}), U({{"0", "2"}}), U({{"-3", "-1"}})}) == 3);
    CHECK_THROWS(phi(Configuration(2, Mat{{1, 0}, {2, 0}, {0, 1}}), SetTuple(3, U({{"0", "1"}}))));
}

TEST_CASE("phi agrees with polygon clipping on two-dimensional configurations")
{
    Rng rng(8);
    const Configuration four(2, Mat{{1, 0}, {0, 1}, {1, 1}, {1, -2}});
    for (const auto& config : {riesz_sobolev(), four}) {
        for (int trial = 0; trial < 25; ++trial) {
            const auto sets = random_tuple(rng, config, 3);
            CHECK(phi(config, sets) == testing::clipped_phi(config, sets));
        }
    }
}

TEST_CASE("phi is translation invariant along the orbit")
{
    Rng rng(2);
    for (const auto& config : test_configs()) {
        for (int trial = 0; trial < 8; ++trial) {
            const auto sets = random_tuple(rng, config, 2);
            const Rational base = phi(config, sets);
            for (int k = 0; k < 5; ++k) {
                const Vec v = testing::random_vec(rng, config.dim());
                SetTuple moved;
                for (std::size_t j = 0; j < sets.size(); ++j) {
                    moved.push_back(translate(sets[j], config.apply(j, v)));
                }
                CHECK(phi(config, moved) == base);
            }
        }
    }
}

TEST_CASE("rearrangement inequality and basis-subset bound")
{
    Rng rng(4);
    for (const auto& config : test_configs()) {
        std::vector<std::vector<std::size_t>> subs;
        std::vector<std::size_t> cur;
        subsets(config.slots(), config.dim(), 0, cur, subs);
        for (int trial = 0; trial < 12; ++trial) {
            const auto sets = random_tuple(rng, config, 3);
            const Rational value = phi(config, sets);
            CHECK(value >= 0);
            CHECK(value <= phi(config, symmetrize(sets)));
            for (const auto& s : subs) {
                Mat rows;
                Rational prod = 1;
                for (auto i : s) {
                    rows.push_back(config.row(i));
                    prod *= measure(sets[i]);
                }
                const Rational det = linalg::determinant(rows);
                if (det != 0) {
                    CHECK(value <= prod / abs(det));
                }
            }
        }
    }
}

TEST_CASE("polynomial interpolation")
{
    const auto p = Polynomial::fit({{0, 1}, {1, 2}, {2, 5}});
    CHECK(p(3) == 10);
    CHECK(p.derivative(1) == 2);
    CHECK(p.integral(0, 3) == 12);
}

TEST_CASE("kernel examples")
{
    const auto rs = riesz_sobolev();
    CHECK(kernel_K(rs, rs_e, 2, 0) == 2);
    CHECK(kernel_K(rs, rs_e, 2, 1) == 1);
    CHECK(kernel_K(rs, rs_e, 2, 3) == 0);
    CHECK(kernel_K(rs, rs_e, 2, q(1, 3)) == q(5, 3));
    CHECK(kernel_breakpoints(rs, rs_e, 2) == Vec{-2, 0, 2});
    CHECK(integrate_kernel(rs, rs_e, 2, U({{"-1", "1"}})) == 3);

    CHECK(kernel_K_left_derivative(rs, rs_e, 2, 1) == -1);
    CHECK(kernel_K_left_derivative(rs, rs_e, 2, 5) == 0);
    CHECK_THROWS(kernel_K_left_derivative(rs, rs_e, 2, 0));
    // lengths 2 and 6 convolve to a trapezoid, flat on |s| <= 2
    const Configuration trap(2, Mat{{1, 0}, {0, 1}, {1, 1}});
    const MeasureVector te(Vec{2, 6, 1});
    CHECK(kernel_K_left_derivative(trap, te, 2, 1) == 0);
    CHECK(kernel_K_left_derivative(trap, te, 2, 3) == -1);

    const auto table = kernel_table(rs, rs_e, 2, Vec{-2, -1, 0, 1, 2});
    REQUIRE(table.samples.size() == 5);
    CHECK(table.samples[2].second == 2);
    CHECK(table.pieces.size() == 2);
}

TEST_CASE("kernels are even, nonincreasing on the right and reproduce phi")
{
    Rng rng(6);
    const std::vector<std::pair<Configuration, MeasureVector>> cases{
        {riesz_sobolev(), rs_e},
        {gowers(2), MeasureVector(Vec{1, 1, 1, q(3, 2)})},
        {test_configs()[2], MeasureVector(Vec{2, 2, 2, 2})},
    };
    for (const auto& [config, e] : cases) {
        for (std::size_t j = 0; j < config.slots(); ++j) {
            Rational prev = kernel_K(config, e, j, 0);
            for (int k = 1; k <= 24; ++k) {
                const Rational s = q(k, 6);
                const Rational here = kernel_K(config, e, j, s);
                CHECK(here == kernel_K(config, e, j, -s));
                CHECK(here <= prev);
                prev = here;
            }
            const auto star = centered_tuple(e);
            CHECK(integrate_kernel(config, e, j, star[j]) == phi(config, star));
            for (int trial = 0; trial < 3; ++trial) {
                auto sets = star;
                sets[j] = testing::random_union(rng, 3, 2, 4);
                CHECK(integrate_kernel(config, e, j, sets[j]) == phi(config, sets));
            }
        }
    }
}

TEST_CASE("codimension-two kernel")
{
    const auto rs = riesz_sobolev();
    CHECK(kernel_L(rs, rs_e, 0, 1, 0, 0) == 1);
    CHECK(kernel_L(rs, rs_e, 0, 1, 1, 1) == 0);
    CHECK(kernel_L(rs, rs_e, 0, 1, 5, -9) == 0);
    const MeasureVector ge(Vec{1, 1, 1, 1});
    CHECK(kernel_L(gowers(2), ge, 0, 1, 0, 0) == 1);
    CHECK(kernel_L(gowers(2), ge, 0, 1, q(1, 4), 0) == q(3, 4));
    CHECK(kernel_L(gowers(2), ge, 0, 1, 7, 7) == 1);
    CHECK(kernel_L(gowers(2), ge, 0, 1, 7, 0) == 0);
}

TEST_CASE("codimension-two kernel is Lipschitz near the corners")
{
    const auto g = gowers(2);
    const MeasureVector e(Vec{1, 1, 1, q(3, 2)});
    for (std::size_t i = 0; i < g.slots(); ++i) {
        for (std::size_t j = 0; j < g.slots(); ++j) {
            if (i == j) {
                continue;
            }
            for (int si : {-1, 1}) {
                for (int sj : {-1, 1}) {
                    const Rational s = e[i] / 2 * si;
                    const Rational t = e[j] / 2 * sj;
                    double worst = 0;
                    for (long inv = 16; inv <= 256; inv *= 2) {
                        const Rational h = q(1, inv);
                        const Rational base = kernel_L(g, e, i, j, s - h * si, t - h * sj);
                        for (const auto& [ds, dt] : {std::pair{h, Rational(0)}, {Rational(0), h}}) {
                            const Rational moved =
                                kernel_L(g, e, i, j, s - h * si + ds, t - h * sj + dt);
                            worst = std::max(worst, std::abs(Rational(moved - base).get_d()) / h.get_d());
                        }
                    }
                    CHECK(worst <= 4.0);
                }
            }
        }
    }
}

TEST_CASE("first-order term")
{
    const auto rs = riesz_sobolev();
    const auto star = centered_tuple(rs_e);
    CHECK(first_order_term(rs, rs_e, star, 0) == 0);
    auto sets = star;
    sets[0] = U({{"-3/2", "-1/2"}, {"1/2", "3/2"}});
    CHECK(first_order_term(rs, rs_e, sets, 0) == -1);

    Rng rng(12);
    const auto g = gowers(2);
    const MeasureVector ge(Vec{1, 1, 1, q(3, 2)});
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t j = trial % 4;
        auto t = centered_tuple(ge);
        t[j] = testing::random_union_with_measure(rng, ge[j], 3);
        CHECK(first_order_term(g, ge, t, j) <= 0);
    }
}

TEST_CASE("second-order term symmetry and vanishing")
{
    const auto g = gowers(2);
    const MeasureVector ge(Vec{1, 1, 1, q(3, 2)});
    auto sets = centered_tuple(ge);
    CHECK(second_order_term(g, ge, sets, 0, 1) == 0);
    sets[0] = shell_perturbation(ge[0], q(1, 8), 1, q(1, 16));
    CHECK(second_order_term(g, ge, sets, 0, 1) == 0);
    sets[1] = shell_perturbation(ge[1], q(1, 8), -1);
    CHECK(second_order_term(g, ge, sets, 0, 1) == second_order_term(g, ge, sets, 1, 0));
}

namespace {

// Midpoint rule for the double integral of kernel(s, t) f_i(s) f_j(t), where
// f = 1_E - 1_{E*} is +1 on E \ E* and -1 on E* \ E.
struct Cell {
    double x;
    double sign;
};

std::vector<Cell> signed_cells(const IntervalUnion& e, const IntervalUnion& star, double step)
{
    const Rational a = star.components().front().hi;
    const IntervalUnion outside{{-1000, -a}, {a, 1000}};
    const auto plus = set_intersection(e, outside);
    std::vector<Cell> out;
    auto add = [&](const IntervalUnion& u, double sign) {
        for (const auto& c : u.components()) {
            const double lo = c.lo.get_d();
            const int n = static_cast<int>(std::llround(c.length().get_d() / step));
            for (int k = 0; k < n; ++k) {
                out.push_back({lo + (k + 0.5) * step, sign});
            }
        }
    };
    add(plus, 1);
    // E* minus E: the pieces of E* not covered by E
    std::vector<Interval> gaps;
    Rational cursor = -a;
    const auto covered = set_intersection(e, star);
    for (const auto& c : covered.components()) {
        if (c.lo > cursor) {
            gaps.emplace_back(cursor, c.lo);
        }
        cursor = c.hi;
    }
    if (cursor < a) {
        gaps.emplace_back(cursor, a);
    }
    add(normalize(gaps), -1);
    return out;
}

template <class Kernel>
double quadrature(const IntervalUnion& ei, const IntervalUnion& si, const IntervalUnion& ej,
                  const IntervalUnion& sj, double step, Kernel kernel)
{
    const auto a = signed_cells(ei, si, step);
    const auto b = signed_cells(ej, sj, step);
    double sum = 0;
    for (const auto& p : a) {
        for (const auto& r : b) {
            sum += p.sign * r.sign * kernel(p.x, r.x);
        }
    }
    return sum * step * step;
}

}  // namespace

TEST_CASE("second-order term matches midpoint quadrature")
{
    const auto rs = riesz_sobolev();
    auto sets = centered_tuple(rs_e);
    const auto star = sets;
    sets[0] = shell_perturbation(2, q(1, 4), 1, q(3, 4));
    sets[1] = shell_perturbation(2, q(1, 4), -1);
    // pinning x1 = s and x2 = t leaves the indicator of |s + t| <= 1
    const double oracle = quadrature(sets[0], star[0], sets[1], star[1], 1e-3,
                                     [](double s, double t) { return std::abs(s + t) <= 1 ? 1.0 : 0.0; });
    const double exact = second_order_term(rs, rs_e, sets, 0, 1).get_d();
    CHECK(std::abs(exact - oracle) < 5e-3);
    CHECK(exact != 0);

    const auto g = gowers(2);
    const MeasureVector ge(Vec{1, 1, 1, q(3, 2)});
    auto gs = centered_tuple(ge);
    const auto gstar = gs;
    gs[0] = shell_perturbation(1, q(1, 8), 1, q(1, 16));
    gs[3] = shell_perturbation(q(3, 2), q(1, 8), -1);
    // pinning x1 = s and x1 + x2 + x3 = t leaves x2 free with
    // |s + x2| <= 1/2 and |t - x2| <= 1/2; the change of variables has unit Jacobian
    auto slice = [](double s, double t) {
        const double lo = std::max(-0.5 - s, t - s - (0.5 - s));
        const double hi = std::min(0.5 - s, t - s - (-0.5 - s));
        return std::max(0.0, hi - lo);
    };
    const double goracle = quadrature(gs[0], gstar[0], gs[3], gstar[3], 1e-3, slice);
    const double gexact = second_order_term(g, ge, gs, 0, 3).get_d();
    CHECK(std::abs(gexact - goracle) < 1e-3);
}

TEST_CASE("expansion residual")
{
    const auto g = gowers(2);
    const MeasureVector ge(Vec{1, 1, 1, q(3, 2)});
    const auto star = centered_tuple(ge);
    CHECK(expansion_residual(g, ge, star) == 0);

    const Vec y{q(1, 10), q(-1, 20), q(1, 30)};
    SetTuple orbit;
    for (std::size_t j = 0; j < star.size(); ++j) {
        orbit.push_back(translate(star[j], g.apply(j, y)));
    }
    CHECK(phi(g, orbit) == phi(g, star));
    Rational terms = 0;
    for (std::size_t j = 0; j < 4; ++j) {
        terms += first_order_term(g, ge, orbit, j);
        for (std::size_t i = 0; i < j; ++i) {
            terms += second_order_term(g, ge, orbit, i, j);
        }
    }
    CHECK(expansion_residual(g, ge, orbit) == -terms);
}

TEST_CASE("translated box volume")
{
    const auto rs = riesz_sobolev();
    CHECK(psi(rs, rs_e, Vec{0, 0, 0}) == 3);
    for (const auto& w : {q(1, 10), q(1, 5), q(1, 2), q(1), q(-3, 4)}) {
        // square [-1,1]^2 minus the corner triangles beyond |x1 + x2 + w| <= 1
        const Rational clipped = testing::clipped_area(rs.rows(), {Interval(-1, 1), Interval(-1, 1),
                                                                   Interval(w - 1, w + 1)});
        CHECK(psi(rs, rs_e, Vec{0, 0, w}) == clipped);
        CHECK(psi(rs, rs_e, Vec{0, 0, w}) == 3 - w * w);
    }
    CHECK(psi(rs, rs_e, Vec{0, 0, q(1, 2)}) == q(11, 4));

    Rng rng(19);
    const auto g = gowers(2);
    const MeasureVector ge(Vec{1, 1, 1, q(3, 2)});
    const Rational g0 = psi(g, ge, Vec(4, 0));
    for (int trial = 0; trial < 20; ++trial) {
        const Vec v = testing::random_vec(rng, 4, 1, 8);
        Vec neg = v;
        for (auto& x : neg) {
            x = -x;
        }
        const Rational p = psi(g, ge, v);
        CHECK(p == psi(g, ge, neg));
        CHECK(p <= g0);
        const Vec y = testing::random_vec(rng, 3, 1, 8);
        Vec row_space;
        for (std::size_t j = 0; j < 4; ++j) {
            row_space.push_back(g.apply(j, y));
        }
        CHECK(psi(g, ge, row_space) == g0);
    }
}

TEST_CASE("shell perturbation")
{
    CHECK(shell_perturbation(2, q(1, 4), 1) == U({{"-1", "3/4"}, {"1", "5/4"}}));
    const auto s = shell_perturbation(2, q(1, 4), -1, q(1, 2));
    CHECK(s == U({{"-7/4", "-3/2"}, {"-3/4", "1"}}));
    CHECK(measure(s) == 2);
    CHECK_THROWS(shell_perturbation(2, 2, 1));
}
