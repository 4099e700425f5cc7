// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "support.hpp"

#include "bll/conditions.hpp"
#include "bll/experiments.hpp"
#include "bll/flow.hpp"
#include "bll/functional.hpp"
#include "bll/linalg.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

using namespace bll;
using testing::q;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_seconds,
               const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& ex) {
        out = {false, std::string("exception: ") + ex.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= budget_seconds;
    const bool pass = out.ok && in_time;
    failures += !pass;
    std::printf("[%s] %2d %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), out.detail.c_str(), secs, budget_seconds,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
}

const MeasureVector rs_e{Vec{2, 2, 2}};
const MeasureVector gp_e{Vec{1, 1, 1, q(3, 2)}};

std::vector<Configuration> random_configs()
{
    std::vector<Configuration> out;
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{4, 3}, {5, 3}, {6, 3}};
    std::uint64_t seed = 1;
    for (const auto& [n, m] : shapes) {
        PresetParams p;
        p.n = n;
        p.m = m;
        p.seed = seed++;
        out.push_back(builtin_config("random", p).config);
    }
    return out;
}

SetTuple random_tuple(Rng& rng, const Configuration& config, int max_components)
{
    SetTuple sets;
    for (std::size_t j = 0; j < config.slots(); ++j) {
        sets.push_back(testing::random_union(rng, max_components, 2, 4));
    }
    return sets;
}

SetTuple shifted_star(const MeasureVector& e, const Vec& shifts)
{
    auto sets = centered_tuple(e);
    for (std::size_t j = 0; j < sets.size(); ++j) {
        sets[j] = translate(sets[j], shifts[j]);
    }
    return sets;
}

std::string fmt(double x)
{
    std::ostringstream ss;
    ss.precision(6);
    ss << x;
    return ss.str();
}

// Tuples of criterion 3, reused by criterion 11.
std::vector<std::pair<Configuration, SetTuple>> positivity_tuples;

}  // namespace

int main()
{
    criterion(1, "exact Riesz-Sobolev value", 1, [] {
        const Rational v = phi(riesz_sobolev(), centered_tuple(rs_e));
        // hexagon {|x1|,|x2|,|x1+x2| <= 1} by exact polygon clipping
        const Rational oracle = testing::clipped_area(
            riesz_sobolev().rows(), {Interval(-1, 1), Interval(-1, 1), Interval(-1, 1)});
        return Outcome{v == 3 && oracle == 3, "phi = " + short_string(v)};
    });

    criterion(2, "translation symmetry", 60, [] {
        Rng rng(2024);
        std::vector<Configuration> configs{riesz_sobolev(), gowers(2), random_configs()[0]};
        std::size_t checks = 0, bad = 0;
        for (const auto& config : configs) {
            for (int t = 0; t < 20; ++t) {
                const auto sets = random_tuple(rng, config, 2);
                const Rational base = phi(config, sets);
                for (int k = 0; k < 100; ++k) {
                    const Vec v = testing::random_vec(rng, config.dim(), 3, 11);
                    SetTuple moved;
                    for (std::size_t j = 0; j < sets.size(); ++j) {
                        moved.push_back(translate(sets[j], config.apply(j, v)));
                    }
                    ++checks;
                    bad += phi(config, moved) != base;
                }
            }
        }
        return Outcome{bad == 0, std::to_string(checks) + " translated tuples, " +
                                     std::to_string(bad) + " mismatches"};
    });

    criterion(3, "rearrangement inequality on random tuples", 600, [] {
        Rng rng(3);
        std::vector<Configuration> configs{riesz_sobolev(), gowers(2)};
        for (auto& c : random_configs()) {
            configs.push_back(c);
        }
        std::size_t bad = 0;
        Rational min_deficit;
        bool first = true;
        for (int t = 0; t < 1000; ++t) {
            const auto& config = configs[t % configs.size()];
            const auto sets = random_tuple(rng, config, 3);
            const Rational d = phi(config, symmetrize(sets)) - phi(config, sets);
            bad += d < 0;
            if (first || d < min_deficit) {
                min_deficit = d;
                first = false;
            }
            positivity_tuples.emplace_back(config, sets);
        }
        return Outcome{bad == 0, "1000 tuples on 5 configurations, min deficit " +
                                     short_string(min_deficit) + ", negatives " +
                                     std::to_string(bad)};
    });

    criterion(4, "symmetrization flow suite", 600, [] {
        Rng rng(4);
        std::size_t bad_measure = 0, bad_end = 0, bad_mono = 0, bad_contract = 0, bad_incl = 0;
        Vec grid;
        for (int k = 0; k <= 63; ++k) {
            grid.push_back(q(k, 63));
        }
        const Configuration configs[] = {riesz_sobolev(), gowers(2)};
        for (int t = 0; t < 100; ++t) {
            const auto& config = configs[t % 2];
            const auto sets = random_tuple(rng, config, 3);
            for (const auto& s : sets) {
                for (const auto& time : grid) {
                    bad_measure += measure(flow_state(s, time)) != measure(s);
                }
                bad_end += flow_state(s, 1) != symmetrize(s);
            }
            const auto trace = flow_trace(config, sets, grid);
            for (std::size_t i = 1; i < trace.size(); ++i) {
                bad_mono += trace[i].phi < trace[i - 1].phi;
            }
        }
        for (int t = 0; t < 100; ++t) {
            const auto a = testing::random_union(rng, 3);
            const auto b = testing::random_union(rng, 3);
            const auto big = set_union(a, testing::random_union(rng, 3));
            const Rational d0 = symmetric_difference_measure(a, b);
            for (const auto& time : grid) {
                const auto at = flow_state(a, time);
                bad_contract += symmetric_difference_measure(at, flow_state(b, time)) > d0;
                bad_incl += !is_subset(at, flow_state(big, time));
            }
        }
        const std::size_t bad = bad_measure + bad_end + bad_mono + bad_contract + bad_incl;
        return Outcome{bad == 0, "violations: measure " + std::to_string(bad_measure) +
                                     ", endpoint " + std::to_string(bad_end) + ", monotone " +
                                     std::to_string(bad_mono) + ", contractive " +
                                     std::to_string(bad_contract) + ", inclusion " +
                                     std::to_string(bad_incl)};
    });

    criterion(5, "quadratic family oracle", 10, [] {
        const auto rs = riesz_sobolev();
        bool exact = true;
        for (const auto& w : {q(1, 10), q(1, 5), q(1, 2)}) {
            const Rational clipped = testing::clipped_area(
                rs.rows(), {Interval(-1, 1), Interval(-1, 1), Interval(w - 1, w + 1)});
            const Rational p = psi(rs, rs_e, Vec{0, 0, w});
            exact = exact && p == clipped && p == 3 - w * w;
        }
        Vec deltas;
        for (long k = 2; k <= 7; ++k) {
            deltas.push_back(q(1, 1L << k));
        }
        const auto fit = exponent_fit(rs, rs_e, shift_family(rs_e, Vec{0, 0, 1}), deltas);
        const bool slope_ok = std::abs(fit.slope - 2.0) <= 0.001;
        return Outcome{exact && slope_ok, std::string("psi exact ") + (exact ? "yes" : "no") +
                                              ", slope " + fmt(fit.slope) + " (need 2 +- 0.001)"};
    });

    criterion(6, "orbit distance oracle", 60, [] {
        const auto rs = riesz_sobolev();
        bool ok = true;
        std::string ratios;
        for (const auto& w : {q(1, 4), q(1, 8), q(1, 16), q(1, 32), q(1, 64)}) {
            const auto r = deficit(rs, rs_e, shifted_star(rs_e, Vec{0, 0, w}));
            ok = ok && r.distance->dist == 2 * w / 3 && r.distance->certified;
            ok = ok && r.ratio && *r.ratio == q(9, 4);
            ratios += (ratios.empty() ? "" : " ") + (r.ratio ? short_string(*r.ratio) : "-");
        }
        return Outcome{ok, "dist = 2w/3 and ratios " + ratios};
    });

    criterion(7, "genericity detection", 10, [] {
        const auto w = check_generic(gowers(2), MeasureVector(Vec{1, 1, 1, 1}));
        bool none_generic = !w.ok;
        bool witness = false;
        for (const auto& v : w.vertices) {
            none_generic = none_generic && !v.generic;
            witness = witness || (v.vertex.point == Vec{q(1, 2), 0, 0} && v.active_slots.size() == 4);
        }
        const auto g = check_generic(riesz_sobolev(), rs_e);
        const auto sk = skeleton_graph(riesz_sobolev(), rs_e);
        std::vector<int> degree(sk.nodes.size(), 0);
        for (const auto& [a, b] : sk.edges) {
            ++degree[a];
            ++degree[b];
        }
        bool cycle = sk.nodes.size() == 6 && sk.edges.size() == 6 && is_connected(sk);
        for (int d : degree) {
            cycle = cycle && d == 2;
        }
        const bool ok = none_generic && witness && g.ok && g.vertices.size() == 6 && cycle;
        return Outcome{ok, "gowers: " + std::to_string(w.vertices.size()) +
                               " vertices all non-generic " + (none_generic ? "yes" : "no") +
                               ", witness " + (witness ? "yes" : "no") +
                               "; riesz-sobolev: 6-cycle " + (cycle ? "yes" : "no")};
    });

    criterion(8, "strict admissibility kernel condition", 10, [] {
        const auto rs = riesz_sobolev();
        const Rational d = kernel_K_left_derivative(rs, rs_e, 2, 1);
        const Rational integral = integrate_kernel(rs, rs_e, 2, centered_tuple(rs_e)[2]);
        const Rational star = phi(rs, centered_tuple(rs_e));
        return Outcome{d == -1 && integral == star,
                       "D-K3(1) = " + short_string(d) + ", integral " + short_string(integral) +
                           " vs phi " + short_string(star)};
    });

    criterion(9, "second-order expansion residual", 300, [] {
        const Vec deltas{q(1, 64), q(1, 32), q(1, 16), q(1, 8)};
        auto ladder = [&](const Configuration& config, const MeasureVector& e,
                          const TupleFamily& family, std::string& text) {
            std::vector<std::pair<double, double>> xy;
            bool zero = true;
            for (const auto& d : deltas) {
                const auto sets = family(d);
                const Rational dist = dist_to_orbit(config, sets).dist;
                const Rational res = expansion_residual(config, e, sets);
                zero = zero && res == 0;
                xy.emplace_back(dist.get_d(), res.get_d());
            }
            if (zero) {
                text = "identically 0";
                return std::optional<double>();
            }
            const double slope = loglog_slope(xy);
            text = "slope " + fmt(slope);
            return std::optional<double>(slope);
        };
        // Two perturbed slots: every term of order three or more vanishes,
        // so the residual is exactly zero.
        std::string rs_text;
        const auto rs_slope = ladder(riesz_sobolev(), rs_e,
                                     multi_shell_family(rs_e, {0, 1}, {1, 1}), rs_text);
        const bool rs_ok = !rs_slope || *rs_slope >= 2.7;
        // A ladder with a nonzero remainder: four slots moved across their
        // endpoints on a generic body in R^4.
        const Configuration cube(4, Mat{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
                                        {1, 1, 1, 1}});
        const MeasureVector cube_e(Vec{2, 2, 2, 2, 3});
        std::string cube_text;
        const auto cube_slope =
            ladder(cube, cube_e, shift_family(cube_e, Vec{1, 1, 1, 1, 0}), cube_text);
        const bool cube_ok = check_conditions(cube, cube_e).all_ok() && cube_slope &&
                             *cube_slope >= 2.7;
        return Outcome{rs_ok && cube_ok, "riesz-sobolev two-slot shells: residual " + rs_text +
                                             "; cut cube in R^4, four shifted slots: residual " +
                                             cube_text + " (need slope >= 2.7)"};
    });

    criterion(10, "stability positivity scan", 1800, [] {
        bool ok = true;
        std::string text;
        const std::vector<std::pair<std::string, std::pair<Configuration, MeasureVector>>> cases{
            {"riesz-sobolev", {riesz_sobolev(), rs_e}},
            {"gowers e=(1,1,1,3/2)", {gowers(2), gp_e}}};
        for (const auto& [name, ce] : cases) {
            const auto& [config, e] = ce;
            const auto small = stability_scan(config, e, SamplerKind::mixed, 200, 1, name);
            const auto large = stability_scan(config, e, SamplerKind::mixed, 400, 1, name);
            bool positive = small.min_ratio && large.min_ratio;
            Rational bound = 0;
            for (const auto& x : e.values()) {
                bound = bound == 0 ? x : min(bound, x);
            }
            bound /= 5;
            for (const auto* rep : {&small, &large}) {
                positive = positive && rep->zero_deficit_off_orbit == 0 && rep->max_dist <= bound;
                for (const auto& row : rep->rows) {
                    positive = positive && (row.dist == 0 || (row.ratio && *row.ratio > 0));
                }
            }
            double drift = 1;
            if (positive) {
                const double a = small.min_ratio->get_d();
                const double b = large.min_ratio->get_d();
                drift = std::abs(b - a) / a;
            }
            ok = ok && positive && drift <= 0.10;
            text += (text.empty() ? "" : "; ") + name + ": min ratio " +
                    (small.min_ratio ? fmt(small.min_ratio->get_d()) : "-") + " -> " +
                    (large.min_ratio ? fmt(large.min_ratio->get_d()) : "-") + ", drift " +
                    fmt(drift);
        }
        return Outcome{ok, text};
    });

    criterion(11, "basis-subset bound", 600, [] {
        std::size_t checks = 0, bad = 0;
        for (const auto& [config, sets] : positivity_tuples) {
            const Rational value = phi(config, sets);
            const std::size_t n = config.slots(), m = config.dim();
            std::vector<std::size_t> idx(m);
            for (std::size_t i = 0; i < m; ++i) {
                idx[i] = i;
            }
            while (true) {
                Mat rows;
                Rational prod = 1;
                for (auto i : idx) {
                    rows.push_back(config.row(i));
                    prod *= measure(sets[i]);
                }
                const Rational det = linalg::determinant(rows);
                if (det != 0) {
                    ++checks;
                    bad += value > prod / abs(det);
                }
                std::size_t k = m;
                while (k > 0 && idx[k - 1] == n - m + k - 1) {
                    --k;
                }
                if (k == 0) {
                    break;
                }
                ++idx[k - 1];
                for (std::size_t i = k; i < m; ++i) {
                    idx[i] = idx[i - 1] + 1;
                }
            }
        }
        return Outcome{bad == 0 && checks > 0, std::to_string(checks) +
                                                   " invertible subsets checked, " +
                                                   std::to_string(bad) + " violations"};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
