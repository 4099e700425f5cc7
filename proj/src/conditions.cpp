#include "bll/conditions.hpp"

#include "bll/functional.hpp"
#include "bll/linalg.hpp"

#include <algorithm>
#include <queue>

namespace bll {

NondegeneracyReport check_nondegenerate(const Configuration& config)
{
    NondegeneracyReport r;
    const std::size_t n = config.slots();
    const std::size_t m = config.dim();
    for (std::size_t j = 0; j < n; ++j) {
        if (std::all_of(config.row(j).begin(), config.row(j).end(),
                        [](const Rational& x) { return x == 0; })) {
            r.zero_rows.push_back(j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (linalg::rank(Mat{config.row(i), config.row(j)}, m) < 2) {
                r.proportional.emplace_back(i, j);
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        Mat others;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) {
                others.push_back(config.row(i));
            }
        }
        if (linalg::rank(others, m) < m) {
            r.rank_deficient_without.push_back(j);
        }
    }
    r.ok = r.zero_rows.empty() && r.proportional.empty() && r.rank_deficient_without.empty();
    return r;
}

std::vector<std::size_t> active_slots(const Configuration& config, const MeasureVector& e,
                                      const Vec& x)
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < config.slots(); ++j) {
        if (abs(config.apply(j, x)) == e[j] / 2) {
            out.push_back(j);
        }
    }
    return out;
}

AdmissibilityReport check_admissible(const Configuration& config, const MeasureVector& e)
{
    Polytope body = measure_body(config, e);
    if (!is_bounded(body)) {
        throw error("degenerate configuration: K_e is unbounded");
    }
    AdmissibilityReport r;
    for (std::size_t k = 0; k < config.slots(); ++k) {
        auto opt = lp_maximize(body, config.row(k));
        SlotAdmissibility s;
        s.half_measure = e[k] / 2;
        s.max_value = opt.value;
        s.admissible = opt.value == s.half_measure;
        s.witness = std::move(opt.point);
        r.ok = r.ok && s.admissible;
        r.slots.push_back(std::move(s));
    }
    return r;
}

StrictAdmissibilityReport check_strictly_admissible(const Configuration& config,
                                                    const MeasureVector& e)
{
    StrictAdmissibilityReport r;
    r.nondegenerate = check_nondegenerate(config).ok;
    const std::size_t m = config.dim();
    for (std::size_t j = 0; j < config.slots(); ++j) {
        // variables (x, delta)
        std::vector<Constraint> cs;
        for (std::size_t i = 0; i < config.slots(); ++i) {
            Vec up(m + 1), down(m + 1);
            for (std::size_t c = 0; c < m; ++c) {
                up[c] = config.row(i)[c];
                down[c] = -config.row(i)[c];
            }
            if (i == j) {
                cs.push_back({std::move(up), e[i] / 2});
                cs.push_back({std::move(down), -e[i] / 2});
            } else {
                up[m] = 1;
                down[m] = 1;
                cs.push_back({std::move(up), e[i] / 2});
                cs.push_back({std::move(down), e[i] / 2});
            }
        }
        Vec objective(m + 1, Rational(0));
        objective[m] = 1;
        SlotStrictness s;
        auto opt = lp_maximize(Polytope(m + 1, std::move(cs)), objective);
        s.slack = opt.value;
        s.witness.assign(opt.point.begin(), opt.point.begin() + static_cast<long>(m));
        s.slack_ok = s.slack > 0;
        if (r.nondegenerate) {
            try {
                s.left_derivative = kernel_K_left_derivative(config, e, j, e[j] / 2);
                s.derivative_ok = *s.left_derivative < 0;
            } catch (const error& ex) {
                s.derivative_failure = ex.what();
            }
        } else {
            s.derivative_failure = "configuration is degenerate";
        }
        s.ok = s.slack_ok && s.derivative_ok;
        r.ok = r.ok && s.ok;
        r.slots.push_back(std::move(s));
    }
    r.ok = r.ok && r.nondegenerate;
    return r;
}

GenericityReport check_generic(const Configuration& config, const MeasureVector& e)
{
    GenericityReport r;
    for (auto& v : enumerate_vertices(measure_body(config, e))) {
        VertexGenericity g;
        g.active_slots = active_slots(config, e, v.point);
        g.generic = g.active_slots.size() == config.dim();
        g.vertex = std::move(v);
        if (!g.generic && !r.witness) {
            r.witness = r.vertices.size();
        }
        r.ok = r.ok && g.generic;
        r.vertices.push_back(std::move(g));
    }
    return r;
}

bool ConditionReport::all_ok() const
{
    return nondegenerate.ok && admissible && admissible->ok && strictly_admissible
           && strictly_admissible->ok && generic && generic->ok;
}

ConditionReport check_conditions(const Configuration& config, const MeasureVector& e)
{
    if (e.size() != config.slots()) {
        throw input_error("measure vector length does not match slot count");
    }
    ConditionReport r;
    r.nondegenerate = check_nondegenerate(config);
    if (!is_bounded(measure_body(config, e))) {
        return r;
    }
    r.admissible = check_admissible(config, e);
    r.strictly_admissible = check_strictly_admissible(config, e);
    r.generic = check_generic(config, e);
    return r;
}

SkeletonGraph skeleton_graph(const Configuration& config, const MeasureVector& e)
{
    auto gen = check_generic(config, e);
    if (!gen.ok) {
        throw error("non-generic configuration: skeleton adjacency undefined here");
    }
    Polytope body = measure_body(config, e);
    const std::size_t m = config.dim();
    SkeletonGraph g;
    for (auto& v : gen.vertices) {
        g.nodes.push_back(std::move(v.vertex));
    }
    for (std::size_t a = 0; a < g.nodes.size(); ++a) {
        for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
            std::vector<std::size_t> shared;
            std::set_intersection(g.nodes[a].active.begin(), g.nodes[a].active.end(),
                                  g.nodes[b].active.begin(), g.nodes[b].active.end(),
                                  std::back_inserter(shared));
            if (shared.size() != m - 1) {
                continue;
            }
            Mat normals;
            for (auto id : shared) {
                normals.push_back(body.constraints()[id].normal);
            }
            if (linalg::rank(normals, m) == m - 1) {
                g.edges.emplace_back(a, b);
            }
        }
    }
    return g;
}

bool is_connected(const SkeletonGraph& g)
{
    if (g.nodes.empty()) {
        return true;
    }
    std::vector<std::vector<std::size_t>> adj(g.nodes.size());
    for (const auto& [a, b] : g.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> seen(g.nodes.size(), false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
        auto u = q.front();
        q.pop();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                q.push(v);
            }
        }
    }
    return reached == g.nodes.size();
}

}  // namespace bll
