#include "bll/cli.hpp"

#include "bll/conditions.hpp"
#include "bll/experiments.hpp"
#include "bll/flow.hpp"
#include "bll/functional.hpp"
#include "bll/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace bll::cli {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_hypothesis = 1;
constexpr int exit_input = 2;

struct Options {
    std::string config_path;
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    std::string csv;
    bool json = false;
    std::size_t grid = 16;
    std::vector<std::size_t> slots;
    std::string direction;
    std::string deltas;
    std::string sampler = "mixed";
    std::string preset;
    int k = 2;
    std::size_t n = 5;
    std::size_t m = 3;
    std::string e;
    std::string out;
};

Vec parse_list(const std::string& text, const std::string& flag)
{
    Vec out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_rational(item));
        } catch (const input_error& ex) {
            throw input_error(flag + ": " + ex.what());
        }
    }
    if (out.empty()) {
        throw input_error(flag + ": empty list");
    }
    return out;
}

const char* mark(bool ok)
{
    return ok ? "✓" : "✗";
}

std::string vec_string(const Vec& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + short_string(v[i]);
    }
    return s + ")";
}

// Every reading is done before any computation starts.
struct Loaded {
    io::ConfigFile file;

    const MeasureVector& e() const { return *file.e; }
    const SetTuple& sets() const { return *file.sets; }
};

Loaded load(const Options& opt, bool need_e, bool need_sets)
{
    Loaded l{io::load_config(opt.config_path)};
    if (need_sets && !l.file.sets) {
        throw input_error(opt.config_path + ": field 'sets' is required for this command");
    }
    if (!l.file.e && l.file.sets) {
        l.file.e = measures(*l.file.sets);
    }
    if (need_e && !l.file.e) {
        throw input_error(opt.config_path + ": field 'e' is required for this command");
    }
    if (l.file.e && l.file.sets && measures(*l.file.sets) != *l.file.e) {
        throw input_error(opt.config_path + ": set measures disagree with 'e'");
    }
    return l;
}

std::size_t slot_index(std::size_t one_based, const Configuration& config)
{
    if (one_based < 1 || one_based > config.slots()) {
        throw input_error("--slot: expected 1.." + std::to_string(config.slots()));
    }
    return one_based - 1;
}

void emit(const Options& opt, const std::string& csv, std::ostream& out)
{
    if (opt.csv.empty()) {
        out << csv;
    } else {
        io::write_file_atomic(opt.csv, csv);
    }
}

int degenerate(const NondegeneracyReport& nd, std::ostream& out)
{
    out << "nondegenerate ✗\n";
    for (auto j : nd.zero_rows) {
        out << "  zero row " << j + 1 << "\n";
    }
    for (const auto& [i, j] : nd.proportional) {
        out << "  rows " << i + 1 << " and " << j + 1 << " are proportional\n";
    }
    for (auto j : nd.rank_deficient_without) {
        out << "  rank drops without row " << j + 1 << "\n";
    }
    return exit_hypothesis;
}

int cmd_check(const Options& opt, std::ostream& out)
{
    auto l = load(opt, true, false);
    const auto report = check_conditions(l.file.config, l.e());
    if (opt.json) {
        out << io::to_json(report).dump(2) << "\n";
        return report.all_ok() ? exit_ok : exit_hypothesis;
    }
    const bool adm = report.admissible && report.admissible->ok;
    const bool strict = report.strictly_admissible && report.strictly_admissible->ok;
    const bool gen = report.generic && report.generic->ok;
    out << "nondegenerate " << mark(report.nondegenerate.ok) << " admissible " << mark(adm)
        << " strict " << mark(strict) << " generic " << mark(gen) << "\n";
    if (!report.nondegenerate.ok) {
        degenerate(report.nondegenerate, out);
    }
    if (report.admissible) {
        for (std::size_t j = 0; j < report.admissible->slots.size(); ++j) {
            const auto& s = report.admissible->slots[j];
            out << "  slot " << j + 1 << ": max |L_j| on K_e = " << io::describe(s.max_value)
                << ", e_j/2 = " << io::describe(s.half_measure) << "\n";
        }
    }
    if (report.strictly_admissible) {
        for (std::size_t j = 0; j < report.strictly_admissible->slots.size(); ++j) {
            const auto& s = report.strictly_admissible->slots[j];
            out << "  slot " << j + 1 << ": slack = " << io::describe(s.slack);
            if (s.left_derivative) {
                out << ", D-K_j(e_j/2) = " << io::describe(*s.left_derivative);
            } else if (!s.derivative_failure.empty()) {
                out << ", derivative: " << s.derivative_failure;
            }
            out << "\n";
        }
    }
    if (report.generic) {
        out << "  vertices: " << report.generic->vertices.size() << "\n";
        for (const auto& v : report.generic->vertices) {
            out << "    " << vec_string(v.vertex.point) << " active slots "
                << v.active_slots.size() << (v.generic ? "" : " (non-generic)") << "\n";
        }
        if (report.generic->ok) {
            const auto g = skeleton_graph(l.file.config, l.e());
            out << "  skeleton: " << g.nodes.size() << " nodes, " << g.edges.size()
                << " edges, " << (is_connected(g) ? "connected" : "disconnected") << "\n";
        }
    }
    return report.all_ok() ? exit_ok : exit_hypothesis;
}

int cmd_eval(const Options& opt, std::ostream& out)
{
    auto l = load(opt, false, true);
    const auto nd = check_nondegenerate(l.file.config);
    if (!nd.ok) {
        return degenerate(nd, out);
    }
    const auto r = deficit(l.file.config, l.e(), l.sets(), false);
    if (opt.json) {
        nlohmann::json doc{{"phi", r.phi.get_str()},
                           {"phi_star", r.phi_star.get_str()},
                           {"deficit", r.deficit.get_str()}};
        out << doc.dump(2) << "\n";
        return exit_ok;
    }
    out << "phi = " << io::describe(r.phi) << ", phi_star = " << io::describe(r.phi_star)
        << ", deficit = " << io::describe(r.deficit) << "\n";
    return exit_ok;
}

int cmd_kernel(const Options& opt, std::ostream& out)
{
    auto l = load(opt, true, false);
    const auto& config = l.file.config;
    if (opt.slots.size() != 1) {
        throw input_error("--slot: exactly one slot is required");
    }
    if (opt.grid < 1) {
        throw input_error("--grid: must be positive");
    }
    const std::size_t j = slot_index(opt.slots.front(), config);
    const auto nd = check_nondegenerate(config);
    if (!nd.ok) {
        return degenerate(nd, out);
    }
    const Vec breaks = kernel_breakpoints(config, l.e(), j);
    Rational reach = 0;
    for (const auto& b : breaks) {
        reach = max(reach, abs(b));
    }
    Vec points;
    for (std::size_t i = 0; i <= opt.grid; ++i) {
        points.push_back(-reach + 2 * reach * make_rational(long(i), long(opt.grid)));
    }
    const auto table = kernel_table(config, l.e(), j, points);
    emit(opt, io::kernel_csv(table), out);
    if (!opt.csv.empty()) {
        out << "slot " << j + 1 << ": " << table.pieces.size() << " polynomial pieces on ["
            << short_string(-reach) << "," << short_string(reach) << "]\n";
    }
    return exit_ok;
}

int cmd_flow(const Options& opt, std::ostream& out)
{
    auto l = load(opt, false, true);
    const auto nd = check_nondegenerate(l.file.config);
    if (!nd.ok) {
        return degenerate(nd, out);
    }
    if (opt.grid < 1) {
        throw input_error("--grid: must be positive");
    }
    Vec grid;
    for (std::size_t i = 0; i <= opt.grid; ++i) {
        grid.push_back(make_rational(long(i), long(opt.grid)));
    }
    const auto trace = flow_trace(l.file.config, l.sets(), grid);
    emit(opt, io::flow_csv(trace), out);
    bool monotone = true;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        monotone = monotone && trace[i - 1].phi <= trace[i].phi;
    }
    if (!opt.csv.empty()) {
        out << "points " << trace.size() << ", phi(0) = " << io::describe(trace.front().phi)
            << ", phi(1) = " << io::describe(trace.back().phi) << ", nondecreasing "
            << mark(monotone) << "\n";
    }
    return monotone ? exit_ok : exit_hypothesis;
}

int cmd_dist(const Options& opt, std::ostream& out)
{
    auto l = load(opt, false, true);
    const auto nd = check_nondegenerate(l.file.config);
    if (!nd.ok) {
        return degenerate(nd, out);
    }
    const auto d = dist_to_orbit(l.file.config, l.sets());
    if (opt.json) {
        nlohmann::json w = nlohmann::json::array();
        for (const auto& x : d.witness) {
            w.push_back(x.get_str());
        }
        nlohmann::json doc{{"dist", d.dist.get_str()},
                           {"witness", w},
                           {"certified", d.certified},
                           {"lp_solves", d.lp_solves}};
        out << doc.dump(2) << "\n";
        return exit_ok;
    }
    out << "dist = " << io::describe(d.dist) << " at v = " << vec_string(d.witness)
        << (d.certified ? " (certified)" : " (pattern search, not certified)") << "\n";
    return exit_ok;
}

int cmd_scan(const Options& opt, std::ostream& out)
{
    auto l = load(opt, true, false);
    const auto kind = parse_sampler(opt.sampler);
    if (opt.samples < 1) {
        throw input_error("--samples: must be positive");
    }
    const auto report =
        stability_scan(l.file.config, l.e(), kind, opt.samples, opt.seed, opt.config_path);
    if (!opt.csv.empty()) {
        io::write_file_atomic(opt.csv, io::scan_csv(report));
    }
    const bool positive = report.zero_deficit_off_orbit == 0;
    if (opt.json) {
        out << io::to_json(report, sampler_name(kind)).dump(2) << "\n";
    } else {
        out << "seed " << report.seed << ", sampler " << sampler_name(kind) << ", samples "
            << report.samples << "\n";
        auto line = [&](const char* name, const std::optional<Rational>& q) {
            out << "  " << name << " = " << (q ? io::describe(*q) : std::string("none")) << "\n";
        };
        line("min ratio", report.min_ratio);
        line("min ratio (shell)", report.min_ratio_shell);
        line("min ratio (shift)", report.min_ratio_shift);
        line("min ratio (mixed)", report.min_ratio_mixed);
        out << "  max dist = " << io::describe(report.max_dist) << "\n";
        out << "  zero deficit off the orbit: " << report.zero_deficit_off_orbit << "\n";
    }
    return positive ? exit_ok : exit_hypothesis;
}

int cmd_psi(const Options& opt, std::ostream& out)
{
    auto l = load(opt, true, false);
    if (opt.direction.empty()) {
        throw input_error("--direction: required");
    }
    const Vec dir = parse_list(opt.direction, "--direction");
    if (dir.size() != l.file.config.slots()) {
        throw input_error("--direction: expected " + std::to_string(l.file.config.slots())
                          + " entries");
    }
    const Vec scales = opt.deltas.empty()
                           ? Vec{make_rational(1, 10), make_rational(1, 5), make_rational(1, 2)}
                           : parse_list(opt.deltas, "--deltas");
    const auto nd = check_nondegenerate(l.file.config);
    if (!nd.ok) {
        return degenerate(nd, out);
    }
    const auto r = psi_scan(l.file.config, l.e(), Mat{dir}, scales);
    out << "psi(0) = " << io::describe(r.psi0) << "\n";
    for (const auto& en : r.entries) {
        out << "  v = " << vec_string(en.v) << ": psi = " << io::describe(en.psi);
        if (en.ratio) {
            out << ", (psi(0)-psi)/dist^2 = " << io::describe(*en.ratio);
        }
        out << "\n";
    }
    out << "psi(v) <= psi(0) " << mark(r.inequality_holds) << ", equality only on row space "
        << mark(r.equality_iff_row_space) << "\n";
    return r.inequality_holds && r.equality_iff_row_space ? exit_ok : exit_hypothesis;
}

int cmd_expansion(const Options& opt, std::ostream& out)
{
    auto l = load(opt, true, false);
    const auto& config = l.file.config;
    std::vector<std::size_t> slots;
    for (auto s : opt.slots.empty() ? std::vector<std::size_t>{1, 2} : opt.slots) {
        slots.push_back(slot_index(s, config));
    }
    const Vec deltas = opt.deltas.empty()
                           ? Vec{make_rational(1, 64), make_rational(1, 32), make_rational(1, 16),
                                 make_rational(1, 8)}
                           : parse_list(opt.deltas, "--deltas");
    for (const auto& d : deltas) {
        for (auto j : slots) {
            if (d <= 0 || d >= l.e().values()[j]) {
                throw input_error("--deltas: each delta must lie in (0, e_j)");
            }
        }
    }
    const auto nd = check_nondegenerate(config);
    if (!nd.ok) {
        return degenerate(nd, out);
    }
    const auto family = multi_shell_family(l.e(), slots, std::vector<int>(slots.size(), 1));
    std::vector<std::pair<double, double>> xy;
    out << "delta,dist,residual_decimal,residual_exact\n";
    for (const auto& d : deltas) {
        const auto sets = family(d);
        const auto dist = dist_to_orbit(config, sets).dist;
        const auto res = expansion_residual(config, l.e(), sets);
        xy.emplace_back(dist.get_d(), res.get_d());
        out << d.get_str() << ',' << dist.get_str() << ',' << decimal_string(res) << ','
            << exact_string(res) << "\n";
    }
    bool all_zero = true;
    for (const auto& p : xy) {
        all_zero = all_zero && p.second == 0;
    }
    if (all_zero) {
        out << "residual vanishes identically\n";
    } else {
        out << "log-log slope " << loglog_slope(xy) << "\n";
    }
    return exit_ok;
}

int cmd_gen(const Options& opt, std::ostream& out)
{
    PresetParams params;
    params.k = opt.k;
    params.n = opt.n;
    params.m = opt.m;
    params.seed = opt.seed;
    if (!opt.e.empty()) {
        params.e = parse_list(opt.e, "--e");
    }
    const auto preset = builtin_config(opt.preset, params);
    io::ConfigFile file{preset.config, preset.e, std::nullopt};
    const std::string text = io::dump_config(file);
    if (opt.out.empty()) {
        out << text;
    } else {
        io::write_file_atomic(opt.out, text);
    }
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact lab for one-dimensional Brascamp-Lieb-Luttinger forms", "bll-lab"};
    app.require_subcommand(1);
    Options opt;

    auto config_cmd = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", opt.config_path, "configuration file (JSON)")->required();
        sub->add_flag("--json", opt.json, "machine-readable report");
        return sub;
    };
    auto* check = config_cmd("check", "hypothesis report");
    auto* eval = config_cmd("eval", "phi, phi of the symmetrized tuple, deficit");
    auto* kernel = config_cmd("kernel", "table of K_j");
    kernel->add_option("--slot", opt.slots, "slot index (1-based)")->required();
    kernel->add_option("--grid", opt.grid, "number of grid steps");
    kernel->add_option("--csv", opt.csv, "output path");
    auto* flow = config_cmd("flow", "phi along the rearrangement flow");
    flow->add_option("--grid", opt.grid, "number of grid steps");
    flow->add_option("--csv", opt.csv, "output path");
    auto* dist = config_cmd("dist", "distance to the symmetrized orbit");
    auto* scan = config_cmd("scan", "deficit/dist^2 over random tuples near the orbit");
    scan->add_option("--seed", opt.seed, "random seed");
    scan->add_option("--samples", opt.samples, "number of samples");
    scan->add_option("--sampler", opt.sampler, "mixed, shell, shift or orbit");
    scan->add_option("--csv", opt.csv, "per-sample output path");
    auto* psi = config_cmd("psi", "translated box volume along a direction");
    psi->add_option("--direction", opt.direction, "comma-separated rationals");
    psi->add_option("--deltas", opt.deltas, "comma-separated scales");
    auto* expansion = config_cmd("expansion", "second-order expansion residual ladder");
    expansion->add_option("--slot", opt.slots, "perturbed slots (1-based, repeatable)");
    expansion->add_option("--deltas", opt.deltas, "comma-separated shell sizes");
    auto* gen = app.add_subcommand("gen", "write a preset configuration");
    gen->add_option("--preset", opt.preset, "riesz-sobolev, gowers or random")->required();
    gen->add_option("--k", opt.k, "gowers order");
    gen->add_option("--n", opt.n, "random: number of rows");
    gen->add_option("--m", opt.m, "random: dimension");
    gen->add_option("--seed", opt.seed, "random: seed");
    gen->add_option("--e", opt.e, "comma-separated measures");
    gen->add_option("--out", opt.out, "output path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_input;
    }

    try {
        if (check->parsed()) return cmd_check(opt, out);
        if (eval->parsed()) return cmd_eval(opt, out);
        if (kernel->parsed()) return cmd_kernel(opt, out);
        if (flow->parsed()) return cmd_flow(opt, out);
        if (dist->parsed()) return cmd_dist(opt, out);
        if (scan->parsed()) return cmd_scan(opt, out);
        if (psi->parsed()) return cmd_psi(opt, out);
        if (expansion->parsed()) return cmd_expansion(opt, out);
        if (gen->parsed()) return cmd_gen(opt, out);
    } catch (const input_error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_input;
    } catch (const hypothesis_error& ex) {
        err << "hypothesis fails: " << ex.what() << "\n";
        return exit_hypothesis;
    } catch (const error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_hypothesis;
    }
    return exit_input;
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace bll::cli
