#include "bll/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bll::io {

using nlohmann::json;

namespace {

Rational rational_at(const json& node, const std::string& where)
{
    try {
        if (node.is_string()) {
            return parse_rational(node.get<std::string>());
        }
        if (node.is_number_integer()) {
            return Rational(mpz_class(node.dump(), 10));
        }
    } catch (const input_error& ex) {
        throw input_error(where + ": " + ex.what());
    }
    if (node.is_number_float()) {
        throw input_error(where + ": floating-point literal; write rationals as strings");
    }
    throw input_error(where + ": expected a rational string");
}

const json& array_at(const json& node, const std::string& where)
{
    if (!node.is_array()) {
        throw input_error(where + ": expected an array");
    }
    return node;
}

std::string at(const std::string& base, std::size_t i)
{
    return base + "[" + std::to_string(i) + "]";
}

json rational_json(const Rational& q)
{
    return q.get_str();
}

json vec_json(const Vec& v)
{
    json a = json::array();
    for (const auto& x : v) {
        a.push_back(rational_json(x));
    }
    return a;
}

}  // namespace

ConfigFile parse_config(const std::string& text, const std::string& origin)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw input_error(origin + ": JSON syntax error at byte " + std::to_string(ex.byte));
    }
    if (!doc.is_object()) {
        throw input_error(origin + ": top level must be an object");
    }
    if (!doc.contains("m") || !doc["m"].is_number_integer()) {
        throw input_error(origin + ": field 'm' must be an integer");
    }
    const auto m_signed = doc["m"].get<long>();
    if (m_signed < 2) {
        throw input_error(origin + ": m must be at least 2");
    }
    const auto m = static_cast<std::size_t>(m_signed);
    if (!doc.contains("rows")) {
        throw input_error(origin + ": missing field 'rows'");
    }
    Mat rows;
    const auto& jrows = array_at(doc["rows"], origin + ": rows");
    for (std::size_t j = 0; j < jrows.size(); ++j) {
        const std::string where = at(origin + ": rows", j);
        const auto& jr = array_at(jrows[j], where);
        if (jr.size() != m) {
            throw input_error(where + ": expected " + std::to_string(m) + " entries");
        }
        Vec row;
        for (std::size_t c = 0; c < jr.size(); ++c) {
            row.push_back(rational_at(jr[c], at(where, c)));
        }
        rows.push_back(std::move(row));
    }
    ConfigFile out;
    try {
        out.config = Configuration(m, std::move(rows));
    } catch (const input_error& ex) {
        throw input_error(origin + ": " + ex.what());
    }
    const std::size_t n = out.config.slots();
    if (doc.contains("e")) {
        const auto& je = array_at(doc["e"], origin + ": e");
        if (je.size() != n) {
            throw input_error(origin + ": e has " + std::to_string(je.size())
                              + " entries, expected " + std::to_string(n));
        }
        Vec e;
        for (std::size_t j = 0; j < je.size(); ++j) {
            e.push_back(rational_at(je[j], at(origin + ": e", j)));
            if (e.back() <= 0) {
                throw input_error(at(origin + ": e", j) + ": measure must be positive");
            }
        }
        out.e = MeasureVector(std::move(e));
    }
    if (doc.contains("sets")) {
        const auto& js = array_at(doc["sets"], origin + ": sets");
        if (js.size() != n) {
            throw input_error(origin + ": sets has " + std::to_string(js.size())
                              + " slots, expected " + std::to_string(n));
        }
        SetTuple sets;
        for (std::size_t j = 0; j < js.size(); ++j) {
            const std::string where = at(origin + ": sets", j);
            std::vector<Interval> pieces;
            const auto& jslot = array_at(js[j], where);
            for (std::size_t k = 0; k < jslot.size(); ++k) {
                const std::string pw = at(where, k);
                const auto& pair = array_at(jslot[k], pw);
                if (pair.size() != 2) {
                    throw input_error(pw + ": expected [lo, hi]");
                }
                Rational lo = rational_at(pair[0], at(pw, 0));
                Rational hi = rational_at(pair[1], at(pw, 1));
                if (hi < lo) {
                    throw input_error(pw + ": lo > hi");
                }
                pieces.emplace_back(lo, hi);
            }
            sets.push_back(normalize(std::move(pieces)));
            if (measure(sets.back()) <= 0) {
                throw input_error(where + ": set has zero measure");
            }
        }
        out.sets = std::move(sets);
    }
    return out;
}

ConfigFile load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw input_error(path + ": cannot open file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string dump_config(const ConfigFile& file)
{
    json doc;
    doc["m"] = file.config.dim();
    json rows = json::array();
    for (const auto& r : file.config.rows()) {
        rows.push_back(vec_json(r));
    }
    doc["rows"] = rows;
    if (file.e) {
        doc["e"] = vec_json(file.e->values());
    }
    if (file.sets) {
        json sets = json::array();
        for (const auto& s : *file.sets) {
            json slot = json::array();
            for (const auto& c : s.components()) {
                slot.push_back(json::array({rational_json(c.lo), rational_json(c.hi)}));
            }
            sets.push_back(slot);
        }
        doc["sets"] = sets;
    }
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw input_error(path + ": cannot write file");
        }
        out << content;
        if (!out) {
            throw input_error(path + ": write failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw input_error(path + ": cannot move file into place");
    }
}

std::string describe(const Rational& q)
{
    return decimal_string(q) + " (exact " + exact_string(q) + ")";
}

std::string serialize_tuple(const SetTuple& sets)
{
    std::string out;
    for (std::size_t j = 0; j < sets.size(); ++j) {
        if (j) {
            out += ';';
        }
        const auto& comps = sets[j].components();
        for (std::size_t k = 0; k < comps.size(); ++k) {
            if (k) {
                out += 'U';
            }
            out += '[' + comps[k].lo.get_str() + ',' + comps[k].hi.get_str() + ']';
        }
    }
    return out;
}

json to_json(const ConditionReport& report)
{
    json doc;
    const auto& nd = report.nondegenerate;
    json jnd;
    jnd["ok"] = nd.ok;
    jnd["zero_rows"] = nd.zero_rows;
    json pairs = json::array();
    for (const auto& [i, j] : nd.proportional) {
        pairs.push_back(json::array({i, j}));
    }
    jnd["proportional_pairs"] = pairs;
    jnd["rank_deficient_without"] = nd.rank_deficient_without;
    doc["nondegenerate"] = jnd;

    if (report.admissible) {
        json ja;
        ja["ok"] = report.admissible->ok;
        json slots = json::array();
        for (const auto& s : report.admissible->slots) {
            slots.push_back({{"admissible", s.admissible},
                             {"max_value", rational_json(s.max_value)},
                             {"half_measure", rational_json(s.half_measure)},
                             {"witness", vec_json(s.witness)}});
        }
        ja["slots"] = slots;
        doc["admissible"] = ja;
    } else {
        doc["admissible"] = nullptr;
    }

    if (report.strictly_admissible) {
        json js;
        js["ok"] = report.strictly_admissible->ok;
        json slots = json::array();
        for (const auto& s : report.strictly_admissible->slots) {
            json slot{{"ok", s.ok},
                      {"slack", rational_json(s.slack)},
                      {"slack_ok", s.slack_ok},
                      {"witness", vec_json(s.witness)},
                      {"derivative_ok", s.derivative_ok}};
            slot["left_derivative"] =
                s.left_derivative ? json(rational_json(*s.left_derivative)) : json(nullptr);
            if (!s.derivative_failure.empty()) {
                slot["derivative_failure"] = s.derivative_failure;
            }
            slots.push_back(slot);
        }
        js["slots"] = slots;
        doc["strictly_admissible"] = js;
    } else {
        doc["strictly_admissible"] = nullptr;
    }

    if (report.generic) {
        json jg;
        jg["ok"] = report.generic->ok;
        json verts = json::array();
        for (const auto& v : report.generic->vertices) {
            verts.push_back({{"point", vec_json(v.vertex.point)},
                             {"active_slots", v.active_slots},
                             {"generic", v.generic}});
        }
        jg["vertices"] = verts;
        jg["witness"] = report.generic->witness ? json(*report.generic->witness) : json(nullptr);
        doc["generic"] = jg;
    } else {
        doc["generic"] = nullptr;
    }
    return doc;
}

json to_json(const ScanReport& report, const std::string& sampler)
{
    auto opt = [](const std::optional<Rational>& q) {
        return q ? json(rational_json(*q)) : json(nullptr);
    };
    json doc;
    doc["config"] = report.config_id;
    doc["seed"] = report.seed;
    doc["sampler"] = sampler;
    doc["samples"] = report.samples;
    doc["min_ratio"] = opt(report.min_ratio);
    doc["min_ratio_decimal"] = report.min_ratio ? json(report.min_ratio->get_d()) : json(nullptr);
    doc["argmin"] = report.argmin ? json(*report.argmin) : json(nullptr);
    doc["min_ratio_shell"] = opt(report.min_ratio_shell);
    doc["min_ratio_shift"] = opt(report.min_ratio_shift);
    doc["min_ratio_mixed"] = opt(report.min_ratio_mixed);
    doc["zero_deficit_off_orbit"] = report.zero_deficit_off_orbit;
    doc["max_dist"] = rational_json(report.max_dist);
    return doc;
}

std::string kernel_csv(const KernelTable& table)
{
    std::string out = "s,K_decimal,K_exact\n";
    for (const auto& [s, k] : table.samples) {
        out += s.get_str() + ',' + decimal_string(k) + ',' + exact_string(k) + '\n';
    }
    return out;
}

std::string flow_csv(const std::vector<TracePoint>& trace)
{
    std::string out = "t,phi_decimal,phi_exact,event\n";
    for (const auto& p : trace) {
        out += p.t.get_str() + ',' + decimal_string(p.phi) + ',' + exact_string(p.phi) + ','
               + (p.event ? "1" : "0") + '\n';
    }
    return out;
}

std::string scan_csv(const ScanReport& report)
{
    std::string out = "sample,dist,deficit,ratio,tuple,family\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.id) + ',' + exact_string(r.dist) + ',' + exact_string(r.deficit)
               + ',' + (r.ratio ? exact_string(*r.ratio) : std::string()) + ','
               + serialize_tuple(r.sets) + ',' + r.family + '\n';
    }
    return out;
}

}  // namespace bll::io
