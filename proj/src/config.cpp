#include "bll/config.hpp"

#include "bll/conditions.hpp"

namespace bll {

Configuration::Configuration(std::size_t m, Mat rows) : m_(m), rows_(std::move(rows))
{
    if (m_ < 2) {
        throw input_error("configuration dimension must be at least 2");
    }
    for (std::size_t j = 0; j < rows_.size(); ++j) {
        if (rows_[j].size() != m_) {
            throw input_error("row " + std::to_string(j + 1) + " has length "
                              + std::to_string(rows_[j].size()) + ", expected "
                              + std::to_string(m_));
        }
        bool nonzero = false;
        for (const auto& x : rows_[j]) {
            nonzero = nonzero || x != 0;
        }
        if (!nonzero) {
            throw input_error("row " + std::to_string(j + 1) + " is zero");
        }
    }
}

MeasureVector::MeasureVector(Vec e) : e_(std::move(e))
{
    for (std::size_t j = 0; j < e_.size(); ++j) {
        if (e_[j] <= 0) {
            throw input_error("measure e_" + std::to_string(j + 1) + " must be positive");
        }
    }
}

SetTuple centered_tuple(const MeasureVector& e)
{
    SetTuple out;
    out.reserve(e.size());
    for (const auto& ej : e.values()) {
        out.emplace_back(centered_interval(ej));
    }
    return out;
}

SetTuple symmetrize(const SetTuple& sets)
{
    SetTuple out;
    out.reserve(sets.size());
    for (const auto& s : sets) {
        out.push_back(symmetrize(s));
    }
    return out;
}

MeasureVector measures(const SetTuple& sets)
{
    Vec e;
    e.reserve(sets.size());
    for (const auto& s : sets) {
        e.push_back(measure(s));
    }
    return MeasureVector(std::move(e));
}

long Rng::uniform_int(long lo, long hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
        r = next();
    } while (r >= limit);
    return lo + static_cast<long>(r % span);
}

Rational Rng::uniform_grid(const Rational& lo, const Rational& hi, long den)
{
    Rational a = lo * den, b = hi * den;
    mpz_class ka, kb;
    mpz_cdiv_q(ka.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    mpz_fdiv_q(kb.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    long k = uniform_int(ka.get_si(), kb.get_si());
    return make_rational(k, den);
}

Configuration riesz_sobolev()
{
    auto r = [](long v) { return Rational(v); };
    return Configuration(2, {{r(1), r(0)}, {r(0), r(1)}, {r(-1), r(-1)}});
}

Configuration gowers(int k)
{
    if (k < 1 || k > 4) {
        throw input_error("gowers order k must be in 1..4");
    }
    Mat rows;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        Vec row(static_cast<std::size_t>(k) + 1, Rational(0));
        row[0] = 1;
        for (int b = 0; b < k; ++b) {
            if (mask & (1u << b)) {
                row[static_cast<std::size_t>(b) + 1] = 1;
            }
        }
        rows.push_back(std::move(row));
    }
    return Configuration(static_cast<std::size_t>(k) + 1, std::move(rows));
}

namespace {

Configuration random_config(std::size_t n, std::size_t m, std::uint64_t seed)
{
    if (m < 2 || n < m + 1) {
        throw input_error("random preset needs m >= 2 and n >= m+1");
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < random_preset_retry_budget; ++attempt) {
        Mat rows;
        while (rows.size() < n) {
            Vec row(m);
            bool nonzero = false;
            for (auto& x : row) {
                x = rng.uniform_int(-3, 3);
                nonzero = nonzero || x != 0;
            }
            if (nonzero) {
                rows.push_back(std::move(row));
            }
        }
        Configuration c(m, std::move(rows));
        if (check_nondegenerate(c).ok) {
            return c;
        }
    }
    throw error("random preset failed nondegeneracy after "
                + std::to_string(random_preset_retry_budget) + " attempts");
}

}  // namespace

Preset builtin_config(const std::string& preset, const PresetParams& params)
{
    Preset out;
    Vec e;
    if (preset == "riesz-sobolev") {
        out.name = preset;
        out.config = riesz_sobolev();
        e.assign(3, Rational(2));
    } else if (preset == "gowers") {
        out.name = "gowers(" + std::to_string(params.k) + ")";
        out.config = gowers(params.k);
        e.assign(out.config.slots(), Rational(1));
    } else if (preset == "random") {
        out.name = "random(" + std::to_string(params.n) + "," + std::to_string(params.m) + ","
                   + std::to_string(params.seed) + ")";
        out.config = random_config(params.n, params.m, params.seed);
        e.assign(out.config.slots(), Rational(2));
    } else {
        throw input_error("unknown preset '" + preset + "'");
    }
    if (params.e) {
        if (params.e->size() != out.config.slots()) {
            throw input_error("measure override has " + std::to_string(params.e->size())
                              + " entries, expected " + std::to_string(out.config.slots()));
        }
        e = *params.e;
    }
    out.e = MeasureVector(std::move(e));
    return out;
}

}  // namespace bll
