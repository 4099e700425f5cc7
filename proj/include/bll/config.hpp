#pragma once

#include "bll/interval.hpp"
#include "bll/rational.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bll {

/// A family of linear functionals L_j : R^m -> R, one rational row per slot.
class Configuration {
public:
    Configuration() = default;
    /// Throws input_error when m < 2, a row has the wrong length, or a row is zero.
    Configuration(std::size_t m, Mat rows);

    std::size_t dim() const { return m_; }
    std::size_t slots() const { return rows_.size(); }
    const Mat& rows() const { return rows_; }
    const Vec& row(std::size_t j) const { return rows_[j]; }

    /// L_j(x)
    Rational apply(std::size_t j, const Vec& x) const { return dot(rows_[j], x); }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::size_t m_ = 0;
    Mat rows_;
};

/// Per-slot measures e_j > 0.
class MeasureVector {
public:
    MeasureVector() = default;
    explicit MeasureVector(Vec e);

    std::size_t size() const { return e_.size(); }
    const Rational& operator[](std::size_t j) const { return e_[j]; }
    const Vec& values() const { return e_; }

    friend bool operator==(const MeasureVector&, const MeasureVector&) = default;

private:
    Vec e_;
};

using SetTuple = std::vector<IntervalUnion>;

/// Tuple of centered intervals with lengths e_j.
SetTuple centered_tuple(const MeasureVector& e);

/// Per-slot symmetrization.
SetTuple symmetrize(const SetTuple& sets);

/// Per-slot measures of a tuple.
MeasureVector measures(const SetTuple& sets);

/// Deterministic 64-bit generator used for every randomized construction.
/// Draws are derived from raw mt19937_64 output (not std distributions) so
/// sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [lo, hi] by rejection sampling.
    long uniform_int(long lo, long hi);
    /// Uniform rational k/den with k in [lo*den, hi*den].
    Rational uniform_grid(const Rational& lo, const Rational& hi, long den);
    bool coin() { return (next() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

struct Preset {
    std::string name;
    Configuration config;
    MeasureVector e;
};

struct PresetParams {
    int k = 2;                 // gowers
    std::size_t n = 5;         // random: number of rows
    std::size_t m = 3;         // random: dimension
    std::uint64_t seed = 1;    // random
    std::optional<Vec> e;      // override of the default measures
};

inline constexpr int random_preset_retry_budget = 1000;

/// "riesz-sobolev", "gowers" or "random". Default measures: riesz-sobolev
/// (2,2,2), gowers all ones, random all twos.
Preset builtin_config(const std::string& preset, const PresetParams& params = {});

Configuration riesz_sobolev();
Configuration gowers(int k);

}  // namespace bll
