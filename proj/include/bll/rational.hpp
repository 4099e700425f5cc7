#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bll {

/// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
/// positive denominator) after every arithmetic operation.
using Rational = mpq_class;

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

/// Base error type for every failure raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input (bad literal, bad file, bad parameter).
class input_error : public error {
public:
    using error::error;
};

/// A checked structural hypothesis does not hold for the given input.
class hypothesis_error : public error {
public:
    using error::error;
};

Rational make_rational(long num, long den = 1);

/// Parses "3", "-7/2" or "0.25" (decimal converted exactly). A leading
/// U+2212 minus sign is accepted as well as '-'.
Rational parse_rational(std::string_view text);

/// "num/den" in lowest terms; integers still carry "/1".
std::string exact_string(const Rational& q);

/// Short canonical form: "3", "-7/2".
std::string short_string(const Rational& q);

/// 12 significant digits.
std::string decimal_string(const Rational& q, int digits = 12);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

Rational dot(const Vec& a, const Vec& b);

std::string to_string(const Vec& v);

}  // namespace bll
