#include "bll/rational.hpp"

#include <cstdio>
#include <sstream>

namespace bll {

Rational make_rational(long num, long den)
{
    if (den == 0) {
        throw error("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    bool negative = false;
    constexpr std::string_view unicode_minus = "\xE2\x88\x92";
    if (s.starts_with(unicode_minus)) {
        negative = true;
        s.remove_prefix(unicode_minus.size());
    } else if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) {
        throw input_error("empty rational literal '" + std::string(text) + "'");
    }

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw input_error("malformed fraction '" + std::string(text) + "'");
        }
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) {
            throw input_error("zero denominator in '" + std::string(text) + "'");
        }
        value = Rational(n, d);
        value.canonicalize();
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))
            || (whole.empty() && frac.empty())) {
            throw input_error("malformed decimal '" + std::string(text) + "'");
        }
        mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
        value = Rational(n, d);
        value.canonicalize();
    } else {
        if (!all_digits(s)) {
            throw input_error("malformed rational '" + std::string(text) + "'");
        }
        value = Rational(mpz_class(std::string(s), 10));
    }
    return negative ? Rational(-value) : value;
}

std::string exact_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string short_string(const Rational& q)
{
    return q.get_str();
}

std::string decimal_string(const Rational& q, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, q.get_d());
    return buf;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational dot(const Vec& a, const Vec& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

std::string to_string(const Vec& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? "," : "") << v[i].get_str();
    }
    os << ')';
    return os.str();
}

}  // namespace bll
