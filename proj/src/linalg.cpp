#include "bll/linalg.hpp"

#include <utility>

namespace bll::linalg {

Echelon rref(Mat a, std::size_t cols)
{
    Echelon out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
        std::size_t piv = row;
        while (piv < a.size() && a[piv][col] == 0) {
            ++piv;
        }
        if (piv == a.size()) {
            continue;
        }
        std::swap(a[row], a[piv]);
        Rational inv = 1 / a[row][col];
        for (std::size_t c = col; c < cols; ++c) {
            a[row][c] *= inv;
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][col] == 0) {
                continue;
            }
            Rational f = a[r][col];
            for (std::size_t c = col; c < cols; ++c) {
                a[r][c] -= f * a[row][c];
            }
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(a);
    return out;
}

std::size_t rank(const Mat& a, std::size_t cols)
{
    // Forward elimination only; cheaper than a full rref.
    Mat m = a;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && m[piv][col] == 0) {
            ++piv;
        }
        if (piv == m.size()) {
            continue;
        }
        std::swap(m[row], m[piv]);
        for (std::size_t r = row + 1; r < m.size(); ++r) {
            if (m[r][col] == 0) {
                continue;
            }
            Rational f = m[r][col] / m[row][col];
            for (std::size_t c = col; c < cols; ++c) {
                m[r][c] -= f * m[row][c];
            }
        }
        ++row;
    }
    return row;
}

Rational determinant(Mat a)
{
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) {
            ++piv;
        }
        if (piv == n) {
            return 0;
        }
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) {
                continue;
            }
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    return det;
}

std::optional<Vec> solve(Mat a, Vec b)
{
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) {
            ++piv;
        }
        if (piv == n) {
            return std::nullopt;
        }
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) {
                continue;
            }
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            s -= a[i][c] * x[c];
        }
        x[i] = s / a[i][i];
    }
    return x;
}

Mat null_space(const Mat& a, std::size_t cols)
{
    Echelon e = rref(a, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) {
        is_pivot[p] = true;
    }
    Mat basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        Vec v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            v[e.pivots[r]] = -e.reduced[r][free];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve_consistent(const Mat& a, const Vec& b, std::size_t cols)
{
    Mat aug = a;
    for (std::size_t r = 0; r < aug.size(); ++r) {
        aug[r].push_back(b[r]);
    }
    Echelon e = rref(std::move(aug), cols + 1);
    Vec x(cols, Rational(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == cols) {
            return std::nullopt;
        }
        x[e.pivots[r]] = e.reduced[r][cols];
    }
    return x;
}

Mat transpose(const Mat& a, std::size_t cols)
{
    Mat t(cols, Vec(a.size()));
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            t[c][r] = a[r][c];
        }
    }
    return t;
}

}  // namespace bll::linalg
