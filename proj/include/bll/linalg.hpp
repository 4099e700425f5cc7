#pragma once

#include "bll/rational.hpp"

#include <optional>
#include <vector>

namespace bll::linalg {

/// Reduced row echelon form; pivots holds the pivot column of each nonzero row.
struct Echelon {
    Mat reduced;
    std::vector<std::size_t> pivots;
};

Echelon rref(Mat a, std::size_t cols);

std::size_t rank(const Mat& a, std::size_t cols);

Rational determinant(Mat a);

/// Unique solution of a square system, or nullopt when singular.
std::optional<Vec> solve(Mat a, Vec b);

/// Basis of {x : a x = 0}.
Mat null_space(const Mat& a, std::size_t cols);

/// A particular solution of a x = b, or nullopt when the system is inconsistent.
std::optional<Vec> solve_consistent(const Mat& a, const Vec& b, std::size_t cols);

Mat transpose(const Mat& a, std::size_t cols);

}  // namespace bll::linalg
