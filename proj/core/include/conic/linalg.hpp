#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "conic/rational.hpp"

namespace conic {

// ---------------------------------------------------------------------------
// Exact rational linear algebra
// ---------------------------------------------------------------------------

/// Sparse row: (column index, value) pairs, no duplicate columns, values != 0.
using SparseRow = std::vector<std::pair<int, Rational>>;

struct NullspaceResult {
  int rank = 0;
  /// Dense basis vectors of the kernel, one per free column, deterministic order.
  std::vector<std::vector<Rational>> basis;
};

/// Exact kernel of the sparse matrix with `ncols` columns.
NullspaceResult nullspace(const std::vector<SparseRow>& rows, int ncols);

/// Exact solution of (columns as a matrix) * x = target; nullopt when the
/// system is inconsistent. Columns are dense vectors of equal length.
std::optional<std::vector<Rational>> solve_exact(
    const std::vector<std::vector<Rational>>& columns, const std::vector<Rational>& target);

/// Rank of a small dense rational matrix (rows of equal length).
int rank_exact(std::vector<std::vector<Rational>> rows);

/// Reduced row echelon form, in place; returns the rank.
int rref_exact(std::vector<std::vector<Rational>>& rows);

// ---------------------------------------------------------------------------
// Double-precision helpers on R^3
// ---------------------------------------------------------------------------

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Vec3 cross(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);

Mat3 mat_identity();
Mat3 mat_mul(const Mat3& a, const Mat3& b);
Vec3 mat_vec(const Mat3& m, const Vec3& v);
double det3(const Vec3& c0, const Vec3& c1, const Vec3& c2);
double det3(const Mat3& m);
/// Inverse via the adjugate; no pivoting, callers check conditioning themselves.
Mat3 mat_inverse(const Mat3& m);

}  // namespace conic
