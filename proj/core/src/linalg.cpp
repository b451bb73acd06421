#include "conic/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <unordered_map>

namespace conic {

namespace {

// One pivot of the forward elimination. The stored row is normalized so the
// pivot column carries coefficient 1, and it only references columns that are
// free or became pivots *later* (it was fully reduced on insertion), which is
// what makes the reverse-order back-substitution below correct.
struct PivotRow {
  int col = -1;
  SparseRow row;  // sorted by column
};

}  // namespace

NullspaceResult nullspace(const std::vector<SparseRow>& rows, int ncols) {
  std::vector<PivotRow> pivots;
  std::unordered_map<int, int> pivot_index;  // column -> index into pivots
  pivot_index.reserve(static_cast<std::size_t>(ncols));

  // Column occupancy counts drive a cheap Markowitz-style pivot choice.
  std::vector<int> col_count(ncols, 0);
  for (const auto& r : rows)
    for (const auto& [c, v] : r) ++col_count[c];

  // Consuming sparse rows first keeps the fill-in of the pivot rows low.
  std::vector<int> order(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&rows](int a, int b) { return rows[a].size() < rows[b].size(); });

  // Sparse accumulator: dense value scratch plus the list of touched columns.
  std::vector<Rational> value(ncols, Rational(0));
  std::vector<char> occupied(ncols, 0);
  std::vector<int> touched;
  // Pivots that may still have to eliminate something, ordered oldest first:
  // eliminating the pivot of creation index k only introduces pivots younger
  // than k, so the ascending sweep terminates.
  std::priority_queue<int, std::vector<int>, std::greater<int>> pending;

  auto accumulate = [&](int c, const Rational& v) {
    if (!occupied[c]) {
      occupied[c] = 1;
      value[c] = v;
      touched.push_back(c);
    } else {
      value[c] += v;
    }
    auto it = pivot_index.find(c);
    if (it != pivot_index.end()) pending.push(it->second);
  };

  for (const int row_index : order) {
    for (const auto& [c, v] : rows[row_index]) accumulate(c, v);

    while (!pending.empty()) {
      const int k = pending.top();
      while (!pending.empty() && pending.top() == k) pending.pop();
      const PivotRow& p = pivots[k];
      if (!occupied[p.col] || value[p.col] == 0) continue;
      const Rational factor = value[p.col];
      for (const auto& [c, v] : p.row) accumulate(c, -factor * v);
    }

    // Pick the entry whose column appears in the fewest input rows.
    int best_col = -1;
    for (const int c : touched) {
      if (value[c] == 0) continue;
      if (best_col == -1 || col_count[c] < col_count[best_col] ||
          (col_count[c] == col_count[best_col] && c < best_col))
        best_col = c;
    }
    if (best_col != -1) {
      const Rational inv = value[best_col];
      PivotRow p;
      p.col = best_col;
      for (const int c : touched) {
        if (value[c] != 0) p.row.emplace_back(c, value[c] / inv);
      }
      std::sort(p.row.begin(), p.row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      pivot_index.emplace(best_col, static_cast<int>(pivots.size()));
      pivots.push_back(std::move(p));
    }

    for (const int c : touched) {
      occupied[c] = 0;
      value[c] = Rational(0);
    }
    touched.clear();
  }

  NullspaceResult result;
  result.rank = static_cast<int>(pivots.size());

  std::vector<char> is_pivot_col(ncols, 0);
  for (const auto& p : pivots) is_pivot_col[p.col] = 1;

  // One kernel vector per free column: x[free] = 1, then solve the pivot rows
  // from the youngest to the oldest.
  for (int free_col = 0; free_col < ncols; ++free_col) {
    if (is_pivot_col[free_col]) continue;
    std::unordered_map<int, Rational> x;
    x.emplace(free_col, Rational(1));
    for (int k = static_cast<int>(pivots.size()) - 1; k >= 0; --k) {
      const PivotRow& p = pivots[k];
      Rational acc(0);
      for (const auto& [c, v] : p.row) {
        if (c == p.col) continue;
        auto it = x.find(c);
        if (it != x.end()) acc += v * it->second;
      }
      if (acc != 0) x.emplace(p.col, -acc);
    }
    std::vector<Rational> dense(ncols, Rational(0));
    for (const auto& [c, v] : x) dense[c] = v;
    result.basis.push_back(std::move(dense));
  }
  return result;
}

int rref_exact(std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) return 0;
  const int ncols = static_cast<int>(rows[0].size());
  int rank = 0;
  for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == -1) continue;
    std::swap(rows[rank], rows[pivot]);
    const Rational inv = rows[rank][col];
    for (auto& v : rows[rank]) v /= inv;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rational f = rows[r][col];
      for (int c = 0; c < ncols; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  rows.resize(rank);
  return rank;
}

int rank_exact(std::vector<std::vector<Rational>> rows) { return rref_exact(rows); }

std::optional<std::vector<Rational>> solve_exact(
    const std::vector<std::vector<Rational>>& columns, const std::vector<Rational>& target) {
  const int ncols = static_cast<int>(columns.size());
  const int nrows = static_cast<int>(target.size());
  // Augmented dense elimination; the systems here are small (basis decompositions).
  std::vector<std::vector<Rational>> aug(nrows, std::vector<Rational>(ncols + 1, Rational(0)));
  for (int j = 0; j < ncols; ++j)
    for (int i = 0; i < nrows; ++i) aug[i][j] = columns[j][i];
  for (int i = 0; i < nrows; ++i) aug[i][ncols] = target[i];

  std::vector<int> pivot_col_of_row;
  int rank = 0;
  for (int col = 0; col < ncols && rank < nrows; ++col) {
    int pivot = -1;
    for (int r = rank; r < nrows; ++r) {
      if (aug[r][col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == -1) continue;
    std::swap(aug[rank], aug[pivot]);
    const Rational inv = aug[rank][col];
    for (auto& v : aug[rank]) v /= inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == rank || aug[r][col] == 0) continue;
      const Rational f = aug[r][col];
      for (int c = col; c <= ncols; ++c) aug[r][c] -= f * aug[rank][c];
    }
    pivot_col_of_row.push_back(col);
    ++rank;
  }
  for (int r = rank; r < nrows; ++r)
    if (aug[r][ncols] != 0) return std::nullopt;

  std::vector<Rational> x(ncols, Rational(0));
  for (int r = 0; r < rank; ++r) x[pivot_col_of_row[r]] = aug[r][ncols];
  return x;
}

// ---------------------------------------------------------------------------

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

Mat3 mat_identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += m[i][j] * v[j];
  return r;
}

double det3(const Vec3& c0, const Vec3& c1, const Vec3& c2) { return dot(c0, cross(c1, c2)); }

double det3(const Mat3& m) {
  return det3(Vec3{m[0][0], m[1][0], m[2][0]}, Vec3{m[0][1], m[1][1], m[2][1]},
              Vec3{m[0][2], m[1][2], m[2][2]});
}

Mat3 mat_inverse(const Mat3& m) {
  const double d = det3(m);
  Mat3 r{};
  r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
  r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
  r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
  r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
  r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
  r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
  r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
  r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
  r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
  return r;
}

}  // namespace conic
