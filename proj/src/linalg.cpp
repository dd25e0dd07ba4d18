#include "ptcount/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace ptcount {

namespace {

std::size_t num_cols(const IntMatrix& a) { return a.empty() ? 0 : a.front().size(); }

void check_rectangular(const IntMatrix& a) {
  for (const auto& row : a) {
    if (row.size() != num_cols(a)) throw InvalidInput("matrix rows have unequal lengths");
  }
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

BigInt determinant(IntMatrix a) {
  check_rectangular(a);
  const std::size_t n = a.size();
  if (num_cols(a) != n) throw InvalidInput("determinant of a non-square matrix");
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::size_t matrix_rank(IntMatrix a) { return hermite_normal_form(std::move(a)).size(); }

IntMatrix hermite_normal_form(IntMatrix a) {
  check_rectangular(a);
  const std::size_t rows = a.size();
  const std::size_t cols = num_cols(a);
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
    while (true) {
      std::size_t best = rows;
      for (std::size_t r = pivot_row; r < rows; ++r) {
        if (a[r][col] != 0 && (best == rows || abs(a[r][col]) < abs(a[best][col]))) best = r;
      }
      if (best == rows) break;
      std::swap(a[pivot_row], a[best]);
      bool others_zero = true;
      for (std::size_t r = pivot_row + 1; r < rows; ++r) {
        if (a[r][col] == 0) continue;
        const BigInt q = floor_div(a[r][col], a[pivot_row][col]);
        for (std::size_t j = col; j < cols; ++j) a[r][j] -= q * a[pivot_row][j];
        if (a[r][col] != 0) others_zero = false;
      }
      if (others_zero) break;
    }
    if (a[pivot_row][col] == 0) continue;
    if (a[pivot_row][col] < 0) {
      for (auto& v : a[pivot_row]) v = -v;
    }
    for (std::size_t r = 0; r < pivot_row; ++r) {
      const BigInt q = floor_div(a[r][col], a[pivot_row][col]);
      if (q == 0) continue;
      for (std::size_t j = col; j < cols; ++j) a[r][j] -= q * a[pivot_row][j];
    }
    ++pivot_row;
  }
  a.resize(pivot_row);
  return a;
}

IntMatrix integer_kernel(const IntMatrix& input) {
  check_rectangular(input);
  IntMatrix a = input;
  const std::size_t rows = a.size();
  const std::size_t cols = num_cols(a);
  // Unimodular column operations, mirrored on u, until a*u = [lower | 0].
  IntMatrix u(cols, std::vector<BigInt>(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    for (auto& row : a) std::swap(row[x], row[y]);
    for (auto& row : u) std::swap(row[x], row[y]);
  };
  auto sub_col = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    for (auto& row : a) row[dst] -= q * row[src];
    for (auto& row : u) row[dst] -= q * row[src];
  };
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < rows && pivot < cols; ++i) {
    while (true) {
      std::size_t best = cols;
      for (std::size_t j = pivot; j < cols; ++j) {
        if (a[i][j] != 0 && (best == cols || abs(a[i][j]) < abs(a[i][best]))) best = j;
      }
      if (best == cols) break;
      swap_cols(pivot, best);
      bool done = true;
      for (std::size_t j = pivot + 1; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        sub_col(j, pivot, BigInt(a[i][j] / a[i][pivot]));
        if (a[i][j] != 0) done = false;
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }
  IntMatrix basis;
  for (std::size_t j = pivot; j < cols; ++j) {
    std::vector<BigInt> v(cols);
    for (std::size_t k = 0; k < cols; ++k) v[k] = u[k][j];
    basis.push_back(std::move(v));
  }
  return hermite_normal_form(std::move(basis));
}

std::optional<std::vector<BigRational>> solve_rational(const IntMatrix& a, const std::vector<BigInt>& rhs) {
  check_rectangular(a);
  const std::size_t rows = a.size();
  const std::size_t cols = num_cols(a);
  if (rhs.size() != rows) throw InvalidInput("right-hand side length mismatch");
  std::vector<std::vector<BigRational>> m(rows, std::vector<BigRational>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = BigRational(a[i][j]);
    m[i][cols] = BigRational(rhs[i]);
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t p = r;
    while (p < rows && m[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    const BigRational inv = 1 / m[r][col];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][col] == 0) continue;
      const BigRational f = m[i][col];
      for (std::size_t j = col; j <= cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_cols.push_back(col);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (m[i][cols] != 0) return std::nullopt;
  }
  std::vector<BigRational> x(cols, BigRational(0));
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) x[pivot_cols[i]] = m[i][cols];
  return x;
}

}  // namespace ptcount
