#include "asflab/linalg.hpp"

namespace asflab {

std::optional<std::vector<Rational>> linsolve_exact(std::vector<std::vector<Rational>> a,
                                                    std::vector<Rational> b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  // clear denominators row by row, then fraction-free Bareiss elimination
  std::vector<std::vector<Int>> m(rows, std::vector<Int>(cols + 1));
  for (size_t r = 0; r < rows; ++r) {
    Int l = 1;
    for (size_t c = 0; c < cols; ++c) l = boost::multiprecision::lcm(l, den(a[r][c]));
    l = boost::multiprecision::lcm(l, den(b[r]));
    for (size_t c = 0; c < cols; ++c) m[r][c] = num(a[r][c]) * (l / den(a[r][c]));
    m[r][cols] = num(b[r]) * (l / den(b[r]));
  }
  Int prev = 1;
  size_t row = 0;
  std::vector<int> pivot_of_col(cols, -1);
  for (size_t c = 0; c < cols && row < rows; ++c) {
    size_t p = row;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[row]);
    for (size_t r = row + 1; r < rows; ++r) {
      for (size_t c2 = c + 1; c2 <= cols; ++c2)
        m[r][c2] = (m[r][c2] * m[row][c] - m[r][c] * m[row][c2]) / prev;
      m[r][c] = 0;
    }
    prev = m[row][c];
    pivot_of_col[c] = (int)row;
    ++row;
  }
  for (size_t r = row; r < rows; ++r)
    if (m[r][cols] != 0) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (size_t c = cols; c-- > 0;) {
    if (pivot_of_col[c] < 0) continue;  // free variable: 0
    size_t r = size_t(pivot_of_col[c]);
    Rational acc = Rational(m[r][cols]);
    for (size_t c2 = c + 1; c2 < cols; ++c2)
      if (m[r][c2] != 0) acc -= Rational(m[r][c2]) * x[c2];
    x[c] = acc / Rational(m[r][c]);
  }
  // free variables make the elimination above non-reduced; verify honestly
  for (size_t r = 0; r < rows; ++r) {
    Rational acc = 0;
    for (size_t c = 0; c < cols; ++c) acc += a[r][c] * x[c];
    if (acc != b[r]) return std::nullopt;
  }
  return x;
}

size_t matrix_rank_exact(std::vector<std::vector<Rational>> a) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (size_t c2 = c; c2 < cols; ++c2) a[r][c2] -= f * a[rank][c2];
    }
    ++rank;
  }
  return rank;
}

}  // namespace asflab
