#include "excat/linalg.hpp"

namespace excat {

bool FieldPrime::is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldPrime::FieldPrime(std::uint32_t modulus) : p(modulus) {
  if (!is_prime(modulus))
    throw Error("FieldPrime: modulus " + std::to_string(modulus) + " is not prime");
}

Matrix::Matrix(std::uint32_t p_, std::size_t r, std::size_t c,
               std::vector<std::uint32_t> entries)
    : p(p_), rows(r), cols(c), a(std::move(entries)) {
  if (a.size() != r * c) throw Error("Matrix: entry count does not match shape");
  for (auto& e : a) e %= p;
}

Matrix Matrix::identity(std::uint32_t p, std::size_t n) {
  Matrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1 % p;
  return m;
}

bool Matrix::is_zero() const {
  for (auto e : a)
    if (e != 0) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows != cols) return false;
  return *this == identity(p, rows);
}

std::uint32_t fp_add(std::uint32_t x, std::uint32_t y, std::uint32_t p) {
  std::uint64_t s = std::uint64_t(x) + y;
  return std::uint32_t(s >= p ? s - p : s);
}

std::uint32_t fp_sub(std::uint32_t x, std::uint32_t y, std::uint32_t p) {
  return x >= y ? x - y : std::uint32_t(std::uint64_t(x) + p - y);
}

std::uint32_t fp_mul(std::uint32_t x, std::uint32_t y, std::uint32_t p) {
  return std::uint32_t(std::uint64_t(x) * y % p);
}

std::uint32_t fp_neg(std::uint32_t x, std::uint32_t p) { return x == 0 ? 0 : p - x; }

std::uint32_t fp_inv(std::uint32_t x, std::uint32_t p) {
  if (x == 0) throw Error("fp_inv: division by zero");
  // extended Euclid
  std::int64_t t = 0, nt = 1, r = p, nr = x % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt; nt = tmp;
    tmp = r - q * nr;
    r = nr; nr = tmp;
  }
  if (t < 0) t += p;
  return std::uint32_t(t);
}

static void check_same_field(const Matrix& x, const Matrix& y, const char* op) {
  if (x.p != y.p) throw Error(std::string(op) + ": field mismatch");
}

Matrix add(const Matrix& x, const Matrix& y) {
  check_same_field(x, y, "add");
  if (x.rows != y.rows || x.cols != y.cols) throw Error("add: shape mismatch");
  Matrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_add(x.a[i], y.a[i], x.p);
  return r;
}

Matrix sub(const Matrix& x, const Matrix& y) {
  check_same_field(x, y, "sub");
  if (x.rows != y.rows || x.cols != y.cols) throw Error("sub: shape mismatch");
  Matrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_sub(x.a[i], y.a[i], x.p);
  return r;
}

Matrix neg(const Matrix& x) {
  Matrix r = x;
  for (auto& e : r.a) e = fp_neg(e, x.p);
  return r;
}

Matrix mul(const Matrix& x, const Matrix& y) {
  check_same_field(x, y, "mul");
  if (x.cols != y.rows) throw Error("mul: inner dimension mismatch");
  Matrix r(x.p, x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      std::uint64_t xe = x.at(i, k);
      if (xe == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) {
        r.at(i, j) = std::uint32_t((r.at(i, j) + xe * y.at(k, j)) % x.p);
      }
    }
  }
  return r;
}

Matrix scalar_mul(std::uint32_t c, const Matrix& x) {
  Matrix r = x;
  c %= x.p;
  for (auto& e : r.a) e = fp_mul(e, c, x.p);
  return r;
}

Matrix transpose(const Matrix& x) {
  Matrix r(x.p, x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

Matrix hstack(const Matrix& x, const Matrix& y) {
  check_same_field(x, y, "hstack");
  if (x.rows != y.rows) throw Error("hstack: row mismatch");
  Matrix r(x.p, x.rows, x.cols + y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (std::size_t j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
  }
  return r;
}

Matrix vstack(const Matrix& x, const Matrix& y) {
  check_same_field(x, y, "vstack");
  if (x.cols != y.cols) throw Error("vstack: column mismatch");
  Matrix r(x.p, x.rows + y.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
  for (std::size_t i = 0; i < y.rows; ++i)
    for (std::size_t j = 0; j < y.cols; ++j) r.at(x.rows + i, j) = y.at(i, j);
  return r;
}

Matrix col_slice(const Matrix& x, std::size_t c0, std::size_t c1) {
  if (c0 > c1 || c1 > x.cols) throw Error("col_slice: bad range");
  Matrix r(x.p, x.rows, c1 - c0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = c0; j < c1; ++j) r.at(i, j - c0) = x.at(i, j);
  return r;
}

Matrix row_slice(const Matrix& x, std::size_t r0, std::size_t r1) {
  if (r0 > r1 || r1 > x.rows) throw Error("row_slice: bad range");
  Matrix r(x.p, r1 - r0, x.cols);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) r.at(i - r0, j) = x.at(i, j);
  return r;
}

Matrix block_diag(const std::vector<Matrix>& blocks, std::uint32_t p) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    if (b.p != p) throw Error("block_diag: field mismatch");
    rows += b.rows;
    cols += b.cols;
  }
  Matrix r(p, rows, cols);
  std::size_t ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows; ++i)
      for (std::size_t j = 0; j < b.cols; ++j) r.at(ro + i, co + j) = b.at(i, j);
    ro += b.rows;
    co += b.cols;
  }
  return r;
}

Matrix vectorize(const Matrix& x) {
  Matrix v(x.p, x.rows * x.cols, 1);
  v.a = x.a;
  return v;
}

Matrix unvectorize(const Matrix& v, std::size_t rows, std::size_t cols) {
  if (v.cols != 1 || v.rows != rows * cols) throw Error("unvectorize: bad shape");
  Matrix m(v.p, rows, cols);
  m.a = v.a;
  return m;
}

Rref rref(const Matrix& m) {
  Matrix r = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < r.cols && row < r.rows; ++col) {
    std::size_t sel = row;
    while (sel < r.rows && r.at(sel, col) == 0) ++sel;
    if (sel == r.rows) continue;
    if (sel != row)
      for (std::size_t j = 0; j < r.cols; ++j) std::swap(r.at(sel, j), r.at(row, j));
    std::uint32_t inv = fp_inv(r.at(row, col), r.p);
    for (std::size_t j = col; j < r.cols; ++j) r.at(row, j) = fp_mul(r.at(row, j), inv, r.p);
    for (std::size_t i = 0; i < r.rows; ++i) {
      if (i == row) continue;
      std::uint32_t f = r.at(i, col);
      if (f == 0) continue;
      for (std::size_t j = col; j < r.cols; ++j)
        r.at(i, j) = fp_sub(r.at(i, j), fp_mul(f, r.at(row, j), r.p), r.p);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(r), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  check_same_field(a, b, "solve");
  if (a.rows != b.rows) throw Error("solve: row count mismatch");
  Rref r = rref(hstack(a, b));
  for (auto c : r.pivots)
    if (c >= a.cols) return std::nullopt;
  Matrix x(a.p, a.cols, b.cols);
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    std::size_t pc = r.pivots[i];
    for (std::size_t j = 0; j < b.cols; ++j) x.at(pc, j) = r.matrix.at(i, a.cols + j);
  }
  return x;
}

Matrix kernel_basis(const Matrix& a) {
  Rref r = rref(a);
  std::vector<bool> is_pivot(a.cols, false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix k(a.p, a.cols, free_cols.size());
  for (std::size_t idx = 0; idx < free_cols.size(); ++idx) {
    std::size_t f = free_cols[idx];
    k.at(f, idx) = 1 % a.p;
    for (std::size_t i = 0; i < r.pivots.size(); ++i)
      k.at(r.pivots[i], idx) = fp_neg(r.matrix.at(i, f), a.p);
  }
  return k;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows != m.cols) return std::nullopt;
  auto x = solve(m, Matrix::identity(m.p, m.rows));
  if (!x) return std::nullopt;
  if (!mul(m, *x).is_identity()) return std::nullopt;
  return x;
}

}  // namespace excat
