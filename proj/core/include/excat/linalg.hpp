#pragma once

// Exact dense linear algebra over a prime field F_p. All entries are kept
// reduced mod p; there is no floating point anywhere in the library.

#include <cstdint>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace excat {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Prime modulus, validated at construction.
struct FieldPrime {
  std::uint32_t p;

  explicit FieldPrime(std::uint32_t modulus);

  static bool is_prime(std::uint32_t n);
};

/// Dense row-major matrix over F_p. Degenerate shapes (0 rows or columns)
/// are legal and arise constantly from zero modules.
struct Matrix {
  std::uint32_t p = 2;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> a;  // rows*cols entries, each < p

  Matrix() = default;
  Matrix(std::uint32_t p_, std::size_t r, std::size_t c)
      : p(p_), rows(r), cols(c), a(r * c, 0) {}
  Matrix(std::uint32_t p_, std::size_t r, std::size_t c,
         std::vector<std::uint32_t> entries);

  std::uint32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::uint32_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool operator==(const Matrix& o) const {
    return p == o.p && rows == o.rows && cols == o.cols && a == o.a;
  }

  static Matrix identity(std::uint32_t p, std::size_t n);
  static Matrix zero(std::uint32_t p, std::size_t r, std::size_t c) {
    return Matrix(p, r, c);
  }

  bool is_zero() const;
  bool is_identity() const;
};

// modular scalar helpers
std::uint32_t fp_add(std::uint32_t x, std::uint32_t y, std::uint32_t p);
std::uint32_t fp_sub(std::uint32_t x, std::uint32_t y, std::uint32_t p);
std::uint32_t fp_mul(std::uint32_t x, std::uint32_t y, std::uint32_t p);
std::uint32_t fp_neg(std::uint32_t x, std::uint32_t p);
std::uint32_t fp_inv(std::uint32_t x, std::uint32_t p);

Matrix add(const Matrix& x, const Matrix& y);
Matrix sub(const Matrix& x, const Matrix& y);
Matrix neg(const Matrix& x);
Matrix mul(const Matrix& x, const Matrix& y);
Matrix scalar_mul(std::uint32_t c, const Matrix& x);
Matrix transpose(const Matrix& x);

/// [x | y], same row count.
Matrix hstack(const Matrix& x, const Matrix& y);
/// [x ; y], same column count.
Matrix vstack(const Matrix& x, const Matrix& y);
/// Columns [c0, c1) of x.
Matrix col_slice(const Matrix& x, std::size_t c0, std::size_t c1);
/// Rows [r0, r1) of x.
Matrix row_slice(const Matrix& x, std::size_t r0, std::size_t r1);
/// Block-diagonal assembly.
Matrix block_diag(const std::vector<Matrix>& blocks, std::uint32_t p);

/// Flatten row-major into a single column vector of length rows*cols.
Matrix vectorize(const Matrix& x);
/// Inverse of vectorize for the given shape.
Matrix unvectorize(const Matrix& v, std::size_t rows, std::size_t cols);

struct Rref {
  Matrix matrix;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

/// Reduced row-echelon form with pivot columns; rank = pivots.size().
Rref rref(const Matrix& m);

std::size_t rank(const Matrix& m);

/// Solve a*X = b columnwise. Returns the canonical solution (free variables
/// set to 0) or nullopt when inconsistent. Throws on row-count mismatch.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

/// Columns form the canonical basis of the null space of a; one column per
/// free column of rref(a), in ascending column order.
Matrix kernel_basis(const Matrix& a);

/// Inverse of a square matrix, if it exists.
std::optional<Matrix> inverse(const Matrix& m);

}  // namespace excat
