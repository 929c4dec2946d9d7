#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "s4/rng.hpp"

namespace s4 {

struct LinalgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : LinalgError {
  using LinalgError::LinalgError;
};
struct ModulusMismatch : LinalgError {
  using LinalgError::LinalgError;
};
struct NotInvertible : LinalgError {
  using LinalgError::LinalgError;
};

using Elem = std::uint32_t;

// Largest modulus accepted anywhere; products of two elements fit in 64 bits.
inline constexpr std::uint32_t kMaxModulus = 1u << 31;

bool is_prime(std::uint64_t q);
// Throws std::invalid_argument unless q is a prime below kMaxModulus.
void require_prime(std::uint64_t q);

inline Elem fadd(Elem a, Elem b, std::uint32_t q) {
  std::uint64_t s = std::uint64_t(a) + b;
  return static_cast<Elem>(s >= q ? s - q : s);
}
inline Elem fsub(Elem a, Elem b, std::uint32_t q) { return a >= b ? a - b : a + q - b; }
inline Elem fmul(Elem a, Elem b, std::uint32_t q) {
  return static_cast<Elem>((std::uint64_t(a) * b) % q);
}
inline Elem fneg(Elem a, std::uint32_t q) { return a == 0 ? 0 : q - a; }
Elem fpow(Elem a, std::uint64_t e, std::uint32_t q);
Elem finv(Elem a, std::uint32_t q);  // throws NotInvertible on 0

struct FieldVector {
  std::uint32_t q = 2;
  std::vector<Elem> v;

  FieldVector() = default;
  FieldVector(std::uint32_t q_, std::size_t n) : q(q_), v(n, 0) {}
  FieldVector(std::uint32_t q_, std::vector<Elem> entries);
  FieldVector(std::uint32_t q_, std::initializer_list<Elem> entries)
      : FieldVector(q_, std::vector<Elem>(entries)) {}

  std::size_t dim() const { return v.size(); }
  Elem operator[](std::size_t i) const { return v[i]; }
  Elem& operator[](std::size_t i) { return v[i]; }
  bool is_zero() const;
  bool operator==(const FieldVector&) const = default;
};

FieldVector operator+(const FieldVector& a, const FieldVector& b);
FieldVector operator-(const FieldVector& a, const FieldVector& b);
FieldVector random_vector(std::uint32_t q, std::size_t n, DeterministicRng& rng);
std::string to_string(const FieldVector& v);

class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::uint32_t q, std::size_t rows, std::size_t cols);
  // Row-major literal; all rows must have equal length.
  FieldMatrix(std::uint32_t q, std::initializer_list<std::initializer_list<Elem>> rows);

  static FieldMatrix identity(std::uint32_t q, std::size_t n);
  static FieldMatrix zero(std::uint32_t q, std::size_t rows, std::size_t cols) {
    return FieldMatrix(q, rows, cols);
  }

  std::uint32_t modulus() const { return q_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Elem at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Elem x) { a_[r * cols_ + c] = x % q_; }
  const std::vector<Elem>& data() const { return a_; }

  bool is_zero() const;
  bool strictly_upper() const;
  bool operator==(const FieldMatrix&) const = default;

 private:
  std::uint32_t q_ = 2;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Elem> a_;
};

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b);
FieldVector mat_vec(const FieldMatrix& a, const FieldVector& x);
FieldMatrix mat_add(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix mat_sub(const FieldMatrix& a, const FieldMatrix& b);
inline FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) { return mat_mul(a, b); }
inline FieldVector operator*(const FieldMatrix& a, const FieldVector& x) { return mat_vec(a, x); }
inline FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b) { return mat_add(a, b); }
inline FieldMatrix operator-(const FieldMatrix& a, const FieldMatrix& b) { return mat_sub(a, b); }

// Gauss-Jordan with first-nonzero pivot. Throws NotInvertible.
FieldMatrix mat_inv(const FieldMatrix& a);
std::size_t mat_rank(const FieldMatrix& a);
std::string to_string(const FieldMatrix& m);

// Smallest m <= max_len such that every length-m product of family members is
// zero; nullopt if there is none. Exhaustive over all ell^m words.
std::optional<int> semigroup_nilpotency_index(const std::vector<FieldMatrix>& family, int max_len);
std::optional<int> semigroup_nilpotency_index_serial(const std::vector<FieldMatrix>& family,
                                                     int max_len);

FieldMatrix random_matrix(std::uint32_t q, std::size_t rows, std::size_t cols,
                          DeterministicRng& rng);
FieldMatrix random_strictly_upper(std::uint32_t q, std::size_t n, DeterministicRng& rng);
FieldMatrix sample_invertible(std::uint32_t q, std::size_t n, DeterministicRng& rng);
// Q_j = P N_j P^-1 with one shared P and strictly upper triangular N_j.
std::vector<FieldMatrix> sample_nilpotent_family(std::uint32_t q, std::size_t n, std::size_t ell,
                                                 DeterministicRng& rng);

}  // namespace s4
