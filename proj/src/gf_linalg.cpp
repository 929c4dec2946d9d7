#include "s4/gf_linalg.hpp"

#include <atomic>
#include <sstream>

namespace s4 {

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  for (std::uint64_t d = 3; d * d <= q; d += 2)
    if (q % d == 0) return false;
  return true;
}

void require_prime(std::uint64_t q) {
  if (q >= kMaxModulus || !is_prime(q))
    throw std::invalid_argument("modulus " + std::to_string(q) + " is not a supported prime");
}

Elem fpow(Elem a, std::uint64_t e, std::uint32_t q) {
  std::uint64_t r = 1 % q, b = a % q;
  while (e) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return static_cast<Elem>(r);
}

Elem finv(Elem a, std::uint32_t q) {
  if (a % q == 0) throw NotInvertible("zero has no inverse");
  return fpow(a, q - 2, q);
}

FieldVector::FieldVector(std::uint32_t q_, std::vector<Elem> entries) : q(q_), v(std::move(entries)) {
  for (auto& x : v) x %= q;
}

bool FieldVector::is_zero() const {
  for (auto x : v)
    if (x) return false;
  return true;
}

static void check_same(const FieldVector& a, const FieldVector& b) {
  if (a.q != b.q) throw ModulusMismatch("vector moduli differ");
  if (a.dim() != b.dim()) throw DimensionMismatch("vector dimensions differ");
}

FieldVector operator+(const FieldVector& a, const FieldVector& b) {
  check_same(a, b);
  FieldVector r(a.q, a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r.v[i] = fadd(a.v[i], b.v[i], a.q);
  return r;
}

FieldVector operator-(const FieldVector& a, const FieldVector& b) {
  check_same(a, b);
  FieldVector r(a.q, a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r.v[i] = fsub(a.v[i], b.v[i], a.q);
  return r;
}

FieldVector random_vector(std::uint32_t q, std::size_t n, DeterministicRng& rng) {
  FieldVector r(q, n);
  for (auto& x : r.v) x = static_cast<Elem>(rng.below(q));
  return r;
}

std::string to_string(const FieldVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v.v[i];
  os << ')';
  return os.str();
}

FieldMatrix::FieldMatrix(std::uint32_t q, std::size_t rows, std::size_t cols)
    : q_(q), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

FieldMatrix::FieldMatrix(std::uint32_t q, std::initializer_list<std::initializer_list<Elem>> rows)
    : q_(q), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  a_.reserve(rows_ * cols_);
  for (auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    for (auto x : r) a_.push_back(x % q);
  }
}

FieldMatrix FieldMatrix::identity(std::uint32_t q, std::size_t n) {
  FieldMatrix m(q, n, n);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1 % q;
  return m;
}

bool FieldMatrix::is_zero() const {
  for (auto x : a_)
    if (x) return false;
  return true;
}

bool FieldMatrix::strictly_upper() const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c <= r && c < cols_; ++c)
      if (at(r, c)) return false;
  return true;
}

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.modulus() != b.modulus()) throw ModulusMismatch("matrix moduli differ");
  if (a.cols() != b.rows()) throw DimensionMismatch("mat_mul: inner dimensions differ");
  const std::uint32_t q = a.modulus();
  FieldMatrix r(q, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        acc += std::uint64_t(a.at(i, k)) * b.at(k, j);
        if (acc >= (1ULL << 62)) acc %= q;
      }
      r.set(i, j, static_cast<Elem>(acc % q));
    }
  return r;
}

FieldVector mat_vec(const FieldMatrix& a, const FieldVector& x) {
  if (a.modulus() != x.q) throw ModulusMismatch("matrix/vector moduli differ");
  if (a.cols() != x.dim()) throw DimensionMismatch("mat_vec: dimensions differ");
  const std::uint32_t q = a.modulus();
  FieldVector r(q, a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      acc += std::uint64_t(a.at(i, k)) * x.v[k];
      if (acc >= (1ULL << 62)) acc %= q;
    }
    r.v[i] = static_cast<Elem>(acc % q);
  }
  return r;
}

static void check_same(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.modulus() != b.modulus()) throw ModulusMismatch("matrix moduli differ");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
}

FieldMatrix mat_add(const FieldMatrix& a, const FieldMatrix& b) {
  check_same(a, b);
  FieldMatrix r(a.modulus(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.set(i, j, fadd(a.at(i, j), b.at(i, j), a.modulus()));
  return r;
}

FieldMatrix mat_sub(const FieldMatrix& a, const FieldMatrix& b) {
  check_same(a, b);
  FieldMatrix r(a.modulus(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.set(i, j, fsub(a.at(i, j), b.at(i, j), a.modulus()));
  return r;
}

namespace {

// Reduces [a | aug] in place; returns rank of a. aug may be empty (0 columns).
std::size_t gauss_jordan(std::vector<std::vector<Elem>>& m, std::size_t ncols, std::uint32_t q) {
  std::size_t rank = 0;
  const std::size_t nrows = m.size();
  for (std::size_t c = 0; c < ncols && rank < nrows; ++c) {
    std::size_t piv = rank;
    while (piv < nrows && m[piv][c] == 0) ++piv;
    if (piv == nrows) continue;
    std::swap(m[piv], m[rank]);
    const Elem inv = finv(m[rank][c], q);
    for (auto& x : m[rank]) x = fmul(x, inv, q);
    for (std::size_t r = 0; r < nrows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const Elem f = m[r][c];
      for (std::size_t k = 0; k < m[r].size(); ++k)
        m[r][k] = fsub(m[r][k], fmul(f, m[rank][k], q), q);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

FieldMatrix mat_inv(const FieldMatrix& a) {
  if (!a.square()) throw DimensionMismatch("mat_inv: matrix is not square");
  const std::size_t n = a.rows();
  const std::uint32_t q = a.modulus();
  std::vector<std::vector<Elem>> m(n, std::vector<Elem>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(i, j);
    m[i][n + i] = 1 % q;
  }
  if (gauss_jordan(m, n, q) < n) throw NotInvertible("matrix is not invertible");
  FieldMatrix r(q, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.set(i, j, m[i][n + j]);
  return r;
}

std::size_t mat_rank(const FieldMatrix& a) {
  std::vector<std::vector<Elem>> m(a.rows(), std::vector<Elem>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a.at(i, j);
  return gauss_jordan(m, a.cols(), a.modulus());
}

std::string to_string(const FieldMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m.at(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

void check_family(const std::vector<FieldMatrix>& family, int max_len) {
  if (family.empty()) throw std::invalid_argument("empty matrix family");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  for (auto& m : family) {
    if (!m.square() || m.rows() != family[0].rows())
      throw DimensionMismatch("family matrices must be square and equally sized");
    if (m.modulus() != family[0].modulus()) throw ModulusMismatch("family moduli differ");
  }
}

std::uint64_t word_count(std::size_t ell, int len) {
  std::uint64_t w = 1;
  for (int i = 0; i < len; ++i) {
    w *= ell;
    if (w > (1ULL << 30)) throw std::invalid_argument("semigroup enumeration too large");
  }
  return w;
}

// Product for word w read as base-ell digits, most significant first.
bool word_product_zero(const std::vector<FieldMatrix>& family, std::uint64_t w, int len) {
  const std::size_t ell = family.size();
  FieldMatrix p = family[w % ell];
  for (int i = 1; i < len; ++i) {
    w /= ell;
    p = mat_mul(family[w % ell], p);
    if (p.is_zero()) return true;
  }
  return p.is_zero();
}

}  // namespace

std::optional<int> semigroup_nilpotency_index_serial(const std::vector<FieldMatrix>& family,
                                                     int max_len) {
  check_family(family, max_len);
  for (int len = 1; len <= max_len; ++len) {
    const std::uint64_t words = word_count(family.size(), len);
    bool all_zero = true;
    for (std::uint64_t w = 0; w < words && all_zero; ++w)
      all_zero = word_product_zero(family, w, len);
    if (all_zero) return len;
  }
  return std::nullopt;
}

std::optional<int> semigroup_nilpotency_index(const std::vector<FieldMatrix>& family, int max_len) {
  check_family(family, max_len);
  for (int len = 1; len <= max_len; ++len) {
    const std::int64_t words = static_cast<std::int64_t>(word_count(family.size(), len));
    std::atomic<bool> all_zero{true};
#pragma omp parallel for schedule(static) if (words > 256)
    for (std::int64_t w = 0; w < words; ++w) {
      if (!all_zero.load(std::memory_order_relaxed)) continue;
      if (!word_product_zero(family, static_cast<std::uint64_t>(w), len))
        all_zero.store(false, std::memory_order_relaxed);
    }
    if (all_zero) return len;
  }
  return std::nullopt;
}

FieldMatrix random_matrix(std::uint32_t q, std::size_t rows, std::size_t cols, DeterministicRng& rng) {
  FieldMatrix m(q, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, static_cast<Elem>(rng.below(q)));
  return m;
}

FieldMatrix random_strictly_upper(std::uint32_t q, std::size_t n, DeterministicRng& rng) {
  FieldMatrix m(q, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, static_cast<Elem>(rng.below(q)));
  return m;
}

FieldMatrix sample_invertible(std::uint32_t q, std::size_t n, DeterministicRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_invertible: n must be >= 1");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    FieldMatrix m = random_matrix(q, n, n, rng);
    if (mat_rank(m) == n) return m;
  }
  throw std::logic_error("sample_invertible: rejection cap reached");
}

std::vector<FieldMatrix> sample_nilpotent_family(std::uint32_t q, std::size_t n, std::size_t ell,
                                                 DeterministicRng& rng) {
  if (n < 1 || ell < 1) throw std::invalid_argument("sample_nilpotent_family: n, ell must be >= 1");
  const FieldMatrix p = sample_invertible(q, n, rng);
  const FieldMatrix pinv = mat_inv(p);
  std::vector<FieldMatrix> out;
  out.reserve(ell);
  for (std::size_t j = 0; j < ell; ++j) out.push_back(p * random_strictly_upper(q, n, rng) * pinv);
  return out;
}

}  // namespace s4
