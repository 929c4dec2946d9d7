#include "s4/s4_cipher.hpp"

#include <sstream>
#include <stdexcept>

namespace s4 {

namespace {

void require_square(const FieldMatrix& m, std::size_t n, std::uint32_t q, const char* what) {
  if (m.modulus() != q) throw ModulusMismatch(std::string(what) + ": modulus differs");
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch(std::string(what) + ": must be n x n");
}

bool invertible(const FieldMatrix& m) { return m.square() && mat_rank(m) == m.rows(); }

}  // namespace

S4Params params_from_matrices(S4Matrices m, ElementPermutation perm) {
  S4Params p;
  p.q = m.q;
  require_prime(p.q);
  p.n = m.W.rows();
  p.ell = static_cast<int>(m.L.size());
  if (p.n < 1 || p.ell < 1) throw std::invalid_argument("S4 parameters need n >= 1 and ell >= 1");
  for (auto* fam : {&m.F, &m.E, &m.B, &m.Q})
    if (fam->size() != m.L.size()) throw DimensionMismatch("mode families have different lengths");
  if (!m.A.empty() && m.A.size() != m.L.size()) throw DimensionMismatch("A family length");
  if (!m.D.empty() && m.D.size() != m.L.size()) throw DimensionMismatch("D family length");
  require_square(m.W, p.n, p.q, "W");
  p.m0 = m.M.rows();
  if (p.m0 != p.n) throw DimensionMismatch("memory dimension m0 must equal n");
  require_square(m.M, p.n, p.q, "M");
  if (perm.size() != p.q) throw ModulusMismatch("permutation size differs from q");

  for (int j = 0; j < p.ell; ++j) {
    require_square(m.L[j], p.n, p.q, "L");
    require_square(m.F[j], p.n, p.q, "F");
    require_square(m.E[j], p.n, p.q, "E");
    require_square(m.B[j], p.n, p.q, "B");
    require_square(m.Q[j], p.n, p.q, "Q");
    p.Finv.push_back(mat_inv(m.F[j]));
    p.R.push_back(m.E[j] * p.Finv[j]);
    p.A.push_back(m.A.empty() ? p.R[j] * m.B[j] : m.A[j]);
    p.D.push_back(m.D.empty() ? m.Q[j] + p.R[j] * m.L[j] : m.D[j]);
    require_square(p.A[j], p.n, p.q, "A");
    require_square(p.D[j], p.n, p.q, "D");
  }
  auto n0 = semigroup_nilpotency_index(m.Q, static_cast<int>(p.n));
  if (!n0) throw std::invalid_argument("{Q_j} is not nilpotent within n");
  auto mi = semigroup_nilpotency_index({m.M}, static_cast<int>(p.n));
  if (!mi) throw std::invalid_argument("M is not nilpotent");
  p.n0 = *n0;
  p.mem_index = *mi;

  p.W = std::move(m.W);
  p.M = std::move(m.M);
  p.L = std::move(m.L);
  p.F = std::move(m.F);
  p.E = std::move(m.E);
  p.B = std::move(m.B);
  p.Q = std::move(m.Q);
  p.perm = std::move(perm);
  return p;
}

S4Params derive_params(const SecretKey& key, std::uint32_t q, std::size_t n, int ell,
                       std::uint64_t public_seed) {
  require_prime(q);
  if (q > kMaxTableSize) throw std::invalid_argument("q too large for table permutations");
  if (n < 2) throw std::invalid_argument("S4 needs n >= 2");
  if (ell < 1) throw std::invalid_argument("S4 needs ell >= 1");
  S4Matrices m;
  m.q = q;
  {
    auto rng = derive_rng(key, "W");
    m.W = sample_invertible(q, n, rng);
  }
  for (int j = 1; j <= ell; ++j) {
    auto rl = derive_rng(key, "L:" + std::to_string(j));
    m.L.push_back(sample_invertible(q, n, rl));
    auto rf = derive_rng(key, "F:" + std::to_string(j));
    m.F.push_back(sample_invertible(q, n, rf));
  }
  DeterministicRng pub(public_seed);
  for (int j = 0; j < ell; ++j) {
    m.E.push_back(sample_invertible(q, n, pub));
    m.B.push_back(sample_invertible(q, n, pub));
  }
  m.Q = sample_nilpotent_family(q, n, ell, pub);
  m.M = random_strictly_upper(q, n, pub);
  return params_from_matrices(std::move(m), derive_element_permutation(key, q, "perm"));
}

GeneratedParams gen_params(int k_bits, std::uint32_t q, std::size_t n, int ell, DeterministicRng& rng) {
  GeneratedParams g;
  g.key = gen_key(k_bits, rng);
  g.public_seed = rng.next();
  g.params = derive_params(g.key, q, n, ell, g.public_seed);
  return g;
}

bool ValidationReport::ok() const {
  auto all = [](const std::vector<bool>& v) {
    for (bool b : v)
      if (!b) return false;
    return true;
  };
  return w_invertible && all(l_invertible) && all(f_invertible) && all(e_invertible) &&
         all(b_invertible) && m_strictly_upper && nilpotency_index.has_value() && index_matches_n0 &&
         m0_equals_n && all(a_identity) && all(r_identity) && all(d_identity);
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  auto list = [&](const char* name, const std::vector<bool>& v) {
    os << name << '=';
    for (bool b : v) os << (b ? '1' : '0');
    os << ' ';
  };
  os << "W_inv=" << w_invertible << ' ';
  list("L_inv", l_invertible);
  list("F_inv", f_invertible);
  list("E_inv", e_invertible);
  list("B_inv", b_invertible);
  os << "M_strict_upper=" << m_strictly_upper << " index="
     << (nilpotency_index ? std::to_string(*nilpotency_index) : "none") << " index_ok=" << index_matches_n0
     << " m0_eq_n=" << m0_equals_n << ' ';
  list("A_id", a_identity);
  list("R_id", r_identity);
  list("D_id", d_identity);
  list("D_minus_id", d_identity_minus);
  return os.str();
}

ValidationReport validate_params(const S4Params& p) {
  ValidationReport r;
  r.w_invertible = invertible(p.W);
  r.m_strictly_upper = p.M.strictly_upper();
  r.m0_equals_n = p.m0 == p.n;
  try {
    r.nilpotency_index = semigroup_nilpotency_index(p.Q, static_cast<int>(p.n));
  } catch (const std::exception&) {
    r.nilpotency_index.reset();
  }
  r.index_matches_n0 = r.nilpotency_index && *r.nilpotency_index == p.n0;
  for (int j = 0; j < p.ell; ++j) {
    r.l_invertible.push_back(invertible(p.L[j]));
    r.f_invertible.push_back(invertible(p.F[j]));
    r.e_invertible.push_back(invertible(p.E[j]));
    r.b_invertible.push_back(invertible(p.B[j]));
    if (!r.f_invertible.back()) {
      r.a_identity.push_back(false);
      r.r_identity.push_back(false);
      r.d_identity.push_back(false);
      r.d_identity_minus.push_back(false);
      continue;
    }
    const FieldMatrix rj = p.E[j] * mat_inv(p.F[j]);
    r.r_identity.push_back(rj == p.R[j]);
    r.a_identity.push_back(rj * p.B[j] == p.A[j]);
    r.d_identity.push_back(p.Q[j] + rj * p.L[j] == p.D[j]);
    r.d_identity_minus.push_back(rj * p.L[j] - p.Q[j] == p.D[j]);
  }
  return r;
}

int switch_index(const SwitchRule& rule, std::uint64_t t, const FieldVector* prev_c) {
  if (rule.ell < 1) throw std::invalid_argument("switch rule needs ell >= 1");
  const std::uint64_t ell = static_cast<std::uint64_t>(rule.ell);
  if (rule.kind == SwitchKind::time_mod) {
    if (t < 1) throw std::invalid_argument("switch_index: t must be >= 1");
    const std::uint64_t phase = static_cast<std::uint64_t>(((rule.phase % rule.ell) + rule.ell) % rule.ell);
    return static_cast<int>((t - 1 + phase) % ell) + 1;
  }
  if (!prev_c) throw std::invalid_argument("ciphertext-driven switching needs the previous block");
  std::uint64_t sum = 0;
  for (auto x : prev_c->v) sum += x;
  return static_cast<int>(sum % ell) + 1;
}

S4Encryptor::S4Encryptor(std::shared_ptr<const S4Params> p, SwitchRule rule, FieldVector s0,
                         FieldVector mem0, FieldVector c0)
    : p_(std::move(p)), rule_(rule), s_(std::move(s0)), mem_(std::move(mem0)), pending_(std::move(c0)) {
  if (s_.dim() != p_->n || mem_.dim() != p_->m0 || pending_.dim() != p_->n || s_.q != p_->q ||
      mem_.q != p_->q || pending_.q != p_->q)
    throw DimensionMismatch("S4 encryptor initial values do not match parameters");
  prev_s_ = s_;
}

std::optional<FieldVector> S4Encryptor::start() {
  if (started_) throw std::logic_error("S4 encryptor already started");
  // s(1) = s(0), mem(1) = mem(0), c(1) = c(0): nothing to change.
  started_ = true;
  t_ = 0;
  return std::nullopt;
}

FieldVector S4Encryptor::step(const FieldVector& plain) {
  if (!started_) throw std::logic_error("S4 encryptor stepped before start");
  if (finished_) throw std::logic_error("S4 encryptor stepped after stop");
  if (plain.dim() != p_->n || plain.q != p_->q) throw DimensionMismatch("plaintext block has wrong shape");
  const std::uint64_t t = t_ + 1;
  const int j = switch_index(rule_, t, &pending_) - 1;
  const S4Params& p = *p_;
  const FieldVector ps = apply_entrywise(p.perm, s_);
  const FieldVector pp = apply_entrywise(p.perm, plain);
  const FieldVector z = p.L[j] * s_ + p.B[j] * ps;
  FieldVector c_next = z + p.F[j] * pp;
  FieldVector s_next = p.W * mem_ + p.D[j] * s_ + p.A[j] * ps + p.E[j] * pp;
  FieldVector mem_next = p.M * mem_ + pending_;
  FieldVector out = std::move(pending_);
  prev_s_ = std::move(s_);
  s_ = std::move(s_next);
  mem_ = std::move(mem_next);
  pending_ = std::move(c_next);
  t_ = t;
  return out;
}

FieldVector S4Encryptor::stop() {
  if (!started_ || finished_) throw std::logic_error("S4 encryptor stop out of order");
  finished_ = true;
  return pending_;
}

S4Receiver::S4Receiver(std::shared_ptr<const S4Params> p, SwitchRule rule, FieldVector s_hat1,
                       FieldVector mem0, FieldVector c0)
    : p_(std::move(p)), rule_(rule), s_hat_(std::move(s_hat1)), prev_c_(std::move(c0)), mem0_(std::move(mem0)) {
  if (s_hat_.dim() != p_->n || mem0_.dim() != p_->m0 || prev_c_.dim() != p_->n || s_hat_.q != p_->q ||
      mem0_.q != p_->q || prev_c_.q != p_->q)
    throw DimensionMismatch("S4 receiver initial values do not match parameters");
  mem_hat_ = FieldVector(p_->q, p_->m0);
}

void S4Receiver::bootstrap(const FieldVector& c1) {
  // s_hat(2) = s_hat(1), mem_hat(2) = mem(0).
  mem_hat_ = mem0_;
  prev_c_ = c1;
  t_ = 2;
}

int S4Receiver::mode() const { return switch_index(rule_, t_ - 1, &prev_c_) - 1; }

FieldVector S4Receiver::z_hat(int j) const {
  return p_->L[j] * s_hat_ + p_->B[j] * apply_entrywise(p_->perm, s_hat_);
}

FieldVector S4Receiver::advance(const FieldVector& c, int j, const FieldVector& zh) {
  const S4Params& p = *p_;
  FieldVector diff = c - zh;
  FieldVector s_next =
      p.W * mem_hat_ + p.D[j] * s_hat_ + p.A[j] * apply_entrywise(p.perm, s_hat_) + p.R[j] * diff;
  mem_hat_ = p.M * mem_hat_ + prev_c_;
  s_hat_ = std::move(s_next);
  prev_c_ = c;
  ++t_;
  return diff;
}

std::optional<FieldVector> S4Receiver::decrypt_step(const FieldVector* c) {
  if (t_ == 0) {
    t_ = 1;
    return std::nullopt;
  }
  if (!c) throw std::invalid_argument("S4 receiver expects a ciphertext block");
  if (c->dim() != p_->n || c->q != p_->q) throw DimensionMismatch("ciphertext block has wrong shape");
  if (t_ == 1) {
    bootstrap(*c);
    return std::nullopt;
  }
  const int j = mode();
  const FieldVector diff = advance(*c, j, z_hat(j));
  return apply_entrywise(p_->perm, p_->Finv[j] * diff, Direction::inverse);
}

FieldVector S4Receiver::sync_start() {
  if (t_ != 0) throw std::logic_error("synchronized S4 encryptor already started");
  FieldVector c1 = prev_c_;  // c(1) = c(0)
  bootstrap(c1);
  return c1;
}

FieldVector S4Receiver::sync_step(const FieldVector& plain) {
  if (t_ < 2) throw std::logic_error("synchronized S4 encryptor stepped before start");
  if (plain.dim() != p_->n || plain.q != p_->q) throw DimensionMismatch("plaintext block has wrong shape");
  const int j = mode();
  const FieldVector zh = z_hat(j);
  FieldVector c = zh + p_->F[j] * apply_entrywise(p_->perm, plain);
  advance(c, j, zh);
  return c;
}

FieldVector error_vector(const S4Encryptor& enc, const S4Receiver& dec) {
  if (dec.clock() < 2 || enc.clock() + 1 != dec.clock())
    throw std::logic_error("error_vector: encryptor and receiver clocks are not aligned");
  return dec.state() - enc.prev_state();
}

FieldVector reconstruct_state(const S4Params& p, const SwitchRule& rule, const CipherHistory& h,
                              std::uint64_t t) {
  if (t < static_cast<std::uint64_t>(p.sync_delay()))
    throw std::invalid_argument("reconstruct_state: t below the synchronization delay");
  const std::uint64_t h0 = t - static_cast<std::uint64_t>(p.n0) + 1;
  const std::uint64_t mi = static_cast<std::uint64_t>(p.mem_index);
  const bool need_mem0 = h0 - 1 < mi;
  const std::uint64_t k0 = need_mem0 ? 1 : h0 - mi;
  if (h.first > k0 || h.first + h.blocks.size() < t + 2)
    throw std::invalid_argument("reconstruct_state: insufficient ciphertext history");
  if (need_mem0 && !h.mem0) throw std::invalid_argument("reconstruct_state: window reaches mem(0)");
  auto c = [&](std::uint64_t k) -> const FieldVector& { return h.blocks[k - h.first]; };

  FieldVector mem = need_mem0 ? *h.mem0 : FieldVector(p.q, p.m0);
  for (std::uint64_t k = k0; k < h0; ++k) mem = p.M * mem + c(k);
  FieldVector s(p.q, p.n);
  for (std::uint64_t k = h0; k <= t; ++k) {
    const int j = switch_index(rule, k, &c(k)) - 1;
    s = p.Q[j] * s + p.W * mem + p.R[j] * c(k + 1);
    mem = p.M * mem + c(k);
  }
  return s;
}

}  // namespace s4
