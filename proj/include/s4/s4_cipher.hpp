#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "s4/gf_linalg.hpp"
#include "s4/prp_family.hpp"
#include "s4/rng.hpp"
#include "s4/scheme.hpp"

namespace s4 {

// Modes are 1-based: W, L[j-1], F[j-1], ... hold mode j.
struct S4Params {
  std::uint32_t q = 0;
  std::size_t n = 0, m0 = 0;
  int ell = 0;
  int n0 = 0;         // nilpotency index of {Q_j}
  int mem_index = 0;  // nilpotency index of M

  FieldMatrix W;
  std::vector<FieldMatrix> L, F;
  ElementPermutation perm;

  std::vector<FieldMatrix> E, B, Q;
  FieldMatrix M;

  std::vector<FieldMatrix> A, R, D, Finv;

  // Synchronization delay of the full receiver state (state and memory).
  int sync_delay() const { return n0 + mem_index; }
};

struct S4Matrices {
  std::uint32_t q = 0;
  FieldMatrix W, M;
  std::vector<FieldMatrix> L, F, E, B, Q;
  std::vector<FieldMatrix> A, D;  // empty: derive from the others
};

// Builds a parameter set from explicit matrices. R and F^-1 are always derived;
// A and D are derived unless supplied. Throws if F_j is singular, dimensions
// disagree, or {Q_j} is not nilpotent within n.
S4Params params_from_matrices(S4Matrices m, ElementPermutation perm);

// Secret part from labelled key derivation, public part from public_seed.
S4Params derive_params(const SecretKey& key, std::uint32_t q, std::size_t n, int ell,
                       std::uint64_t public_seed);

struct GeneratedParams {
  SecretKey key;
  std::uint64_t public_seed = 0;
  S4Params params;
};
GeneratedParams gen_params(int k_bits, std::uint32_t q, std::size_t n, int ell, DeterministicRng& rng);

struct ValidationReport {
  bool w_invertible = false;
  std::vector<bool> l_invertible, f_invertible, e_invertible, b_invertible;
  bool m_strictly_upper = false;
  std::optional<int> nilpotency_index;
  bool index_matches_n0 = false;
  bool m0_equals_n = false;
  std::vector<bool> a_identity;        // A_j = E_j F_j^-1 B_j
  std::vector<bool> r_identity;        // R_j = E_j F_j^-1
  std::vector<bool> d_identity;        // D_j = Q_j + R_j L_j
  std::vector<bool> d_identity_minus;  // D_j = R_j L_j - Q_j

  bool ok() const;
  std::string summary() const;
};
ValidationReport validate_params(const S4Params& p);

int switch_index(const SwitchRule& rule, std::uint64_t t, const FieldVector* prev_c);

// Transmitter. After step t it holds s(t+1), s(t), mem(t+1) and the pending c(t+1).
class S4Encryptor {
 public:
  S4Encryptor(std::shared_ptr<const S4Params> p, SwitchRule rule, FieldVector s0, FieldVector mem0,
              FieldVector c0);

  std::optional<FieldVector> start();  // t = 0: bottom
  FieldVector step(const FieldVector& plain);
  FieldVector stop();  // flushes the pending block

  std::uint64_t clock() const { return t_; }
  bool finished() const { return finished_; }
  const FieldVector& state() const { return s_; }
  const FieldVector& prev_state() const { return prev_s_; }
  const FieldVector& memory() const { return mem_; }
  const FieldVector& pending() const { return pending_; }
  const S4Params& params() const { return *p_; }

 private:
  std::shared_ptr<const S4Params> p_;
  SwitchRule rule_;
  FieldVector s_, prev_s_, mem_, pending_;
  std::uint64_t t_ = 0;
  bool started_ = false, finished_ = false;
};

// Receiver update shared by the decryptor and the synchronized encryptor.
// After step t it holds s_hat(t+1), mem_hat(t+1) and c(t).
class S4Receiver {
 public:
  S4Receiver(std::shared_ptr<const S4Params> p, SwitchRule rule, FieldVector s_hat1, FieldVector mem0,
             FieldVector c0);

  // Decryption: t = 0, 1 acknowledge; later steps return p(t-1).
  std::optional<FieldVector> decrypt_step(const FieldVector* c);
  // Synchronized encryption: first call is the t = 1 step and returns c(1) = c(0);
  // later calls encrypt p(t-1) and return c(t).
  FieldVector sync_start();
  FieldVector sync_step(const FieldVector& plain);

  std::uint64_t clock() const { return t_; }
  const FieldVector& state() const { return s_hat_; }
  const FieldVector& memory() const { return mem_hat_; }
  const S4Params& params() const { return *p_; }

 private:
  void bootstrap(const FieldVector& c1);
  // Advances with ciphertext c; returns c - z_hat.
  FieldVector advance(const FieldVector& c, int j, const FieldVector& z_hat);
  FieldVector z_hat(int j) const;
  int mode() const;

  std::shared_ptr<const S4Params> p_;
  SwitchRule rule_;
  FieldVector s_hat_, mem_hat_, prev_c_, mem0_;
  std::uint64_t t_ = 0;
};

// e(t) = s_hat(t+1) - s(t) for an encryptor and a receiver that both completed step t.
FieldVector error_vector(const S4Encryptor& enc, const S4Receiver& dec);

// Ciphertext history: blocks[i] = c(first + i). mem0 = mem(0) is needed only
// when the window reaches back to c(1).
struct CipherHistory {
  std::uint64_t first = 1;
  std::vector<FieldVector> blocks;
  std::optional<FieldVector> mem0;
};

// s(t+1) from ciphertexts alone; reads c(t-n0-mem_index+1 .. t+1) at most.
FieldVector reconstruct_state(const S4Params& p, const SwitchRule& rule, const CipherHistory& h,
                              std::uint64_t t);

}  // namespace s4
