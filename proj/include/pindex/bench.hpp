// SPDX-License-Identifier: Apache-2.0

#pragma once

// Benchmark pencils: the random index-two toy model, its congruence transform,
// the damped mass-spring chain in port-Hamiltonian form, and the 2x2 analytic
// oracle.

#include <string>

#include "pindex/pencil.hpp"
#include "pindex/random.hpp"

namespace pindex {

/// E = diag(I_n, 0), A = [R0 R0^T / ||R0||^2, -J0^T; J0, 0] with J0, R0 real
/// standard normal. Index two whenever J0 is invertible.
Pencil gen_toy(Eigen::Index n, CounterRng &rng);

/// (S E S^*, S A S^*) with S real standard normal.
Pencil gen_congruence(const Pencil &p, CounterRng &rng);

enum class StringsCase { A, B };

/// Mass-spring-damper chain. Case A drives m1 = d1 = t1 = eps, case B only m1 = eps.
/// The nominal coefficients are the usual ones for this chain
/// (unit masses, dampers 10, springs 5).
struct StringsParams {
  Eigen::Index n = 10;
  double mass = 1.0;
  double damper = 10.0;  // d_i
  double tap = 10.0;     // t_i
  double spring = 5.0;   // k_i
  double ground = 5.0;   // kappa_i
  double eps = 3.059023205018258e-07;  // e^-15
  StringsCase which = StringsCase::A;

  static StringsParams case_a(Eigen::Index n, double eps);
  static StringsParams case_b(Eigen::Index n, double eps);
};

/// P = [delta_ij - delta_{i,j+1}].
ComplexDense strings_incidence(Eigen::Index n);

/// E = diag(M, I), J = [0 -I; I 0], R = diag(C, 0), Q = diag(I, K).
PHPencil gen_strings(const StringsParams &sp);

/// E = diag(1, 0), A = [0 1; 1 0]; min_abs_eig_reversal = sqrt(tau (1 + tau)).
Pencil gen_analytic2x2();

struct PerturbedPencil {
  Pencil pencil;
  ComplexDense deltaA;
  double measuredDelta = 0.0;  // ||Delta_A||
};

/// A + Delta_A with i.i.d. real N(0, variance) entries; E untouched.
PerturbedPencil gen_perturbed(const Pencil &p, double variance, CounterRng &rng);

}  // namespace pindex
