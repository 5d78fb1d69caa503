#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "folia/algebra.hpp"
#include "folia/automorphic.hpp"
#include "folia/foliated.hpp"
#include "folia/superposition.hpp"

namespace folia {

using TimeFunction = std::function<double(double t)>;

// ---------------------------------------------------------------- Riccati

struct RiccatiSpec {
  TimeFunction a0, a1, a2;
};

/// dx/dt = a0(t) + a1(t) x + a2(t) x^2 as a foliated system with a single
/// leaf (the whole line) and no leaf labels.
struct RiccatiModel {
  FoliatedSystem system;
  TDependentVectorField field;
  SuperpositionRule rule;
};

/// Realization X0 = d/dx, X1 = x d/dx, X2 = x^2 d/dx of an sl(2)-type algebra.
LieAlgebra riccati_algebra();
RiccatiModel riccati_system(const RiccatiSpec& spec);
/// Psi(u1, u2, u3; k) = (u1 (u3 - u2) + k u2 (u3 - u1)) / ((u3 - u2) + k (u3 - u1)).
double riccati_rule(double u1, double u2, double u3, double k);
/// (x1 - x2)(x3 - x4) / ((x1 - x3)(x2 - x4)); throws SingularConfigurationError
/// when the points are not distinct.
double cross_ratio(double x1, double x2, double x3, double x4);
/// max over the grid of |CR(t) - CR(t0)| for four integrated solutions.
double cross_ratio_drift(const TDependentVectorField& field, const std::vector<double>& x0, double t0, double t1,
                         double h = kDefaultStep);

// ------------------------------------------------------- Hamilton-Jacobi

using Hamiltonian = std::function<double(double t, const Vector& P)>;
using HamiltonianGradient = std::function<Vector(double t, const Vector& P)>;

struct HamiltonJacobiSpec {
  int n = 1;
  Hamiltonian H;
  /// Optional; central differences of H when empty.
  HamiltonianGradient dH;
};

Vector hamiltonian_gradient(const HamiltonJacobiSpec& spec, double t, const Vector& P);
/// max over seeded (t, P) of |dH - FD(H)|_inf / max(1, |dH|_inf).
double hamiltonian_gradient_consistency(const HamiltonJacobiSpec& spec, int samples = 50,
                                        std::uint64_t seed = kDefaultSeed);

/// State (Q^1..Q^n, P^1..P^n); shared by the HJ and the abelian Lax model.
struct AbelianModel {
  FoliatedSystem system;
  GroupAction action;
  LeafRepresentative representative;
  SuperpositionRule rule;
};

/// Fields d/dQ^i with coefficients -dH/dP^i(t, P); identity chart (Q; P);
/// action (lambda, (Q, P)) -> (Q - lambda, P).
AbelianModel hj_system(const HamiltonJacobiSpec& spec);

// -------------------------------------------------------------------- Lax

/// A map of (t, v^{n+1..2n}).
using LeafFunction = std::function<double(double t, const Vector& p)>;

struct LaxSpec {
  int n = 1;
  std::vector<LeafFunction> f;
  /// When positive, the domain excludes |v^{n+a}| < leaf_guard.
  double leaf_guard = 0.0;
};

/// Block-diagonal 2n x 2n matrix with blocks [[2 v^{n+a}, v^a], [0, 0]].
Matrix lax_matrix(int n, const Vector& v);
/// m(t, v) = -sum_a f_a e_a in the same block form.
Matrix lax_m(const LaxSpec& spec, double t, const Vector& v);
/// dv/dt read off the commutator [V, m]: e-entries first, then h-entries.
Vector lax_commutator_rate(const LaxSpec& spec, double t, const Vector& v);
/// Sorted real parts of the eigenvalues of lax_matrix.
std::vector<double> spectrum(int n, const Vector& v);
/// max over the run and eigenvalue index of |sigma_i(t) - sigma_i(t0)|.
double spectrum_drift(int n, const Trajectory& traj);

/// Fields X_a = 2 d/dv^a with coefficients g_a = half the e-entry of [V, m];
/// chart (v^{1..n}; v^{n+1..2n}); action v^a -> v^a - 2 lambda_a.
AbelianModel lax_system(const LaxSpec& spec);

struct LaxAdjointModel {
  FoliatedSystem system;
  GroupAction action;
  LeafRepresentative representative;
};

/// Same dynamics realized by X_a = 2 v^{n+a} d/dv^a with coefficients -f_a and
/// the matrix action V -> g V g^{-1} of the subgroup generated by the e_a.
LaxAdjointModel lax_adjoint_system(const LaxSpec& spec);

/// f_a(t, p) = (dH/dP^a)(t, p) / p^a, which makes the Lax reduction coincide
/// with the HJ reduction under v^{n+a} = P^a.
LaxSpec lax_spec_from_hamiltonian(const HamiltonJacobiSpec& hj);

struct EquivalenceReport {
  double shared_coeff_residual = 0.0;  ///< max |c^HJ - c^Lax| at seeded (t, k)
  double hj_error = 0.0;               ///< reconstruction vs direct HJ run
  double lax_error = 0.0;              ///< reconstruction vs direct Lax run
  /// max |(v^a - v0^a) - 2 (Q^a - Q0^a)| along the two direct runs.
  double identification_residual = 0.0;
  /// max |rate_alt - 2 dQ/dt| for the alternative m = sum 2 dH/dP^a e_a;
  /// reported, never asserted.
  double alternative_rate_residual = 0.0;
};

/// One quadrature lambda(t) reconstructs both models. Throws DomainError on
/// leaf mismatch (v0 tail differs from x0 P-block).
EquivalenceReport hj_lax_equivalence(const HamiltonJacobiSpec& hj, const Vector& x0_hj, const Vector& v0_lax,
                                     double t0, double t1, double h = kDefaultStep, std::uint64_t seed = kDefaultSeed);

// ---------------------------------------------------------------- Ermakov

using Omega2 = std::function<double(double t, double I)>;

struct ErmakovSpec {
  Omega2 omega2;
  double c1 = 1.0;
  double c2 = 1.0;
  double eps = 1e-6;
};

/// Labels X1, X2, X3 with [X1,X2] = X1, [X1,X3] = 2 X2, [X2,X3] = X3.
LieAlgebra ermakov_algebra();
/// 1/2 (x v_y - y v_x)^2 + c1 x / y + c2 y / x for the state (x, y, v_x, v_y).
double lewis(const ErmakovSpec& spec, const Vector& s);
/// lewis with its analytic gradient.
ScalarField lewis_field(const ErmakovSpec& spec);
/// x -> omega2(t, lewis(x)), gradient by the chain rule.
ScalarField ermakov_coefficient(const ErmakovSpec& spec, double t);
/// X = omega2(t, I) X3 + X1 on |x|, |y| > eps, leaves labelled by lewis.
FoliatedSystem ermakov_system(const ErmakovSpec& spec);
/// sl(2) acting linearly on the (x, v_x) and (y, v_y) pairs. Matches the
/// realization only for c1 = c2 = 0.
GroupAction ermakov_matrix_action(const ErmakovSpec& spec);
/// A point with lewis = k: (1, 1, 0, sqrt(2 (k - c1 - c2))).
LeafRepresentative ermakov_representative(const ErmakovSpec& spec);

// ------------------------------------------------------- sl(2) adjoint

struct AdjointModel {
  FoliatedSystem system;
  InvariantMetric metric;
  /// h_b(v) = sum_s g_{bs} v^s with exact gradients.
  std::vector<ScalarField> hamiltonians;
};

/// X_b(v) = [v, e_b] on sl(2) in the basis (e, h, f), leaves labelled by the
/// Killing quadratic form.
AdjointModel sl2_adjoint_system();

// --------------------------------------------------------------- registry

struct ModelInfo {
  std::string name;
  std::string description;
};

const std::vector<ModelInfo>& model_registry();
bool is_registered(const std::string& name);

}  // namespace folia
