#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "folia/algebra.hpp"
#include "folia/fields.hpp"
#include "folia/foliated.hpp"

namespace folia {

/// Bivector field Lambda^{ij}(x) on an open subset of R^N. The supplied map
/// is read above the diagonal only and mirrored, so antisymmetry is exact.
class PoissonBivector {
 public:
  using Coeffs = std::function<Matrix(const Vector&)>;
  /// Entry l holds d Lambda / d x^l.
  using Derivative = std::function<std::vector<Matrix>(const Vector&)>;

  PoissonBivector(Domain domain, Coeffs coeffs, Derivative derivative = {});

  int dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  /// Throws DomainError outside the domain.
  Matrix at(const Vector& x) const;
  /// Analytic when supplied, otherwise central differences of at().
  std::vector<Matrix> derivative(const Vector& x) const;

 private:
  Domain domain_;
  Coeffs coeffs_;
  Derivative derivative_;
};

PoissonBivector zero_bivector(Domain domain);

/// Lambda(v) = g^{-1} C(g v) g^{-1} with C(f)_{ab} = c_ab^c f_c, the linear
/// bracket for which {f_a, f_b} = c_ab^c f_c on f_a(v) = g(e_a, v).
PoissonBivector kirillov_bivector(const LieAlgebra& alg, const InvariantMetric& metric);
/// f_a(v) = (g v)_a with exact gradients.
std::vector<ScalarField> linear_coordinates(const InvariantMetric& metric);

/// grad f . Lambda . grad g.
double poisson_bracket(const PoissonBivector& L, const ScalarField& f, const ScalarField& g, const Vector& x);
/// Cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}}, evaluated through
/// sum_l (Lambda^{il} d_l Lambda^{jk} + cyclic) contracted with the gradients,
/// since the second-derivative terms cancel for antisymmetric Lambda.
double jacobiator(const PoissonBivector& L, const ScalarField& f, const ScalarField& g, const ScalarField& h,
                  const Vector& x);
/// Max jacobiator over samples and all triples of coordinate functions.
double coordinate_jacobiator(const PoissonBivector& L, std::span<const Vector> samples);

/// (iota_{df} Lambda)^i = sum_j Lambda^{ij} d_j f.
VectorField hamiltonian_field(const PoissonBivector& L, const ScalarField& f);

struct HamiltonianCheck {
  std::string name;
  double residual = 0.0;
  /// +1 when X = iota_{df} Lambda, -1 when X = -iota_{df} Lambda.
  int sign = 1;
};

/// Compares X against both signs of hamiltonian_field(L, f) and keeps the
/// better one, recording its sign.
HamiltonianCheck hamiltonian_residual(const PoissonBivector& L, const VectorField& X, const ScalarField& f,
                                      std::span<const Vector> samples, std::string name = {});

/// Lambda = sum_a X^R_{e_a} wedge X^R_{h_a} on (Aff+)^n in the chart
/// (a_1, b_1, .., a_n, b_n) with g = [[a, b], [0, 1]], where
/// X^R_e = d/db and X^R_h = 2a d/da + 2b d/db. Domain a_i > 0.
PoissonBivector rmatrix_bivector_aff(int n);
Domain aff_domain(int n);
/// Right-invariant fields X^R_{e_a} (first n) and X^R_{h_a} (last n).
std::vector<VectorField> aff_right_invariant_fields(int n);

/// For each factor, X^R_{e_a} against F = -1/2 ln a_a.
std::vector<HamiltonianCheck> check_rmatrix_hamiltonian(int n, std::span<const Vector> samples);

struct LieHamiltonReport {
  bool value = false;
  std::vector<HamiltonianCheck> checks;
};

/// True iff every X_a has residual <= 1e-6 against candidates[a].
LieHamiltonReport is_foliated_lie_hamilton(const FoliatedSystem& fs, const PoissonBivector& L,
                                           std::span<const ScalarField> candidates, std::span<const Vector> samples);

}  // namespace folia
