#pragma once

#include "mnlab/multinorms.hpp"
#include "mnlab/optkernel.hpp"
#include "mnlab/triangle.hpp"

namespace mnlab {

struct Mu1Result {
  NormEstimate est;
  // maximizer classes modulo global phase (angles, gauge: last = 0)
  std::vector<std::vector<double>> classes;
  bool continuum = false;  // a positive-dimensional family of maximizers
};

// mu_{1,n} on l^2_d with all maximizer classes.  Real field: exact sign
// enumeration (n <= 20).  Complex n <= 3: closed form through the constrained
// cosine maximization.  Otherwise the torus kernel.
Mu1Result mu1_maximize(const VectorTuple& y, const OptimizerConfig& cfg);

enum class ExtremeVerdict { Extreme, NotExtreme, Inconclusive };

std::string to_string(ExtremeVerdict v);

struct ExtremeTestReport {
  bool precondition_ok = false;
  NormEstimate mu_value;
  std::vector<std::vector<double>> maximizers;
  int nullspace_dim = 0;
  ExtremeVerdict verdict = ExtremeVerdict::Inconclusive;
  CMat witness_u;  // n x d perturbation for NotExtreme
  // nullspace of the phase equations alone (the u_1 = ... = u_n stage of the
  // four-vector argument); dimension over the scalar field
  int phase_system_nullity = 0;
  // true when that nullspace consists exactly of tuples with u_1 = ... = u_n
  bool phase_system_diagonal = false;
};

// First-order extremality test of y (with mu_{1,n}(y) = 1) in the mu_{1,n}
// unit ball: assembles, per maximizer class xi, the linear system
//   sum_i xi_i u_i = 0,   [u_i, sum_j xi_j y_j] = 0 (i = 1..n),
// and decides by nullspace rank; a nontrivial direction is line-searched for
// feasibility before claiming NotExtreme.
ExtremeTestReport extreme_point_test(const VectorTuple& y, const OptimizerConfig& cfg);

// x_1 = (1,0,0), x_2 = (-1,2,0), x_3 = (-1,-1,3), x_4 = (-1,-1,-1) in C^3;
// all pairwise inner products equal -1.
VectorTuple complex_witness_4();

// y_1 = (1,0,0)/sqrt(11), y_2 = (1,1,0)/sqrt(11), y_3 = (-1,2,1)/sqrt(11)
// in R^3; mu_{1,3} = 1 with three sign-pattern maximizers.
VectorTuple real_witness_3();

struct CnSearchResult {
  double ratio = 0;  // best max_n / hilbert_n found
  VectorTuple tuple;
  NormEstimate max_est;
  NormEstimate hilbert_est;
};

// Lower-bound search for the best constant c_n with
// ||x||^max_n <= c_n ||x||^{(2,2)}_n on l^2_d, by ratio ascent over random
// and structured tuples (witness-derived seeds included).
CnSearchResult cn_lower_bound(int n, int d, ScalarField field, const OptimizerConfig& cfg);

}  // namespace mnlab
