#pragma once

#include <optional>

#include "mnlab/optkernel.hpp"
#include "mnlab/spaces.hpp"

namespace mnlab {

// An m x n matrix A viewed as the operator T_A : l^u_n -> l^s_m.  When
// `to_lorentz_second` is set, the target norm is the Lorentz l^{s,q2} norm
// (needed for the Montgomery-Smith diagnostic target l^{2,1}).
struct OperatorMatrix {
  CMat entries;  // m x n
  Exponent from_exp;
  Exponent to_exp;
  ScalarField field = ScalarField::Complex;
  std::optional<Exponent> to_lorentz_second;

  int m() const { return static_cast<int>(entries.rows()); }
  int n() const { return static_cast<int>(entries.cols()); }
  double target_norm(const CVec& w) const {
    return to_lorentz_second ? lorentz_value(w, to_exp, *to_lorentz_second)
                             : p_norm(w, to_exp);
  }
};

// sup{ ||A v||_s : ||v||_u <= 1 }.  Exact closed-form routes (diagonal, 2->2
// singular value, u = 1 columns, s = inf rows, real sign enumeration for
// u = inf, small-n torus closed forms on s = 2) are tried first; otherwise a
// certified-lower-bound ascent kernel runs.
NormEstimate op_norm(const OperatorMatrix& A, const OptimizerConfig& cfg);

// Weak p-summing norm mu_{p,n}(x) of a tuple, computed through the
// operator-norm identity with from-exponent p' and to-exponent r.
NormEstimate mu(const VectorTuple& x, Exponent p, const OptimizerConfig& cfg);

// Orthogonal-tuple closed form: p >= 2 -> max; 1 < p < 2 -> l^t of the norms
// with 1/t = 1/p - 1/2; p = 1 -> l^2 of the norms.
double mu_orthogonal_closed_form(const std::vector<double>& norms, Exponent p);

// Warm-startable evaluator for mu_{p,k} of tuples living in l^{space_r}_m;
// used inside the multi-norm ascent loops where mu is evaluated thousands of
// times along a slowly moving trajectory.
class MuEvaluator {
 public:
  MuEvaluator(Exponent space_r, ScalarField field, Exponent p, OptimizerConfig cfg);

  struct Result {
    double value = 0;
    bool exact = false;
    CVec maximizer;  // the zeta achieving value; drives the mu subgradient
  };

  // cheap evaluation (closed form when available, else warm-started ascent)
  Result quick(const CMat& lambda_cols);
  // more starts and tighter tolerances; used to rank final candidates
  Result strong(const CMat& lambda_cols);
  // full-effort evaluation for the final witness
  NormEstimate full(const CMat& lambda_cols) const;
  // true if every evaluation on k-tuples takes an exact route
  bool always_exact(int k) const;

 private:
  Result ascend(const CMat& lambda_cols, int extra_starts, int max_iter);

  Exponent space_r_;
  ScalarField field_;
  Exponent p_;
  Exponent u_;  // p'
  OptimizerConfig cfg_;
  std::vector<double> warm_angles_;
  CVec warm_v_;
};

// Lower-bound estimate of the (q,p)-summing constant pi^{(k)}_{q,p}(T_A) by
// alternating ascent over k-tuples in the domain space, renormalized by mu.
NormEstimate summing_constant_estimate(const OperatorMatrix& A, Exponent q, Exponent p, int k,
                                       const OptimizerConfig& cfg);

}  // namespace mnlab
