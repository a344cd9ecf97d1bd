#pragma once

#include <optional>

#include "mnlab/optkernel.hpp"
#include "mnlab/spaces.hpp"

namespace mnlab {

struct MultiNormKind {
  enum class Tag { Min, Max, PQ, StandardT, Hilbert };
  Tag tag = Tag::Min;
  std::optional<Exponent> p, q, t;

  static MultiNormKind min_kind() { return {Tag::Min, {}, {}, {}}; }
  static MultiNormKind max_kind() { return {Tag::Max, {}, {}, {}}; }
  static MultiNormKind pq_kind(Exponent p, Exponent q) { return {Tag::PQ, p, q, {}}; }
  static MultiNormKind standard_t_kind(Exponent t) { return {Tag::StandardT, {}, {}, t}; }
  static MultiNormKind hilbert_kind() { return {Tag::Hilbert, {}, {}, {}}; }

  // PQ: 1 <= p <= q < inf; StandardT: t >= r; Hilbert: r = 2
  void validate_for(const SequenceSpace& space) const;
  std::string name() const;
};

NormEstimate min_norm(const VectorTuple& x);

// sup{(sum |<x_i, lambda_i>|^q)^{1/q} : mu_{p,n}(lambda) <= 1} over dual
// tuples in l^s_m, by ratio ascent with per-iterate renormalization by mu.
NormEstimate pq_norm(const VectorTuple& x, Exponent p, Exponent q, const OptimizerConfig& cfg);

// (1,1) route (Theorem: the (1,1)-multi-norm is the maximum multi-norm).
NormEstimate max_norm(const VectorTuple& x, const OptimizerConfig& cfg);

// direct route sup{|sum <x_i, lambda_i>| : mu_{1,n}(lambda) <= 1}; exposed for
// cross-checking against the (1,1) route.
NormEstimate max_norm_direct(const VectorTuple& x, const OptimizerConfig& cfg);

// sup over ordered partitions of {1..m} into n blocks of
// (sum_i ||x_i restricted to X_i||_r^t)^{1/t}; t = r goes through the exact
// coordinatewise-greedy lattice formula, small n^m through enumeration, the
// rest through multi-start single-coordinate local search.
NormEstimate standard_t_norm(const VectorTuple& x, Exponent t, const OptimizerConfig& cfg);

// sup over orthonormal systems (e_i), at most min(n,d) active, of
// (sum |[x_i, e_i]|^2)^{1/2}; equals the (2,2)-multi-norm.
NormEstimate hilbert_norm(const VectorTuple& x, const OptimizerConfig& cfg);

NormEstimate evaluate_norm(const VectorTuple& x, const MultiNormKind& kind,
                           const OptimizerConfig& cfg);

struct PhiEstimate {
  int n = 1;
  MultiNormKind kind;
  std::optional<SequenceSpace> space;
  NormEstimate value;              // lower-bound estimate of phi_n
  double predicted_exponent = 0;   // phi_n ~ n^e prediction
  CMat best_tuple;                 // the unit tuple achieving value
};

PhiEstimate phi_estimate(const MultiNormKind& kind, const SequenceSpace& space, int n,
                         const OptimizerConfig& cfg);

}  // namespace mnlab
