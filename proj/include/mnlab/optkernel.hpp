#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "mnlab/spaces.hpp"

namespace mnlab {

struct OptimizerConfig {
  int restarts = 32;
  int max_iter = 2000;
  double step_tol = 1e-10;
  double value_tol = 1e-9;
  std::uint64_t seed = 0;
  int grid_density = 64;
  long long brute_budget = 2'000'000;
  int threads = 1;  // 0 = auto
  double smoothing_eps = 0.0;

  OptimizerConfig with_seed(std::uint64_t s) const {
    OptimizerConfig c = *this;
    c.seed = s;
    return c;
  }
  OptimizerConfig with_restarts(int r) const {
    OptimizerConfig c = *this;
    c.restarts = r;
    return c;
  }
};

enum class Certification { Exact, CertifiedLowerBound, Heuristic };

std::string to_string(Certification c);

struct SphereWitness { CVec v; };                    // point on the l^u unit sphere
struct TorusWitness { std::vector<double> angles; }; // xi_j = exp(i angle_j)
struct FrameWitness { CMat frame; std::vector<int> active; };
struct PartitionWitness { std::vector<int> assign; };
struct DualTupleWitness { CMat lambda; };            // m x n, column i = lambda_i
struct TupleWitness { CMat rows; };                  // n x m primal tuple

using Witness = std::variant<std::monostate, SphereWitness, TorusWitness, FrameWitness,
                             PartitionWitness, DualTupleWitness, TupleWitness>;

struct NormEstimate {
  double value = 0.0;
  Certification certification = Certification::Heuristic;
  Witness witness;
  std::optional<double> upper_bound;
  bool budget_exceeded = false;

  static NormEstimate exact(double v, Witness w = {}) {
    NormEstimate e;
    e.value = v;
    e.certification = Certification::Exact;
    e.witness = std::move(w);
    e.upper_bound = v;
    return e;
  }
};

// Deterministic restart RNG: restart i uses a pure function of (seed, i), so
// parallel and serial execution agree.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t stream);

CVec random_unit(std::mt19937_64& eng, int n, Exponent u, bool complex_field);

struct SphereObjective {
  // f absolutely homogeneous of degree 1 (or evaluated on the sphere only).
  std::function<double(const CVec&)> f;
  // ascent direction g with d Re f = Re <dv, g>; may be empty (finite diffs).
  std::function<CVec(const CVec&)> grad;
};

NormEstimate maximize_on_sphere(const SphereObjective& obj, Exponent u, int n,
                                bool complex_field, const OptimizerConfig& cfg,
                                const std::vector<CVec>& extra_starts = {});

struct TorusObjective {
  std::function<double(const std::vector<double>&)> f;  // of n angles
  std::function<std::vector<double>(const std::vector<double>&)> grad;  // optional
};

struct TorusResult {
  NormEstimate est;
  // distinct maximizer classes modulo global phase, gauge angle_n = 0,
  // deduplicated at angular tolerance 1e-6
  std::vector<std::vector<double>> classes;
};

TorusResult maximize_on_torus(const TorusObjective& obj, int n, ScalarField field,
                              const OptimizerConfig& cfg, int max_classes = 64);

struct FrameObjective {
  std::function<double(const CMat&)> f;   // of a d x k orthonormal frame
  std::function<CMat(const CMat&)> grad;  // ascent direction, may be empty
};

NormEstimate maximize_on_frames(const FrameObjective& obj, int d, int k, bool complex_field,
                                const OptimizerConfig& cfg,
                                const std::vector<CMat>& extra_starts = {});

struct PartitionResult {
  std::vector<int> assign;
  double value = 0.0;
  long long enumerated = 0;
};

// Exhaustive maximization over all ordered partitions of {1..m} into n
// (possibly empty) blocks; requires n^m <= brute_budget.
PartitionResult enumerate_partitions(int m, int n,
                                     const std::function<double(const std::vector<int>&)>& score,
                                     const OptimizerConfig& cfg);

// QR-style retraction onto the orthonormal k-frames (columns), with the R
// diagonal made positive so the retraction is continuous.
CMat orthonormalize(const CMat& E);

// Low-level polished ascent on the torus from a given start; used for
// warm-started inner evaluations.
double torus_ascend(const TorusObjective& obj, std::vector<double>& angles, int max_iter,
                    double step_tol, double value_tol);

double sphere_ascend(const SphereObjective& obj, CVec& v, Exponent u, bool complex_field,
                     int max_iter, double step_tol, double value_tol);

}  // namespace mnlab
