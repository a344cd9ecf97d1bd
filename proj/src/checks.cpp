#include "mnlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "mnlab/classify.hpp"
#include "mnlab/multinorms.hpp"
#include "mnlab/torus_geometry.hpp"
#include "mnlab/weak_summing.hpp"

namespace mnlab::checks {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

CheckResult mk(std::string id, std::string expected, std::string computed, bool pass,
               std::string citation, bool gating = true) {
  return CheckResult{std::move(id), std::move(expected), std::move(computed), pass, gating,
                     std::move(citation)};
}

CMat gaussian_rows(std::mt19937_64& eng, int n, int m, bool cf) {
  std::normal_distribution<double> g(0, 1);
  CMat rows(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) rows(i, j) = Complex(g(eng), cf ? g(eng) : 0.0);
  return rows;
}

VectorTuple random_orthogonal_tuple(std::mt19937_64& eng, int m, int n, bool cf,
                                    std::vector<double>* norms_out) {
  CMat Q = orthonormalize(gaussian_rows(eng, m, m, cf).transpose());
  std::uniform_real_distribution<double> U(0.2, 2.0);
  CMat rows(n, m);
  std::vector<double> norms;
  for (int i = 0; i < n; ++i) {
    double c = U(eng);
    rows.row(i) = c * Q.col(i).transpose();
    norms.push_back(c);
  }
  if (norms_out) *norms_out = norms;
  return VectorTuple(SequenceSpace(m, Exponent(2.0), cf ? ScalarField::Complex : ScalarField::Real),
                     rows);
}

CMat delta_basis(int n, int m) {
  CMat rows = CMat::Zero(n, m);
  for (int i = 0; i < n; ++i) rows(i, i % m) = 1;
  return rows;
}

// ---------------------------------------------------------------- criterion 1

SuiteResult criterion_axioms(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-1", "multi-norm axioms (A1)-(A4) on exact/brute routes", {}};
  OptimizerConfig ecfg = cfg;
  ecfg.restarts = 6;
  ecfg.max_iter = 800;
  ecfg.value_tol = 1e-12;
  ecfg.step_tol = 1e-12;

  struct KindSpec {
    std::string label;
    std::function<MultiNormKind(const SequenceSpace&)> make;
    bool hilbert = false;
  };
  std::vector<KindSpec> kinds = {
      {"min", [](const SequenceSpace&) { return MultiNormKind::min_kind(); }, false},
      {"max", [](const SequenceSpace&) { return MultiNormKind::max_kind(); }, false},
      {"pq(1.5,2)",
       [](const SequenceSpace&) { return MultiNormKind::pq_kind(Exponent(1.5), Exponent(2.0)); },
       false},
      {"std(1.5r)",
       [](const SequenceSpace& s) { return MultiNormKind::standard_t_kind(Exponent(1.5 * s.r.value())); },
       false},
      {"hilbert", [](const SequenceSpace&) { return MultiNormKind::hilbert_kind(); }, true},
  };
  const double rs[] = {1.0, 1.5, 2.0, 3.0};

  for (const auto& kind_spec : kinds) {
    double worst_a1 = 0, worst_a2 = 0, worst_a3 = 0, worst_a4 = 0;
    for (int trial = 0; trial < 200; ++trial) {
      auto eng = engine_for(cfg.seed, mix_seed(0xA1, static_cast<std::uint64_t>(trial) * 16 +
                                                      (&kind_spec - kinds.data())));
      std::uniform_int_distribution<int> dn(1, 3), dm(1, 3), dr(0, 3);
      const int n = dn(eng), m = dm(eng);
      const double r = kind_spec.hilbert ? 2.0 : rs[dr(eng)];
      SequenceSpace space(m, Exponent(r), ScalarField::Complex);
      MultiNormKind kind = kind_spec.make(space);
      VectorTuple x(space, gaussian_rows(eng, n, m, true));
      const double base = evaluate_norm(x, kind, ecfg).value;
      const double scale = std::max(1.0, base);

      {  // A1: permutation invariance, exact
        std::vector<int> perm(static_cast<size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), eng);
        CMat rows(n, m);
        for (int i = 0; i < n; ++i) rows.row(i) = x.vectors.row(perm[static_cast<size_t>(i)]);
        double v = evaluate_norm(VectorTuple(space, rows), kind, ecfg).value;
        worst_a1 = std::max(worst_a1, std::fabs(v - base));
      }
      {  // A3: zero padding, exact
        CMat rows = CMat::Zero(n + 1, m);
        rows.topRows(n) = x.vectors;
        double v = evaluate_norm(VectorTuple(space, rows), kind, ecfg).value;
        worst_a3 = std::max(worst_a3, std::fabs(v - base));
      }
      {  // A2: scalar contraction by max |alpha_i|
        std::uniform_real_distribution<double> mag(0.1, 2.0), ph(-M_PI, M_PI);
        CMat rows = x.vectors;
        double amax = 0;
        for (int i = 0; i < n; ++i) {
          Complex a = std::polar(mag(eng), ph(eng));
          amax = std::max(amax, std::abs(a));
          rows.row(i) *= a;
        }
        double v = evaluate_norm(VectorTuple(space, rows), kind, ecfg).value;
        worst_a2 = std::max(worst_a2, (v - amax * base) / scale);
      }
      {  // A4: duplication collapse
        CMat rows(n + 1, m);
        rows.topRows(n) = x.vectors;
        rows.row(n) = x.vectors.row(n - 1);
        double v = evaluate_norm(VectorTuple(space, rows), kind, ecfg).value;
        worst_a4 = std::max(worst_a4, std::fabs(v - base) / scale);
      }
    }
    const std::string cite_base = "multi-norm axioms for the " + kind_spec.label + " family";
    out.checks.push_back(mk("axioms/" + kind_spec.label + "/A1", "0 (exact)", fmt(worst_a1),
                            worst_a1 == 0.0, cite_base + ": permutation invariance"));
    out.checks.push_back(mk("axioms/" + kind_spec.label + "/A2", "<= 1e-9", fmt(worst_a2),
                            worst_a2 <= 1e-9, cite_base + ": scalar contraction"));
    out.checks.push_back(mk("axioms/" + kind_spec.label + "/A3", "0 (exact)", fmt(worst_a3),
                            worst_a3 == 0.0, cite_base + ": zero padding"));
    out.checks.push_back(mk("axioms/" + kind_spec.label + "/A4", "<= 1e-9", fmt(worst_a4),
                            worst_a4 <= 1e-9, cite_base + ": duplication collapse"));
  }
  return out;
}

// ---------------------------------------------------------------- criterion 2

SuiteResult criterion_delta(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-2", "delta-basis (p,q)-norm closed form n^alpha", {}};
  OptimizerConfig ecfg = cfg.with_restarts(32);
  const double rs[] = {1.0, 1.5, 2.0, 3.0};
  const std::pair<double, double> pqs[] = {{1, 1}, {1, 2}, {1.5, 2}, {2, 2}, {2, 3}, {3, 3}};
  for (double r : rs) {
    for (auto [p, q] : pqs) {
      double worst = 0;
      for (int n = 2; n <= 4; ++n) {
        VectorTuple x(SequenceSpace(n, Exponent(r), ScalarField::Complex), delta_basis(n, n));
        double alpha = delta_exponent(Exponent(p), Exponent(q), Exponent(r));
        double expect = std::pow(n, alpha);
        double got = pq_norm(x, Exponent(p), Exponent(q), ecfg).value;
        worst = std::max(worst, std::fabs(got - expect) / expect);
      }
      char id[96];
      std::snprintf(id, sizeof id, "delta/r=%g/(%g,%g)", r, p, q);
      out.checks.push_back(mk(id, "rel err <= 1e-3", fmt(worst), worst <= 1e-3,
                              "delta-basis norm equals n^{(1/q - (1/p - 1/r)^+)^+} on l^r"));
    }
  }
  return out;
}

// ---------------------------------------------------------------- criterion 3

SuiteResult criterion_orthogonal_mu(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-3", "weak p-summing norm of orthogonal tuples", {}};
  OptimizerConfig ecfg = cfg.with_restarts(16);
  const double ps[] = {1.0, 4.0 / 3.0, 2.0, 3.0};
  double worst_exact = 0, worst_ascent = 0;
  int n_exact = 0, n_ascent = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto eng = engine_for(cfg.seed, mix_seed(0xC3, static_cast<std::uint64_t>(trial)));
    std::uniform_int_distribution<int> dm(2, 4);
    const int m = dm(eng);
    std::uniform_int_distribution<int> dn(1, m);
    const int n = dn(eng);
    const bool cf = trial % 2 == 0;
    std::vector<double> norms;
    VectorTuple x = random_orthogonal_tuple(eng, m, n, cf, &norms);
    const Exponent p(ps[trial % 4]);
    double closed = mu_orthogonal_closed_form(norms, p);
    NormEstimate est = mu(x, p, ecfg);
    if (est.certification == Certification::Exact) {
      worst_exact = std::max(worst_exact, std::fabs(est.value - closed));
      ++n_exact;
    } else {
      worst_ascent = std::max(worst_ascent, std::fabs(est.value - closed) / closed);
      ++n_ascent;
    }
  }
  out.checks.push_back(mk("orthogonal-mu/exact-routes (" + std::to_string(n_exact) + " runs)",
                          "|mu - closed form| <= 1e-6", fmt(worst_exact), worst_exact <= 1e-6,
                          "orthogonal tuples: mu_{p,n} = max / l^t (1/t = 1/p - 1/2) / l^2 of "
                          "the norms"));
  out.checks.push_back(mk("orthogonal-mu/ascent-routes (" + std::to_string(n_ascent) + " runs)",
                          "rel err <= 1e-4", fmt(worst_ascent), worst_ascent <= 1e-4,
                          "same closed form on heuristic kernels"));
  return out;
}

// ---------------------------------------------------------------- criterion 4

SuiteResult criterion_hilbert_22(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-4", "Hilbert multi-norm equals the (2,2)-multi-norm", {}};
  OptimizerConfig ecfg = cfg.with_restarts(16);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto eng = engine_for(cfg.seed, mix_seed(0xC4, static_cast<std::uint64_t>(trial)));
    std::uniform_int_distribution<int> dd(2, 3), dn(1, 3);
    const int d = dd(eng), n = dn(eng);
    VectorTuple x(SequenceSpace(d, Exponent(2.0), ScalarField::Complex),
                  gaussian_rows(eng, n, d, true));
    double h = hilbert_norm(x, ecfg).value;
    double pq22 = pq_norm(x, Exponent(2.0), Exponent(2.0), ecfg).value;
    worst = std::max(worst, std::fabs(h - pq22) / std::max(h, pq22));
  }
  out.checks.push_back(mk("hilbert-vs-22/50-random", "rel gap <= 1e-3", fmt(worst), worst <= 1e-3,
                          "the Hilbert multi-norm coincides with the (2,2)-multi-norm"));
  return out;
}

// ---------------------------------------------------------------- criterion 5

SuiteResult criterion_level2(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-5", "level-2 equality of max and Hilbert multi-norms", {}};
  OptimizerConfig ecfg = cfg.with_restarts(16);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto eng = engine_for(cfg.seed, mix_seed(0xC5, static_cast<std::uint64_t>(trial)));
    std::uniform_int_distribution<int> dd(2, 3);
    const int d = dd(eng);
    VectorTuple x(SequenceSpace(d, Exponent(2.0), ScalarField::Complex),
                  gaussian_rows(eng, 2, d, true));
    double mx = max_norm(x, ecfg).value;
    double h = hilbert_norm(x, ecfg).value;
    worst = std::max(worst, std::fabs(mx - h) / h);
  }
  out.checks.push_back(mk("level2/50-random-pairs", "rel gap <= 1e-3", fmt(worst), worst <= 1e-3,
                          "on complex Hilbert pairs the maximum and Hilbert multi-norms agree"));
  return out;
}

// ---------------------------------------------------------------- criterion 6

SuiteResult criterion_real_witness(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-6", "real level-3 witness: extreme, non-orthogonal, gap", {}};
  VectorTuple y = real_witness_3();
  Mu1Result m1 = mu1_maximize(y, cfg);
  out.checks.push_back(mk("real3/mu=1", "1 within 1e-12", fmt(m1.est.value),
                          std::fabs(m1.est.value - 1.0) <= 1e-12,
                          "sign enumeration value of the three-vector witness"));
  out.checks.push_back(mk("real3/maximizer-count", "3", std::to_string(m1.classes.size()),
                          m1.classes.size() == 3,
                          "the maximum 1 is attained at exactly three sign patterns"));
  Complex g12 = inner(y.row(0), y.row(1)), g23 = inner(y.row(1), y.row(2)),
          g31 = inner(y.row(0), y.row(2));
  const double tol = 1e-15;
  bool gram_ok = std::abs(g12 - Complex(1.0 / 11)) <= tol &&
                 std::abs(g23 - Complex(1.0 / 11)) <= tol &&
                 std::abs(g31 - Complex(-1.0 / 11)) <= tol;
  out.checks.push_back(mk("real3/gram", "(1/11, 1/11, -1/11)",
                          fmt(g12.real()) + "," + fmt(g23.real()) + "," + fmt(g31.real()), gram_ok,
                          "Gram entries of the witness"));
  double sumnorm = (y.vectors.row(0) + y.vectors.row(1) + y.vectors.row(2)).norm();
  out.checks.push_back(mk("real3/sum-norm", "1 within 1e-12", fmt(sumnorm),
                          std::fabs(sumnorm - 1.0) <= 1e-12, "||y1+y2+y3|| = 1"));
  ExtremeTestReport rep = extreme_point_test(y, cfg);
  out.checks.push_back(mk("real3/extreme", "extreme (nullspace 0)",
                          to_string(rep.verdict) + ", dim " + std::to_string(rep.nullspace_dim),
                          rep.verdict == ExtremeVerdict::Extreme,
                          "the witness is an extreme point of the mu_{1,3} unit ball"));
  out.checks.push_back(mk("real3/non-orthogonal", "pairwise inner products nonzero", "checked",
                          std::abs(g12) > 1e-3, "the witness is not an orthogonal tuple"));
  CnSearchResult cn = cn_lower_bound(3, 3, ScalarField::Real, cfg);
  double delta = cn.ratio - 1.0;
  out.checks.push_back(mk("real3/ratio-search", "max3/hilbert3 >= 1 + 1e-3",
                          "ratio = " + fmt(cn.ratio) + " (delta = " + fmt(delta) + ")",
                          delta > 1e-3,
                          "the real level-3 maximum and Hilbert multi-norms differ"));
  return out;
}

// ---------------------------------------------------------------- criterion 7

SuiteResult criterion_complex_witness(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-7", "complex four-vector witness: Gram, phases, extremality", {}};
  VectorTuple x = complex_witness_4();
  bool gram_ok = true;
  for (int i = 0; i < 4 && gram_ok; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      if (std::abs(inner(x.row(i), x.row(j)) - Complex(-1.0)) > 1e-15) {
        gram_ok = false;
        break;
      }
    }
  out.checks.push_back(mk("complex4/gram", "[x_i,x_j] = -1 for all i != j", "checked", gram_ok,
                          "pairwise inner products of the four-vector witness"));

  const double mu_exact = std::sqrt(24.0);  // sum ||x_i||^2 + 4 at sum xi_i = 0
  VectorTuple y(x.space, x.vectors / mu_exact);
  Mu1Result m1 = mu1_maximize(y, cfg);
  out.checks.push_back(mk("complex4/mu=1", "1 within 1e-6", fmt(m1.est.value),
                          std::fabs(m1.est.value - 1.0) <= 1e-6,
                          "mu_{1,4} of the scaled witness"));
  double worst_sum = 0;
  for (const auto& cls : m1.classes) {
    Complex s = 0;
    for (double a : cls) s += std::polar(1.0, a);
    worst_sum = std::max(worst_sum, std::abs(s));
  }
  out.checks.push_back(mk("complex4/maximizer-phase-sums",
                          "|sum xi_i| <= 1e-6 over " + std::to_string(m1.classes.size()) +
                              " classes",
                          fmt(worst_sum), worst_sum <= 1e-6,
                          "torus maximizers have vanishing phase sum"));
  ExtremeTestReport rep = extreme_point_test(y, cfg);
  out.checks.push_back(mk("complex4/extreme", "nullspace dim 0",
                          to_string(rep.verdict) + ", dim " + std::to_string(rep.nullspace_dim),
                          rep.verdict == ExtremeVerdict::Extreme && rep.nullspace_dim == 0,
                          "the scaled witness is extreme in the mu_{1,4} unit ball"));
  out.checks.push_back(mk("complex4/intermediate-structure",
                          "phase system nullspace = {u_1 = ... = u_4}, dim 3",
                          "dim " + std::to_string(rep.phase_system_nullity) +
                              (rep.phase_system_diagonal ? ", diagonal" : ", not diagonal"),
                          rep.phase_system_nullity == 3 && rep.phase_system_diagonal,
                          "the phase equations force u_1 = ... = u_4"));
  return out;
}

// ---------------------------------------------------------------- criterion 8

SuiteResult criterion_little_grothendieck(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-8", "2/sqrt(pi) ceiling for max/(2,2) ratios", {}};
  OptimizerConfig ecfg = cfg;
  ecfg.restarts = 8;
  const double ceiling = 2.0 / std::sqrt(M_PI) + 1e-3;
  double worst = 0;
  double best_n4 = 0;
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto eng = engine_for(cfg.seed, mix_seed(0xC8, static_cast<std::uint64_t>(trial)));
    const int n = 2 + trial % 5;
    const int d = 2 + (trial / 5) % 5;
    VectorTuple x(SequenceSpace(d, Exponent(2.0), ScalarField::Complex),
                  gaussian_rows(eng, n, d, true));
    double mx = max_norm(x, ecfg).value;
    double h = hilbert_norm(x, ecfg).value;
    double ratio = h > 0 ? mx / h : 0;
    worst = std::max(worst, ratio);
    if (ratio > ceiling) ++violations;
    if (n >= 4) best_n4 = std::max(best_n4, ratio);
  }
  out.checks.push_back(mk("ratios/500-random", "all <= 2/sqrt(pi) + 1e-3 = " + fmt(ceiling),
                          "worst " + fmt(worst) + ", violations " + std::to_string(violations),
                          violations == 0,
                          "the little-Grothendieck constant bounds max against (2,2)"));
  if (best_n4 <= 1.0 + 1e-3) {
    for (int n : {4, 5, 6}) {
      CnSearchResult cn = cn_lower_bound(n, n, ScalarField::Complex, cfg);
      best_n4 = std::max(best_n4, cn.ratio);
      if (best_n4 > 1.0 + 1e-3) break;
    }
  }
  out.checks.push_back(mk("ratios/gap-witness", "some n >= 4 tuple with ratio > 1 + 1e-3",
                          "best " + fmt(best_n4), best_n4 > 1.0 + 1e-3,
                          "the level-4 maximum and (2,2) multi-norms already differ"));
  return out;
}

// ---------------------------------------------------------------- criterion 9

SuiteResult criterion_khintchine(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-9", "Khintchine sign-matrix duality", {}};
  const double rs[] = {1.5, 2.0, 3.0};
  double worst = 0;
  for (int n = 1; n <= 8; ++n) {
    KhintchinePair kp = khintchine_pair(n, Exponent(rs[n % 3]));
    auto eng = engine_for(cfg.seed, mix_seed(0xC9, static_cast<std::uint64_t>(n)));
    std::normal_distribution<double> g(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
      CVec xv(n), yv(n);
      for (int i = 0; i < n; ++i) {
        xv[i] = Complex(g(eng), g(eng));
        yv[i] = Complex(g(eng), g(eng));
      }
      xv.normalize();
      yv.normalize();
      CVec Rx = kp.R * xv, Sy = kp.S * yv;
      Complex bilinear = (Rx.transpose() * Sy)(0) - (xv.transpose() * yv)(0);
      Complex hermitian = Sy.dot(Rx) - yv.dot(xv);
      worst = std::max({worst, std::abs(bilinear), std::abs(hermitian)});
    }
  }
  out.checks.push_back(mk("khintchine/duality", "<Rx,Sy> = <x,y> within 1e-12 (n <= 8)",
                          fmt(worst), worst <= 1e-12,
                          "the scaled sign matrices are mutually dual embeddings"));
  return out;
}

// --------------------------------------------------------------- criterion 10

SuiteResult criterion_standard_t(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-10", "standard t-multi-norm vs exhaustive enumeration", {}};
  const double rs[] = {1.0, 1.5, 2.0};
  double worst_greedy = 0, worst_local_exceed = 0, worst_delta = 0;
  int local_matches = 0, local_total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto eng = engine_for(cfg.seed, mix_seed(0xCA, static_cast<std::uint64_t>(trial)));
    std::uniform_int_distribution<int> dm(2, 6), dn(1, 3);
    const int m = dm(eng), n = dn(eng);
    const double r = rs[trial % 3];
    SequenceSpace space(m, Exponent(r), ScalarField::Complex);
    VectorTuple x(space, gaussian_rows(eng, n, m, true));

    for (double factor : {1.0, 1.5, 2.0}) {
      const Exponent t(r * factor);
      const double tv = t.value(), rv = r;
      auto score = [&](const std::vector<int>& assign) {
        std::vector<double> block(static_cast<size_t>(n), 0.0);
        for (int j = 0; j < m; ++j)
          block[static_cast<size_t>(assign[static_cast<size_t>(j)])] +=
              std::pow(std::abs(x.vectors(assign[static_cast<size_t>(j)], j)), rv);
        double s = 0;
        for (double b : block) s += std::pow(b, tv / rv);
        return std::pow(s, 1.0 / tv);
      };
      PartitionResult oracle = enumerate_partitions(m, n, score, cfg);
      if (factor == 1.0) {
        double greedy = standard_t_norm(x, t, cfg).value;
        worst_greedy = std::max(worst_greedy, std::fabs(greedy - oracle.value) /
                                                  std::max(1.0, oracle.value));
      } else {
        OptimizerConfig local_cfg = cfg;
        local_cfg.brute_budget = 1;  // force the local-search route
        double local = standard_t_norm(x, t, local_cfg).value;
        worst_local_exceed = std::max(worst_local_exceed, (local - oracle.value) /
                                                              std::max(1.0, oracle.value));
        ++local_total;
        if (std::fabs(local - oracle.value) <= 1e-9 * std::max(1.0, oracle.value)) ++local_matches;
      }
    }
  }
  for (int n = 2; n <= 3; ++n) {
    for (double r : {1.0, 2.0}) {
      for (double factor : {1.0, 2.0}) {
        VectorTuple x(SequenceSpace(n, Exponent(r), ScalarField::Complex), delta_basis(n, n));
        const Exponent t(r * factor);
        double v = standard_t_norm(x, t, cfg).value;
        worst_delta = std::max(worst_delta,
                               std::fabs(v - std::pow(n, 1.0 / t.value())));
      }
    }
  }
  out.checks.push_back(mk("std/greedy-vs-enumeration", "equal (<= 1e-12 rel)", fmt(worst_greedy),
                          worst_greedy <= 1e-12,
                          "t = r reduces to the coordinatewise lattice formula"));
  out.checks.push_back(mk("std/local-never-exceeds", "local <= enumeration", fmt(worst_local_exceed),
                          worst_local_exceed <= 1e-12,
                          "local search evaluates genuine partitions only"));
  double match_rate = local_total ? 100.0 * local_matches / local_total : 100.0;
  out.checks.push_back(mk("std/local-match-rate", ">= 95%", fmt(match_rate) + "%",
                          match_rate >= 95.0, "local search recovers the enumeration optimum"));
  out.checks.push_back(mk("std/delta-basis", "n^{1/t} exactly", fmt(worst_delta),
                          worst_delta <= 1e-15,
                          "disjointly supported unit vectors give (sum 1)^{1/t}"));
  return out;
}

// --------------------------------------------------------------- criterion 11

SuiteResult criterion_classifier(const OptimizerConfig&) {
  SuiteResult out{"criterion-11", "symbolic classifier verdict table", {}};

  struct PairCase {
    double r, p1, q1, p2, q2;
    Verdict want;
    std::string label;
  };
  const std::vector<PairCase> pair_cases = {
      {1.0, 1, 2, 1.5, 2, Verdict::Equivalent, "L1 same q, both p below q"},
      {1.0, 2, 2, 1, 2, Verdict::NotEquivalent, "L1 (q,q) against (1,q)"},
      {1.0, 1, 2, 1, 3, Verdict::NotEquivalent, "L1 distinct q"},
      {1.0, 1, 1, 1, 2, Verdict::NotEquivalent, "L1 q = 1 vs q = 2"},
      {1.0, 1.2, 3, 3, 3, Verdict::NotEquivalent, "L1 same q, larger p hits q"},
      {3.0, 2.5, 2.5, 2, 2, Verdict::NotEquivalent, "diagonal split above 2, r >= 2"},
      {3.0, 1.5, 1.5, 2, 2, Verdict::Equivalent, "diagonal family p <= 2, r >= 2"},
      {1.5, 1.2, 1.2, 1.4, 1.4, Verdict::Equivalent, "diagonal family p < r < 2"},
      {1.5, 1.2, 1.2, 1.5, 1.5, Verdict::NotEquivalent, "diagonal split at p = r < 2"},
      {2.0, 2, 2, 1.5, 1.5, Verdict::Equivalent, "diagonal family closed at 2 when r = 2"},
      {2.0, 1, 2, 1.2, 6, Verdict::Equivalent, "minimum region, r = 2"},
      {2.0, 1, 2, 2, 3, Verdict::NotEquivalent, "minimum-region boundary, r = 2"},
      {3.0, 1, 4.0 / 3, 1.5, 2, Verdict::NotEquivalent, "different D-curves, r = 3"},
      {3.0, 1, 4.0 / 3, 4.0 / 3, 2, Verdict::Open, "same C-curve, both p <= 2, r = 3"},
      {2.0, 1.5, 2, 1.2, 1.5, Verdict::Open, "same C-curve, both p <= 2, r = 2"},
      {5.0, 2.5, 10.0 / 3, 1, 10.0 / 9, Verdict::NotEquivalent, "same D-curve, one p > 2, r = 5"},
      {5.0, 2, 4, 2.2, 4, Verdict::NotEquivalent, "case-(iii) horizontal partner, r = 5"},
      {1.5, 1, 2, 4.0 / 3, 4, Verdict::Open, "same C-curve at c = 1/2, r = 1.5"},
      {1.5, 1.5, 9, 1.6, 9, Verdict::Open, "horizontal segment q = u_c, r = 1.5"},
      {1.5, 1, 4.0 / 3, 2, 2.4, Verdict::NotEquivalent, "curved vs horizontal, c < 1/2, r = 1.5"},
      {1.5, 1, 4.0 / 3, 4.0 / 3, 2, Verdict::Open, "same C-curve, c < 1/2, r = 1.5"},
      {1.5, 1.5, 9, 1.7, 9, Verdict::NotEquivalent, "horizontal beyond x_c, r = 1.5"},
  };
  for (const auto& c : pair_cases) {
    EquivalenceVerdict v = classify_pq_pair(TrianglePoint(Exponent(c.p1), Exponent(c.q1)),
                                            TrianglePoint(Exponent(c.p2), Exponent(c.q2)),
                                            Exponent(c.r));
    out.checks.push_back(mk("classify/pair/" + c.label, to_string(c.want),
                            to_string(v.verdict) + " [" + v.justification + "]",
                            v.verdict == c.want, v.justification));
  }

  struct VsCase {
    double r, p, q;
    bool vs_min;
    Verdict want;
    std::string label;
  };
  const std::vector<VsCase> vs_cases = {
      {2.0, 1, 2, true, Verdict::EquivalentToMin, "min at the r = 2 boundary (equal)"},
      {2.0, 2, 3, true, Verdict::NotEquivalent, "not min when 1/p - 1/q < 1/2"},
      {1.0, 1, 9, true, Verdict::NotEquivalent, "never min on L^1"},
      {1.5, 1, 3, true, Verdict::EquivalentToMin, "min boundary 1/p - 1/q = 1/r, r < 2"},
      {1.5, 1.05, 3, true, Verdict::NotEquivalent, "just below the min boundary, r < 2"},
      {3.0, 1.5, 1.5, false, Verdict::EquivalentToMax, "diagonal below min(r,2), r = 3"},
      {1.5, 2, 2, false, Verdict::NotEquivalent, "diagonal above r, r = 1.5"},
      {4.0, 2, 2, false, Verdict::EquivalentToMax, "(2,2) vs max, r = 4"},
      {1.5, 1.5, 1.5, false, Verdict::NotEquivalent, "(r,r) vs max, r < 2"},
      {3.0, 1.5, 2, false, Verdict::NotEquivalent, "off-diagonal vs max"},
      {4.0, 1, 1, false, Verdict::EquivalentToMax, "(1,1) is the maximum multi-norm"},
      {2.0, 1, 3, false, Verdict::NotEquivalent, "q > 2 vs max"},
  };
  for (const auto& c : vs_cases) {
    TrianglePoint P(Exponent(c.p), Exponent(c.q));
    EquivalenceVerdict v = c.vs_min ? classify_vs_min(P, Exponent(c.r))
                                    : classify_vs_max(P, Exponent(c.r));
    out.checks.push_back(mk(std::string("classify/") + (c.vs_min ? "min/" : "max/") + c.label,
                            to_string(c.want),
                            to_string(v.verdict) + " [" + v.justification + "]",
                            v.verdict == c.want, v.justification));
  }

  struct StdCase {
    double r, t, p, q;
    Verdict want;
    std::string label;
  };
  const std::vector<StdCase> std_cases = {
      {1.0, 3, 1, 3, Verdict::Equivalent, "std equals (1,t) on L^1"},
      {3.0, 3, 2, 3, Verdict::NotEquivalent, "std vs pq impossible for r >= 2"},
      {1.5, 6, 1.5, 6, Verdict::Open, "open region at t = 2r/(2-r)"},
      {1.5, 5, 1.5, 5, Verdict::NotEquivalent, "t below 2r/(2-r)"},
      {1.5, 6, 2, 6, Verdict::NotEquivalent, "1/p - 1/q below 1/2"},
      {1.5, 6, 1, 2, Verdict::Open, "same D-curve as (r,t), p <= 2t/(2+t)"},
      {1.5, 6, 4.0 / 3, 4, Verdict::Open, "same D-curve as (r,t), second point"},
      {1.5, 6, 1, 3, Verdict::NotEquivalent, "different D-curve from (r,t)"},
      {2.0, 2, 1, 2, Verdict::NotEquivalent, "standard r-multi-norm vs any pq, r = 2"},
  };
  for (const auto& c : std_cases) {
    EquivalenceVerdict v = classify_standard_t(TrianglePoint(Exponent(c.p), Exponent(c.q)),
                                               Exponent(c.t), Exponent(c.r));
    out.checks.push_back(mk("classify/std/" + c.label, to_string(c.want),
                            to_string(v.verdict) + " [" + v.justification + "]",
                            v.verdict == c.want, v.justification));
  }

  struct IdealCase {
    double p, q;
    HilbertIdeal want;
    std::string label;
  };
  const std::vector<IdealCase> ideal_cases = {
      {2, 2, HilbertIdeal{HilbertIdeal::Tag::HilbertSchmidt, 2, 0, 0}, "(2,2) Hilbert-Schmidt"},
      {1, 2, HilbertIdeal{HilbertIdeal::Tag::AllBounded, 0, 0, 0}, "(1,2) all bounded"},
      {3, 4, HilbertIdeal{HilbertIdeal::Tag::LorentzSchatten, 0, 8.0 / 3, 4}, "(3,4) Lorentz"},
      {2, 4, HilbertIdeal{HilbertIdeal::Tag::Schatten, 4, 0, 0}, "(2,4) Schatten"},
  };
  for (const auto& c : ideal_cases) {
    HilbertIdeal got = hilbert_ideal(Exponent(c.p), Exponent(c.q));
    out.checks.push_back(mk("classify/ideal/" + c.label, to_string(c.want), to_string(got),
                            got == c.want, "summing-ideal identification on Hilbert space"));
  }
  return out;
}

// --------------------------------------------------------------- criterion 12

SuiteResult criterion_phi(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-12", "rate-of-growth equalities at r = 2", {}};
  SequenceSpace space(4, Exponent(2.0), ScalarField::Complex);
  const std::pair<double, double> pts[] = {{2, 2}, {1, 2}, {2, 3}, {1, 3}};
  for (auto [p, q] : pts) {
    double worst_low = 1e9, worst_high = 0;
    for (int n = 2; n <= 4; ++n) {
      MultiNormKind kind = MultiNormKind::pq_kind(Exponent(p), Exponent(q));
      PhiEstimate est = phi_estimate(kind, space, n, cfg);
      double predict = std::pow(n, est.predicted_exponent);
      worst_low = std::min(worst_low, est.value.value / predict);
      worst_high = std::max(worst_high, est.value.value / predict);
    }
    char id[64];
    std::snprintf(id, sizeof id, "phi/r=2/(%g,%g)", p, q);
    out.checks.push_back(mk(id, "in [0.95, 1 + 1e-6] x n^e",
                            "ratio range [" + fmt(worst_low) + ", " + fmt(worst_high) + "]",
                            worst_low >= 0.95 && worst_high <= 1 + 1e-6,
                            "at r = 2 the growth estimates are equalities"));
  }
  {
    const int n = 3;
    auto phi_at = [&](double q) {
      return phi_estimate(MultiNormKind::pq_kind(Exponent(2.0), Exponent(q)), space, n, cfg)
          .value.value;
    };
    double f2 = phi_at(2), f3 = phi_at(3), f6 = phi_at(6);
    double bound = std::sqrt(f2 * f6) * (1 + 1e-3);
    out.checks.push_back(mk("phi/interpolation", "phi(2,3) <= sqrt(phi(2,2) phi(2,6)) (1+1e-3)",
                            fmt(f3) + " vs " + fmt(bound), f3 <= bound,
                            "Hoelder interpolation of growth rates in q"));
  }
  return out;
}

// --------------------------------------------------------------- criterion 13

SuiteResult criterion_montgomery_smith(const OptimizerConfig& cfg) {
  SuiteResult out{"criterion-13", "soft diagnostic: summing-constant trend on l^infty -> l^{2,1}",
                  {}};
  std::vector<double> ratios;
  for (int n : {2, 4, 8}) {
    OperatorMatrix A{CMat::Identity(n, n), Exponent::infinity(), Exponent(2.0),
                     ScalarField::Complex, Exponent(1.0)};
    double p22 = summing_constant_estimate(A, Exponent(2.0), Exponent(2.0), n, cfg).value;
    double p21 = summing_constant_estimate(A, Exponent(2.0), Exponent(1.0), n, cfg).value;
    ratios.push_back(p21 > 0 ? p22 / p21 : 0);
  }
  bool nondecreasing = ratios[0] <= ratios[1] * (1 + 1e-9) && ratios[1] <= ratios[2] * (1 + 1e-9);
  out.checks.push_back(mk("trend/pi22-over-pi21",
                          "nondecreasing over n in {2,4,8} (non-gating)",
                          fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " + fmt(ratios[2]),
                          nondecreasing,
                          "logarithmic growth of pi_{2,2} against pi_{2,1} on the identity",
                          false));
  return out;
}

// ------------------------------------------------------------ ordering suite

SuiteResult ordering_invariants(const OptimizerConfig& cfg) {
  SuiteResult out{"orderings", "ordering and comparison invariants", {}};
  OptimizerConfig ecfg = cfg.with_restarts(12);

  {  // chain min <= pq <= max on certified r = 2 instances
    double worst_lo = 0, worst_hi = 0;
    for (int trial = 0; trial < 20; ++trial) {
      auto eng = engine_for(cfg.seed, mix_seed(0x0D1, static_cast<std::uint64_t>(trial)));
      std::uniform_int_distribution<int> dn(1, 3), dm(2, 3);
      int n = dn(eng), m = dm(eng);
      VectorTuple x(SequenceSpace(m, Exponent(2.0), ScalarField::Complex),
                    gaussian_rows(eng, n, m, true));
      double lo = min_norm(x).value;
      double mid = pq_norm(x, Exponent(2.0), Exponent(2.0), ecfg).value;
      double hi = max_norm(x, ecfg).value;
      worst_lo = std::max(worst_lo, (lo - mid) / std::max(1.0, mid));
      worst_hi = std::max(worst_hi, (mid - hi) / std::max(1.0, hi));
    }
    out.checks.push_back(mk("order/min<=pq<=max", "slack <= 1e-6",
                            fmt(std::max(worst_lo, worst_hi)),
                            worst_lo <= 1e-6 && worst_hi <= 1e-6,
                            "the minimum and maximum multi-norms bracket every multi-norm"));
  }
  {  // directional ordering on exact kernels
    double worst = 0;
    for (int trial = 0; trial < 12; ++trial) {
      auto eng = engine_for(cfg.seed, mix_seed(0x0D2, static_cast<std::uint64_t>(trial)));
      std::uniform_int_distribution<int> dn(2, 3), dm(2, 3);
      int n = dn(eng), m = dm(eng);
      VectorTuple x(SequenceSpace(m, Exponent(2.0), ScalarField::Complex),
                    gaussian_rows(eng, n, m, true));
      double a = pq_norm(x, Exponent(1.0), Exponent(3.0), ecfg).value;
      double b = pq_norm(x, Exponent(2.0), Exponent(2.0), ecfg).value;
      worst = std::max(worst, (a - b) / std::max(1.0, b));
      double c = pq_norm(x, Exponent(1.0), Exponent(2.0), ecfg).value;
      double d = max_norm(x, ecfg).value;
      worst = std::max(worst, (c - d) / std::max(1.0, d));
    }
    out.checks.push_back(mk("order/directional", "(p1,q1) <= (p2,q2) when c2 <= c1, q2 <= q1; "
                            "slack <= 1e-6",
                            fmt(worst), worst <= 1e-6,
                            "multi-norms increase moving down and right in the triangle"));
  }
  {  // standard-t antitone in t
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      auto eng = engine_for(cfg.seed, mix_seed(0x0D3, static_cast<std::uint64_t>(trial)));
      std::uniform_int_distribution<int> dn(1, 3), dm(2, 5);
      int n = dn(eng), m = dm(eng);
      VectorTuple x(SequenceSpace(m, Exponent(1.5), ScalarField::Complex),
                    gaussian_rows(eng, n, m, true));
      double v1 = standard_t_norm(x, Exponent(1.5), cfg).value;
      double v2 = standard_t_norm(x, Exponent(2.5), cfg).value;
      double v3 = standard_t_norm(x, Exponent(4.0), cfg).value;
      worst = std::max({worst, v2 - v1, v3 - v2});
    }
    out.checks.push_back(mk("order/std-antitone", "t1 <= t2 implies norm(t1) >= norm(t2)",
                            fmt(worst), worst <= 1e-12,
                            "the standard t-multi-norms decrease in t"));
  }
  {  // domination [t] <= (r,t), equality on L^1
    double worst_dom = 0, worst_eq = 0;
    for (int trial = 0; trial < 10; ++trial) {
      auto eng = engine_for(cfg.seed, mix_seed(0x0D4, static_cast<std::uint64_t>(trial)));
      std::uniform_int_distribution<int> dn(1, 3), dm(2, 4);
      int n = dn(eng), m = dm(eng);
      {
        VectorTuple x(SequenceSpace(m, Exponent(2.0), ScalarField::Complex),
                      gaussian_rows(eng, n, m, true));
        double st = standard_t_norm(x, Exponent(2.0), cfg).value;
        double pq = pq_norm(x, Exponent(2.0), Exponent(2.0), ecfg).value;
        worst_dom = std::max(worst_dom, (st - pq) / std::max(1.0, pq));
      }
      {
        VectorTuple x(SequenceSpace(m, Exponent(1.0), ScalarField::Complex),
                      gaussian_rows(eng, n, m, true));
        double st = standard_t_norm(x, Exponent(2.0), cfg).value;
        double pq = pq_norm(x, Exponent(1.0), Exponent(2.0), ecfg).value;
        worst_eq = std::max(worst_eq, std::fabs(st - pq) / std::max(1.0, pq));
      }
    }
    out.checks.push_back(mk("order/std-below-pq", "[t] <= (r,t) within 1e-3", fmt(worst_dom),
                            worst_dom <= 1e-3, "the standard t-multi-norm never exceeds (r,t)"));
    out.checks.push_back(mk("order/std-equals-pq-on-L1", "equal within 1e-3", fmt(worst_eq),
                            worst_eq <= 1e-3, "the two families coincide on an L^1 base"));
  }
  {  // min coincidence on l^2 when 1/p - 1/q >= 1/2
    double worst = 0;
    for (int trial = 0; trial < 15; ++trial) {
      auto eng = engine_for(cfg.seed, mix_seed(0x0D5, static_cast<std::uint64_t>(trial)));
      std::uniform_int_distribution<int> dn(1, 3), dm(2, 3);
      int n = dn(eng), m = dm(eng);
      VectorTuple x(SequenceSpace(m, Exponent(2.0), ScalarField::Complex),
                    gaussian_rows(eng, n, m, true));
      double a = pq_norm(x, Exponent(1.0), Exponent(2.0), ecfg).value;
      double b = min_norm(x).value;
      worst = std::max(worst, std::fabs(a - b) / std::max(1.0, b));
    }
    out.checks.push_back(mk("order/min-coincidence", "(1,2)-norm = min on l^2 within 1e-6",
                            fmt(worst), worst <= 1e-6,
                            "1/p - 1/q >= 1/2 forces equality with the minimum multi-norm on "
                            "Hilbert space"));
  }
  {  // DFT tuple lower bounds for r >= 2
    double worst = 0;
    for (double r : {2.0, 3.0}) {
      for (int n = 2; n <= 4; ++n) {
        VectorTuple f = dft_tuple(n, Exponent(r));
        const std::pair<double, double> pts[] = {{1, 2}, {2, 2}, {2, 3}};
        for (auto [p, q] : pts) {
          double c = 1.0 / p - 1.0 / q;
          double bound;
          if (p >= 2) bound = std::pow(n, 1.0 / q);
          else if (c > 0.5) bound = 1.0;
          else bound = std::pow(n, 0.5 - 1.0 / p + 1.0 / q);
          double got = pq_norm(f, Exponent(p), Exponent(q), ecfg).value;
          worst = std::max(worst, (bound * (1 - 1e-3) - got) / bound);
        }
      }
    }
    out.checks.push_back(mk("order/dft-lower-bounds", "computed >= stated power of n x (1-1e-3)",
                            "worst margin " + fmt(worst), worst <= 0,
                            "the Fourier tuple witnesses the growth rates for r >= 2"));
  }
  {  // mu antitone in p and contraction compatibility on exact kernels
    double worst_anti = 0, worst_contr = 0;
    for (int trial = 0; trial < 15; ++trial) {
      auto eng = engine_for(cfg.seed, mix_seed(0x0D6, static_cast<std::uint64_t>(trial)));
      std::uniform_int_distribution<int> dn(2, 3), dm(2, 3);
      int n = dn(eng), m = dm(eng);
      VectorTuple x(SequenceSpace(m, Exponent(2.0), ScalarField::Complex),
                    gaussian_rows(eng, n, m, true));
      double m1 = mu(x, Exponent(1.0), ecfg).value;
      double m2 = mu(x, Exponent(2.0), ecfg).value;
      worst_anti = std::max(worst_anti, (m2 - m1) / std::max(1.0, m1));
      CMat T = gaussian_rows(eng, m, m, true);
      double tn = op_norm(OperatorMatrix{T, Exponent(2.0), Exponent(2.0), ScalarField::Complex,
                                         std::nullopt},
                          ecfg)
                      .value;
      VectorTuple Tx(x.space, (T * x.vectors.transpose()).transpose());
      double mT = mu(Tx, Exponent(2.0), ecfg).value;
      worst_contr = std::max(worst_contr, (mT - tn * m2) / std::max(1.0, tn * m2));
    }
    out.checks.push_back(mk("order/mu-antitone", "mu_{p1} >= mu_{p2} for p1 <= p2", fmt(worst_anti),
                            worst_anti <= 1e-6, "weak summing norms decrease in p"));
    out.checks.push_back(mk("order/mu-contraction", "mu(Tx) <= ||T|| mu(x) (1 + 1e-6)",
                            fmt(worst_contr), worst_contr <= 1e-6,
                            "weak summing norms are operator-monotone"));
  }
  {  // interpolation of summing constants on the identity of l^2_k
    const int k = 3;
    OperatorMatrix A{CMat::Identity(k, k), Exponent(2.0), Exponent(2.0), ScalarField::Complex,
                     std::nullopt};
    double p2 = summing_constant_estimate(A, Exponent(2.0), Exponent(2.0), k, cfg).value;
    double p3 = summing_constant_estimate(A, Exponent(3.0), Exponent(2.0), k, cfg).value;
    double p6 = summing_constant_estimate(A, Exponent(6.0), Exponent(2.0), k, cfg).value;
    double bound = std::sqrt(p2 * p6) * (1 + 1e-3);
    out.checks.push_back(mk("order/pi-interpolation", "pi_3 <= sqrt(pi_2 pi_6)(1+1e-3)",
                            fmt(p3) + " vs " + fmt(bound), p3 <= bound,
                            "Hoelder interpolation of the summing constants"));
  }
  return out;
}

}  // namespace

SuiteResult run_criterion(int number, const OptimizerConfig& cfg) {
  switch (number) {
    case 1: return criterion_axioms(cfg);
    case 2: return criterion_delta(cfg);
    case 3: return criterion_orthogonal_mu(cfg);
    case 4: return criterion_hilbert_22(cfg);
    case 5: return criterion_level2(cfg);
    case 6: return criterion_real_witness(cfg);
    case 7: return criterion_complex_witness(cfg);
    case 8: return criterion_little_grothendieck(cfg);
    case 9: return criterion_khintchine(cfg);
    case 10: return criterion_standard_t(cfg);
    case 11: return criterion_classifier(cfg);
    case 12: return criterion_phi(cfg);
    case 13: return criterion_montgomery_smith(cfg);
    default: throw std::invalid_argument("criterion number must be 1..13");
  }
}

std::vector<std::string> suite_names() {
  return {"axioms",  "closedforms", "orderings",  "witnesses", "constants",
          "classifier", "khintchine", "growth", "all"};
}

std::vector<SuiteResult> run_suite(const std::string& name, const OptimizerConfig& cfg) {
  std::vector<SuiteResult> out;
  auto add_criteria = [&](std::initializer_list<int> nums) {
    for (int k : nums) out.push_back(run_criterion(k, cfg));
  };
  if (name == "axioms") add_criteria({1});
  else if (name == "closedforms") add_criteria({2, 3, 10});
  else if (name == "orderings") out.push_back(ordering_invariants(cfg));
  else if (name == "witnesses") add_criteria({6, 7});
  else if (name == "constants") add_criteria({4, 5, 8});
  else if (name == "classifier") add_criteria({11});
  else if (name == "khintchine") add_criteria({9});
  else if (name == "growth") add_criteria({12, 13});
  else if (name == "all") {
    for (int k = 1; k <= kCriteria; ++k) out.push_back(run_criterion(k, cfg));
    out.push_back(ordering_invariants(cfg));
  } else {
    throw std::invalid_argument("unknown verify suite: " + name);
  }
  return out;
}

}  // namespace mnlab::checks
