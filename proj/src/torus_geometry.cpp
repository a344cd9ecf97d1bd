#include "mnlab/torus_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mnlab/weak_summing.hpp"

namespace mnlab {

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, 2 * M_PI);
  if (t > M_PI) t -= 2 * M_PI;
  if (t <= -M_PI) t += 2 * M_PI;
  return t;
}

CVec phases_of(const std::vector<double>& ang) {
  CVec xi(static_cast<Eigen::Index>(ang.size()));
  for (size_t j = 0; j < ang.size(); ++j) xi[static_cast<Eigen::Index>(j)] = std::polar(1.0, ang[j]);
  return xi;
}

}  // namespace

std::string to_string(ExtremeVerdict v) {
  switch (v) {
    case ExtremeVerdict::Extreme: return "extreme";
    case ExtremeVerdict::NotExtreme: return "not_extreme";
    case ExtremeVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Mu1Result mu1_maximize(const VectorTuple& y, const OptimizerConfig& cfg) {
  if (y.space.r != Exponent(2.0))
    throw std::invalid_argument("mu1_maximize works in the Hilbert geometry r = 2");
  const int n = y.n();
  Mu1Result out;

  if (n == 1) {
    out.est = NormEstimate::exact(y.vectors.row(0).norm(), TorusWitness{{0.0}});
    out.classes = {{0.0}};
    out.continuum = true;  // every phase maximizes a single vector
    return out;
  }

  const CMat cols = y.vectors.transpose();  // d x n

  if (y.space.field == ScalarField::Real && n <= 20 && (1LL << (n - 1)) <= cfg.brute_budget) {
    double best = -1;
    std::vector<std::vector<double>> classes;
    CVec v = CVec::Ones(n);
    std::vector<double> ang(static_cast<size_t>(n), 0.0);
    const long long count = 1LL << (n - 1);
    for (long long k = 0; k < count; ++k) {
      for (int i = 0; i < n - 1; ++i) {
        bool neg = (k >> i) & 1;
        v[i] = neg ? -1.0 : 1.0;
        ang[static_cast<size_t>(i)] = neg ? M_PI : 0.0;
      }
      double f = (cols * v).norm();
      if (f > best + 1e-12 * std::max(1.0, best)) {
        best = f;
        classes.clear();
        classes.push_back(ang);
      } else if (std::fabs(f - best) <= 1e-10 * std::max(1.0, best)) {
        classes.push_back(ang);
      }
    }
    out.est = NormEstimate::exact(best, TorusWitness{classes.front()});
    out.classes = std::move(classes);
    return out;
  }

  if (y.space.field == ScalarField::Complex && n == 2) {
    Complex g = inner(y.row(0), y.row(1));
    double val = std::sqrt(std::max(0.0, y.vectors.row(0).squaredNorm() +
                                             y.vectors.row(1).squaredNorm() + 2 * std::abs(g)));
    double a1 = std::abs(g) > 0 ? -std::arg(g) : 0.0;
    out.est = NormEstimate::exact(val, TorusWitness{{a1, 0.0}});
    out.classes = {{wrap_angle(a1), 0.0}};
    out.continuum = std::abs(g) == 0;
    if (out.continuum) out.classes.push_back({M_PI / 2, 0.0});
    return out;
  }

  if (y.space.field == ScalarField::Complex && n == 3) {
    TorusClassification tc = classify_triple(y.row(0), y.row(1), y.row(2));
    out.est = NormEstimate::exact(tc.value, TorusWitness{tc.maximizer_classes.front()});
    out.classes = tc.maximizer_classes;
    out.continuum = tc.continuum;
    return out;
  }

  TorusObjective obj;
  obj.f = [&cols](const std::vector<double>& ang) { return (cols * phases_of(ang)).norm(); };
  obj.grad = [&cols](const std::vector<double>& ang) {
    CVec xi = phases_of(ang);
    CVec w = cols * xi;
    double nw = w.norm();
    std::vector<double> g(ang.size(), 0.0);
    if (nw == 0) return g;
    for (Eigen::Index j = 0; j < cols.cols(); ++j)
      g[static_cast<size_t>(j)] = (Complex(0, 1) * xi[j] * (w.dot(cols.col(j)) / nw)).real();
    return g;
  };
  TorusResult tr = maximize_on_torus(obj, n, y.space.field, cfg);
  out.est = tr.est;
  out.classes = tr.classes;
  return out;
}

VectorTuple complex_witness_4() {
  CMat rows(4, 3);
  rows << Complex(1), Complex(0), Complex(0),
          Complex(-1), Complex(2), Complex(0),
          Complex(-1), Complex(-1), Complex(3),
          Complex(-1), Complex(-1), Complex(-1);
  return VectorTuple(SequenceSpace(3, Exponent(2.0), ScalarField::Complex), rows);
}

VectorTuple real_witness_3() {
  const double s = 1.0 / std::sqrt(11.0);
  CMat rows(3, 3);
  rows << Complex(s), Complex(0), Complex(0),
          Complex(s), Complex(s), Complex(0),
          Complex(-s), Complex(2 * s), Complex(s);
  return VectorTuple(SequenceSpace(3, Exponent(2.0), ScalarField::Real), rows);
}

ExtremeTestReport extreme_point_test(const VectorTuple& y, const OptimizerConfig& cfg) {
  ExtremeTestReport rep;
  const int n = y.n(), d = y.m();
  const bool cf = y.space.field == ScalarField::Complex;

  Mu1Result m1 = mu1_maximize(y, cfg);
  rep.mu_value = m1.est;
  rep.maximizers = m1.classes;
  rep.precondition_ok = std::fabs(m1.est.value - 1.0) <= 1e-8;
  if (!rep.precondition_ok) {
    rep.verdict = ExtremeVerdict::Inconclusive;
    return rep;
  }

  const CMat cols = y.vectors.transpose();  // d x n
  const int K = static_cast<int>(m1.classes.size());

  // unknowns u = (u_1..u_n), u_i in F^d, stacked as n*d scalars;
  // per class: d rows  sum_i xi_i u_i = 0,  n rows  [u_i, z] = 0
  auto build = [&](bool phase_rows_only) {
    CMat A = CMat::Zero(static_cast<Eigen::Index>(K) * (phase_rows_only ? d : d + n),
                        static_cast<Eigen::Index>(n) * d);
    Eigen::Index row = 0;
    for (int c = 0; c < K; ++c) {
      CVec xi = phases_of(m1.classes[static_cast<size_t>(c)]);
      for (int l = 0; l < d; ++l, ++row)
        for (int i = 0; i < n; ++i) A(row, static_cast<Eigen::Index>(i) * d + l) = xi[i];
      if (phase_rows_only) continue;
      CVec z = cols * xi;
      for (int i = 0; i < n; ++i, ++row)
        for (int l = 0; l < d; ++l) A(row, static_cast<Eigen::Index>(i) * d + l) = std::conj(z[l]);
    }
    return A;
  };

  auto nullity = [&](const CMat& A, CMat* basis, double rel_thresh) {
    if (cf) {
      Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      double thresh = rel_thresh * (sv.size() ? sv(0) : 0.0);
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
      int nullsp = static_cast<int>(A.cols()) - rank;
      if (basis && nullsp > 0) *basis = svd.matrixV().rightCols(nullsp);
      return nullsp;
    }
    RMat Ar(2 * A.rows(), A.cols());
    Ar << A.real(), A.imag();
    Eigen::JacobiSVD<RMat> svd(Ar, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double thresh = rel_thresh * (sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > thresh) ++rank;
    int nullsp = static_cast<int>(A.cols()) - rank;
    if (basis && nullsp > 0) *basis = svd.matrixV().rightCols(nullsp).cast<Complex>();
    return nullsp;
  };

  // accuracy of the sampled maximizer classes, measured by the value deficit;
  // the phase-equation diagnostic has to tolerate that perturbation
  double worst_deficit = 0;
  for (const auto& cls : m1.classes) {
    double v = (cols * phases_of(cls)).norm();
    worst_deficit = std::max(worst_deficit, std::fabs(m1.est.value - v));
  }
  const double phase_thresh = std::max(1e-9, 20 * std::sqrt(worst_deficit));

  {
    CMat pbasis;
    rep.phase_system_nullity = nullity(build(true), &pbasis, phase_thresh);
    if (rep.phase_system_nullity > 0) {
      // all-equal-block structure u_1 = ... = u_n of each basis vector
      bool diag = rep.phase_system_nullity == d;
      for (Eigen::Index c = 0; diag && c < pbasis.cols(); ++c) {
        CVec first = pbasis.col(c).segment(0, d);
        for (int i = 1; i < n && diag; ++i)
          if ((pbasis.col(c).segment(static_cast<Eigen::Index>(i) * d, d) - first).norm() >
              phase_thresh * std::max(1.0, pbasis.col(c).norm()))
            diag = false;
      }
      rep.phase_system_diagonal = diag;
    }
  }
  CMat basis;
  rep.nullspace_dim = nullity(build(false), &basis, 1e-9);

  if (rep.nullspace_dim == 0) {
    rep.verdict = ExtremeVerdict::Extreme;
    return rep;
  }

  // try a line search along a nullspace direction; the linear conditions are
  // first-order necessary only, so feasibility of y +- u must be verified
  CVec u0 = basis.col(0);
  CMat U(n, d);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < d; ++l) U(i, l) = u0[static_cast<Eigen::Index>(i) * d + l];
  double scale0 = 1.0 / std::max(1e-12, U.norm());
  for (double s : {1.0, 0.5, 0.25, 0.1, 0.05}) {
    CMat Us = s * scale0 * U;
    VectorTuple yp(y.space, y.vectors + Us);
    VectorTuple ym(y.space, y.vectors - Us);
    double mp = mu1_maximize(yp, cfg).est.value;
    double mm = mu1_maximize(ym, cfg).est.value;
    if (mp <= 1 + 1e-8 && mm <= 1 + 1e-8) {
      rep.verdict = ExtremeVerdict::NotExtreme;
      rep.witness_u = Us;
      return rep;
    }
  }
  rep.verdict = ExtremeVerdict::Inconclusive;
  return rep;
}

CnSearchResult cn_lower_bound(int n, int d, ScalarField field, const OptimizerConfig& cfg) {
  const bool cf = field == ScalarField::Complex;
  SequenceSpace space(d, Exponent(2.0), field);
  OptimizerConfig eval_cfg = cfg;
  eval_cfg.restarts = std::max(6, cfg.restarts / 4);

  auto eval_ratio = [&](const CMat& rows, NormEstimate* me, NormEstimate* he) {
    VectorTuple x(space, rows);
    NormEstimate mx = max_norm(x, eval_cfg);
    NormEstimate hb = hilbert_norm(x, eval_cfg);
    if (me) *me = mx;
    if (he) *he = hb;
    return hb.value > 0 ? mx.value / hb.value : 0.0;
  };

  // extreme points of the dual ball that are not orthogonal decompositions
  // separate the two norms; ascending the support functional x -> Re[x, y]_F
  // over the Hilbert-multi-norm ball turns such a y into a primal witness
  auto support_seed = [&](const CMat& y) {
    CMat x = y;
    NormEstimate h = hilbert_norm(VectorTuple(space, x), eval_cfg);
    double f = std::real((x.conjugate().cwiseProduct(y)).sum());
    double ratio = h.value > 0 ? f / h.value : 0;
    double eta = 0.25;
    for (int it = 0; it < 80; ++it) {
      const auto* fw = std::get_if<FrameWitness>(&h.witness);
      if (!fw || h.value <= 0) break;
      CMat GB = CMat::Zero(n, d);
      for (size_t c = 0; c < fw->active.size(); ++c) {
        int i = fw->active[c];
        CVec e = fw->frame.col(static_cast<Eigen::Index>(c));
        Complex ip = e.dot(x.row(i).transpose());
        GB.row(i) = (ip / h.value) * e.adjoint();
      }
      CMat G = (y - ratio * GB) / h.value;  // grad of Re[x,y]_F / hilbert(x)
      if (!cf) G = G.real().cast<Complex>();
      double gn = G.norm();
      if (gn == 0) break;
      bool acc = false;
      double step = eta;
      for (int bt = 0; bt < 25; ++bt) {
        CMat cand = x + step * G / gn * x.norm();
        NormEstimate hc = hilbert_norm(VectorTuple(space, cand), eval_cfg);
        double fc = std::real((cand.conjugate().cwiseProduct(y)).sum());
        double rc = hc.value > 0 ? fc / hc.value : 0;
        if (rc > ratio) {
          x = cand;
          ratio = rc;
          h = hc;
          f = fc;
          acc = true;
          eta = std::min(0.5, step * 2);
          break;
        }
        step *= 0.5;
      }
      if (!acc) break;
    }
    return x;
  };

  std::vector<CMat> seeds;
  // structured seeds: the extreme-point witnesses and DFT tuples sit near the
  // extremal configurations
  if (!cf && n == 3 && d >= 3) {
    CMat w = CMat::Zero(n, d);
    w.block(0, 0, 3, 3) = real_witness_3().vectors;
    seeds.push_back(support_seed(w));
    seeds.push_back(w);
  }
  if (cf && n == 4 && d >= 3) {
    CMat w = CMat::Zero(n, d);
    w.block(0, 0, 4, 3) = complex_witness_4().vectors / std::sqrt(24.0);
    seeds.push_back(support_seed(w));
    seeds.push_back(support_seed(w.conjugate()));
    seeds.push_back(w);
  }
  if (cf && d >= n) {
    CMat w = CMat::Zero(n, d);
    w.block(0, 0, n, n) = dft_tuple(n, Exponent(2.0)).vectors;
    seeds.push_back(w);
  }
  {
    auto eng = engine_for(cfg.seed, 0xCE5A);
    std::normal_distribution<double> g(0, 1);
    int extra = std::max(3, cfg.restarts / 8);
    for (int t = 0; t < extra; ++t) {
      CMat w(n, d);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) w(i, j) = Complex(g(eng), cf ? g(eng) : 0.0);
      seeds.push_back(w);
    }
  }

  CnSearchResult best{-1.0, VectorTuple(space, CMat::Zero(n, d)), {}, {}};
  for (auto& s : seeds) {
    CMat rows = cf ? s : CMat(s.real().cast<Complex>());
    NormEstimate me, he;
    double ratio = eval_ratio(rows, &me, &he);
    // alternating subgradient ascent on the ratio using both witnesses
    double eta = 0.25;
    for (int it = 0; it < 60; ++it) {
      const auto* dw = std::get_if<DualTupleWitness>(&me.witness);
      const auto* fw = std::get_if<FrameWitness>(&he.witness);
      if (!dw || !fw || me.value <= 0 || he.value <= 0) break;
      // grad of A(x) = |sum <x_i, lambda_i>|
      Complex Z = 0;
      for (int i = 0; i < n; ++i) Z += (rows.row(i) * dw->lambda.col(i))(0);
      Complex ph = std::abs(Z) > 0 ? Z / std::abs(Z) : Complex(1, 0);
      CMat GA(n, d);
      for (int i = 0; i < n; ++i) GA.row(i) = ph * dw->lambda.col(i).conjugate().transpose();
      // grad of B(x) = (sum |[x_i, e_i]|^2)^{1/2} over active slots
      CMat GB = CMat::Zero(n, d);
      for (size_t c = 0; c < fw->active.size(); ++c) {
        int i = fw->active[c];
        CVec e = fw->frame.col(static_cast<Eigen::Index>(c));
        Complex ip = e.dot(rows.row(i).transpose());  // [x_i, e]
        GB.row(i) = (ip / he.value) * e.adjoint();
      }
      CMat G = (GA - ratio * GB) / he.value;
      if (!cf) G = G.real().cast<Complex>();
      double gn = G.norm();
      if (gn == 0) break;
      bool acc = false;
      double step = eta;
      for (int bt = 0; bt < 12; ++bt) {
        CMat cand = rows + step * G / gn * rows.norm();
        NormEstimate cme, che;
        double cr = eval_ratio(cand, &cme, &che);
        if (cr > ratio) {
          rows = cand;
          ratio = cr;
          me = cme;
          he = che;
          acc = true;
          eta = std::min(0.5, step * 2);
          break;
        }
        step *= 0.5;
      }
      if (!acc) break;
    }
    if (ratio > best.ratio) {
      best.ratio = ratio;
      best.tuple = VectorTuple(space, rows);
      best.max_est = me;
      best.hilbert_est = he;
    }
  }
  // final re-evaluation at full effort
  NormEstimate me = max_norm(best.tuple, cfg);
  NormEstimate he = hilbert_norm(best.tuple, cfg);
  if (he.value > 0) best.ratio = me.value / he.value;
  best.max_est = me;
  best.hilbert_est = he;
  return best;
}

}  // namespace mnlab
