#include "mnlab/weak_summing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mnlab/triangle.hpp"

namespace mnlab {

namespace {

bool is_diagonal(const CMat& A) {
  double fn = A.norm();
  if (fn == 0) return true;
  double off = 0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (i != j) off = std::max(off, std::abs(A(i, j)));
  return off < 1e-14 * fn;
}

// subgradient of w -> lorentz_value(w, p, q2); stable sort fixes tie order
CVec lorentz_gradient(const CVec& w, Exponent p, Exponent q2) {
  const Eigen::Index m = w.size();
  std::vector<Eigen::Index> idx(static_cast<size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::abs(w[i]) > std::abs(w[j]);
  });
  const double qv = q2.value();
  const double qp = qv / p.value() - 1.0;
  double V = lorentz_value(w, p, q2);
  CVec g = CVec::Zero(m);
  if (V == 0) return g;
  for (size_t rank = 0; rank < idx.size(); ++rank) {
    Eigen::Index j = idx[rank];
    double a = std::abs(w[j]);
    if (a > 0)
      g[j] = std::pow(V, 1.0 - qv) * std::pow(static_cast<double>(rank + 1), qp) *
             std::pow(a, qv - 2.0) * w[j];
  }
  return g;
}

CVec target_gradient(const OperatorMatrix& A, const CVec& w) {
  return A.to_lorentz_second ? lorentz_gradient(w, A.to_exp, *A.to_lorentz_second)
                             : pnorm_gradient(w, A.to_exp);
}

NormEstimate diagonal_route(const OperatorMatrix& A) {
  const Exponent u = A.from_exp, s = A.to_exp;
  const int k = static_cast<int>(std::min(A.entries.rows(), A.entries.cols()));
  CVec d(k);
  for (int j = 0; j < k; ++j) d[j] = A.entries(j, j);
  const int n = A.n();
  CVec v = CVec::Zero(n);
  double value;
  if (u > s) {
    // ||D_alpha : l^u -> l^s|| = ||alpha||_t with 1/s = 1/u + 1/t
    const double tinv = s.reciprocal() - u.reciprocal();
    const Exponent t(1.0 / tinv >= 1.0 ? 1.0 / tinv : 1.0);
    value = p_norm(d, t);
    // Hoelder-equality witness: |v_j| ~ |d_j|^{t/u}
    if (value > 0) {
      for (int j = 0; j < k; ++j) {
        double a = std::abs(d[j]);
        if (a > 0) {
          double mag = u.is_inf() ? 1.0 : std::pow(a, t.value() * u.reciprocal());
          v[j] = mag * std::conj(d[j]) / a;
        }
      }
      double nv = p_norm(v, u);
      if (nv > 0) v /= nv;
    } else {
      v[0] = 1;
    }
  } else {
    value = 0;
    int jmax = 0;
    for (int j = 0; j < k; ++j)
      if (std::abs(d[j]) > value) { value = std::abs(d[j]); jmax = j; }
    v[jmax] = value > 0 ? std::conj(d[jmax]) / value : Complex(1, 0);
  }
  if (A.field == ScalarField::Real) {
    v = v.real().cast<Complex>();
    double nv = p_norm(v, u);
    if (nv > 0) v /= nv;
  }
  return NormEstimate::exact(value, SphereWitness{v});
}

// closed forms for sup over the torus of ||A xi||_2, n <= 3 columns
NormEstimate torus_l2_closed(const CMat& A) {
  const int n = static_cast<int>(A.cols());
  if (n == 1) {
    CVec v(1);
    v[0] = 1;
    return NormEstimate::exact(A.col(0).norm(), SphereWitness{v});
  }
  if (n == 2) {
    Complex g = A.col(1).dot(A.col(0));  // [a0, a1]
    double val = std::sqrt(std::max(0.0, A.col(0).squaredNorm() + A.col(1).squaredNorm() + 2 * std::abs(g)));
    CVec v(2);
    double a = std::abs(g);
    v[0] = a > 0 ? std::conj(g) / a : Complex(1, 0);
    v[1] = 1;
    return NormEstimate::exact(val, SphereWitness{v});
  }
  TorusClassification tc = classify_triple(A.col(0), A.col(1), A.col(2));
  CVec v(3);
  const auto& ang = tc.maximizer_classes.front();
  for (int j = 0; j < 3; ++j) v[j] = std::polar(1.0, ang[static_cast<size_t>(j)]);
  return NormEstimate::exact(tc.value, SphereWitness{v});
}

double generic_upper_bound(const OperatorMatrix& A) {
  const Exponent u = A.from_exp;
  double maxcol = 0;
  for (Eigen::Index j = 0; j < A.entries.cols(); ++j)
    maxcol = std::max(maxcol, A.target_norm(A.entries.col(j)));
  double ub = std::pow(static_cast<double>(A.n()), u.conjugate().reciprocal()) * maxcol;
  if (!A.to_lorentz_second && !A.to_exp.is_inf()) {
    const Exponent uc = u.conjugate();
    double rows = 0;
    for (Eigen::Index i = 0; i < A.entries.rows(); ++i)
      rows += std::pow(p_norm(A.entries.row(i).transpose(), uc), A.to_exp.value());
    ub = std::min(ub, std::pow(rows, A.to_exp.reciprocal()));
  }
  return ub;
}

NormEstimate sign_enumeration_route(const OperatorMatrix& A) {
  const int n = A.n();
  const long long count = 1LL << (n - 1);
  double best = -1;
  CVec vbest = CVec::Ones(n);
  CVec v = CVec::Ones(n);
  for (long long k = 0; k < count; ++k) {
    for (int i = 0; i < n - 1; ++i) v[i] = ((k >> i) & 1) ? -1.0 : 1.0;
    double f = A.target_norm(A.entries * v);
    if (f > best) { best = f; vbest = v; }
  }
  return NormEstimate::exact(best, SphereWitness{vbest});
}

}  // namespace

namespace {

// monotone MM step for the convex map v -> ||Av||_target on the l^u ball:
// linearize at v and maximize over the ball through the Hoelder duality map
CVec power_step(const OperatorMatrix& A, const CVec& v, Exponent u) {
  CVec g = A.entries.adjoint() * target_gradient(A, A.entries * v);
  return holder_extremal(g.conjugate(), u);
}

double power_then_ascend(const OperatorMatrix& A, CVec& v, Exponent u, bool cf,
                         const OptimizerConfig& cfg, int max_iter) {
  double f = A.target_norm(A.entries * v);
  for (int it = 0; it < 200; ++it) {
    CVec vp = power_step(A, v, u);
    if (!cf) {
      vp = vp.real().cast<Complex>();
      double nv = p_norm(vp, u);
      if (nv == 0) break;
      vp /= nv;
    }
    double fp = A.target_norm(A.entries * vp);
    if (!(fp > f * (1 + 1e-15))) {
      if (fp > f) { f = fp; v = vp; }
      break;
    }
    f = fp;
    v = vp;
  }
  SphereObjective obj;
  obj.f = [&A](const CVec& w) { return A.target_norm(A.entries * w); };
  obj.grad = [&A](const CVec& w) {
    return CVec(A.entries.adjoint() * target_gradient(A, A.entries * w));
  };
  return std::max(f, sphere_ascend(obj, v, u, cf, max_iter, cfg.step_tol, 1e-13));
}

}  // namespace

NormEstimate op_norm(const OperatorMatrix& A, const OptimizerConfig& cfg) {
  const Exponent u = A.from_exp, s = A.to_exp;
  const bool plain = !A.to_lorentz_second.has_value();
  const int n = A.n();

  if (A.entries.norm() == 0) {
    CVec v = CVec::Zero(n);
    v[0] = 1;
    return NormEstimate::exact(0.0, SphereWitness{v});
  }
  if (plain && is_diagonal(A.entries)) return diagonal_route(A);
  if (plain && u == Exponent(2.0) && s == Exponent(2.0)) {
    Eigen::JacobiSVD<CMat> svd(A.entries, Eigen::ComputeThinV);
    CVec v = svd.matrixV().col(0);
    if (A.field == ScalarField::Real) {
      v = v.real().cast<Complex>();
      v.normalize();
    }
    return NormEstimate::exact(svd.singularValues()(0), SphereWitness{v});
  }
  if (u.is_one()) {
    // extreme points of the l^1 ball are phase multiples of basis vectors
    double best = -1;
    int jbest = 0;
    for (int j = 0; j < n; ++j) {
      double f = A.target_norm(A.entries.col(j));
      if (f > best) { best = f; jbest = j; }
    }
    CVec v = CVec::Zero(n);
    v[jbest] = 1;
    return NormEstimate::exact(best, SphereWitness{v});
  }
  if (plain && s.is_inf()) {
    const Exponent uc = u.conjugate();
    double best = -1;
    int ibest = 0;
    for (Eigen::Index i = 0; i < A.entries.rows(); ++i) {
      double f = p_norm(A.entries.row(i).transpose(), uc);
      if (f > best) { best = f; ibest = static_cast<int>(i); }
    }
    CVec v = holder_extremal(A.entries.row(ibest).transpose(), u);
    if (A.field == ScalarField::Real) {
      v = v.real().cast<Complex>();
      double nv = p_norm(v, u);
      if (nv > 0) v /= nv;
    }
    return NormEstimate::exact(best, SphereWitness{v});
  }
  if (u.is_inf()) {
    if (A.field == ScalarField::Real && n <= 20 && (1LL << (n - 1)) <= cfg.brute_budget)
      return sign_enumeration_route(A);
    if (A.field == ScalarField::Complex) {
      if (plain && s == Exponent(2.0) && n <= 3) return torus_l2_closed(A.entries);
      // supremum over the polydisc is attained on the torus (maximum modulus)
      TorusObjective obj;
      const CMat& M = A.entries;
      obj.f = [&A, &M](const std::vector<double>& ang) {
        CVec xi(M.cols());
        for (Eigen::Index j = 0; j < M.cols(); ++j) xi[j] = std::polar(1.0, ang[static_cast<size_t>(j)]);
        return A.target_norm(M * xi);
      };
      obj.grad = [&A, &M](const std::vector<double>& ang) {
        CVec xi(M.cols());
        for (Eigen::Index j = 0; j < M.cols(); ++j) xi[j] = std::polar(1.0, ang[static_cast<size_t>(j)]);
        CVec w = M * xi;
        CVec G = target_gradient(A, w);
        std::vector<double> g(ang.size());
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
          Complex t = Complex(0, 1) * xi[j] * (G.dot(M.col(j)));
          g[static_cast<size_t>(j)] = t.real();
        }
        return g;
      };
      TorusResult tr = maximize_on_torus(obj, n, ScalarField::Complex, cfg);
      NormEstimate est = tr.est;
      CVec v(n);
      const auto& ang = std::get<TorusWitness>(est.witness).angles;
      for (int j = 0; j < n; ++j) v[j] = std::polar(1.0, ang[static_cast<size_t>(j)]);
      est.witness = SphereWitness{v};
      est.upper_bound = generic_upper_bound(A);
      if (est.value > *est.upper_bound) est.value = *est.upper_bound;
      return est;
    }
  }

  const bool cf = A.field == ScalarField::Complex;
  const CMat& M = A.entries;
  std::vector<CVec> seeds;
  {
    Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeThinV);
    seeds.push_back(svd.matrixV().col(0));
    double best = -1;
    int jbest = 0;
    for (int j = 0; j < n; ++j) {
      double f = A.target_norm(M.col(j));
      if (f > best) { best = f; jbest = j; }
    }
    CVec e = CVec::Zero(n);
    e[jbest] = 1;
    seeds.push_back(e);
  }
  double best = -1;
  CVec bestv;
  auto run_from = [&](CVec v) {
    double nv = p_norm(v, u);
    if (nv == 0) return;
    v /= nv;
    if (!cf) {
      v = v.real().cast<Complex>();
      double n2 = p_norm(v, u);
      if (n2 == 0) return;
      v /= n2;
    }
    double f = power_then_ascend(A, v, u, cf, cfg, cfg.max_iter);
    if (f > best) { best = f; bestv = v; }
  };
  for (const auto& sd : seeds) run_from(sd);
  for (int i = 0; i < cfg.restarts; ++i) {
    auto eng = engine_for(cfg.seed, static_cast<std::uint64_t>(i));
    run_from(random_unit(eng, n, u, cf));
  }
  NormEstimate est;
  est.value = best;
  est.certification = Certification::CertifiedLowerBound;
  est.witness = SphereWitness{bestv};
  est.upper_bound = generic_upper_bound(A);
  if (est.value > *est.upper_bound) est.value = *est.upper_bound;
  return est;
}

NormEstimate mu(const VectorTuple& x, Exponent p, const OptimizerConfig& cfg) {
  if (p.is_inf()) throw std::invalid_argument("mu requires p < inf");
  // m x n matrix with columns x_i, mapping l^{p'}_n into the ambient l^r_m
  OperatorMatrix A{x.vectors.transpose(), p.conjugate(), x.space.r, x.space.field, std::nullopt};
  return op_norm(A, cfg);
}

double mu_orthogonal_closed_form(const std::vector<double>& norms, Exponent p) {
  if (p.is_inf()) throw std::invalid_argument("closed form requires p in [1, inf)");
  CVec v(static_cast<Eigen::Index>(norms.size()));
  for (size_t i = 0; i < norms.size(); ++i) v[static_cast<Eigen::Index>(i)] = norms[i];
  if (p.value() >= 2.0) return p_norm(v, Exponent::infinity());
  if (p.is_one()) return p_norm(v, Exponent(2.0));
  const double tinv = p.reciprocal() - 0.5;
  return p_norm(v, Exponent(1.0 / tinv));
}

MuEvaluator::MuEvaluator(Exponent space_r, ScalarField field, Exponent p, OptimizerConfig cfg)
    : space_r_(space_r), field_(field), p_(p), u_(p.conjugate()), cfg_(cfg) {}

bool MuEvaluator::always_exact(int k) const {
  if (u_ == Exponent(2.0) && space_r_ == Exponent(2.0)) return true;
  if (u_.is_one()) return true;
  if (space_r_.is_inf()) return true;
  if (u_.is_inf()) {
    if (field_ == ScalarField::Real && k <= 20) return true;
    if (field_ == ScalarField::Complex && space_r_ == Exponent(2.0) && k <= 3) return true;
  }
  return false;
}

MuEvaluator::Result MuEvaluator::ascend(const CMat& lambda_cols, int extra_starts, int max_iter) {
  const int k = static_cast<int>(lambda_cols.cols());
  if (u_.is_inf() && field_ == ScalarField::Complex) {
    TorusObjective obj;
    obj.f = [&](const std::vector<double>& ang) {
      CVec xi(k);
      for (int j = 0; j < k; ++j) xi[j] = std::polar(1.0, ang[static_cast<size_t>(j)]);
      return p_norm(lambda_cols * xi, space_r_);
    };
    obj.grad = [&](const std::vector<double>& ang) {
      CVec xi(k);
      for (int j = 0; j < k; ++j) xi[j] = std::polar(1.0, ang[static_cast<size_t>(j)]);
      CVec w = lambda_cols * xi;
      CVec G = pnorm_gradient(w, space_r_);
      std::vector<double> g(static_cast<size_t>(k));
      for (int j = 0; j < k; ++j)
        g[static_cast<size_t>(j)] = (Complex(0, 1) * xi[j] * G.dot(lambda_cols.col(j))).real();
      return g;
    };
    double best = -1;
    std::vector<double> bang;
    std::vector<std::vector<double>> starts;
    if (static_cast<int>(warm_angles_.size()) == k) starts.push_back(warm_angles_);
    for (int t = 0; t < extra_starts; ++t) {
      auto eng = engine_for(cfg_.seed, static_cast<std::uint64_t>(0xB00 + t));
      std::uniform_real_distribution<double> U(-M_PI, M_PI);
      std::vector<double> a(static_cast<size_t>(k));
      for (auto& x : a) x = U(eng);
      a.back() = 0;
      starts.push_back(std::move(a));
    }
    for (auto& a : starts) {
      double f = torus_ascend(obj, a, max_iter, 1e-13, 1e-13);
      if (f > best) { best = f; bang = a; }
    }
    warm_angles_ = bang;
    CVec zeta(k);
    for (int j = 0; j < k; ++j) zeta[j] = std::polar(1.0, bang[static_cast<size_t>(j)]);
    return {best, false, zeta};
  }
  OperatorMatrix A{lambda_cols, u_, space_r_, field_, std::nullopt};
  const bool cf = field_ == ScalarField::Complex;
  double best = -1;
  CVec bv;
  std::vector<CVec> starts;
  if (warm_v_.size() == k) starts.push_back(warm_v_);
  {
    Eigen::JacobiSVD<CMat> svd(lambda_cols, Eigen::ComputeThinV);
    starts.push_back(svd.matrixV().col(0));
  }
  for (int t = 0; t < extra_starts; ++t) {
    auto eng = engine_for(cfg_.seed, static_cast<std::uint64_t>(0xC00 + t));
    starts.push_back(random_unit(eng, k, u_, cf));
  }
  for (auto& v0 : starts) {
    CVec v = v0;
    double nv = p_norm(v, u_);
    if (nv == 0) continue;
    v /= nv;
    if (!cf) {
      v = v.real().cast<Complex>();
      double n2 = p_norm(v, u_);
      if (n2 == 0) continue;
      v /= n2;
    }
    double f = power_then_ascend(A, v, u_, cf, cfg_, max_iter);
    if (f > best) { best = f; bv = v; }
  }
  warm_v_ = bv;
  return {best, false, bv};
}

MuEvaluator::Result MuEvaluator::quick(const CMat& lambda_cols) {
  const int k = static_cast<int>(lambda_cols.cols());
  if (lambda_cols.norm() == 0) return {0.0, true, CVec::Unit(k, 0)};
  if (always_exact(k) || is_diagonal(lambda_cols)) {
    OperatorMatrix A{lambda_cols, u_, space_r_, field_, std::nullopt};
    OptimizerConfig c = cfg_;
    c.restarts = 4;
    NormEstimate e = op_norm(A, c);
    return {e.value, true, std::get<SphereWitness>(e.witness).v};
  }
  return ascend(lambda_cols, 3, 300);
}

MuEvaluator::Result MuEvaluator::strong(const CMat& lambda_cols) {
  const int k = static_cast<int>(lambda_cols.cols());
  if (lambda_cols.norm() == 0) return {0.0, true, CVec::Unit(k, 0)};
  if (always_exact(k) || is_diagonal(lambda_cols)) {
    OperatorMatrix A{lambda_cols, u_, space_r_, field_, std::nullopt};
    OptimizerConfig c = cfg_;
    c.restarts = 6;
    NormEstimate e = op_norm(A, c);
    return {e.value, true, std::get<SphereWitness>(e.witness).v};
  }
  return ascend(lambda_cols, 8, 700);
}

NormEstimate MuEvaluator::full(const CMat& lambda_cols) const {
  OperatorMatrix A{lambda_cols, u_, space_r_, field_, std::nullopt};
  return op_norm(A, cfg_);
}

NormEstimate summing_constant_estimate(const OperatorMatrix& A, Exponent q, Exponent p, int k,
                                       const OptimizerConfig& cfg) {
  if (p > q) throw std::invalid_argument("summing constants need p <= q");
  if (k < 1) throw std::invalid_argument("summing constants need k >= 1");
  const int n = A.n();
  const bool cf = A.field == ScalarField::Complex;
  if (A.entries.norm() == 0) return NormEstimate::exact(0.0, TupleWitness{CMat::Zero(k, n)});

  MuEvaluator mu_eval(A.from_exp, A.field, p, cfg);
  const double qv = q.value();

  auto numerator = [&](const CMat& X) {
    double s = 0;
    for (int i = 0; i < k; ++i) s += std::pow(A.target_norm(A.entries * X.col(i)), qv);
    return std::pow(s, 1.0 / qv);
  };
  auto num_grad = [&](const CMat& X, double fX) {
    CMat G(n, k);
    for (int i = 0; i < k; ++i) {
      CVec w = A.entries * X.col(i);
      double Fi = A.target_norm(w);
      CVec gi = A.entries.adjoint() * target_gradient(A, w);
      double wgt = Fi > 0 ? std::pow(fX, 1.0 - qv) * std::pow(Fi, qv - 1.0) : 0.0;
      G.col(i) = wgt * gi;
    }
    return G;
  };

  double best = -1;
  CMat bestX;
  const int n_starts = std::max(4, cfg.restarts / 4);
  for (int s0 = 0; s0 < n_starts + 2; ++s0) {
    CMat X(n, k);
    if (s0 == 0) {
      // right singular vectors, cycled over columns
      Eigen::JacobiSVD<CMat> svd(A.entries, Eigen::ComputeFullV);
      for (int i = 0; i < k; ++i) X.col(i) = svd.matrixV().col(i % n);
    } else if (s0 == 1) {
      for (int i = 0; i < k; ++i) {
        X.col(i).setZero();
        X(i % n, i) = 1;
      }
    } else {
      auto eng = engine_for(cfg.seed, static_cast<std::uint64_t>(0xDD00 + s0));
      std::normal_distribution<double> g(0, 1);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) X(j, i) = Complex(g(eng), cf ? g(eng) : 0.0);
    }
    if (!cf) X = X.real().cast<Complex>();
    MuEvaluator::Result mres = mu_eval.quick(X);
    if (mres.value <= 0) continue;
    X /= mres.value;
    double f = numerator(X);
    double eta = 0.5;
    for (int round = 0; round < 200; ++round) {
      CMat G = num_grad(X, f);
      {
        CVec w = X * mres.maximizer;
        CVec gw = pnorm_gradient(w, A.from_exp);
        G.noalias() -= f * (gw * mres.maximizer.adjoint());
      }
      if (!cf) G = G.real().cast<Complex>();
      double gn = G.norm();
      if (gn == 0) break;
      bool acc = false;
      double step = eta;
      for (int bt = 0; bt < 25; ++bt) {
        CMat Xc = X + step * G / gn;
        MuEvaluator::Result mc = mu_eval.quick(Xc);
        if (mc.value > 0) {
          Xc /= mc.value;
          double fc = numerator(Xc);
          if (fc > f) {
            X = Xc;
            f = fc;
            mres = mc;
            acc = true;
            eta = std::min(1.0, step * 2);
            break;
          }
        }
        step *= 0.5;
        if (step < cfg.step_tol) break;
      }
      if (!acc) break;
    }
    if (f > best) { best = f; bestX = X; }
  }

  NormEstimate mu_final = mu_eval.full(bestX);
  if (mu_final.value > 0) bestX /= mu_final.value;
  NormEstimate est;
  est.value = numerator(bestX);
  est.certification = mu_eval.always_exact(k) || mu_final.certification == Certification::Exact
                          ? Certification::CertifiedLowerBound
                          : Certification::Heuristic;
  est.witness = TupleWitness{bestX.transpose()};
  NormEstimate opn = op_norm(A, cfg.with_restarts(8));
  double opub = opn.certification == Certification::Exact
                    ? opn.value
                    : opn.upper_bound.value_or(generic_upper_bound(A));
  est.upper_bound = std::pow(static_cast<double>(k), q.reciprocal()) * opub;
  if (est.value > *est.upper_bound) {
    est.value = *est.upper_bound;
    est.certification = Certification::Heuristic;
  }
  return est;
}

}  // namespace mnlab
