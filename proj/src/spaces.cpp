#include "mnlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mnlab {

double p_norm(const CVec& v, Exponent r) {
  if (r.is_inf()) {
    double m = 0;
    for (Eigen::Index j = 0; j < v.size(); ++j) m = std::max(m, std::abs(v[j]));
    return m;
  }
  const double rv = r.value();
  if (rv == 1.0) return v.cwiseAbs().sum();
  if (rv == 2.0) return v.norm();
  double s = 0;
  for (Eigen::Index j = 0; j < v.size(); ++j) s += std::pow(std::abs(v[j]), rv);
  return std::pow(s, 1.0 / rv);
}

double lorentz_value(const CVec& v, Exponent p, Exponent q) {
  if (q.is_inf()) throw std::invalid_argument("lorentz norm requires q < inf");
  std::vector<double> a(static_cast<size_t>(v.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) a[static_cast<size_t>(j)] = std::abs(v[j]);
  // stable sort keeps the original-index tie order; the value is sort-invariant
  std::stable_sort(a.begin(), a.end(), std::greater<double>());
  const double qp = q.value() / p.value() - 1.0;
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += std::pow(static_cast<double>(k + 1), qp) * std::pow(a[k], q.value());
  return std::pow(s, 1.0 / q.value());
}

double lorentz_norm(const CVec& v, Exponent p, Exponent q) {
  if (p > q) throw std::invalid_argument("lorentz norm requires p <= q");
  return lorentz_value(v, p, q);
}

VectorTuple dft_tuple(int n, Exponent r, ScalarField field) {
  if (n < 1) throw std::invalid_argument("dft tuple needs n >= 1");
  if (field != ScalarField::Complex)
    throw std::invalid_argument("dft tuple is intrinsically complex");
  CMat rows(n, n);
  const double scale = std::pow(static_cast<double>(n), -r.reciprocal());
  const double w = 2.0 * M_PI / static_cast<double>(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      rows(i - 1, j - 1) = scale * std::polar(1.0, -w * static_cast<double>((static_cast<long long>(i) * j) % n));
  return VectorTuple(SequenceSpace(n, r, field), std::move(rows));
}

KhintchinePair khintchine_pair(int n, Exponent r, int cap) {
  if (n < 1) throw std::invalid_argument("khintchine pair needs n >= 1");
  if (n > cap)
    throw std::invalid_argument("khintchine pair: n exceeds the 2^n row cap (" +
                                std::to_string(cap) + ")");
  const Exponent s = r.conjugate();
  const long rows = 1L << n;
  RMat eps(rows, n);
  for (long k = 0; k < rows; ++k)
    for (int i = 0; i < n; ++i) eps(k, i) = (k >> i) & 1 ? -1.0 : 1.0;
  const double cr = std::pow(2.0, -static_cast<double>(n) * r.reciprocal());
  const double cs = std::pow(2.0, -static_cast<double>(n) * s.reciprocal());
  return KhintchinePair{n, r, cr * eps, cs * eps};
}

CVec holder_extremal(const CVec& lambda, Exponent r) {
  const Eigen::Index m = lambda.size();
  CVec x = CVec::Zero(m);
  if (r.is_one()) {
    Eigen::Index jmax = 0;
    double best = -1;
    for (Eigen::Index j = 0; j < m; ++j)
      if (std::abs(lambda[j]) > best) { best = std::abs(lambda[j]); jmax = j; }
    x[jmax] = best > 0 ? std::conj(lambda[jmax]) / best : Complex(1, 0);
    return x;
  }
  if (r.is_inf()) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double a = std::abs(lambda[j]);
      x[j] = a > 0 ? std::conj(lambda[j]) / a : Complex(1, 0);
    }
    return x;
  }
  const double e = r.conjugate().value() - 1.0;  // s - 1 = s/r
  for (Eigen::Index j = 0; j < m; ++j) {
    double a = std::abs(lambda[j]);
    if (a > 0) x[j] = std::conj(lambda[j]) / a * std::pow(a, e);
  }
  double nx = p_norm(x, r);
  if (nx == 0) { x[0] = 1; nx = 1; }
  return x / nx;
}

CVec pnorm_gradient(const CVec& w, Exponent s) {
  const Eigen::Index m = w.size();
  CVec g = CVec::Zero(m);
  if (s.is_inf()) {
    Eigen::Index jmax = 0;
    double best = -1;
    for (Eigen::Index j = 0; j < m; ++j)
      if (std::abs(w[j]) > best) { best = std::abs(w[j]); jmax = j; }
    if (best > 0) g[jmax] = w[jmax] / best;
    return g;
  }
  const double sv = s.value();
  const double nw = p_norm(w, s);
  if (nw == 0) return g;
  for (Eigen::Index j = 0; j < m; ++j) {
    double a = std::abs(w[j]);
    if (a > 0) g[j] = std::pow(nw, 1.0 - sv) * std::pow(a, sv - 2.0) * w[j];
  }
  return g;
}

}  // namespace mnlab
