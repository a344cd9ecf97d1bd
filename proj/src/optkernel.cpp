#include "mnlab/optkernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace mnlab {

std::string to_string(Certification c) {
  switch (c) {
    case Certification::Exact: return "exact";
    case Certification::CertifiedLowerBound: return "certified_lower_bound";
    case Certification::Heuristic: return "heuristic";
  }
  return "heuristic";
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over seed ^ golden(stream)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

CVec random_unit(std::mt19937_64& eng, int n, Exponent u, bool complex_field) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVec v(n);
  for (int j = 0; j < n; ++j) {
    double re = g(eng);
    double im = complex_field ? g(eng) : 0.0;
    v[j] = Complex(re, im);
  }
  double nv = p_norm(v, u);
  if (nv == 0) v[0] = 1.0; else v /= nv;
  return v;
}

namespace {

int resolve_threads(int threads) {
  if (threads == 1) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  if (threads <= 0) return hw ? static_cast<int>(hw) : 1;
  return threads;
}

struct RestartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> key;  // lexicographic tie-break
  int idx = -1;
};

// Deterministic reduction: larger value wins; exact ties go to the
// lexicographically smaller key so the result is order-independent.
bool better(const RestartOutcome& a, const RestartOutcome& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.key < b.key;
}

template <typename Job>
RestartOutcome run_restarts(int count, int threads, Job job) {
  threads = resolve_threads(threads);
  RestartOutcome best;
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) {
      RestartOutcome o = job(i);
      o.idx = i;
      if (best.idx < 0 || better(o, best)) best = std::move(o);
    }
    return best;
  }
  std::vector<std::future<RestartOutcome>> futs;
  std::atomic<int> next{0};
  auto worker = [&]() {
    RestartOutcome local;
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) break;
      RestartOutcome o = job(i);
      o.idx = i;
      if (local.idx < 0 || better(o, local)) local = std::move(o);
    }
    return local;
  };
  for (int t = 0; t < threads; ++t) futs.push_back(std::async(std::launch::async, worker));
  for (auto& f : futs) {
    RestartOutcome o = f.get();
    if (o.idx >= 0 && (best.idx < 0 || better(o, best))) best = std::move(o);
  }
  return best;
}

std::vector<double> vec_key(const CVec& v) {
  std::vector<double> k;
  k.reserve(static_cast<size_t>(2 * v.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    k.push_back(v[j].real());
    k.push_back(v[j].imag());
  }
  return k;
}

CVec numeric_sphere_grad(const SphereObjective& obj, const CVec& v, bool complex_field) {
  const double h = 1e-7;
  CVec g = CVec::Zero(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    CVec vp = v, vm = v;
    vp[j] += h;
    vm[j] -= h;
    double dre = (obj.f(vp) - obj.f(vm)) / (2 * h);
    double dim = 0;
    if (complex_field) {
      vp = v; vm = v;
      vp[j] += Complex(0, h);
      vm[j] -= Complex(0, h);
      dim = (obj.f(vp) - obj.f(vm)) / (2 * h);
    }
    g[j] = Complex(dre, dim);
  }
  return g;
}

}  // namespace

double sphere_ascend(const SphereObjective& obj, CVec& v, Exponent u, bool complex_field,
                     int max_iter, double step_tol, double value_tol) {
  double fv = obj.f(v);
  double eta = 1.0;
  int stall = 0;
  for (int it = 0; it < max_iter; ++it) {
    CVec g = obj.grad ? obj.grad(v) : numeric_sphere_grad(obj, v, complex_field);
    if (!complex_field) g = g.real().cast<Complex>();
    double gn = g.norm();
    if (!std::isfinite(gn) || gn == 0) break;
    bool accepted = false;
    double step = eta;
    for (int bt = 0; bt < 40; ++bt) {
      CVec cand = v + step * g / gn;
      double nc = p_norm(cand, u);
      if (nc > 0) {
        cand /= nc;
        double fc = obj.f(cand);
        if (std::isfinite(fc) && fc > fv) {
          double gain = fc - fv;
          v = cand;
          fv = fc;
          accepted = true;
          eta = std::min(1.0, step * 2.0);
          if (gain < value_tol * std::max(1.0, std::fabs(fv))) ++stall; else stall = 0;
          break;
        }
      }
      step *= 0.5;
      if (step < step_tol) break;
    }
    if (!accepted || stall >= 3) break;
  }
  return fv;
}

NormEstimate maximize_on_sphere(const SphereObjective& obj, Exponent u, int n,
                                bool complex_field, const OptimizerConfig& cfg,
                                const std::vector<CVec>& extra_starts) {
  const int total = cfg.restarts + static_cast<int>(extra_starts.size());
  auto job = [&](int i) {
    CVec v;
    if (i < static_cast<int>(extra_starts.size())) {
      v = extra_starts[static_cast<size_t>(i)];
      double nv = p_norm(v, u);
      if (nv == 0) { v = CVec::Zero(n); v[0] = 1; }
      else v /= nv;
      if (!complex_field) v = v.real().cast<Complex>();
      double nv2 = p_norm(v, u);
      if (nv2 > 0) v /= nv2;
    } else {
      auto eng = engine_for(cfg.seed, static_cast<std::uint64_t>(i - extra_starts.size()));
      v = random_unit(eng, n, u, complex_field);
    }
    double fv = sphere_ascend(obj, v, u, complex_field, cfg.max_iter, cfg.step_tol, cfg.value_tol);
    RestartOutcome o;
    o.value = fv;
    o.key = vec_key(v);
    return o;
  };
  RestartOutcome best = run_restarts(total, cfg.threads, job);

  NormEstimate est;
  est.value = best.value;
  est.certification = Certification::CertifiedLowerBound;
  CVec w(n);
  for (int j = 0; j < n; ++j) w[j] = Complex(best.key[2 * j], best.key[2 * j + 1]);
  est.witness = SphereWitness{w};
  return est;
}

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, 2 * M_PI);
  if (t > M_PI) t -= 2 * M_PI;
  if (t <= -M_PI) t += 2 * M_PI;
  return t;
}

std::vector<double> gauge_fix(std::vector<double> a) {
  double last = a.back();
  for (auto& t : a) t = wrap_angle(t - last);
  a.back() = 0.0;
  return a;
}

std::vector<double> numeric_torus_grad(const TorusObjective& obj, const std::vector<double>& a) {
  const double h = 1e-7;
  std::vector<double> g(a.size());
  std::vector<double> b = a;
  for (size_t j = 0; j < a.size(); ++j) {
    b[j] = a[j] + h;
    double fp = obj.f(b);
    b[j] = a[j] - h;
    double fm = obj.f(b);
    b[j] = a[j];
    g[j] = (fp - fm) / (2 * h);
  }
  return g;
}

}  // namespace

double torus_ascend(const TorusObjective& obj, std::vector<double>& a, int max_iter,
                    double step_tol, double value_tol) {
  double fv = obj.f(a);
  double eta = 0.5;
  int stall = 0;
  std::vector<double> cand(a.size());
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> g = obj.grad ? obj.grad(a) : numeric_torus_grad(obj, a);
    double gn = 0;
    for (double x : g) gn += x * x;
    gn = std::sqrt(gn);
    if (!std::isfinite(gn) || gn == 0) break;
    bool accepted = false;
    double step = eta;
    for (int bt = 0; bt < 40; ++bt) {
      for (size_t j = 0; j < a.size(); ++j) cand[j] = a[j] + step * g[j] / gn;
      double fc = obj.f(cand);
      if (std::isfinite(fc) && fc > fv) {
        double gain = fc - fv;
        a = cand;
        fv = fc;
        accepted = true;
        eta = std::min(1.0, step * 2.0);
        if (gain < value_tol * std::max(1.0, std::fabs(fv))) ++stall; else stall = 0;
        break;
      }
      step *= 0.5;
      if (step < step_tol) break;
    }
    if (!accepted || stall >= 3) break;
  }
  return fv;
}

TorusResult maximize_on_torus(const TorusObjective& obj, int n, ScalarField field,
                              const OptimizerConfig& cfg, int max_classes) {
  TorusResult res;
  // global-phase invariance spot check
  {
    auto eng = engine_for(cfg.seed, 0xF00D);
    std::uniform_real_distribution<double> U(-M_PI, M_PI);
    for (int t = 0; t < 3; ++t) {
      std::vector<double> a(static_cast<size_t>(n));
      for (auto& x : a) x = U(eng);
      double f0 = obj.f(a);
      double shift = U(eng);
      std::vector<double> b = a;
      for (auto& x : b) x += shift;
      if (std::fabs(obj.f(b) - f0) > 1e-8 * std::max(1.0, std::fabs(f0)))
        throw std::invalid_argument("torus objective is not global-phase invariant");
    }
  }

  struct Cand {
    double value;
    std::vector<double> angles;
  };
  std::vector<Cand> finals;

  if (field == ScalarField::Real && n <= 20 && (1LL << (n - 1)) <= cfg.brute_budget) {
    // exact sign enumeration, gauge: last sign = +1
    const long long count = 1LL << (n - 1);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> a(static_cast<size_t>(n), 0.0);
    std::vector<std::vector<double>> patterns;
    for (long long k = 0; k < count; ++k) {
      for (int i = 0; i < n - 1; ++i) a[static_cast<size_t>(i)] = ((k >> i) & 1) ? M_PI : 0.0;
      double f = obj.f(a);
      if (f > best + 1e-12 * std::max(1.0, std::fabs(best))) {
        best = f;
        patterns.clear();
        patterns.push_back(a);
      } else if (std::fabs(f - best) <= 1e-10 * std::max(1.0, std::fabs(best))) {
        patterns.push_back(a);
      }
    }
    res.est.value = best;
    res.est.certification = Certification::Exact;
    res.est.upper_bound = best;
    res.est.witness = TorusWitness{patterns.front()};
    if (static_cast<int>(patterns.size()) > max_classes) patterns.resize(static_cast<size_t>(max_classes));
    res.classes = std::move(patterns);
    return res;
  }

  // complex field (or real too large): grid over the n-1 free angles, then ascent
  const int k = n - 1;
  bool full_grid = true;
  std::vector<std::vector<double>> starts;
  if (k == 0) {
    starts.push_back({0.0});
  } else {
    double cells = std::pow(static_cast<double>(cfg.grid_density), k);
    if (cells <= static_cast<double>(cfg.brute_budget)) {
      const int g = cfg.grid_density;
      std::vector<int> idx(static_cast<size_t>(k), 0);
      std::vector<double> a(static_cast<size_t>(n), 0.0);
      struct Scored { double v; std::vector<double> a; };
      std::vector<Scored> top;
      const size_t keep = static_cast<size_t>(std::max(cfg.restarts, max_classes));
      for (;;) {
        for (int j = 0; j < k; ++j) a[static_cast<size_t>(j)] = -M_PI + (2 * M_PI) * (idx[static_cast<size_t>(j)] + 0.5) / g;
        double f = obj.f(a);
        if (top.size() < keep || f > top.back().v) {
          Scored s{f, a};
          auto pos = std::lower_bound(top.begin(), top.end(), f,
                                      [](const Scored& x, double val) { return x.v > val; });
          top.insert(pos, std::move(s));
          if (top.size() > keep) top.pop_back();
        }
        int j = 0;
        while (j < k && ++idx[static_cast<size_t>(j)] == g) idx[static_cast<size_t>(j++)] = 0;
        if (j == k) break;
      }
      for (auto& s : top) starts.push_back(std::move(s.a));
    } else {
      full_grid = false;
      auto eng = engine_for(cfg.seed, 0xA11CE);
      std::uniform_real_distribution<double> U(-M_PI, M_PI);
      int count = std::max(cfg.restarts * 4, max_classes);
      for (int i = 0; i < count; ++i) {
        std::vector<double> a(static_cast<size_t>(n), 0.0);
        for (int j = 0; j < k; ++j) a[static_cast<size_t>(j)] = U(eng);
        starts.push_back(std::move(a));
      }
    }
  }

  for (auto& a : starts) {
    std::vector<double> x = a;
    double f = torus_ascend(obj, x, cfg.max_iter, cfg.step_tol, cfg.value_tol);
    // final polish: near a flat maximizer set the value stalls quadratically,
    // so the class representatives need much tighter angular resolution
    for (int round = 0; round < 3; ++round)
      f = std::max(f, torus_ascend(obj, x, 400, 1e-15, 0.0));
    finals.push_back({f, gauge_fix(x)});
  }
  std::sort(finals.begin(), finals.end(), [](const Cand& a, const Cand& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.angles < b.angles;
  });

  double best = finals.front().value;
  // deduplicate maximizer classes modulo global phase at angular tol 1e-6
  for (const auto& c : finals) {
    if (c.value < best - 1e-9 * std::max(1.0, std::fabs(best))) break;
    bool dup = false;
    for (const auto& cls : res.classes) {
      double dist = 0;
      for (int j = 0; j < n; ++j)
        dist = std::max(dist, std::fabs(wrap_angle(c.angles[static_cast<size_t>(j)] - cls[static_cast<size_t>(j)])));
      if (dist < 1e-6) { dup = true; break; }
    }
    if (!dup) {
      res.classes.push_back(c.angles);
      if (static_cast<int>(res.classes.size()) >= max_classes) break;
    }
  }

  res.est.value = best;
  res.est.certification = full_grid ? Certification::CertifiedLowerBound : Certification::Heuristic;
  res.est.budget_exceeded = !full_grid;
  res.est.witness = TorusWitness{res.classes.front()};
  return res;
}

CMat orthonormalize(const CMat& E) {
  Eigen::HouseholderQR<CMat> qr(E);
  CMat Q = qr.householderQ() * CMat::Identity(E.rows(), E.cols());
  CMat R = Q.adjoint() * E;
  for (Eigen::Index j = 0; j < E.cols(); ++j) {
    Complex d = R(j, j);
    double a = std::abs(d);
    if (a > 1e-300) Q.col(j) *= d / a;
  }
  return Q;
}

namespace {

CMat numeric_frame_grad(const FrameObjective& obj, const CMat& E, bool complex_field) {
  const double h = 1e-7;
  CMat g = CMat::Zero(E.rows(), E.cols());
  CMat F = E;
  for (Eigen::Index c = 0; c < E.cols(); ++c)
    for (Eigen::Index r = 0; r < E.rows(); ++r) {
      F(r, c) = E(r, c) + h;
      double fp = obj.f(F);
      F(r, c) = E(r, c) - h;
      double fm = obj.f(F);
      F(r, c) = E(r, c);
      double dre = (fp - fm) / (2 * h);
      double dim = 0;
      if (complex_field) {
        F(r, c) = E(r, c) + Complex(0, h);
        fp = obj.f(F);
        F(r, c) = E(r, c) - Complex(0, h);
        fm = obj.f(F);
        F(r, c) = E(r, c);
        dim = (fp - fm) / (2 * h);
      }
      g(r, c) = Complex(dre, dim);
    }
  return g;
}

}  // namespace

NormEstimate maximize_on_frames(const FrameObjective& obj, int d, int k, bool complex_field,
                                const OptimizerConfig& cfg, const std::vector<CMat>& extra_starts) {
  if (k > d) throw std::invalid_argument("frame kernel requires k <= d");
  const int total = cfg.restarts + static_cast<int>(extra_starts.size());
  auto job = [&](int i) {
    CMat E;
    if (i < static_cast<int>(extra_starts.size())) {
      E = orthonormalize(extra_starts[static_cast<size_t>(i)]);
    } else {
      auto eng = engine_for(cfg.seed, static_cast<std::uint64_t>(0xF4A3 + i));
      std::normal_distribution<double> g(0.0, 1.0);
      E = CMat(d, k);
      for (int c = 0; c < k; ++c)
        for (int r = 0; r < d; ++r)
          E(r, c) = Complex(g(eng), complex_field ? g(eng) : 0.0);
      if (!complex_field) E = E.real().cast<Complex>();
      E = orthonormalize(E);
    }
    double fv = obj.f(E);
    double eta = 0.5;
    int stall = 0;
    for (int it = 0; it < cfg.max_iter; ++it) {
      CMat G = obj.grad ? obj.grad(E) : numeric_frame_grad(obj, E, complex_field);
      if (!complex_field) G = G.real().cast<Complex>();
      double gn = G.norm();
      if (!std::isfinite(gn) || gn == 0) break;
      bool accepted = false;
      double step = eta;
      for (int bt = 0; bt < 40; ++bt) {
        CMat cand = orthonormalize(E + step * G / gn);
        double fc = obj.f(cand);
        if (std::isfinite(fc) && fc > fv) {
          double gain = fc - fv;
          E = cand;
          fv = fc;
          accepted = true;
          eta = std::min(1.0, step * 2.0);
          if (gain < cfg.value_tol * std::max(1.0, std::fabs(fv))) ++stall; else stall = 0;
          break;
        }
        step *= 0.5;
        if (step < cfg.step_tol) break;
      }
      if (!accepted || stall >= 3) break;
    }
    RestartOutcome o;
    o.value = fv;
    o.key.reserve(static_cast<size_t>(2 * d * k));
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < d; ++r) {
        o.key.push_back(E(r, c).real());
        o.key.push_back(E(r, c).imag());
      }
    return o;
  };
  RestartOutcome best = run_restarts(total, cfg.threads, job);

  NormEstimate est;
  est.value = best.value;
  est.certification = Certification::CertifiedLowerBound;
  CMat E(d, k);
  size_t p = 0;
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < d; ++r) {
      E(r, c) = Complex(best.key[p], best.key[p + 1]);
      p += 2;
    }
  std::vector<int> active(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) active[static_cast<size_t>(c)] = c;
  est.witness = FrameWitness{E, active};
  return est;
}

PartitionResult enumerate_partitions(int m, int n,
                                     const std::function<double(const std::vector<int>&)>& score,
                                     const OptimizerConfig& cfg) {
  double total = std::pow(static_cast<double>(n), m);
  if (total > static_cast<double>(cfg.brute_budget))
    throw std::invalid_argument(
        "partition enumeration exceeds brute budget; use the local-search route");
  PartitionResult best;
  std::vector<int> assign(static_cast<size_t>(m), 0);
  bool first = true;
  for (;;) {
    double v = score(assign);
    ++best.enumerated;
    if (first || v > best.value) {
      best.value = v;
      best.assign = assign;
      first = false;
    }
    int j = 0;
    while (j < m && ++assign[static_cast<size_t>(j)] == n) assign[static_cast<size_t>(j++)] = 0;
    if (j == m) break;
  }
  return best;
}

}  // namespace mnlab
