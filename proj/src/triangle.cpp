#include "mnlab/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mnlab {

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, 2 * M_PI);
  if (t > M_PI) t -= 2 * M_PI;
  if (t <= -M_PI) t += 2 * M_PI;
  return t;
}

constexpr double kModTol = 1e-9;  // M classified as 0 or pi within this

double bisect(const std::function<double(double)>& fn, double lo, double hi, bool increasing,
              double target) {
  double flo = fn(lo) - target;
  double fhi = fn(hi) - target;
  if (!increasing) { std::swap(flo, fhi); std::swap(lo, hi); }
  if (flo > 0 || fhi < 0) {
    // allow tiny endpoint slack from floating-point evaluation
    if (flo > 1e-9 || fhi < -1e-9) throw std::runtime_error("maximize_F: root not bracketed");
    if (flo > 0) return lo;
    if (fhi < 0) return hi;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = fn(mid) - target;
    if (std::fabs(fm) <= 1e-14 && std::fabs(hi - lo) <= 1e-13 * std::max(1.0, std::fabs(mid)))
      return mid;
    if (fm < 0) lo = mid; else hi = mid;
  }
  double mid = 0.5 * (lo + hi);
  // near an arcsine singularity the angle residual saturates around the
  // square root of machine precision; tolerate that, reject anything worse
  if (std::fabs(fn(mid) - target) > 1e-7)
    throw std::runtime_error("maximize_F: bisection failed to converge");
  return mid;
}

}  // namespace

TriangleData TriangleData::from_triple(const CVec& y1, const CVec& y2, const CVec& y3) {
  Complex g12 = inner(y1, y2), g23 = inner(y2, y3), g31 = inner(y3, y1);
  TriangleData d;
  d.a = std::abs(g12);
  d.b = std::abs(g23);
  d.c = std::abs(g31);
  d.M = wrap_angle(std::arg(g12) + std::arg(g23) + std::arg(g31));
  return d;
}

FMaximum maximize_F(const TriangleData& data) {
  const double a = data.a, b = data.b, c = data.c;
  if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("maximize_F: negative coefficient");
  const double M = wrap_angle(data.M);
  FMaximum out;

  const int zeros = (a == 0) + (b == 0) + (c == 0);
  if (zeros >= 2) {
    out.degenerate = true;
    out.value = a + b + c;
    std::array<double, 3> t{0, 0, 0};
    // the surviving cosine sits at 0; a free angle absorbs the constraint
    if (a > 0) t = {0.0, M, 0.0};
    else if (b > 0) t = {M, 0.0, 0.0};
    else t = {M, 0.0, 0.0};
    out.triples.push_back(t);
    return out;
  }
  if (zeros == 1) {
    out.value = a + b + c;
    std::array<double, 3> t{0, 0, 0};
    if (a == 0) t = {M, 0.0, 0.0};
    else if (b == 0) t = {0.0, M, 0.0};
    else t = {0.0, 0.0, M};
    out.triples.push_back(t);
    return out;
  }

  if (std::fabs(M) <= kModTol) {
    out.value = a + b + c;
    out.triples.push_back({0.0, 0.0, 0.0});
    return out;
  }

  // sorted coefficients a' <= b' <= c'; perm maps sorted slot -> original slot
  std::array<int, 3> perm{0, 1, 2};
  std::array<double, 3> co{a, b, c};
  std::sort(perm.begin(), perm.end(), [&](int i, int j) { return co[i] < co[j]; });
  const double as = co[perm[0]], bs = co[perm[1]], cs = co[perm[2]];
  auto unpermute = [&](double rs, double ss, double ts) {
    std::array<double, 3> t{};
    t[perm[0]] = rs;
    t[perm[1]] = ss;
    t[perm[2]] = ts;
    return t;
  };

  if (std::fabs(std::fabs(M) - M_PI) <= kModTol) {
    // sides 1/a >= 1/b >= 1/c; triangle iff 1/a < 1/b + 1/c
    const double sa = 1 / as, sb = 1 / bs, sc = 1 / cs;
    if (sa < sb + sc) {
      auto ang = [](double s_opp, double s1, double s2) {
        double x = (s1 * s1 + s2 * s2 - s_opp * s_opp) / (2 * s1 * s2);
        return std::acos(std::clamp(x, -1.0, 1.0));
      };
      const double A = ang(sa, sb, sc), B = ang(sb, sa, sc), C = ang(sc, sa, sb);
      out.value = as * std::cos(A) + bs * std::cos(B) + cs * std::cos(C);
      out.triples.push_back(unpermute(A, B, C));
      auto neg = unpermute(wrap_angle(-A), wrap_angle(-B), wrap_angle(-C));
      if (std::fabs(wrap_angle(neg[0] - out.triples[0][0])) > 1e-12 ||
          std::fabs(wrap_angle(neg[1] - out.triples[0][1])) > 1e-12 ||
          std::fabs(wrap_angle(neg[2] - out.triples[0][2])) > 1e-12)
        out.triples.push_back(neg);
    } else {
      out.value = -as + bs + cs;
      out.triples.push_back(unpermute(M_PI, 0.0, 0.0));
    }
    return out;
  }

  // general M: reduce to 0 < M < pi, solve a sin r = b sin s = c sin t = h > 0
  const bool flip = M < 0;
  const double Mp = flip ? -M : M;
  const double p = std::asin(as / bs), q = std::asin(as / cs);
  double h = 0, r = 0;
  if (std::fabs(Mp - (M_PI / 2 + p + q)) <= 1e-9) {
    // branch boundary: the common sine value is a' itself and r sits at pi/2
    h = as;
    r = M_PI / 2;
  } else if (Mp <= M_PI / 2 + p + q) {
    auto g1 = [&](double x) {
      return std::asin(std::min(1.0, x / as)) + std::asin(x / bs) + std::asin(x / cs);
    };
    h = bisect(g1, 0.0, as, true, Mp);
    r = std::asin(std::min(1.0, h / as));
  } else {
    auto g2 = [&](double x) {
      return M_PI - std::asin(std::min(1.0, x / as)) + std::asin(x / bs) + std::asin(x / cs);
    };
    auto g2d = [&](double x) {
      return -1 / std::sqrt(as * as - x * x) + 1 / std::sqrt(bs * bs - x * x) +
             1 / std::sqrt(cs * cs - x * x);
    };
    double k0 = 0;
    if (g2d(0) > 0) {
      double lo = 0, hi = as * (1 - 1e-14);
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g2d(mid) > 0) lo = mid; else hi = mid;
      }
      k0 = 0.5 * (lo + hi);
    }
    h = bisect(g2, k0, as * (1 - 1e-15), false, Mp);
    r = M_PI - std::asin(std::min(1.0, h / as));
  }
  double s = std::asin(h / bs), t = std::asin(h / cs);
  // enforce the constraint exactly; the branch formula agrees to root tolerance
  r = wrap_angle(Mp - s - t);
  out.value = as * std::cos(r) + bs * std::cos(s) + cs * std::cos(t);
  if (out.value <= std::max({as, bs, cs}) - 1e-9 * (as + bs + cs))
    throw std::runtime_error("maximize_F: dominance validation failed");
  if (flip) { r = -r; s = -s; t = -t; }
  out.triples.push_back(unpermute(r, s, t));
  return out;
}

std::string to_string(TorusClass c) {
  switch (c) {
    case TorusClass::I: return "I";
    case TorusClass::II: return "II";
    case TorusClass::III: return "III";
    case TorusClass::IV: return "IV";
    case TorusClass::V: return "V";
    case TorusClass::Degenerate: return "Degenerate";
  }
  return "Degenerate";
}

TorusClassification classify_triple(const CVec& y1, const CVec& y2, const CVec& y3) {
  TorusClassification out;
  Complex g12 = inner(y1, y2), g23 = inner(y2, y3), g31 = inner(y3, y1);
  const double n1 = y1.norm(), n2 = y2.norm(), n3 = y3.norm();
  const double t12 = 1e-12 * std::max(1e-300, n1 * n2);
  const double t23 = 1e-12 * std::max(1e-300, n2 * n3);
  const double t31 = 1e-12 * std::max(1e-300, n3 * n1);
  const double norm2 = n1 * n1 + n2 * n2 + n3 * n3;
  const double alpha = std::arg(g12), beta = std::arg(g23), gamma = std::arg(g31);

  auto push_class = [&](double xi1, double xi2) {
    out.maximizer_classes.push_back({wrap_angle(xi1), wrap_angle(xi2), 0.0});
  };

  const bool z12 = std::abs(g12) <= t12, z23 = std::abs(g23) <= t23, z31 = std::abs(g31) <= t31;
  if (z12 || z23 || z31) {
    out.cls = TorusClass::Degenerate;
    double F;
    if (z12 && z23 && z31) {
      F = 0;
      out.continuum = true;
      push_class(0, 0);
    } else if (!z12 && z23 && z31) {
      F = std::abs(g12);  // xi_1 conj(xi_2) g12 > 0; xi_3 free -> still one class in the gauge
      out.continuum = true;
      push_class(-alpha, 0);
      // a second representative of the free-phase family
      out.maximizer_classes.push_back({wrap_angle(M_PI / 2 - alpha), wrap_angle(M_PI / 2), 0.0});
    } else if (z12 && !z23 && z31) {
      F = std::abs(g23);
      out.continuum = true;
      push_class(0, -beta);
      out.maximizer_classes.push_back({wrap_angle(M_PI / 2), wrap_angle(-beta), 0.0});
    } else if (z12 && z23 && !z31) {
      F = std::abs(g31);
      out.continuum = true;
      push_class(gamma, 0);
      out.maximizer_classes.push_back({wrap_angle(gamma), wrap_angle(M_PI / 2), 0.0});
    } else if (z12) {
      // b, c > 0: align both surviving terms
      F = std::abs(g23) + std::abs(g31);
      push_class(gamma, -beta);
    } else if (z23) {
      F = std::abs(g12) + std::abs(g31);
      push_class(gamma, gamma + alpha);
    } else {
      F = std::abs(g12) + std::abs(g23);
      push_class(-alpha - beta, -beta);
    }
    out.value = std::sqrt(std::max(0.0, norm2 + 2 * F));
    out.data = TriangleData{std::abs(g12), std::abs(g23), std::abs(g31), 0};
    return out;
  }

  TriangleData data = TriangleData::from_triple(y1, y2, y3);
  out.data = data;
  FMaximum fm = maximize_F(data);
  out.value = std::sqrt(std::max(0.0, norm2 + 2 * fm.value));

  const double M = wrap_angle(data.M);
  if (std::fabs(M) <= kModTol) out.cls = TorusClass::I;
  else if (std::fabs(std::fabs(M) - M_PI) <= kModTol)
    out.cls = fm.triples.size() == 2 ? TorusClass::II : TorusClass::III;
  else if (M > 0) out.cls = TorusClass::IV;
  else out.cls = TorusClass::V;

  for (const auto& rst : fm.triples) {
    // xi_1 = exp(i(gamma - t)), xi_2 = exp(i(s - beta)), xi_3 = 1
    push_class(gamma - rst[2], rst[1] - beta);
  }
  double k = data.a * std::sin(fm.triples[0][0]);
  const double ktol = 1e-9 * std::max({data.a, data.b, data.c});
  out.k_sign = k > ktol ? 1 : (k < -ktol ? -1 : 0);
  return out;
}

}  // namespace mnlab
