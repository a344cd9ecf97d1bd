#include "mnlab/classify.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace mnlab {

namespace {

// Exact fraction arithmetic when the inputs were recovered as rationals,
// double arithmetic with a 1e-12 tolerance otherwise.
struct Q {
  bool exact = false;
  std::int64_t n = 0, d = 1;
  double v = 0;

  static Q of_double(double x) {
    if (auto r = recover_rational(x, 1'000'000, 1e-12)) return Q{true, r->num, r->den, x};
    return Q{false, 0, 1, x};
  }
  static Q of_frac(std::int64_t n, std::int64_t d) {
    std::int64_t g = std::gcd(std::llabs(n), d);
    if (g > 1) { n /= g; d /= g; }
    return Q{true, n, d, static_cast<double>(n) / static_cast<double>(d)};
  }
  static Q of_inexact(double x) { return Q{false, 0, 1, x}; }
};

Q q_inv(const Q& a) {
  if (a.exact && a.n != 0) return Q::of_frac(a.n < 0 ? -a.d : a.d, std::llabs(a.n));
  if (a.v == std::numeric_limits<double>::infinity()) return Q::of_frac(0, 1);
  return Q::of_inexact(1.0 / a.v);
}

Q q_sub(const Q& a, const Q& b) {
  if (a.exact && b.exact) {
    __int128 num = static_cast<__int128>(a.n) * b.d - static_cast<__int128>(b.n) * a.d;
    __int128 den = static_cast<__int128>(a.d) * b.d;
    __int128 lim = static_cast<__int128>(4e18);
    if (num < lim && num > -lim && den < lim) {
      std::int64_t nn = static_cast<std::int64_t>(num), dd = static_cast<std::int64_t>(den);
      std::int64_t g = std::gcd(std::llabs(nn), dd);
      if (g > 1) { nn /= g; dd /= g; }
      return Q{true, nn, dd, static_cast<double>(nn) / static_cast<double>(dd)};
    }
  }
  return Q::of_inexact(a.v - b.v);
}

int q_cmp(const Q& a, const Q& b) {
  if (a.exact && b.exact) {
    __int128 l = static_cast<__int128>(a.n) * b.d;
    __int128 r = static_cast<__int128>(b.n) * a.d;
    return l < r ? -1 : (l > r ? 1 : 0);
  }
  double diff = a.v - b.v;
  double tol = 1e-12 * std::max({1.0, std::fabs(a.v), std::fabs(b.v)});
  if (std::fabs(diff) <= tol) return 0;
  return diff < 0 ? -1 : 1;
}

Q q_exp_inv(const Exponent& e) {
  if (e.is_inf()) return Q::of_frac(0, 1);
  return q_inv(Q::of_double(e.value()));
}

struct PointData {
  Q p, q, ip, iq, c;  // c = 1/p - 1/q
};

PointData point_data(const TrianglePoint& P) {
  PointData d;
  d.p = Q::of_double(P.p.value());
  d.q = Q::of_double(P.q.value());
  d.ip = q_exp_inv(P.p);
  d.iq = q_exp_inv(P.q);
  d.c = q_sub(d.ip, d.iq);
  return d;
}

EquivalenceVerdict make(Verdict v, std::string just, std::optional<std::string> note = {}) {
  return EquivalenceVerdict{v, std::move(just), std::move(note)};
}

// D-curve parameter through a point (below the minimum region the curves bend
// horizontally so that the growth rate n^{1/rbar - c} is constant along them).
Q d_curve_of(const PointData& P, const Q& ir, const Q& irbar, bool r_le_2, const Q& r) {
  const Q half = Q::of_frac(1, 2);
  if (q_cmp(P.c, irbar) >= 0) return P.c;  // D_c = C_c there
  if (r_le_2) {
    if (q_cmp(P.p, r) <= 0) return P.c;
    return q_sub(ir, P.iq);
  }
  const Q two = Q::of_frac(2, 1);
  if (q_cmp(P.p, two) <= 0) return P.c;
  if (q_cmp(P.p, r) > 0) return q_sub(ir, P.iq);
  if (q_cmp(P.c, ir) < 0) return P.c;
  return q_sub(half, P.iq);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::NotEquivalent: return "not_equivalent";
    case Verdict::EquivalentToMin: return "equivalent_to_min";
    case Verdict::EquivalentToMax: return "equivalent_to_max";
    case Verdict::Open: return "open";
  }
  return "open";
}

CurveParams curve_params(const TrianglePoint& pt, Exponent r) {
  CurveParams out;
  const double rv = r.value();
  const double c = (pt.p.is_inf() ? 0 : 1 / pt.p.value()) - 1 / pt.q.value();
  out.c = c;
  out.r_bar = std::min(2.0, rv);
  if (c < 1 / rv) out.u_c = rv / (1 - c * rv);
  if (rv > 2 && c >= 1 / rv && c < 0.5) {
    double vc = 2 / (1 - 2 * c);
    out.v_c = vc;
    if (vc < rv) out.w_c = rv * vc / (rv - vc);
    else out.w_c_flagged = true;  // nonpositive denominator: left undefined
  }
  if (rv < 2 && c > 0.5 && c < 1 / rv && out.u_c)
    out.x_c = 1.0 / (0.5 + 1.0 / *out.u_c);

  PointData P = point_data(pt);
  Q rq = Q::of_double(rv);
  Q ir = q_exp_inv(r);
  bool r_le_2 = rv <= 2.0;
  Q irbar = r_le_2 ? ir : Q::of_frac(1, 2);
  out.d_curve = d_curve_of(P, ir, irbar, r_le_2, rq).v;
  return out;
}

double phi_exponent(Exponent p, Exponent q, Exponent r) {
  if (r.is_one()) return q.reciprocal();  // L^1: phi grows like n^{1/q} throughout
  const double rbar = std::min(2.0, r.value());
  const double c = p.reciprocal() - q.reciprocal();
  if (c >= 1.0 / rbar - 1e-15) return 0.0;
  if (p.value() >= rbar - 1e-15) return q.reciprocal();
  return 1.0 / rbar - p.reciprocal() + q.reciprocal();
}

double delta_exponent(Exponent p, Exponent q, Exponent r) {
  const double inner = std::max(0.0, p.reciprocal() - r.reciprocal());
  return std::max(0.0, q.reciprocal() - inner);
}

EquivalenceVerdict classify_pq_pair(const TrianglePoint& P1in, const TrianglePoint& P2in,
                                    Exponent r) {
  // canonical order makes the verdict exactly symmetric
  const bool swap = P2in.p < P1in.p || (P2in.p == P1in.p && P2in.q < P1in.q);
  const TrianglePoint& A = swap ? P2in : P1in;
  const TrianglePoint& B = swap ? P1in : P2in;
  if (A == B) return make(Verdict::Equivalent, "equal-points: identical parameters");

  PointData Pa = point_data(A), Pb = point_data(B);

  if (r.is_one()) {
    if (q_cmp(Pa.q, Pb.q) != 0)
      return make(Verdict::NotEquivalent,
                  "L1:q-separation: delta-basis norms grow like n^{1/q}, and q differs");
    // same q, different p (points differ)
    int a_hits = q_cmp(Pa.p, Pa.q) == 0, b_hits = q_cmp(Pb.p, Pb.q) == 0;
    if (a_hits || b_hits)
      return make(Verdict::NotEquivalent,
                  "L1:q-endpoint: the (q,q) family is strictly finer than (p,q) with p < q on "
                  "an L^1 base");
    return make(Verdict::Equivalent,
                "L1:same-q-both-below: with q1 = q2 and both p's below q the multi-norms are "
                "equivalent on an L^1 base");
  }

  const double rv = r.value();
  const bool r_le_2 = rv <= 2.0;
  Q rq = Q::of_double(rv);
  Q ir = q_exp_inv(r);
  Q irbar = r_le_2 ? ir : Q::of_frac(1, 2);
  const Q half = Q::of_frac(1, 2);
  const Q two = Q::of_frac(2, 1);

  const bool a_min = q_cmp(Pa.c, irbar) >= 0;
  const bool b_min = q_cmp(Pb.c, irbar) >= 0;
  if (a_min && b_min)
    return make(Verdict::Equivalent,
                "min-region: both points satisfy 1/p - 1/q >= 1/min(r,2); all such "
                "multi-norms are equivalent to the minimum multi-norm");
  if (a_min != b_min)
    return make(Verdict::NotEquivalent,
                "min-region-boundary: exactly one point lies in the minimum-equivalence "
                "region");

  Q da = d_curve_of(Pa, ir, irbar, r_le_2, rq);
  Q db = d_curve_of(Pb, ir, irbar, r_le_2, rq);
  if (q_cmp(da, db) != 0)
    return make(Verdict::NotEquivalent,
                "different-D-curves: the growth rates n^{1/min(r,2) - c} separate distinct "
                "D-curves");

  const bool r_lt_2 = rv < 2.0;
  const Q zero = Q::of_frac(0, 1);
  if (q_cmp(da, zero) == 0) {
    // diagonal segment {(p,p)}
    if (r_lt_2) {
      if (q_cmp(Pa.p, rq) < 0 && q_cmp(Pb.p, rq) < 0)
        return make(Verdict::Equivalent,
                    "diagonal-max-family: (p,p) with p < r < 2 are all equivalent to the "
                    "maximum multi-norm");
      return make(Verdict::NotEquivalent,
                  "diagonal-split: on the diagonal only p < r belongs to the maximum family "
                  "when r < 2");
    }
    if (q_cmp(Pa.p, two) <= 0 && q_cmp(Pb.p, two) <= 0)
      return make(Verdict::Equivalent,
                  "diagonal-max-family: (p,p) with p <= 2 <= r are all equivalent to the "
                  "maximum multi-norm");
    return make(Verdict::NotEquivalent,
                "diagonal-split: distinct (p,p), (q,q) with p, q >= 2 are never equivalent");
  }

  if (!r_lt_2) {
    // r >= 2, same D-curve with 0 < c < 1/2
    if (q_cmp(Pa.p, two) <= 0 && q_cmp(Pb.p, two) <= 0)
      return make(Verdict::Open,
                  "same-C-curve:open: same curve 1/p - 1/q = c with both p <= 2; the "
                  "Schatten-ideal necessary condition holds",
                  "forward-resolved in [BDP]: such points are equivalent");
    return make(Verdict::NotEquivalent,
                "schatten-separation: on the same D-curve a point with p > 2 carries a "
                "different summing ideal on l^2");
  }

  // 1 < r < 2, same D-curve with 0 < c < 1/r
  if (q_cmp(da, half) >= 0) {
    const bool a_band = q_cmp(Pa.c, half) >= 0;
    const bool b_band = q_cmp(Pb.c, half) >= 0;
    if (!(a_band && b_band))
      return make(Verdict::NotEquivalent,
                  "schatten-separation: below C_{1/2} the summing ideal on l^2 becomes a "
                  "proper Schatten class and separates the pair");
    if (q_cmp(Pa.c, Pb.c) == 0)
      return make(Verdict::Open,
                  "same-C-curve:open: same curve 1/p - 1/q = c with c in [1/2, 1/r)",
                  "forward-resolved in [BDP]: such points are equivalent");
    return make(Verdict::Open,
                "horizontal-segment:open: same D-curve, both inside the 1/p - 1/q >= 1/2 "
                "band, at least one on the horizontal piece q = u_c",
                "explicitly open; no tool of the classification separates or identifies them");
  }
  if (q_cmp(Pa.p, rq) <= 0 && q_cmp(Pb.p, rq) <= 0)
    return make(Verdict::Open,
                "same-C-curve:open: same curve 1/p - 1/q = c with c in (0, 1/2) and both "
                "p <= r",
                "forward-resolved in [BDP]: such points are equivalent");
  return make(Verdict::NotEquivalent,
              "schatten-separation: the horizontal piece of this D-curve carries different "
              "summing ideals on l^2 than the curved piece");
}

EquivalenceVerdict classify_vs_min(const TrianglePoint& P, Exponent r) {
  if (r.is_one())
    return make(Verdict::NotEquivalent,
                "L1-never-min: on an infinite-dimensional L^1 base no (p,q)-multi-norm is "
                "equivalent to the minimum multi-norm");
  PointData Pd = point_data(P);
  Q ir = q_exp_inv(r);
  Q irbar = r.value() <= 2.0 ? ir : Q::of_frac(1, 2);
  if (q_cmp(Pd.c, irbar) >= 0) {
    std::string just =
        "min-equivalence-region: 1/p - 1/q >= 1/min(r,2) forces equivalence to the minimum "
        "multi-norm";
    if (r == Exponent(2.0)) just += " (equal norms on an L^2 base)";
    return make(Verdict::EquivalentToMin, just);
  }
  return make(Verdict::NotEquivalent,
              "growth-separation: the rate n^{1/min(r,2) - 1/p + 1/q} (or n^{1/q}) exceeds "
              "the constant rate of the minimum multi-norm");
}

EquivalenceVerdict classify_vs_max(const TrianglePoint& P, Exponent r) {
  PointData Pd = point_data(P);
  const Q one = Q::of_frac(1, 1);
  if (q_cmp(Pd.p, one) == 0 && q_cmp(Pd.q, one) == 0)
    return make(Verdict::EquivalentToMax,
                "max-equals-(1,1): the (1,1)-multi-norm is the maximum multi-norm (equal)");
  if (r.is_one())
    return make(Verdict::NotEquivalent,
                "L1:max-only-at-(1,1): on an L^1 base the (p,q)-multi-norm is equivalent to "
                "the maximum one only at p = q = 1");
  const Q two = Q::of_frac(2, 1);
  if (q_cmp(Pd.q, two) > 0)
    return make(Verdict::NotEquivalent,
                "q>2-growth: for q > 2 the (p,q) growth rate stays below the maximum "
                "multi-norm's");
  Q rq = Q::of_double(r.value());
  const bool r_lt_2 = r.value() < 2.0;
  if (q_cmp(Pd.p, Pd.q) == 0) {
    // diagonal family
    bool inside = r_lt_2 ? q_cmp(Pd.p, rq) < 0 : q_cmp(Pd.p, two) <= 0;
    if (inside)
      return make(Verdict::EquivalentToMax,
                  "diagonal-max-family: (p,p) with p < r < 2 (or p <= 2 <= r) is "
                  "equivalent to the maximum multi-norm");
    return make(Verdict::NotEquivalent,
                r_lt_2 ? "(r,r)-not-max: (p,p) with r <= p and r < 2 is not equivalent to "
                         "the maximum multi-norm"
                       : "diagonal-split: (p,p) with p > 2 is not equivalent to the maximum "
                         "multi-norm");
  }
  return make(Verdict::NotEquivalent,
              "different-D-curves: an off-diagonal point never shares the maximum "
              "multi-norm's D-curve D_0");
}

EquivalenceVerdict classify_standard_t(const TrianglePoint& P, Exponent t, Exponent r) {
  if (t < r) throw std::invalid_argument("standard t-multi-norm needs t >= r");
  PointData Pd = point_data(P);
  Q tq = Q::of_double(t.value());
  if (r.is_one()) {
    // [t] = (1,t) on an L^1 base; route through the pair classifier
    TrianglePoint ref(Exponent(1.0), t);
    if (q_cmp(Pd.p, Q::of_frac(1, 1)) == 0 && q_cmp(Pd.q, tq) == 0)
      return make(Verdict::Equivalent,
                  "std-equals-(1,t)-on-L1: the standard t-multi-norm equals the "
                  "(1,t)-multi-norm on an L^1 base (equal)");
    EquivalenceVerdict via = classify_pq_pair(ref, P, r);
    via.justification = "std-equals-(1,t)-on-L1 + " + via.justification;
    return via;
  }
  const double rv = r.value();
  if (t == r)
    return make(Verdict::NotEquivalent,
                "std-t=r-not-c0-uniform: the standard r-multi-norm is not equivalent to any "
                "uniform c0-norm, in particular to no (p,q)-multi-norm");
  if (rv >= 2.0)
    return make(Verdict::NotEquivalent,
                "std:r>=2: for r >= 2 the standard t-multi-norm is never equivalent to a "
                "(p,q)-multi-norm");
  const double thresh = 2 * rv / (2 - rv);
  if (t.value() < thresh - 1e-12)
    return make(Verdict::NotEquivalent,
                "std:t-below-threshold: equivalence would force t >= 2r/(2-r)");
  const Q half = Q::of_frac(1, 2);
  if (q_cmp(Pd.c, half) < 0)
    return make(Verdict::NotEquivalent,
                "std:c-below-half: equivalence would force 1/p - 1/q >= 1/2");
  // D-curve of (r,t) vs D-curve of P
  Q rq = Q::of_double(rv);
  Q ir = q_exp_inv(r);
  TrianglePoint rt(r, t);
  PointData Rt = point_data(rt);
  Q d1 = d_curve_of(Pd, ir, ir, true, rq);
  Q d2 = d_curve_of(Rt, ir, ir, true, rq);
  if (q_cmp(d1, d2) != 0)
    return make(Verdict::NotEquivalent,
                "std:different-D-curve: (p,q) must lie on the same D-curve as (r,t)");
  const double pmax = 2 * t.value() / (2 + t.value());
  if (Pd.p.v > pmax + 1e-12)
    return make(Verdict::NotEquivalent,
                "std:p-above-2t/(2+t): equivalence would force p <= 2t/(2+t)");
  return make(Verdict::Open,
              "std:open-region: 1 < r < 2, t >= 2r/(2-r), same D-curve as (r,t) and p <= "
              "2t/(2+t); equivalence with the (r,t)-multi-norm is unresolved",
              "open; partial results deferred to [BDP]");
}

HilbertIdeal hilbert_ideal(Exponent p, Exponent q) {
  PointData Pd = point_data(TrianglePoint(p, q));
  const Q half = Q::of_frac(1, 2);
  const Q two = Q::of_frac(2, 1);
  if (q_cmp(Pd.c, half) >= 0) return HilbertIdeal{HilbertIdeal::Tag::AllBounded, 0, 0, 0};
  if (q_cmp(Pd.p, Pd.q) == 0) return HilbertIdeal{HilbertIdeal::Tag::HilbertSchmidt, 2, 0, 0};
  if (q_cmp(Pd.p, two) <= 0) {
    double rr = 1.0 / (q.reciprocal() - p.reciprocal() + 0.5);
    return HilbertIdeal{HilbertIdeal::Tag::Schatten, rr, 0, 0};
  }
  return HilbertIdeal{HilbertIdeal::Tag::LorentzSchatten, 0, 2 * q.value() / p.value(), q.value()};
}

std::string to_string(const HilbertIdeal& ideal) {
  std::ostringstream os;
  switch (ideal.tag) {
    case HilbertIdeal::Tag::HilbertSchmidt: os << "hilbert_schmidt"; break;
    case HilbertIdeal::Tag::Schatten: os << "schatten(" << ideal.r << ")"; break;
    case HilbertIdeal::Tag::LorentzSchatten:
      os << "lorentz_schatten(" << ideal.u << "," << ideal.q << ")";
      break;
    case HilbertIdeal::Tag::AllBounded: os << "all_bounded"; break;
  }
  return os.str();
}

}  // namespace mnlab
