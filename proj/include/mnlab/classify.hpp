#pragma once

#include <optional>
#include <string>

#include "mnlab/exponent.hpp"

namespace mnlab {

// A pair (p,q) with 1 <= p <= q < inf, the coordinate of a (p,q)-multi-norm
// in the triangle T.
struct TrianglePoint {
  Exponent p, q;

  TrianglePoint(Exponent p_, Exponent q_) : p(p_), q(q_) {
    if (q.is_inf() || p > q) throw std::invalid_argument("triangle point needs 1 <= p <= q < inf");
  }

  friend bool operator==(const TrianglePoint& a, const TrianglePoint& b) {
    return a.p == b.p && a.q == b.q;
  }
};

// Curve data through a point: c of the C-curve (1/p - 1/q = c), the
// derived exponents u_c, v_c, w_c, x_c where defined, and the parameter of
// the D-curve containing the point.
struct CurveParams {
  double c = 0;        // C-curve level 1/p - 1/q
  double r_bar = 2;    // min(2, r)
  std::optional<double> u_c;  // r/(1-cr), defined iff c < 1/r
  std::optional<double> v_c;  // 2/(1-2c), r > 2 and c in [1/r, 1/2)
  std::optional<double> w_c;  // r v_c/(r - v_c) as stated; undefined when v_c >= r
  bool w_c_flagged = false;   // nonpositive denominator flagged, not extrapolated
  std::optional<double> x_c;  // abscissa where q = u_c meets C_{1/2} (r < 2, c in (1/2,1/r))
  double d_curve = 0;         // parameter of the D-curve through the point
};

CurveParams curve_params(const TrianglePoint& pt, Exponent r);

// Growth exponent of phi_n^{(p,q)} on l^r: 0 in the minimum region,
// 1/q when p >= min(r,2), else 1/min(r,2) - 1/p + 1/q; r = 1 gives 1/q.
double phi_exponent(Exponent p, Exponent q, Exponent r);

// alpha with ||(delta_1..delta_n)||^{(p,q)}_n = n^alpha on l^r:
// alpha = (1/q - (1/p - 1/r)^+)^+.
double delta_exponent(Exponent p, Exponent q, Exponent r);

enum class Verdict { Equivalent, NotEquivalent, EquivalentToMin, EquivalentToMax, Open };

std::string to_string(Verdict v);

struct EquivalenceVerdict {
  Verdict verdict = Verdict::Open;
  std::string justification;  // stable rule id + short statement
  std::optional<std::string> external_note;
};

// Symbolic equivalence of the (p1,q1)- and (p2,q2)-multi-norms on an
// infinite-dimensional L^r base (symmetric in the two points).
EquivalenceVerdict classify_pq_pair(const TrianglePoint& P1, const TrianglePoint& P2, Exponent r);

EquivalenceVerdict classify_vs_min(const TrianglePoint& P, Exponent r);
EquivalenceVerdict classify_vs_max(const TrianglePoint& P, Exponent r);

// Standard t-multi-norm vs the (p,q)-multi-norm on L^r.
EquivalenceVerdict classify_standard_t(const TrianglePoint& P, Exponent t, Exponent r);

// Identification of Pi_{q,p}(H) for Hilbert H as a symbolic lookup.
struct HilbertIdeal {
  enum class Tag { HilbertSchmidt, Schatten, LorentzSchatten, AllBounded };
  Tag tag = Tag::HilbertSchmidt;
  double r = 0;  // Schatten index
  double u = 0, q = 0;  // Lorentz-Schatten indices (2q/p, q)

  friend bool operator==(const HilbertIdeal& a, const HilbertIdeal& b) {
    return a.tag == b.tag && a.r == b.r && a.u == b.u && a.q == b.q;
  }
};

HilbertIdeal hilbert_ideal(Exponent p, Exponent q);

std::string to_string(const HilbertIdeal& ideal);

}  // namespace mnlab
