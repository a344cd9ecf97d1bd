#pragma once

#include <array>
#include <string>
#include <vector>

#include "mnlab/spaces.hpp"

namespace mnlab {

// The quadruple (a, b, c, M) driving the constrained maximization of
// F(r,s,t) = a cos r + b cos s + c cos t over r+s+t = M (mod 2pi):
// a = |[y1,y2]|, b = |[y2,y3]|, c = |[y3,y1]|,
// M = arg[y1,y2] + arg[y2,y3] + arg[y3,y1].
struct TriangleData {
  double a = 0, b = 0, c = 0;
  double M = 0;

  static TriangleData from_triple(const CVec& y1, const CVec& y2, const CVec& y3);
};

struct FMaximum {
  std::vector<std::array<double, 3>> triples;  // maximizing (r,s,t) mod 2pi
  double value = 0;
  bool degenerate = false;  // two or more coefficients vanish (continuum)
};

// All maximizers of a cos r + b cos s + c cos t subject to r+s+t = M (mod 2pi).
// M = pi with (1/a,1/b,1/c) a triangle: the two sign-opposite angle triples;
// M = pi otherwise: pi on the smallest coefficient; M = 0: the origin;
// general M: the unique solution of a sin r = b sin s = c sin t on the correct
// branch, found by bisection. Root-finder failure throws std::runtime_error.
FMaximum maximize_F(const TriangleData& data);

enum class TorusClass { I, II, III, IV, V, Degenerate };

std::string to_string(TorusClass c);

struct TorusClassification {
  TorusClass cls = TorusClass::Degenerate;
  TriangleData data;
  // phase tuples modulo global phase, gauge xi_3 = 1, stored as angles
  std::vector<std::vector<double>> maximizer_classes;
  int k_sign = 0;       // sign of the common imaginary part at the maximizer
  bool continuum = false;
  double value = 0;     // max of ||xi_1 y_1 + xi_2 y_2 + xi_3 y_3||
};

// Classes I-V dispatch by the phase sum M and triangle feasibility of
// (1/a, 1/b, 1/c); any vanishing pairwise inner product yields Degenerate
// (with the reduced maximizers still reported).
TorusClassification classify_triple(const CVec& y1, const CVec& y2, const CVec& y3);

}  // namespace mnlab
