#include "mnlab/json_io.hpp"

#include <cmath>

namespace mnlab {

namespace {

Complex entry_from_json(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2) return Complex(e[0].get<double>(), e[1].get<double>());
  throw std::invalid_argument("vector entry must be a number or an [re, im] pair");
}

json entry_to_json(const Complex& z, bool real_field) {
  if (real_field) return json(z.real());
  return json::array({z.real(), z.imag()});
}

CMat rows_from_json(const json& j, int n, int m) {
  const auto& vecs = j.at("vectors");
  if (static_cast<int>(vecs.size()) != n) throw std::invalid_argument("n mismatch in vectors");
  CMat rows(n, m);
  for (int i = 0; i < n; ++i) {
    const auto& row = vecs[static_cast<size_t>(i)];
    if (static_cast<int>(row.size()) != m) throw std::invalid_argument("row length != m");
    for (int c = 0; c < m; ++c) rows(i, c) = entry_from_json(row[static_cast<size_t>(c)]);
  }
  return rows;
}

}  // namespace

VectorTuple tuple_from_json(const json& j) {
  const std::string field = j.at("field").get<std::string>();
  ScalarField f = field == "real" ? ScalarField::Real
                : field == "complex" ? ScalarField::Complex
                : throw std::invalid_argument("field must be 'real' or 'complex'");
  const double r = j.at("r").get<double>();
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  return VectorTuple(SequenceSpace(m, Exponent(r), f), rows_from_json(j, n, m));
}

json tuple_to_json(const VectorTuple& x) {
  const bool real_field = x.space.field == ScalarField::Real;
  json vecs = json::array();
  for (int i = 0; i < x.n(); ++i) {
    json row = json::array();
    for (int c = 0; c < x.m(); ++c) row.push_back(entry_to_json(x.vectors(i, c), real_field));
    vecs.push_back(std::move(row));
  }
  return json{{"field", real_field ? "real" : "complex"},
              {"r", x.space.r.value()},
              {"m", x.m()},
              {"n", x.n()},
              {"vectors", std::move(vecs)}};
}

OperatorMatrix matrix_from_json(const json& j) {
  OperatorMatrix A{CMat(), Exponent(j.at("from").get<double>()),
                   Exponent(j.at("to").get<double>()), ScalarField::Complex, std::nullopt};
  const std::string field = j.value("field", std::string("complex"));
  A.field = field == "real" ? ScalarField::Real : ScalarField::Complex;
  if (j.contains("to_lorentz_second"))
    A.to_lorentz_second = Exponent(j.at("to_lorentz_second").get<double>());
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != m) throw std::invalid_argument("m mismatch in entries");
  A.entries.resize(m, n);
  for (int i = 0; i < m; ++i) {
    const auto& row = entries[static_cast<size_t>(i)];
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("entry row length != n");
    for (int c = 0; c < n; ++c) A.entries(i, c) = entry_from_json(row[static_cast<size_t>(c)]);
  }
  if (A.field == ScalarField::Real && A.entries.imag().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("real matrix has nonzero imaginary part");
  return A;
}

json witness_to_json(const Witness& w) {
  json out;
  if (const auto* s = std::get_if<SphereWitness>(&w)) {
    out["kind"] = "sphere_point";
    json v = json::array();
    for (Eigen::Index j = 0; j < s->v.size(); ++j)
      v.push_back(json::array({s->v[j].real(), s->v[j].imag()}));
    out["v"] = std::move(v);
  } else if (const auto* t = std::get_if<TorusWitness>(&w)) {
    out["kind"] = "torus_phases";
    out["angles"] = t->angles;
  } else if (const auto* f = std::get_if<FrameWitness>(&w)) {
    out["kind"] = "orthonormal_frame";
    json cols = json::array();
    for (Eigen::Index c = 0; c < f->frame.cols(); ++c) {
      json col = json::array();
      for (Eigen::Index r = 0; r < f->frame.rows(); ++r)
        col.push_back(json::array({f->frame(r, c).real(), f->frame(r, c).imag()}));
      cols.push_back(std::move(col));
    }
    out["frame"] = std::move(cols);
    out["active"] = f->active;
  } else if (const auto* p = std::get_if<PartitionWitness>(&w)) {
    out["kind"] = "partition";
    out["assign"] = p->assign;
  } else if (const auto* d = std::get_if<DualTupleWitness>(&w)) {
    out["kind"] = "dual_tuple";
    json cols = json::array();
    for (Eigen::Index c = 0; c < d->lambda.cols(); ++c) {
      json col = json::array();
      for (Eigen::Index r = 0; r < d->lambda.rows(); ++r)
        col.push_back(json::array({d->lambda(r, c).real(), d->lambda(r, c).imag()}));
      cols.push_back(std::move(col));
    }
    out["lambda"] = std::move(cols);
  } else if (const auto* tp = std::get_if<TupleWitness>(&w)) {
    out["kind"] = "tuple";
    json rows = json::array();
    for (Eigen::Index i = 0; i < tp->rows.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < tp->rows.cols(); ++c)
        row.push_back(json::array({tp->rows(i, c).real(), tp->rows(i, c).imag()}));
      rows.push_back(std::move(row));
    }
    out["rows"] = std::move(rows);
  } else {
    out["kind"] = "none";
  }
  return out;
}

json estimate_to_json(const NormEstimate& e) {
  json out{{"value", e.value},
           {"certification", to_string(e.certification)},
           {"witness", witness_to_json(e.witness)}};
  if (e.upper_bound) out["upper_bound"] = *e.upper_bound;
  if (e.budget_exceeded) out["budget_exceeded"] = true;
  return out;
}

json verdict_to_json(const EquivalenceVerdict& v) {
  json out{{"verdict", to_string(v.verdict)}, {"citation", v.justification}};
  if (v.external_note) out["note"] = *v.external_note;
  return out;
}

json mu1_to_json(const Mu1Result& r) {
  json out = estimate_to_json(r.est);
  out["maximizer_classes"] = r.classes;
  out["continuum"] = r.continuum;
  return out;
}

json classification_to_json(const TorusClassification& c) {
  return json{{"class", to_string(c.cls)},
              {"a", c.data.a},
              {"b", c.data.b},
              {"c", c.data.c},
              {"M", c.data.M},
              {"k_sign", c.k_sign},
              {"continuum", c.continuum},
              {"value", c.value},
              {"maximizer_classes", c.maximizer_classes}};
}

json extreme_report_to_json(const ExtremeTestReport& r) {
  json out{{"precondition_ok", r.precondition_ok},
           {"mu", estimate_to_json(r.mu_value)},
           {"maximizers", r.maximizers},
           {"nullspace_dim", r.nullspace_dim},
           {"phase_system_nullity", r.phase_system_nullity},
           {"verdict", to_string(r.verdict)}};
  if (r.verdict == ExtremeVerdict::NotExtreme) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < r.witness_u.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < r.witness_u.cols(); ++c)
        row.push_back(json::array({r.witness_u(i, c).real(), r.witness_u(i, c).imag()}));
      rows.push_back(std::move(row));
    }
    out["witness_u"] = std::move(rows);
  }
  return out;
}

double witness_objective(const VectorTuple& x, const MultiNormKind& kind, const Witness& w) {
  const double rv = x.space.r.value();
  if (const auto* d = std::get_if<DualTupleWitness>(&w)) {
    double qv = 1.0;
    if (kind.tag == MultiNormKind::Tag::PQ) qv = kind.q->value();
    else if (kind.tag == MultiNormKind::Tag::Hilbert) qv = 2.0;
    double s = 0;
    for (int i = 0; i < x.n(); ++i) {
      Complex z = (x.vectors.row(i) * d->lambda.col(i))(0);
      s += std::pow(std::abs(z), qv);
    }
    return std::pow(s, 1.0 / qv);
  }
  if (const auto* p = std::get_if<PartitionWitness>(&w)) {
    const double tv = kind.t ? kind.t->value() : rv;
    std::vector<double> block(static_cast<size_t>(x.n()), 0.0);
    for (int j = 0; j < x.m(); ++j)
      block[static_cast<size_t>(p->assign[static_cast<size_t>(j)])] +=
          std::pow(std::abs(x.vectors(p->assign[static_cast<size_t>(j)], j)), rv);
    double s = 0;
    for (double b : block) s += std::pow(std::pow(b, 1.0 / rv), tv);
    return std::pow(s, 1.0 / tv);
  }
  if (const auto* f = std::get_if<FrameWitness>(&w)) {
    double s = 0;
    for (size_t c = 0; c < f->active.size(); ++c) {
      Complex ip = f->frame.col(static_cast<Eigen::Index>(c)).dot(x.row(f->active[c]));
      s += std::norm(ip);
    }
    return std::sqrt(s);
  }
  throw std::invalid_argument("witness kind does not match a norm objective");
}

}  // namespace mnlab
