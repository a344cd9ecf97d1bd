#include <CLI11.hpp>

#include <clocale>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "mnlab/checks.hpp"
#include "mnlab/json_io.hpp"

namespace {

using namespace mnlab;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  json j;
  in >> j;
  return j;
}

MultiNormKind parse_kind(const std::string& spec) {
  if (spec == "min") return MultiNormKind::min_kind();
  if (spec == "max") return MultiNormKind::max_kind();
  if (spec == "hilbert") return MultiNormKind::hilbert_kind();
  if (spec.rfind("pq:", 0) == 0) {
    auto comma = spec.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--kind", "use pq:P,Q");
    double p = std::stod(spec.substr(3, comma - 3));
    double q = std::stod(spec.substr(comma + 1));
    return MultiNormKind::pq_kind(Exponent(p), Exponent(q));
  }
  if (spec.rfind("std:", 0) == 0)
    return MultiNormKind::standard_t_kind(Exponent(std::stod(spec.substr(4))));
  throw CLI::ValidationError("--kind", "expected min|max|pq:P,Q|std:T|hilbert");
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

struct TableRow {
  std::map<std::string, std::string> cells;
};

void emit_table_rows(const std::vector<std::string>& cols, const std::vector<TableRow>& rows,
                     const std::string& format) {
  if (format == "csv") {
    for (size_t c = 0; c < cols.size(); ++c)
      std::cout << cols[c] << (c + 1 < cols.size() ? "," : "\n");
    for (const auto& r : rows)
      for (size_t c = 0; c < cols.size(); ++c)
        std::cout << r.cells.at(cols[c]) << (c + 1 < cols.size() ? "," : "\n");
    return;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    for (const auto& c : cols) o[c] = r.cells.at(c);
    arr.push_back(std::move(o));
  }
  emit(arr);
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"mnlab: numerical and symbolic laboratory for multi-norms on l^r_m"};
  app.require_subcommand(1);
  app.fallthrough();

  OptimizerConfig cfg;
  std::string input, format = "json";
  app.add_option("--seed", cfg.seed, "RNG seed (all randomness funnels through it)");
  app.add_option("--restarts", cfg.restarts, "multi-start restarts");
  app.add_option("--max-iter", cfg.max_iter, "ascent iteration cap");
  double tol = cfg.value_tol;
  app.add_option("--tol", tol, "relative value tolerance");
  app.add_option("--grid", cfg.grid_density, "torus grid density per angle");
  app.add_option("--brute-budget", cfg.brute_budget, "budget for exhaustive kernels");
  app.add_option("--threads", cfg.threads, "restart threads (0 = auto)");

  auto* norm_cmd = app.add_subcommand("norm", "evaluate a multi-norm on a tuple");
  std::string kind_spec;
  norm_cmd->add_option("--kind", kind_spec, "min|max|pq:P,Q|std:T|hilbert")->required();
  norm_cmd->add_option("--input", input, "tuple JSON file")->required();

  auto* mu_cmd = app.add_subcommand("mu", "weak p-summing norm of a tuple");
  double mu_p = 1.0;
  mu_cmd->add_option("--p", mu_p, "summing exponent p")->required();
  mu_cmd->add_option("--input", input, "tuple JSON file")->required();

  auto* op_cmd = app.add_subcommand("opnorm", "operator norm l^u -> l^s of a matrix");
  op_cmd->add_option("--input", input, "matrix JSON file")->required();

  auto* phi_cmd = app.add_subcommand("phi", "rate-of-growth estimate");
  std::string phi_kind = "pq:2,2", phi_field = "complex";
  double phi_r = 2.0;
  int phi_m = 3, phi_n = 2;
  phi_cmd->add_option("--kind", phi_kind, "min|max|pq:P,Q|std:T|hilbert");
  phi_cmd->add_option("--r", phi_r, "space exponent r");
  phi_cmd->add_option("--m", phi_m, "space dimension m");
  phi_cmd->add_option("--n", phi_n, "tuple length n");
  phi_cmd->add_option("--field", phi_field, "real|complex");

  auto* cls_cmd = app.add_subcommand("classify", "symbolic equivalence verdicts");
  double cls_r = 2.0, cls_p1 = 1, cls_q1 = 1, cls_p2 = 1, cls_q2 = 1;
  std::string cls_vs;
  cls_cmd->add_option("--r", cls_r, "base space exponent")->required();
  cls_cmd->add_option("--p1", cls_p1)->required();
  cls_cmd->add_option("--q1", cls_q1)->required();
  auto* p2opt = cls_cmd->add_option("--p2", cls_p2);
  cls_cmd->add_option("--q2", cls_q2)->needs(p2opt);
  cls_cmd->add_option("--vs", cls_vs, "min|max|std:T instead of a second point");

  auto* mu1_cmd = app.add_subcommand("mu1", "mu_{1,n} with maximizer classes (r = 2)");
  mu1_cmd->add_option("--input", input, "tuple JSON file")->required();

  auto* trip_cmd = app.add_subcommand("classify-triple", "classes I-V of a vector triple");
  trip_cmd->add_option("--input", input, "tuple JSON file (n = 3)")->required();

  auto* ext_cmd = app.add_subcommand("extreme-test", "extreme-point test in the mu_{1,n} ball");
  ext_cmd->add_option("--input", input, "tuple JSON file with mu_{1,n} = 1")->required();

  auto* wit_cmd = app.add_subcommand("witness", "built-in extremal tuples");
  std::string wit_name;
  wit_cmd->add_option("--name", wit_name, "real3|complex4")->required();

  auto* cn_cmd = app.add_subcommand("cn", "lower-bound search for the max/(2,2) constant");
  int cn_n = 3, cn_d = 3;
  std::string cn_field = "complex";
  cn_cmd->add_option("--n", cn_n)->required();
  cn_cmd->add_option("--d", cn_d)->required();
  cn_cmd->add_option("--field", cn_field, "real|complex");

  auto* table_cmd = app.add_subcommand("table", "sweep tables (CSV or JSON)");
  bool t_delta = false, t_phi = false, t_ratio = false;
  double t_r = 2.0;
  int t_nmax = 4, t_count = 8, t_d = 3;
  std::string t_grid = "default";
  table_cmd->add_flag("--delta", t_delta, "delta-basis closed-form table");
  table_cmd->add_flag("--phi", t_phi, "rate-of-growth table");
  table_cmd->add_flag("--ratio", t_ratio, "max/(2,2) ratio table");
  table_cmd->add_option("--r", t_r, "space exponent");
  table_cmd->add_option("--nmax", t_nmax, "largest tuple length");
  table_cmd->add_option("--count", t_count, "random tuples per row (ratio table)");
  table_cmd->add_option("--d", t_d, "space dimension (ratio table)");
  table_cmd->add_option("--grid-pq", t_grid, "pq grid name (default)");
  table_cmd->add_option("--format", format, "json|csv");

  auto* ver_cmd = app.add_subcommand("verify", "verification suites with per-check reports");
  std::string suite = "all";
  ver_cmd->add_option("--suite", suite,
                      "axioms|closedforms|orderings|witnesses|constants|classifier|khintchine|"
                      "growth|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  cfg.value_tol = tol;
  try {
    if (*norm_cmd) {
      VectorTuple x = tuple_from_json(load_json(input));
      MultiNormKind kind = parse_kind(kind_spec);
      emit(estimate_to_json(evaluate_norm(x, kind, cfg)));
    } else if (*mu_cmd) {
      VectorTuple x = tuple_from_json(load_json(input));
      emit(estimate_to_json(mu(x, Exponent(mu_p), cfg)));
    } else if (*op_cmd) {
      OperatorMatrix A = matrix_from_json(load_json(input));
      emit(estimate_to_json(op_norm(A, cfg)));
    } else if (*phi_cmd) {
      SequenceSpace space(phi_m, Exponent(phi_r),
                          phi_field == "real" ? ScalarField::Real : ScalarField::Complex);
      PhiEstimate est = phi_estimate(parse_kind(phi_kind), space, phi_n, cfg);
      json j{{"n", est.n},
             {"kind", est.kind.name()},
             {"estimate", estimate_to_json(est.value)},
             {"predicted_exponent", est.predicted_exponent},
             {"predicted_value", std::pow(est.n, est.predicted_exponent)},
             {"best_tuple", tuple_to_json(VectorTuple(space, est.best_tuple))}};
      emit(j);
    } else if (*cls_cmd) {
      TrianglePoint P1{Exponent(cls_p1), Exponent(cls_q1)};
      EquivalenceVerdict v;
      if (cls_vs == "min") v = classify_vs_min(P1, Exponent(cls_r));
      else if (cls_vs == "max") v = classify_vs_max(P1, Exponent(cls_r));
      else if (cls_vs.rfind("std:", 0) == 0)
        v = classify_standard_t(P1, Exponent(std::stod(cls_vs.substr(4))), Exponent(cls_r));
      else if (!cls_vs.empty())
        throw std::invalid_argument("--vs expects min|max|std:T");
      else if (p2opt->count())
        v = classify_pq_pair(P1, TrianglePoint(Exponent(cls_p2), Exponent(cls_q2)),
                             Exponent(cls_r));
      else
        throw std::invalid_argument("classify needs --p2/--q2 or --vs");
      emit(verdict_to_json(v));
    } else if (*mu1_cmd) {
      VectorTuple x = tuple_from_json(load_json(input));
      emit(mu1_to_json(mu1_maximize(x, cfg)));
    } else if (*trip_cmd) {
      VectorTuple x = tuple_from_json(load_json(input));
      if (x.n() != 3) throw std::invalid_argument("classify-triple needs n = 3");
      emit(classification_to_json(classify_triple(x.row(0), x.row(1), x.row(2))));
    } else if (*ext_cmd) {
      VectorTuple x = tuple_from_json(load_json(input));
      emit(extreme_report_to_json(extreme_point_test(x, cfg)));
    } else if (*wit_cmd) {
      if (wit_name == "real3") emit(tuple_to_json(real_witness_3()));
      else if (wit_name == "complex4") emit(tuple_to_json(complex_witness_4()));
      else throw std::invalid_argument("--name expects real3|complex4");
    } else if (*cn_cmd) {
      CnSearchResult res = cn_lower_bound(
          cn_n, cn_d, cn_field == "real" ? ScalarField::Real : ScalarField::Complex, cfg);
      json j{{"ratio", res.ratio},
             {"max", estimate_to_json(res.max_est)},
             {"hilbert", estimate_to_json(res.hilbert_est)},
             {"tuple", tuple_to_json(res.tuple)}};
      emit(j);
    } else if (*table_cmd) {
      std::vector<TableRow> rows;
      if (t_delta || (!t_phi && !t_ratio)) {
        const std::pair<double, double> pqs[] = {{1, 1}, {1, 2}, {1.5, 2},
                                                 {2, 2}, {2, 3}, {3, 3}};
        for (auto [p, q] : pqs) {
          for (int n = 2; n <= t_nmax; ++n) {
            CMat id = CMat::Identity(n, n);
            VectorTuple x(SequenceSpace(n, Exponent(t_r), ScalarField::Complex), id);
            NormEstimate e = pq_norm(x, Exponent(p), Exponent(q), cfg);
            double analytic =
                std::pow(n, delta_exponent(Exponent(p), Exponent(q), Exponent(t_r)));
            TableRow row;
            row.cells = {{"p", num(p)},
                         {"q", num(q)},
                         {"r", num(t_r)},
                         {"n", std::to_string(n)},
                         {"computed", num(e.value)},
                         {"analytic", num(analytic)},
                         {"rel_gap", num((e.value - analytic) / analytic)},
                         {"certification", to_string(e.certification)}};
            rows.push_back(std::move(row));
          }
        }
        emit_table_rows({"p", "q", "r", "n", "computed", "analytic", "rel_gap", "certification"},
                        rows, format);
      } else if (t_phi) {
        SequenceSpace space(std::max(t_nmax, 2), Exponent(t_r), ScalarField::Complex);
        const std::pair<double, double> pqs[] = {{1, 1}, {1, 2}, {2, 2}, {2, 3}};
        for (auto [p, q] : pqs) {
          for (int n = 2; n <= t_nmax; ++n) {
            PhiEstimate est =
                phi_estimate(MultiNormKind::pq_kind(Exponent(p), Exponent(q)), space, n, cfg);
            double predicted = std::pow(n, est.predicted_exponent);
            TableRow row;
            row.cells = {{"p", num(p)},
                         {"q", num(q)},
                         {"r", num(t_r)},
                         {"n", std::to_string(n)},
                         {"computed", num(est.value.value)},
                         {"predicted", num(predicted)},
                         {"rel_gap", num((est.value.value - predicted) / predicted)},
                         {"certification", to_string(est.value.certification)}};
            rows.push_back(std::move(row));
          }
        }
        emit_table_rows({"p", "q", "r", "n", "computed", "predicted", "rel_gap", "certification"},
                        rows, format);
      } else {
        const double bound = 2.0 / std::sqrt(M_PI);
        for (int n = 2; n <= t_nmax; ++n) {
          for (int trial = 0; trial < t_count; ++trial) {
            auto eng = engine_for(cfg.seed,
                                  mix_seed(static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(trial)));
            std::normal_distribution<double> g(0, 1);
            CMat rowsm(n, t_d);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < t_d; ++j) rowsm(i, j) = Complex(g(eng), g(eng));
            VectorTuple x(SequenceSpace(t_d, Exponent(2.0), ScalarField::Complex), rowsm);
            double mx = max_norm(x, cfg).value;
            double hb = hilbert_norm(x, cfg).value;
            TableRow row;
            row.cells = {{"n", std::to_string(n)},
                         {"d", std::to_string(t_d)},
                         {"trial", std::to_string(trial)},
                         {"ratio", num(hb > 0 ? mx / hb : 0)},
                         {"bound", num(bound)}};
            rows.push_back(std::move(row));
          }
        }
        emit_table_rows({"n", "d", "trial", "ratio", "bound"}, rows, format);
      }
    } else if (*ver_cmd) {
      auto suites = checks::run_suite(suite, cfg);
      bool all_ok = true;
      json out = json::array();
      for (const auto& s : suites) {
        if (!s.passed()) all_ok = false;
        json js{{"suite", s.name}, {"description", s.description}, {"passed", s.passed()}};
        json checks_json = json::array();
        for (const auto& c : s.checks) {
          checks_json.push_back(json{{"id", c.id},
                                     {"expected", c.expected},
                                     {"computed", c.computed},
                                     {"pass", c.pass},
                                     {"gating", c.gating},
                                     {"citation", c.citation}});
        }
        js["checks"] = std::move(checks_json);
        out.push_back(std::move(js));
      }
      emit(out);
      return all_ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
