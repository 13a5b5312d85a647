#include "qsat/io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace qsat {

namespace {

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols)
    fail(ErrorCode::InvalidInput, "matrix entry count mismatch");
  ComplexMatrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++k) {
      const Json& z = j.at(k);
      if (!z.is_array() || z.size() != 2)
        fail(ErrorCode::InvalidInput, "matrix entries are [re, im] pairs");
      m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
    }
  return m;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ComplexVector vector_from_json(const Json& j, Eigen::Index size) {
  ComplexMatrix m = matrix_from_json(j, size, 1);
  return m.col(0);
}

}  // namespace

Json hamiltonian_to_json(const Hamiltonian& h) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : h.vertices()) j["vertices"].push_back(v);
  j["edges"] = Json::array();
  for (const auto& [e, op] : h.two_spin_terms())
    j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"matrix", matrix_to_json(op)}});
  j["singles"] = Json::array();
  for (const auto& [v, op] : h.single_spin_terms())
    j["singles"].push_back({{"v", v}, {"matrix", matrix_to_json(op)}});
  return j;
}

Hamiltonian hamiltonian_from_json(const Json& j, Hamiltonian::Normalize mode) {
  Hamiltonian h;
  if (!j.is_object() || !j.contains("vertices"))
    fail(ErrorCode::InvalidInput, "model must be an object with a vertices list");
  for (const auto& v : j.at("vertices")) h.add_vertex(v.get<std::string>());
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) {
      std::string a = e.at("a").get<std::string>();
      std::string b = e.at("b").get<std::string>();
      if (!h.has_vertex(a) || !h.has_vertex(b))
        fail(ErrorCode::InvalidInput, "edge references missing vertex (" + a + "," + b + ")");
      Matrix4 op = matrix_from_json(e.at("matrix"), 4, 4);
      require_hermitian(op);
      h.add_two_spin(a, b, op);
    }
  if (j.contains("singles"))
    for (const auto& s : j.at("singles")) {
      std::string v = s.at("v").get<std::string>();
      if (!h.has_vertex(v)) fail(ErrorCode::InvalidInput, "single references missing vertex " + v);
      Matrix2 op = matrix_from_json(s.at("matrix"), 2, 2);
      require_hermitian(op);
      h.add_single_spin(v, op);
    }
  h.finalize(mode);
  return h;
}

Json observable_to_json(const LocalObservable& obs) {
  Json j;
  j["support"] = obs.support;
  j["matrix"] = matrix_to_json(obs.matrix);
  return j;
}

LocalObservable observable_from_json(const Json& j) {
  LocalObservable obs;
  for (const auto& v : j.at("support")) obs.support.push_back(v.get<std::string>());
  if (!std::is_sorted(obs.support.begin(), obs.support.end()))
    fail(ErrorCode::InvalidInput, "observable support must be sorted");
  const Eigen::Index dim = Eigen::Index{1} << obs.support.size();
  obs.matrix = matrix_from_json(j.at("matrix"), dim, dim);
  require_hermitian(obs.matrix);
  return obs;
}

Json trace_to_json(const ReductionTrace& trace) {
  Json steps = Json::array();
  for (const auto& step : trace.steps) {
    Json s;
    std::visit(
        [&s](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, TwoSpinContraction>) {
            s["kind"] = "contract";
            s["edge"] = {x.edge.a, x.edge.b};
            s["survivor"] = x.survivor;
            s["removed"] = x.removed;
            s["isometry"] = matrix_to_json(x.isometry);
          } else if constexpr (std::is_same_v<T, SpinDeletion>) {
            s["kind"] = "delete";
            s["vertex"] = x.vertex;
            s["state"] = vector_to_json(x.state);
          } else if constexpr (std::is_same_v<T, ConstraintInduction>) {
            s["kind"] = "induce";
            s["a"] = x.a;
            s["b"] = x.b;
            s["c"] = x.c;
            s["beta"] = vector_to_json(x.beta);
          } else if constexpr (std::is_same_v<T, TermAccumulation>) {
            s["kind"] = "accumulate";
            s["edge"] = {x.edge.a, x.edge.b};
            s["beta"] = vector_to_json(x.beta);
            s["colinear"] = x.colinear;
            s["rank"] = x.resulting_rank;
          } else if constexpr (std::is_same_v<T, Substitution>) {
            s["kind"] = "substitute";
            s["edge"] = {x.edge.a, x.edge.b};
            s["vertex"] = x.vertex;
            s["matrix"] = matrix_to_json(x.op);
          }
        },
        step);
    steps.push_back(std::move(s));
  }
  return steps;
}

ReductionTrace trace_from_json(const Json& j) {
  ReductionTrace trace;
  for (const auto& s : j) {
    std::string kind = s.at("kind").get<std::string>();
    if (kind == "contract") {
      TwoSpinContraction c;
      c.edge = Edge(s.at("edge").at(0).get<std::string>(), s.at("edge").at(1).get<std::string>());
      c.survivor = s.at("survivor").get<std::string>();
      c.removed = s.at("removed").get<std::string>();
      c.isometry = matrix_from_json(s.at("isometry"), 4, 2);
      trace.steps.push_back(std::move(c));
    } else if (kind == "delete") {
      SpinDeletion d;
      d.vertex = s.at("vertex").get<std::string>();
      d.state = Vector2(vector_from_json(s.at("state"), 2));
      trace.steps.push_back(std::move(d));
    } else if (kind == "induce") {
      ConstraintInduction i;
      i.a = s.at("a").get<std::string>();
      i.b = s.at("b").get<std::string>();
      i.c = s.at("c").get<std::string>();
      i.beta = Vector4(vector_from_json(s.at("beta"), 4));
      trace.steps.push_back(std::move(i));
    } else if (kind == "accumulate") {
      TermAccumulation t;
      t.edge = Edge(s.at("edge").at(0).get<std::string>(), s.at("edge").at(1).get<std::string>());
      t.beta = Vector4(vector_from_json(s.at("beta"), 4));
      t.colinear = s.at("colinear").get<bool>();
      t.resulting_rank = s.at("rank").get<int>();
      trace.steps.push_back(std::move(t));
    } else if (kind == "substitute") {
      Substitution sub;
      sub.edge =
          Edge(s.at("edge").at(0).get<std::string>(), s.at("edge").at(1).get<std::string>());
      sub.vertex = s.at("vertex").get<std::string>();
      sub.op = Matrix2(matrix_from_json(s.at("matrix"), 2, 2));
      trace.steps.push_back(std::move(sub));
    } else {
      fail(ErrorCode::InvalidInput, "unknown trace step kind: " + kind);
    }
  }
  return trace;
}

Json reduction_result_to_json(const ReductionResult& r) {
  Json j;
  j["frustrated"] = r.frustrated;
  if (r.witness) {
    Json w;
    if (r.witness->vertex) w["vertex"] = *r.witness->vertex;
    if (r.witness->edge) w["edge"] = {r.witness->edge->a, r.witness->edge->b};
    w["trace_prefix"] = r.witness->trace_prefix;
    j["witness"] = std::move(w);
  }
  j["h_c"] = hamiltonian_to_json(r.h_c);
  j["trace"] = trace_to_json(r.trace);
  j["free_inputs"] = r.network.free_inputs;
  j["original_vertices"] = r.network.original_vertices;
  return j;
}

ReductionResult reduction_result_from_json(const Json& j) {
  ReductionResult r;
  r.frustrated = j.at("frustrated").get<bool>();
  if (j.contains("witness")) {
    FrustrationWitness w;
    if (j.at("witness").contains("vertex")) w.vertex = j.at("witness").at("vertex");
    if (j.at("witness").contains("edge"))
      w.edge = Edge(j.at("witness").at("edge").at(0).get<std::string>(),
                    j.at("witness").at("edge").at(1).get<std::string>());
    w.trace_prefix = j.at("witness").at("trace_prefix").get<std::size_t>();
    r.witness = std::move(w);
  }
  r.h_c = hamiltonian_from_json(j.at("h_c"), Hamiltonian::Normalize::no);
  r.trace = trace_from_json(j.at("trace"));
  for (const auto& v : j.at("free_inputs")) r.network.free_inputs.push_back(v.get<std::string>());
  for (const auto& v : j.at("original_vertices"))
    r.network.original_vertices.push_back(v.get<std::string>());
  for (const auto& step : r.trace.steps) {
    if (std::holds_alternative<TwoSpinContraction>(step))
      r.network.nodes.push_back(std::get<TwoSpinContraction>(step));
    else if (std::holds_alternative<SpinDeletion>(step))
      r.network.nodes.push_back(std::get<SpinDeletion>(step));
  }
  return r;
}

Hamiltonian load_hamiltonian(const std::string& path, Hamiltonian::Normalize mode) {
  return hamiltonian_from_json(load_json(path), mode);
}

LocalObservable load_observable(const std::string& path) {
  return observable_from_json(load_json(path));
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidInput, "cannot write " + path);
  out << j.dump(2) << "\n";
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidInput, "cannot read " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return j;
}

}  // namespace qsat
