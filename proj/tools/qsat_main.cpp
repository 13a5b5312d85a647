// Command-line surface: frustration checks, reductions, ground-space queries,
// entanglement bounds, percolation statistics, variational energies, instance
// generation and the ED oracle.
//
// Exit codes: 0 success, 1 frustrated input where an unfrustrated one was
// required, 2 input error, 3 oracle verification mismatch.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsat/entanglement.hpp"
#include "qsat/generator.hpp"
#include "qsat/ground_space.hpp"
#include "qsat/io.hpp"
#include "qsat/oracle.hpp"
#include "qsat/percolation.hpp"
#include "qsat/variational.hpp"

namespace {

using namespace qsat;

constexpr int kExitOk = 0;
constexpr int kExitFrustrated = 1;
constexpr int kExitInput = 2;
constexpr int kExitVerify = 3;

int verify_cap() {
  if (const char* env = std::getenv("QSAT_VERIFY_MAX_SPINS")) return std::atoi(env);
  return 14;
}

long completed_kernel_dim(const Hamiltonian& h_c) {
  long dim = 1;
  for (const auto& comp : connected_components(h_c)) dim *= static_cast<long>(comp.size()) + 1;
  return dim;
}

int cmd_check(const std::string& model_path, const std::string& trace_out, bool verify) {
  Hamiltonian h = load_hamiltonian(model_path);
  auto res = reduce_to_complete(h);
  if (res.frustrated) {
    std::string where;
    if (res.witness && res.witness->vertex)
      where = "full-rank single-spin term on " + *res.witness->vertex;
    else if (res.witness && res.witness->edge)
      where = "full-rank term on (" + res.witness->edge->a + "," + res.witness->edge->b + ")";
    std::cout << "FRUSTRATED (" << where << ")\n";
  } else {
    std::cout << "UNFRUSTRATED, dim ker = " << completed_kernel_dim(res.h_c) << "\n";
  }
  if (!trace_out.empty()) write_json(trace_out, reduction_result_to_json(res));
  if (verify && h.spin_count() <= verify_cap()) {
    auto oracle = quick_verdict(build_full(h, verify_cap()));
    bool match = oracle.frustration_free == !res.frustrated &&
                 (res.frustrated || oracle.kernel_dim == completed_kernel_dim(res.h_c));
    if (!match) {
      std::cerr << "verification mismatch: oracle says "
                << (oracle.frustration_free ? "unfrustrated" : "frustrated") << ", dim "
                << oracle.kernel_dim << "\n";
      return kExitVerify;
    }
  }
  return kExitOk;
}

int cmd_reduce(const std::string& model_path, const std::string& out, bool randomize,
               uint64_t seed) {
  Hamiltonian h = load_hamiltonian(model_path);
  ReduceOptions opts;
  opts.randomize_order = randomize;
  opts.order_seed = seed;
  auto res = reduce_to_complete(h, opts);
  write_json(out, reduction_result_to_json(res));
  std::cout << (res.frustrated ? "frustrated" : "reduced") << ", steps = " << res.trace.steps.size()
            << ", surviving spins = " << res.h_c.spin_count() << "\n";
  return kExitOk;
}

int cmd_ground(const std::string& model_path, const std::string& out, bool verify) {
  Hamiltonian h = load_hamiltonian(model_path);
  auto res = reduce_to_complete(h);
  if (res.frustrated) {
    std::cerr << "input is frustrated: the ground manifold machinery does not apply\n";
    return kExitFrustrated;
  }
  long dim = completed_kernel_dim(res.h_c);
  Json j;
  j["dim_ker"] = dim;
  j["surviving_spins"] = res.network.free_inputs;
  if (connected_components(res.h_c).size() <= 1) {
    auto gauge = solve_gauge(res.h_c);
    auto basis = product_basis(res.h_c, gauge);
    Json jb = Json::array();
    for (int k = 0; k < basis.dim(); ++k) {
      Json sites = Json::array();
      for (const auto& s : basis.site_states[k])
        sites.push_back({{s(0).real(), s(0).imag()}, {s(1).real(), s(1).imag()}});
      jb.push_back(sites);
    }
    j["product_basis"] = std::move(jb);
  }
  std::cout << j.dump(2) << "\n";
  if (!out.empty()) write_json(out, j);
  if (verify && h.spin_count() <= verify_cap()) {
    auto oracle = quick_verdict(build_full(h, verify_cap()));
    if (!oracle.frustration_free || oracle.kernel_dim != dim) {
      std::cerr << "verification mismatch: oracle dim " << oracle.kernel_dim << "\n";
      return kExitVerify;
    }
  }
  return kExitOk;
}

int cmd_expect(const std::string& model_path, const std::string& obs_path, bool verify) {
  Hamiltonian h = load_hamiltonian(model_path);
  LocalObservable obs = load_observable(obs_path);
  auto res = reduce_to_complete(h);
  if (res.frustrated) {
    std::cerr << "input is frustrated: no ground manifold\n";
    return kExitFrustrated;
  }
  double value = expectation_ground_manifold(h, res, obs);
  Json j;
  j["value"] = value;
  std::cout << j.dump(2) << "\n";
  if (verify && h.spin_count() <= verify_cap()) {
    auto gd = ground_data(build_full(h, verify_cap()));
    std::vector<VertexId> order(h.vertices().begin(), h.vertices().end());
    double oracle = ground_manifold_expectation(gd, order, obs.matrix, obs.support);
    if (std::abs(oracle - value) > 1e-8) {
      std::cerr << "verification mismatch: oracle " << oracle << " vs " << value << "\n";
      return kExitVerify;
    }
  }
  return kExitOk;
}

std::set<VertexId> parse_region(const Hamiltonian& h, const std::string& region_path,
                                const std::string& rect) {
  std::set<VertexId> a;
  if (!region_path.empty()) {
    Json j = load_json(region_path);
    for (const auto& v : j) a.insert(v.get<std::string>());
    return a;
  }
  // rectangular shorthand r0:r1,c0:c1 over grid vertex names rXcY
  int r0, r1, c0, c1;
  if (std::sscanf(rect.c_str(), "%d:%d,%d:%d", &r0, &r1, &c0, &c1) != 4)
    fail(ErrorCode::InvalidInput, "rectangle must be r0:r1,c0:c1");
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) {
      VertexId v = "r" + std::to_string(r) + "c" + std::to_string(c);
      if (!h.has_vertex(v)) fail(ErrorCode::InvalidInput, "rectangle leaves the lattice at " + v);
      a.insert(v);
    }
  return a;
}

int cmd_entangle(const std::string& model_path, const std::string& region_path,
                 const std::string& rect, double c_exp, double k_const, bool fit, int fit_cap,
                 const std::string& out) {
  Hamiltonian h = load_hamiltonian(model_path);
  auto region = parse_region(h, region_path, rect);

  std::optional<LatticeConstants> lc;
  if (fit)
    lc = fit_lattice_constants(h, c_exp, fit_cap);
  else if (k_const > 0.0)
    lc = LatticeConstants{c_exp, k_const};

  auto rep = analyze_bipartition(h, region, lc);

  std::cout << "region size      : " << rep.bipartition.a.size() << "\n";
  std::cout << "components       : " << rep.bipartition.components.size() << "\n";
  std::cout << "boundary edges   : " << rep.bipartition.boundary.size() << "\n";
  std::cout << "boundary spins   : " << rep.bipartition.boundary_spins << "\n";
  if (rep.frustrated) {
    std::cout << "verdict          : frustrated region (full-rank term)\n";
  } else {
    std::cout << "reduced sizes    :";
    for (int n : rep.reduced_sizes) std::cout << " " << n;
    std::cout << "\n";
    std::cout << "schmidt bound    : " << rep.schmidt_bound << " e-bits\n";
    std::cout << "heavy bound      : " << rep.heavy_bound << " e-bits\n";
    if (rep.log_bound) std::cout << "log bound        : " << *rep.log_bound << " e-bits\n";
    if (rep.area_bound)
      std::cout << "area bound       : " << *rep.area_bound << " e-bits (c = " << rep.constants->c
                << ", K = " << rep.constants->k << ")\n";
  }

  Json j;
  j["region"] = Json::array();
  for (const auto& v : rep.bipartition.a) j["region"].push_back(v);
  j["boundary_edges"] = rep.bipartition.boundary.size();
  j["boundary_spins"] = rep.bipartition.boundary_spins;
  j["frustrated"] = rep.frustrated;
  if (!rep.frustrated) {
    j["reduced_sizes"] = rep.reduced_sizes;
    j["schmidt_bound"] = rep.schmidt_bound;
    j["heavy_bound"] = rep.heavy_bound;
    if (rep.log_bound) j["log_bound"] = *rep.log_bound;
    if (rep.area_bound) {
      j["area_bound"] = *rep.area_bound;
      j["constants"] = {{"c", rep.constants->c}, {"k", rep.constants->k}};
    }
  }
  if (!out.empty())
    write_json(out, j);
  else
    std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_percolate(int dimension, const std::vector<int>& sides, double p, int trials,
                  uint64_t seed, bool periodic, const std::string& csv_path,
                  bool scan_threshold) {
  auto report = monte_carlo_scaling(dimension, p, sides, trials, seed, periodic, !csv_path.empty());

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) fail(ErrorCode::InvalidInput, "cannot write " + csv_path);
    csv << "L,trial,clusters,largest,bound\n";
    for (const auto& r : report.records)
      csv << r.side << "," << r.trial << "," << r.cluster_count << "," << r.largest_cluster << ","
          << r.bound << "\n";
  }

  Json j;
  j["dimension"] = report.dimension;
  j["p"] = report.p;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["points"] = Json::array();
  for (const auto& pt : report.points)
    j["points"].push_back({{"L", pt.side},
                           {"n", pt.vertex_count},
                           {"kappa_hat", pt.kappa_hat},
                           {"kappa_se", pt.kappa_se},
                           {"theta_hat", pt.theta_hat},
                           {"theta_se", pt.theta_se},
                           {"bound_hat", pt.bound_hat},
                           {"bound_se", pt.bound_se}});
  j["fit"] = {{"log_coefficient", report.fit_log_coefficient},
              {"linear_coefficient", report.fit_linear_coefficient}};
  if (scan_threshold) {
    std::vector<double> grid;
    for (double q = 0.30; q <= 0.7001; q += 0.025) grid.push_back(q);
    j["threshold_estimate"] = estimate_threshold(dimension, sides.back(), grid, trials, seed);
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_variational(const std::string& h0_path, const std::string& h1_path, double lambda,
                    bool verify) {
  Hamiltonian h0 = load_hamiltonian(h0_path);
  Hamiltonian h1 = load_hamiltonian(h1_path, Hamiltonian::Normalize::no);
  PerturbedProblem prob{h0, h1, lambda};
  VariationalResult res;
  try {
    res = variational_energy(prob);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FrustratedInput) {
      std::cerr << "H0 is frustrated: " << e.what() << "\n";
      return kExitFrustrated;
    }
    throw;
  }
  Json j;
  j["energy"] = res.energy;
  j["manifold_dim"] = res.manifold_dim;
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i < res.coefficients.size(); ++i)
    coeffs.push_back({res.coefficients(i).real(), res.coefficients(i).imag()});
  j["coefficients"] = std::move(coeffs);
  std::cout << j.dump(2) << "\n";

  if (verify && h0.spin_count() <= verify_cap()) {
    auto d0 = build_full(h0, verify_cap());
    Hamiltonian h1v = h1;
    for (const auto& v : h0.vertices()) h1v.add_vertex(v);
    auto d1 = build_full(h1v, verify_cap());
    DenseHamiltonian total = d0;
    total.matrix += lambda * d1.matrix;
    double e0 = ground_energy(total);
    if (res.energy < e0 - 1e-9) {
      std::cerr << "verification mismatch: variational " << res.energy << " below oracle " << e0
                << "\n";
      return kExitVerify;
    }
  }
  return kExitOk;
}

int cmd_generate(const std::string& family, const std::string& graph, int n, int rows, int cols,
                 uint64_t seed, int rank3, double rank2_frac, int core, int growth,
                 const std::string& name, const std::string& out) {
  std::vector<Edge> edges;
  if (graph == "chain")
    edges = chain_edges(n);
  else if (graph == "cycle")
    edges = cycle_edges(n);
  else if (graph == "complete")
    edges = complete_edges(n);
  else if (graph == "grid")
    edges = grid_edges(rows, cols);
  else
    fail(ErrorCode::InvalidInput, "unknown graph shape " + graph);

  Hamiltonian h;
  std::string note;
  if (family == "planted") {
    auto inst = planted_on_graph(edges, seed);
    h = inst.h;
    note = "dim ker = " + std::to_string(inst.kernel_dim);
  } else if (family == "two-string") {
    h = two_string_instance(edges, seed);
    note = "dim ker = 2";
  } else if (family == "pinned") {
    h = pinned_product_instance(edges, seed, rank3, rank2_frac);
  } else if (family == "generic") {
    h = generic_natural_instance(edges, seed, rank3, rank2_frac);
  } else if (family == "reverse-network") {
    auto inst = reverse_network_instance({core, growth, graph == "chain"}, seed);
    h = inst.h;
    note = "dim ker = " + std::to_string(inst.kernel_dim);
  } else if (family == "golden") {
    auto models = golden_examples();
    if (!models.count(name)) fail(ErrorCode::InvalidInput, "unknown golden model " + name);
    h = models.at(name);
  } else {
    fail(ErrorCode::InvalidInput, "unknown family " + family);
  }

  write_json(out, hamiltonian_to_json(h));
  std::cout << "wrote " << out << ": " << h.spin_count() << " spins, "
            << h.two_spin_terms().size() << " two-spin terms";
  if (!note.empty()) std::cout << " (" << note << ")";
  std::cout << "\n";
  return kExitOk;
}

int cmd_oracle(const std::string& model_path) {
  Hamiltonian h = load_hamiltonian(model_path);
  auto v = quick_verdict(build_full(h, verify_cap()));
  Json j;
  j["e0"] = v.e0;
  j["kernel_dim"] = v.kernel_dim;
  j["frustration_free"] = v.frustration_free;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frustration-free spin-1/2 Hamiltonians: reductions, ground spaces, bounds"};
  app.require_subcommand(1);

  std::string model, obs, out, region, rect = "", h0path, h1path, family = "planted",
                     graph = "chain", name = "xx4cycle", csv;
  bool verify = false, randomize = false, periodic = false, fit = false, scan = false;
  uint64_t seed = 0;
  double lambda = 0.0, p = 0.5, c_exp = 1.0, k_const = 0.0, rank2_frac = 0.3;
  int n = 6, rows = 3, cols = 3, trials = 100, dimension = 2, rank3 = 0, core = 1, growth = 0,
      fit_cap = 6;
  std::vector<int> sides = {16};

  auto* check = app.add_subcommand("check", "frustration verdict for a model");
  check->add_option("model", model)->required();
  check->add_option("-o,--trace", out, "write the reduction result JSON here");
  check->add_flag("--verify", verify, "cross-check against the ED oracle");

  auto* reduce = app.add_subcommand("reduce", "reduce to a complete homogeneous Hamiltonian");
  reduce->add_option("model", model)->required();
  reduce->add_option("-o,--out", out)->required();
  reduce->add_flag("--randomize", randomize, "randomized reduction order");
  reduce->add_option("--seed", seed, "order seed when randomized");

  auto* ground = app.add_subcommand("ground", "ground-space dimension and product basis");
  ground->add_option("model", model)->required();
  ground->add_option("-o,--out", out);
  ground->add_flag("--verify", verify);

  auto* expect = app.add_subcommand("expect", "ground-manifold expectation of an observable");
  expect->add_option("model", model)->required();
  expect->add_option("observable", obs)->required();
  expect->add_flag("--verify", verify);

  auto* entangle = app.add_subcommand("entangle", "entanglement bounds for a region");
  entangle->add_option("model", model)->required();
  entangle->add_option("--region", region, "JSON list of vertices");
  entangle->add_option("--rect", rect, "grid shorthand r0:r1,c0:c1");
  entangle->add_option("--c", c_exp, "boundary exponent");
  entangle->add_option("--k", k_const, "boundary constant (skip fitting)");
  entangle->add_flag("--fit-constants", fit, "fit K by enumerating connected subsets");
  entangle->add_option("--fit-cap", fit_cap, "subset size cap for fitting");
  entangle->add_option("-o,--out", out, "write the JSON report here");

  auto* percolate = app.add_subcommand("percolate", "random product/entangled lattice statistics");
  percolate->add_option("-d,--dimension", dimension);
  percolate->add_option("-L,--sides", sides, "lattice sides, e.g. -L 16 32 64");
  percolate->add_option("-p,--prob", p, "entangled-edge probability");
  percolate->add_option("--trials", trials);
  percolate->add_option("--seed", seed);
  percolate->add_flag("--periodic", periodic);
  percolate->add_option("--csv", csv, "write per-trial CSV here");
  percolate->add_flag("--threshold-scan", scan, "estimate the percolation threshold");

  auto* variational = app.add_subcommand("variational", "variational energy over the manifold");
  variational->add_option("--h0", h0path)->required();
  variational->add_option("--h1", h1path)->required();
  variational->add_option("--lambda", lambda)->required();
  variational->add_flag("--verify", verify);

  auto* generate = app.add_subcommand("generate", "write generated models");
  generate->add_option("--family", family,
                       "planted | two-string | pinned | generic | reverse-network | golden");
  generate->add_option("--graph", graph, "chain | cycle | complete | grid");
  generate->add_option("-n,--spins", n);
  generate->add_option("--rows", rows);
  generate->add_option("--cols", cols);
  generate->add_option("--seed", seed);
  generate->add_option("--rank3", rank3);
  generate->add_option("--rank2-frac", rank2_frac);
  generate->add_option("--core", core);
  generate->add_option("--growth", growth);
  generate->add_option("--name", name, "golden model name");
  generate->add_option("-o,--out", out)->required();

  auto* oracle = app.add_subcommand("oracle", "dense ED ground data");
  oracle->add_option("model", model)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(model, out, verify);
    if (reduce->parsed()) return cmd_reduce(model, out, randomize, seed);
    if (ground->parsed()) return cmd_ground(model, out, verify);
    if (expect->parsed()) return cmd_expect(model, obs, verify);
    if (entangle->parsed())
      return cmd_entangle(model, region, rect, c_exp, k_const, fit, fit_cap, out);
    if (percolate->parsed())
      return cmd_percolate(dimension, sides, p, trials, seed, periodic, csv, scan);
    if (variational->parsed()) return cmd_variational(h0path, h1path, lambda, verify);
    if (generate->parsed())
      return cmd_generate(family, graph, n, rows, cols, seed, rank3, rank2_frac, core, growth,
                          name, out);
    if (oracle->parsed()) return cmd_oracle(model);
  } catch (const qsat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
