#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsat/entanglement.hpp"
#include "qsat/generator.hpp"
#include "qsat/oracle.hpp"

using namespace qsat;

namespace {

std::set<VertexId> region(std::initializer_list<const char*> vs) {
  std::set<VertexId> s;
  for (const char* v : vs) s.insert(v);
  return s;
}

// All nonempty proper subsets of the vertex set (small n only).
std::vector<std::set<VertexId>> all_regions(const Hamiltonian& h) {
  std::vector<VertexId> order(h.vertices().begin(), h.vertices().end());
  const int n = static_cast<int>(order.size());
  std::vector<std::set<VertexId>> out;
  for (int mask = 1; mask + 1 < (1 << n); ++mask) {
    std::set<VertexId> s;
    for (int q = 0; q < n; ++q)
      if (mask & (1 << q)) s.insert(order[q]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<int> positions_of(const Hamiltonian& h, const std::set<VertexId>& a) {
  std::vector<VertexId> order(h.vertices().begin(), h.vertices().end());
  std::vector<int> pos;
  for (int q = 0; q < static_cast<int>(order.size()); ++q)
    if (a.count(order[q])) pos.push_back(q);
  return pos;
}

// Natural rank-2 term for hand-built lattices.
Matrix4 heavy_term(CounterRng& rng) {
  for (;;) {
    Vector4 k0, k1;
    for (int i = 0; i < 4; ++i) k0(i) = rng.next_complex_normal();
    k0 /= k0.norm();
    for (int i = 0; i < 4; ++i) k1(i) = rng.next_complex_normal();
    k1 -= k0.dot(k1) * k0;
    k1 /= k1.norm();
    Matrix4 t = Matrix4::Identity() - k0 * k0.adjoint() - k1 * k1.adjoint();
    if (classify_naturality(t).natural) return t;
  }
}

}  // namespace

TEST_CASE("subsystem reduction on single spins and pairs") {
  Hamiltonian xx = golden_examples().at("xx4cycle");

  auto single = reduce_subsystem(xx, region({"1"}));
  CHECK_FALSE(single.frustrated);
  REQUIRE(single.reduced_sizes.size() == 1);
  CHECK(single.reduced_sizes[0] == 1);
  CHECK(single.result.trace.steps.empty());

  auto pair = reduce_subsystem(xx, region({"3", "4"}));
  CHECK_FALSE(pair.frustrated);
  REQUIRE(pair.reduced_sizes.size() == 1);
  CHECK(pair.reduced_sizes[0] == 1);
  // one contraction; the cross terms now live on (2,3) and (1,3)
  CHECK(pair.result.network.nodes.size() == 1);
  CHECK(pair.result.h_c.two_spin_terms().count(Edge("2", "3")) == 1);
  CHECK(pair.result.h_c.two_spin_terms().count(Edge("1", "3")) == 1);
  CHECK(pair.result.h_c.two_spin_terms().count(Edge("1", "2")) == 1);
}

TEST_CASE("subsystem reduction preserves the global kernel dimension") {
  std::vector<Hamiltonian> models;
  models.push_back(golden_examples().at("xx4cycle"));
  models.push_back(planted_on_graph(chain_edges(5), 0x91).h);
  models.push_back(two_string_instance(cycle_edges(6), 0x92));
  for (const auto& h : models) {
    int dim0 = quick_verdict(build_full(h)).kernel_dim;
    for (const auto& a : all_regions(h)) {
      auto red = reduce_subsystem(h, a);
      REQUIRE_FALSE(red.frustrated);
      CHECK(quick_verdict(build_full(red.result.h_c)).kernel_dim == dim0);
    }
  }
}

TEST_CASE("schmidt_measure_bound dominates oracle Schmidt ranks everywhere") {
  std::vector<Hamiltonian> models;
  models.push_back(planted_on_graph(chain_edges(5), 0xa1).h);
  models.push_back(two_string_instance(grid_edges(2, 3), 0xa2));
  models.push_back(pinned_product_instance(chain_edges(6), 0xa3, 1, 0.5));
  models.push_back(golden_examples().at("xx4cycle"));

  for (const auto& h : models) {
    auto gd = ground_data(build_full(h));
    REQUIRE(gd.frustration_free);
    const int n = h.spin_count();
    for (const auto& a : all_regions(h)) {
      auto red = reduce_subsystem(h, a);
      REQUIRE_FALSE(red.frustrated);
      double bound = schmidt_measure_bound(red);
      auto pos = positions_of(h, a);
      for (Eigen::Index j = 0; j < gd.ground_basis.cols(); ++j) {
        int rank = schmidt_rank_across(gd.ground_basis.col(j), pos, n);
        CHECK(std::log2(static_cast<double>(rank)) <= bound + 1e-9);
      }
    }
  }
}

TEST_CASE("heavy_component_bound worked cases") {
  CounterRng rng(0xb1);

  // path a-b-c-d: heavy (a,b), light (b,c), heavy (c,d)
  Hamiltonian h;
  h.add_two_spin("a", "b", heavy_term(rng));
  h.add_two_spin("b", "c", Matrix4(projector(Vector4(singlet()))));
  h.add_two_spin("c", "d", heavy_term(rng));
  h.finalize();

  // all internal edges heavy for A = {a,b}: one heavy component, one e-bit
  CHECK(heavy_component_bound(h, region({"a", "b"})) == doctest::Approx(1.0));
  // two heavy clusters joined by a light edge
  CHECK(heavy_component_bound(h, region({"a", "b", "c", "d"})) ==
        doctest::Approx(std::log2(3.0)));
  // no heavy edges inside A = {b, c}? (b,c) is light: beta = 2 over one component
  CHECK(heavy_component_bound(h, region({"b", "c"})) == doctest::Approx(std::log2(3.0)));

  // no heavy edges at all: contiguous A in a planted chain
  auto planted = planted_on_graph(chain_edges(5), 0xb2).h;
  auto a = region({"0", "1", "2"});
  CHECK(heavy_component_bound(planted, a) == doctest::Approx(2.0));  // log2(3+1)

  // The heavy count upper-bounds the surviving spins (n~_j <= beta_j), so the
  // Schmidt-measure bound is always at least as tight.
  std::vector<Hamiltonian> models = {h, planted, two_string_instance(cycle_edges(5), 0xb3)};
  for (const auto& m : models)
    for (const auto& reg : all_regions(m)) {
      auto red = reduce_subsystem(m, reg);
      if (red.frustrated) continue;
      CHECK(schmidt_measure_bound(red) <= heavy_component_bound(m, reg) + 1e-9);
    }
}

TEST_CASE("log_law_bound equals the Schmidt bound on contiguous regions") {
  auto h = two_string_instance(grid_edges(2, 3), 0xc1);
  for (const auto& a : all_regions(h)) {
    auto bip = make_bipartition(h, a);
    auto red = reduce_subsystem(h, a);
    REQUIRE_FALSE(red.frustrated);
    if (bip.components.size() == 1) {
      CHECK(log_law_bound(bip, red) == doctest::Approx(schmidt_measure_bound(red)));
    } else {
      CHECK_THROWS_AS(log_law_bound(bip, red), Error);
    }
  }

  // fully deleted region: a pinned instance with the rank-3 edge inside A
  auto pinned = pinned_product_instance(chain_edges(4), 0xc2, 1, 0.0);
  std::set<VertexId> interior = region({"0", "1", "2"});
  auto redp = reduce_subsystem(pinned, interior);
  REQUIRE_FALSE(redp.frustrated);
  // if the rank-3 edge sits inside the region, the cascade deletes everything
  bool rank3_inside = false;
  for (const auto& [e, op] : pinned.two_spin_terms())
    if (operator_rank(op) == 3 && interior.count(e.a) && interior.count(e.b)) rank3_inside = true;
  if (rank3_inside) {
    CHECK(redp.reduced_sizes[0] == 0);
    CHECK(log_law_bound(make_bipartition(pinned, interior), redp) == doctest::Approx(0.0));
  }
}

TEST_CASE("lattice constants and the area law bound") {
  auto h = planted_on_graph(chain_edges(6), 0xd1).h;
  auto lc = fit_lattice_constants(h, 1.0, 5);
  CHECK(lc.k > 0.0);
  CHECK(lc.k <= 0.5);  // an interior interval of length >= 2 has alpha = 2

  for (const auto& a : {region({"1", "2"}), region({"0", "1", "2", "3"})}) {
    auto bip = make_bipartition(h, a);
    auto red = reduce_subsystem(h, a);
    double area = area_law_bound(bip, red, lc);
    CHECK(area <= schmidt_measure_bound(red) + 1e-12);
    CHECK(area <= bip.boundary_spins / lc.k + 1e-12);
  }

  // constants that violate alpha_j >= K n^c must be rejected
  LatticeConstants bogus{1.0, 10.0};
  auto bip = make_bipartition(h, region({"1", "2", "3"}));
  auto red = reduce_subsystem(h, region({"1", "2", "3"}));
  CHECK_THROWS_AS(area_law_bound(bip, red, bogus), Error);
}

TEST_CASE("grid constants stay valid across contiguous squares") {
  auto h = two_string_instance(grid_edges(3, 3), 0xe1);
  auto lc = fit_lattice_constants(h, 0.5, 6);
  // every contiguous region of size <= 6 satisfies alpha >= K sqrt(n)
  for (const auto& a : all_regions(h)) {
    if (a.size() > 6) continue;
    auto bip = make_bipartition(h, a);
    if (bip.components.size() != 1) continue;
    CHECK(bip.boundary_spins + 1e-12 >=
          lc.k * std::sqrt(static_cast<double>(a.size())));
  }
}

TEST_CASE("rank3_cascade_classify") {
  CHECK(rank3_cascade_classify(golden_examples().at("xx4cycle")).verdict ==
        CascadeClass::no_cascade);

  auto two = golden_examples().at("double-rank3");
  auto rep = rank3_cascade_classify(two);
  CHECK(rep.verdict == CascadeClass::frustrated);
  CHECK(rep.rank3_edges.size() == 2);
  CHECK(quick_verdict(build_full(two)).kernel_dim == 0);  // oracle agrees

  for (uint64_t seed : {0xf1u, 0xf2u, 0xf3u}) {
    auto one = generic_natural_instance(chain_edges(6), seed, 1, 0.3);
    CHECK(rank3_cascade_classify(one).verdict == CascadeClass::unique_ground_state);
    CHECK(quick_verdict(build_full(one)).kernel_dim <= 1);

    auto pinned_one = pinned_product_instance(cycle_edges(5), seed, 1, 0.3);
    CHECK(rank3_cascade_classify(pinned_one).verdict == CascadeClass::unique_ground_state);
    CHECK(quick_verdict(build_full(pinned_one)).kernel_dim == 1);
  }
}

TEST_CASE("analyze_bipartition assembles a consistent report") {
  auto h = two_string_instance(grid_edges(2, 3), 0xaa);
  auto lc = fit_lattice_constants(h, 0.5, 6);
  auto rep = analyze_bipartition(h, region({"r0c0", "r0c1"}), lc);
  CHECK_FALSE(rep.frustrated);
  CHECK(rep.schmidt_bound == doctest::Approx(1.0));  // one heavy pair contracts
  REQUIRE(rep.log_bound.has_value());
  CHECK(*rep.log_bound == doctest::Approx(rep.schmidt_bound));
  REQUIRE(rep.area_bound.has_value());
  CHECK(rep.schmidt_bound <= rep.heavy_bound + 1e-12);
}
