#include "doctest.h"

#include <vector>

#include "rsid/generators.hpp"
#include "rsid/rng.hpp"

using rsid::Graph;

TEST_CASE("small world without rewiring is the plain ring") {
  rsid::Rng rng(1);
  const Graph c6 = rsid::generate_small_world(6, 2, 0.0, rng);
  CHECK(c6.node_count() == 6);
  CHECK(c6.edge_count() == 6);
  for (int v = 0; v < 6; ++v) {
    CHECK(c6.degree(v) == 2);
    CHECK(c6.has_edge(v, (v + 1) % 6));
  }

  const Graph ring = rsid::generate_small_world(10, 4, 0.0, rng);
  CHECK(ring.edge_count() == 20);
  for (int v = 0; v < 10; ++v) {
    CHECK(ring.degree(v) == 4);
    for (int w : ring.neighbors(v)) {
      const int d = std::min((w - v + 10) % 10, (v - w + 10) % 10);
      CHECK(d <= 2);
    }
  }
}

TEST_CASE("watts-strogatz rewiring keeps the edge count and is seed-stable") {
  rsid::Rng rng_a(42);
  const Graph a = rsid::generate_small_world(100, 4, 0.1, rng_a);
  CHECK(a.node_count() == 100);
  CHECK(a.edge_count() == 200); // n*k/2 preserved by rewiring
  double mean_degree = 0.0;
  for (int v = 0; v < 100; ++v) mean_degree += a.degree(v);
  CHECK(mean_degree / 100.0 == doctest::Approx(4.0));

  rsid::Rng rng_b(42);
  const Graph b = rsid::generate_small_world(100, 4, 0.1, rng_b);
  CHECK(a.edges() == b.edges());

  rsid::Rng rng_c(43);
  const Graph c = rsid::generate_small_world(100, 4, 0.1, rng_c);
  CHECK(a.edges() != c.edges());

  for (double beta : {0.0, 0.3, 1.0}) {
    rsid::Rng r(7);
    CHECK(rsid::generate_small_world(40, 6, beta, r).edge_count() == 120);
  }
}

TEST_CASE("small world parameter validation") {
  rsid::Rng rng(1);
  CHECK_THROWS_AS(rsid::generate_small_world(10, 3, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(rsid::generate_small_world(10, 0, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(rsid::generate_small_world(4, 4, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(rsid::generate_small_world(10, 4, 1.5, rng), std::invalid_argument);
}

TEST_CASE("lattice") {
  const Graph c4 = rsid::generate_lattice(2, 2);
  CHECK(c4.node_count() == 4);
  CHECK(c4.edge_count() == 4);
  for (int v = 0; v < 4; ++v) CHECK(c4.degree(v) == 2);

  const Graph g33 = rsid::generate_lattice(3, 3);
  CHECK(g33.node_count() == 9);
  CHECK(g33.edge_count() == 12);
  CHECK(g33.degree(0) == 2);  // corner
  CHECK(g33.degree(4) == 4);  // center

  const Graph big = rsid::generate_lattice(20, 20);
  CHECK(big.node_count() == 400);
  CHECK(big.edge_count() == 20 * 19 + 20 * 19);

  CHECK_THROWS_AS(rsid::generate_lattice(1, 5), std::invalid_argument);
}
