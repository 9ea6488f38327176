#include <doctest.h>

#include <random>

#include "asflab/typea.hpp"

using namespace asflab;

TEST_CASE("set partition enumeration matches Bell numbers") {
  CHECK(enumerate_levis(1).size() == 1);
  CHECK(enumerate_levis(2).size() == 2);
  CHECK(enumerate_levis(3).size() == 5);
  CHECK(enumerate_levis(4).size() == 15);
  // deterministic order, no duplicates
  auto l1 = enumerate_levis(4);
  auto l2 = enumerate_levis(4);
  CHECK(l1 == l2);
}

TEST_CASE("parabolic sets") {
  auto a2 = LeviPartition::torus(2);
  CHECK(parabolics_with_levi(a2).size() == 2);
  CHECK(parabolics_above(a2).size() == 3);

  auto a3 = LeviPartition::torus(3);
  CHECK(parabolics_with_levi(a3).size() == 6);
  CHECK(parabolics_above(a3).size() == 13);

  auto m = LeviPartition::from_key(3, "12|3");
  CHECK(parabolics_with_levi(m).size() == 2);
  auto ls = levis_above(m);
  CHECK(ls.size() == 2);
  CHECK(ls[0] == LeviPartition::group(3));
  CHECK(ls[1] == m);

  // F(M) decomposes as the union of P(L) over L above M
  size_t total = 0;
  for (const auto& l : levis_above(a3)) total += parabolics_with_levi(l).size();
  CHECK(total == parabolics_above(a3).size());
}

TEST_CASE("keys round trip") {
  auto m = LeviPartition::from_key(3, "13|2");
  CHECK(m.key() == "13|2");
  auto p = ParabolicChain::from_key(3, "3|12");
  CHECK(p.key() == "3|12");
  CHECK(p.levi().key() == "12|3");
}

TEST_CASE("simple data") {
  auto b2 = ParabolicChain::from_key(2, "1|2");
  auto sd = simple_data(b2);
  REQUIRE(sd.coroots.size() == 1);
  CHECK(sd.coroots[0].coords == std::vector<Rational>{1, -1});
  CHECK(sd.covol_sq == 2);

  auto p = ParabolicChain::from_key(3, "12|3");
  auto sdp = simple_data(p);
  REQUIRE(sdp.coroots.size() == 1);
  CHECK(sdp.coroots[0].coords == std::vector<Rational>{Rational(1, 2), Rational(1, 2), -1});
  CHECK(sdp.covol_sq == Rational(3, 2));

  auto b3 = ParabolicChain::from_key(3, "1|2|3");
  auto sdb = simple_data(b3);
  REQUIRE(sdb.coroots.size() == 2);
  CHECK(sdb.coroots[0].coords == std::vector<Rational>{1, -1, 0});
  CHECK(sdb.coroots[1].coords == std::vector<Rational>{0, 1, -1});
}

TEST_CASE("adjacency") {
  auto b = ParabolicChain::from_key(2, "1|2");
  auto bm = ParabolicChain::from_key(2, "2|1");
  auto beta = adjacency(b, bm);
  REQUIRE(beta.has_value());
  CHECK(beta->coords == std::vector<Rational>{1, -1});

  auto p1 = ParabolicChain::from_key(3, "1|2|3");
  auto p2 = ParabolicChain::from_key(3, "2|1|3");
  auto p3 = ParabolicChain::from_key(3, "3|2|1");
  auto b12 = adjacency(p1, p2);
  REQUIRE(b12.has_value());
  CHECK(b12->coords == std::vector<Rational>{1, -1, 0});
  CHECK(!adjacency(p1, p3).has_value());
}

TEST_CASE("coroot sum over positive roots is the rho-vector") {
  for (int n : {2, 3, 4}) {
    for (const auto& b : parabolics_with_levi(LeviPartition::torus(n))) {
      // sum e_i - e_j over pairs ordered by the chain
      std::vector<Rational> sum(size_t(n), 0);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          int ei = b.ordered_blocks()[size_t(i)][0];
          int ej = b.ordered_blocks()[size_t(j)][0];
          sum[size_t(ei - 1)] += 1;
          sum[size_t(ej - 1)] -= 1;
        }
      std::vector<Rational> sorted = sum;
      std::sort(sorted.begin(), sorted.end());
      std::vector<Rational> expect;
      for (int k = 0; k < n; ++k) expect.emplace_back(-(n - 1) + 2 * k);
      CHECK(sorted == expect);
    }
  }
}

TEST_CASE("theta coefficients") {
  auto a2 = LeviPartition::torus(2);
  auto g2 = LeviPartition::group(2);
  CHECK(theta_coefficient(a2, g2, a2) == 1);
  CHECK(theta_coefficient(a2, g2, g2) == 0);

  auto a3 = LeviPartition::torus(3);
  auto g3 = LeviPartition::group(3);
  auto l12 = LeviPartition::from_key(3, "12|3");
  auto l13 = LeviPartition::from_key(3, "13|2");
  auto l23 = LeviPartition::from_key(3, "1|23");
  CHECK(theta_coefficient(a3, l12, l12) == 0);  // spans overlap
  CHECK(theta_coefficient(a3, l12, l13) > 0);
  CHECK(theta_coefficient(a3, g3, a3) == 1);
  CHECK(theta_coefficient(a3, g3, l12) == 0);

  SUBCASE("symmetry and dimension condition") {
    auto levis = enumerate_levis(3);
    for (const auto& l : levis)
      for (const auto& lp : levis) {
        Rational t = theta_coefficient(a3, l, lp);
        CHECK(t == theta_coefficient(a3, lp, l));
        if (t != 0)
          CHECK((3 - l.num_blocks()) + (3 - lp.num_blocks()) == 2);
      }
  }
}

TEST_CASE("lattice and projection compatibility") {
  std::mt19937 rng(7);
  for (int n : {3, 4}) {
    auto a = LeviPartition::torus(n);
    long factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= k;
    for (const auto& l : enumerate_levis(n)) {
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> coords;
        for (int i = 0; i < n; ++i) coords.emplace_back((long)(rng() % 13) - 6);
        AMVector lam(a, coords);
        REQUIRE(lam.in_lambda());
        // pi_L(Lambda_A) lands in (1/(d+1)!) Lambda_L
        auto proj = lam.project(l).scaled(factorial);
        CHECK(proj.in_lambda());
      }
      // Lambda_L sits inside pi_L(Lambda_A): block-sum patterns are realized
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Rational> coords(static_cast<size_t>(n));
        for (const auto& blk : l.blocks()) {
          Rational v = Rational((long)(rng() % 9) - 4, (long)blk.size());
          for (int e : blk) coords[size_t(e - 1)] = v;
        }
        AMVector mu(l, coords);
        REQUIRE(mu.in_lambda());
        // lift: block value * size integers placed on the first coordinate
        std::vector<Rational> lift(size_t(n), 0);
        for (const auto& blk : l.blocks())
          lift[size_t(blk[0] - 1)] = coords[size_t(blk[0] - 1)] * (long)blk.size();
        AMVector lam(a, lift);
        CHECK(lam.in_lambda());
        CHECK(lam.project(l) == mu);
      }
    }
  }
}

TEST_CASE("AMVector block membership") {
  auto m = LeviPartition::from_key(3, "12|3");
  AMVector v(m, {Rational(1, 2), Rational(1, 2), Rational(3)});
  CHECK(v.in_lambda());
  AMVector w(m, {Rational(1, 3), Rational(1, 3), Rational(0)});
  CHECK(!w.in_lambda());
  CHECK_THROWS_AS(AMVector(m, {Rational(1), Rational(2), Rational(0)}), computation_error);
}
