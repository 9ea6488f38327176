#include <doctest.h>

#include <numeric>

#include <random>

#include "asflab/valuation.hpp"

using namespace asflab;

namespace {

GammaSpec diag(long q, long prec, const std::vector<std::vector<std::pair<long, long>>>& terms) {
  GammaSpec g;
  g.q = q;
  g.prec = prec;
  for (const auto& entry : terms) {
    FqSeries s = FqSeries::zero(q, prec);
    for (auto [e, c] : entry) s = s + FqSeries::monomial(q, e, c, prec);
    g.entries.push_back(s);
  }
  return g;
}

bool min_rule(const std::map<std::pair<int, int>, long>& r, const RootValuationDatum& d) {
  int n = (int)d.w.size();
  for (int i = 0; i < n - 1; ++i) {
    long m = d.n[size_t(i)];
    for (int j = i; j < n - 1; ++j) {
      m = std::min(m, d.n[size_t(j)]);
      if (r.at({d.w[size_t(i)], d.w[size_t(j + 1)]}) != m) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("FqSeries arithmetic") {
  FqSeries a = FqSeries::monomial(5, 1, 1, 10);       // eps
  FqSeries b = FqSeries::monomial(5, 1, 2, 10);       // 2 eps
  FqSeries c = FqSeries::monomial(5, 2, 1, 10);       // eps^2
  CHECK((a - b).valuation() == 1);
  CHECK((a + a + a + b).is_zero_known());              // 5 eps = 0
  CHECK((a * c).valuation() == 3);
  CHECK((a + c - a).valuation() == 2);
  auto d = (a * b).divided_by(a);
  CHECK(d == b.truncated(d.prec()));

  // exact division by a multi-term divisor of negative valuation
  FqSeries u = FqSeries::monomial(5, -4, 2, 40) + FqSeries::monomial(5, -3, 1, 40) +
               FqSeries::monomial(5, -2, 2, 40);
  FqSeries w = FqSeries::monomial(5, -1, 1, 40) + FqSeries::monomial(5, 2, 3, 40);
  auto quot = (u * w).divided_by(u);
  CHECK(quot == w.truncated(quot.prec()));
  auto quot2 = (u * w).divided_by(w);
  CHECK(quot2 == u.truncated(quot2.prec()));
}

TEST_CASE("root_valuation examples") {
  // diag(eps, 2 eps, eps + eps^2) over F_5
  auto g = diag(5, 10, {{{1, 1}}, {{1, 2}}, {{1, 1}, {2, 1}}});
  auto r = root_valuation(g);
  CHECK(r.at({1, 2}) == 1);
  CHECK(r.at({1, 3}) == 2);
  CHECK(r.at({2, 3}) == 1);
  CHECK(r.at({3, 1}) == 2);

  auto g2 = diag(5, 10, {{{0, 1}}, {{0, 2}}});
  CHECK(root_valuation(g2).at({1, 2}) == 0);

  for (long k : {1L, 3L}) {
    auto g3 = diag(5, 10, {{{0, 1}}, {{0, 1}, {k, 1}}});
    CHECK(root_valuation(g3).at({1, 2}) == k);
  }

  SUBCASE("coinciding entries raise a precision error") {
    auto bad = diag(5, 6, {{{0, 1}}, {{0, 1}}});
    CHECK_THROWS_AS(root_valuation(bad), computation_error);
  }
}

TEST_CASE("minimal form") {
  // the example map: vals (1,2) -> 1, (1,3) -> 2, (2,3) -> 1
  std::map<std::pair<int, int>, long> r{{{1, 2}, 1}, {{2, 1}, 1}, {{1, 3}, 2},
                                        {{3, 1}, 2}, {{2, 3}, 1}, {{3, 2}, 1}};
  auto d = minimal_form(r, 3);
  CHECK(d.w == std::vector<int>{1, 3, 2});
  CHECK(d.n == std::vector<long>{2, 1});
  CHECK(min_rule(r, d));

  SUBCASE("constant maps give the identity ordering") {
    std::map<std::pair<int, int>, long> rc;
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        if (i != j) rc[{i, j}] = 4;
    auto dc = minimal_form(rc, 3);
    CHECK(dc.w == std::vector<int>{1, 2, 3});
    CHECK(dc.n == std::vector<long>{4, 4});
  }

  SUBCASE("GL2") {
    std::map<std::pair<int, int>, long> r2{{{1, 2}, 3}, {{2, 1}, 3}};
    auto d2 = minimal_form(r2, 2);
    CHECK(d2.w == std::vector<int>{1, 2});
    CHECK(d2.n == std::vector<long>{3});
  }

  SUBCASE("inconsistent maps are rejected") {
    std::map<std::pair<int, int>, long> rb{{{1, 2}, 1}, {{2, 1}, 1}, {{1, 3}, 2},
                                           {{3, 1}, 2}, {{2, 3}, 3}, {{3, 2}, 3}};
    CHECK_THROWS_AS(minimal_form(rb, 3), computation_error);
  }
}

TEST_CASE("random valuation maps pass the exhaustive min rule") {
  std::mt19937 rng(5);
  int done = 0;
  while (done < 200) {
    int n = 2 + (int)(rng() % 3);  // up to GL_4, i.e. d <= 3
    // random datum in a random ordering defines a consistent map
    std::vector<int> w(static_cast<size_t>(n));
    std::iota(w.begin(), w.end(), 1);
    std::shuffle(w.begin(), w.end(), rng);
    std::vector<long> nn(static_cast<size_t>(n - 1));
    for (auto& v : nn) v = (long)(rng() % 4);
    std::map<std::pair<int, int>, long> r;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        long m = *std::min_element(nn.begin() + i, nn.begin() + j);
        r[{w[size_t(i)], w[size_t(j)]}] = m;
        r[{w[size_t(j)], w[size_t(i)]}] = m;
      }
    auto d = minimal_form(r, n);
    CHECK(min_rule(r, d));
    // ultrametric consistency: val(a+b) >= min for root sums
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          if (i == j || j == k || i == k) continue;
          CHECK(r.at({i, k}) >= std::min(r.at({i, j}), r.at({j, k})));
        }
    ++done;
  }
}

TEST_CASE("make_gamma realizes data and round trips") {
  SUBCASE("GL2 explicit") {
    auto g = make_gamma({2}, 5, 10);
    CHECK(root_valuation(g).at({1, 2}) == 2);
  }
  SUBCASE("GL3 spec examples") {
    auto g = make_gamma({0, 1}, 5, 10);
    auto r = root_valuation(g);
    CHECK(r.at({1, 2}) == 0);
    CHECK(r.at({2, 3}) == 1);
    CHECK(r.at({1, 3}) == 0);
    auto g2 = make_gamma({1, 1}, 5, 10);
    auto r2 = root_valuation(g2);
    CHECK(r2.at({1, 2}) == 1);
    CHECK(r2.at({2, 3}) == 1);
    CHECK(r2.at({1, 3}) == 1);
  }
  SUBCASE("round trip over random data, d <= 3") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
      int d = 1 + (int)(rng() % 3);
      std::vector<long> nn(static_cast<size_t>(d));
      for (auto& v : nn) v = (long)(rng() % 4);
      long q = (d + 1 < 5) ? 5 : 7;
      auto g = make_gamma(nn, q, default_precision(nn));
      auto datum = minimal_form(root_valuation(g), d + 1);
      CHECK(datum.n == nn);
      CHECK(datum.w == [&] {
        std::vector<int> id(static_cast<size_t>(d + 1));
        std::iota(id.begin(), id.end(), 1);
        return id;
      }());
    }
  }
  SUBCASE("variants realize the same datum with different entries") {
    auto a = make_gamma({2}, 5, 10, 0);
    auto b = make_gamma({2}, 5, 10, 1);
    auto c = make_gamma({2}, 5, 10, 2);
    CHECK(root_valuation(a).at({1, 2}) == 2);
    CHECK(root_valuation(b).at({1, 2}) == 2);
    CHECK(root_valuation(c).at({1, 2}) == 2);
    CHECK(!(a.fingerprint() == b.fingerprint()));
    CHECK(!(b.fingerprint() == c.fingerprint()));
  }
  SUBCASE("small residue fields reject impossible data") {
    CHECK_THROWS_AS(make_gamma({0, 0}, 2, 10), computation_error);
    CHECK_THROWS_AS(make_gamma({1, 1}, 2, 10), computation_error);
    CHECK_NOTHROW(make_gamma({1, 0}, 2, 10));
    CHECK_NOTHROW(make_gamma({0, 0}, 3, 10));
  }
}

TEST_CASE("filtration") {
  std::map<std::pair<int, int>, long> r{{{1, 2}, 1}, {{2, 1}, 1}, {{1, 3}, 2},
                                        {{3, 1}, 2}, {{2, 3}, 1}, {{3, 2}, 1}};
  auto f = filtration(r, 3);
  REQUIRE(f.breaking_points == std::vector<long>{1, 2});
  CHECK(f.chain[0] == LeviPartition::group(3));
  CHECK(f.chain[1] == LeviPartition::from_key(3, "13|2"));

  SUBCASE("zero datum") {
    std::map<std::pair<int, int>, long> r0{{{1, 2}, 0}, {{2, 1}, 0}};
    auto f0 = filtration(r0, 2);
    CHECK(f0.breaking_points == std::vector<long>{0});
    CHECK(f0.chain == std::vector<LeviPartition>{LeviPartition::group(2)});
  }
  SUBCASE("single level k") {
    std::map<std::pair<int, int>, long> rk{{{1, 2}, 4}, {{2, 1}, 4}};
    auto fk = filtration(rk, 2);
    CHECK(fk.breaking_points == std::vector<long>{4});
    CHECK(fk.chain == std::vector<LeviPartition>{LeviPartition::group(2)});
  }
  SUBCASE("chain refines monotonically") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<long> nn{(long)(rng() % 3), (long)(rng() % 3), (long)(rng() % 3)};
      auto g = make_gamma(nn, 7, default_precision(nn));
      auto f2 = filtration(root_valuation(g), 4);
      for (size_t i = 0; i + 1 < f2.chain.size(); ++i) {
        CHECK(f2.chain[i + 1].refines(f2.chain[i]));
        CHECK(f2.breaking_points[i] < f2.breaking_points[i + 1]);
      }
    }
  }
}

TEST_CASE("gamma JSON round trip") {
  auto g = make_gamma({1, 2}, 5, 12);
  auto g2 = GammaSpec::from_json(g.to_json());
  CHECK(g2.q == g.q);
  CHECK(g2.prec == g.prec);
  CHECK(g2.fingerprint() == g.fingerprint());
}
