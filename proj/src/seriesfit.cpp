#include "asflab/series.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

namespace asflab {

int QPolynomial::degree() const {
  for (int k = (int)coeffs.size() - 1; k >= 0; --k)
    if (coeffs[size_t(k)] != 0) return k;
  return 0;
}

Rational QPolynomial::eval(const Rational& x) const {
  Rational out = 0;
  for (int k = (int)coeffs.size() - 1; k >= 0; --k) out = out * x + coeffs[size_t(k)];
  return out;
}

std::string QPolynomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < (int)coeffs.size(); ++k) {
    if (coeffs[size_t(k)] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << rat_str(coeffs[size_t(k)]);
    if (k > 0) os << "*q^" << k;
  }
  if (first) os << "0";
  return os.str();
}

QPolynomial interpolate_q(const std::map<long, Rational>& values, int degree_cap) {
  if ((int)values.size() < degree_cap + 2)
    throw computation_error("interpolation needs at least cap + 2 points");
  std::vector<std::pair<long, Rational>> pts(values.begin(), values.end());
  int m = degree_cap + 1;
  // Lagrange through the first m points
  QPolynomial poly;
  poly.coeffs.assign(size_t(m), Rational(0));
  for (int i = 0; i < m; ++i) {
    // basis polynomial for node i
    std::vector<Rational> basis = {Rational(1)};
    Rational denom = 1;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      // multiply by (x - x_j)
      std::vector<Rational> nb(basis.size() + 1, Rational(0));
      for (size_t k = 0; k < basis.size(); ++k) {
        nb[k] -= basis[k] * pts[size_t(j)].first;
        nb[k + 1] += basis[k];
      }
      basis = nb;
      denom *= Rational(pts[size_t(i)].first - pts[size_t(j)].first);
    }
    for (size_t k = 0; k < basis.size(); ++k)
      poly.coeffs[k] += basis[k] * pts[size_t(i)].second / denom;
  }
  for (const auto& [x, y] : values) {
    if (poly.eval(Rational(x)) != y)
      throw computation_error("no polynomial of degree <= " + std::to_string(degree_cap) +
                              " fits all points (fails at q = " + std::to_string(x) + ")");
  }
  return poly;
}

namespace {

std::vector<Exponent> monomials_up_to(int dims, int total_degree) {
  std::vector<Exponent> out;
  Exponent cur(size_t(dims), 0);
  std::function<void(int, long)> rec = [&](int pos, long left) {
    if (pos == dims) {
      out.push_back(cur);
      return;
    }
    for (long e = 0; e <= left; ++e) {
      cur[size_t(pos)] = e;
      rec(pos + 1, left - e);
    }
    cur[size_t(pos)] = 0;
  };
  rec(0, total_degree);
  std::sort(out.begin(), out.end());
  return out;
}

long total_deg(const Exponent& e) {
  long s = 0;
  for (long v : e) s += v;
  return s;
}

Exponent sub(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

bool nonneg(const Exponent& e) {
  return std::all_of(e.begin(), e.end(), [](long v) { return v >= 0; });
}

}  // namespace

RationalFit fit_rational(const std::map<Exponent, Rational>& coeffs,
                         const std::vector<Exponent>& train, const std::vector<Exponent>& validate,
                         int dims, int max_den_degree, int max_num_degree) {
  RationalFit best;
  best.dims = dims;
  best.train = train;
  best.validate = validate;
  for (int dn = 0; dn <= max_den_degree; ++dn) {
    for (int dm = 0; dm <= max_num_degree; ++dm) {
      auto den_mons = monomials_up_to(dims, dn);
      auto num_mons = monomials_up_to(dims, dm);
      // unknowns: denominator coefficients except the constant term (set 1)
      std::vector<Exponent> unknowns;
      for (const auto& e : den_mons)
        if (total_deg(e) > 0) unknowns.push_back(e);
      // equations: training cells outside the numerator support with all
      // antecedents available
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> rhs;
      auto have = [&](const Exponent& e) { return coeffs.count(e) > 0; };
      for (const auto& cell : train) {
        if (total_deg(cell) <= dm) continue;
        if (!have(cell)) continue;
        bool usable = true;
        for (const auto& u : unknowns) {
          auto ant = sub(cell, u);
          if (nonneg(ant) && !have(ant)) usable = false;
        }
        if (!usable) continue;
        std::vector<Rational> row;
        for (const auto& u : unknowns) {
          auto ant = sub(cell, u);
          row.push_back(nonneg(ant) ? coeffs.at(ant) : Rational(0));
        }
        a.push_back(row);
        rhs.push_back(-coeffs.at(cell));
      }
      auto sol = linsolve_exact(a, rhs);
      if (!sol) continue;
      std::map<Exponent, Rational> denom;
      denom[Exponent(size_t(dims), 0)] = 1;
      for (size_t i = 0; i < unknowns.size(); ++i)
        if ((*sol)[i] != 0) denom[unknowns[i]] = (*sol)[i];
      // numerator forced by the training cells in its support
      std::map<Exponent, Rational> numer;
      bool ok = true;
      auto predicted = [&](const Exponent& cell) -> std::optional<Rational> {
        Rational acc = 0;
        for (const auto& [e, c] : denom) {
          if (total_deg(e) == 0) continue;  // q0 = 1 carries the cell itself
          auto ant = sub(cell, e);
          if (!nonneg(ant)) continue;
          if (!have(ant)) return std::nullopt;
          acc += c * coeffs.at(ant);
        }
        // f_cell = p_cell - sum_{e != 0} q_e f_{cell - e}
        Rational p = numer.count(cell) ? numer.at(cell) : Rational(0);
        return p - acc;
      };
      for (const auto& e : num_mons) {
        if (!have(e)) continue;  // numerator coefficient cannot be pinned; leave 0
        Rational acc = 0;
        for (const auto& [de, c] : denom) {
          auto ant = sub(e, de);
          if (!nonneg(ant)) continue;
          if (!have(ant)) {
            ok = false;
            break;
          }
          acc += c * coeffs.at(ant);
        }
        if (!ok) break;
        if (acc != 0) numer[e] = acc;
      }
      if (!ok) continue;
      // verify training exactly
      for (const auto& cell : train) {
        if (!have(cell)) continue;
        auto p = predicted(cell);
        if (!p || *p != coeffs.at(cell)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      // predict validation exactly
      for (const auto& cell : validate) {
        if (!have(cell)) continue;
        auto p = predicted(cell);
        if (!p || *p != coeffs.at(cell)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      best.found = true;
      best.numerator = numer;
      best.denominator = denom;
      best.verdict = "exact";
      return best;
    }
  }
  best.verdict = "inconclusive: no exact fit within degree caps";
  return best;
}

std::string RationalFit::to_json() const {
  nlohmann::json j;
  j["found"] = found;
  j["verdict"] = verdict;
  auto dump_poly = [](const std::map<Exponent, Rational>& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [e, c] : p) {
      nlohmann::json t;
      t["exp"] = e;
      t["coeff"] = rat_str(c);
      arr.push_back(t);
    }
    return arr;
  };
  j["numerator"] = dump_poly(numerator);
  j["denominator"] = dump_poly(denominator);
  auto dump_cells = [](const std::vector<Exponent>& cs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs) arr.push_back(c);
    return arr;
  };
  j["train"] = dump_cells(train);
  j["validate"] = dump_cells(validate);
  return j.dump(2);
}

const GridCell* SeriesGrid::find(const std::vector<long>& n, long q) const {
  for (const auto& c : cells)
    if (c.n == n && c.q == q) return &c;
  return nullptr;
}

std::string SeriesGrid::to_csv() const {
  std::ostringstream os;
  os << "n,q,count,orbital\n";
  for (const auto& c : cells) {
    for (size_t i = 0; i < c.n.size(); ++i) os << (i ? " " : "") << c.n[i];
    os << "," << c.q << ",";
    os << (c.count ? c.count->str() : (c.realizable ? "" : "unrealizable")) << ",";
    os << (c.orbital ? rat_str(*c.orbital) : "") << "\n";
  }
  return os.str();
}

SeriesGrid build_series_grid(int d, long n_max, const std::vector<long>& primes,
                             bool with_orbitals) {
  SeriesGrid grid;
  grid.d = d;
  grid.primes = primes;
  std::vector<long> n(size_t(d), 0);
  auto a = LeviPartition::torus(d + 1);
  while (true) {
    for (long q : primes) {
      GridCell cell;
      cell.n = n;
      cell.q = q;
      try {
        auto gamma = make_gamma(n, q, 2 * (window_auto(n) + 4) + 4);
        cell.count = fundamental_domain_count(gamma, n).count;
        if (with_orbitals) cell.orbital = weighted_orbital(gamma, a).value;
      } catch (const computation_error&) {
        cell.realizable = false;
      }
      grid.cells.push_back(cell);
    }
    int i = 0;
    while (i < d) {
      if (++n[size_t(i)] <= n_max) break;
      n[size_t(i)] = 0;
      ++i;
    }
    if (i == d) break;
  }
  return grid;
}

bool datum_independence_check(const std::vector<long>& n, long q, int variants) {
  std::optional<Int> count;
  std::optional<Rational> orbital;
  auto a = LeviPartition::torus((int)n.size() + 1);
  for (int v = 0; v < variants; ++v) {
    auto gamma = make_gamma(n, q, 2 * (window_auto(n) + 4) + 4, v);
    auto c = fundamental_domain_count(gamma, n).count;
    auto j = weighted_orbital(gamma, a).value;
    if (!count) {
      count = c;
      orbital = j;
    } else if (*count != c || *orbital != j) {
      return false;
    }
  }
  return true;
}

}  // namespace asflab
