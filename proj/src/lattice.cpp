#include "asflab/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace asflab {

LatticeRep::LatticeRep(long q, int n, long window, std::vector<long> pivots,
                       std::vector<std::vector<FqSeries>> entries_above)
    : q_(q), n_(n), window_(window), pivots_(std::move(pivots)), entries_(std::move(entries_above)) {}

std::vector<FqSeries> LatticeRep::column(int j, long prec) const {
  std::vector<FqSeries> col(static_cast<size_t>(n_), FqSeries::zero(q_, prec));
  col[size_t(j)] = FqSeries::monomial(q_, pivots_[size_t(j)], 1, prec);
  for (int i = 0; i < j; ++i) col[size_t(i)] = entries_[size_t(j)][size_t(i)].truncated(prec);
  return col;
}

bool LatticeRep::contains(std::vector<FqSeries> v) const {
  for (int i = n_ - 1; i >= 0; --i) {
    if (v[size_t(i)].is_zero_known()) continue;
    long val = v[size_t(i)].valuation();
    if (val < pivots_[size_t(i)]) return false;
    // subtract (v_i / eps^{a_i}) * c_i
    FqSeries u = v[size_t(i)].shifted(-pivots_[size_t(i)]);
    for (int r = 0; r < i; ++r)
      v[size_t(r)] = v[size_t(r)] - u * entries_[size_t(i)][size_t(r)];
    v[size_t(i)] = FqSeries::zero(q_, v[size_t(i)].prec());
  }
  return true;
}

bool LatticeRep::gamma_stable(const GammaSpec& gamma, long shift) const {
  long prec = gamma.prec;
  for (int j = 0; j < n_; ++j) {
    auto col = column(j, prec);
    for (int i = 0; i < n_; ++i) col[size_t(i)] = col[size_t(i)] * gamma.entries[size_t(i)];
    for (auto& s : col) s = s.shifted(-shift);
    if (!contains(std::move(col))) return false;
  }
  return true;
}

bool LatticeRep::window_valid() const {
  for (int j = 0; j < n_; ++j) {
    if (pivots_[size_t(j)] < -window_ || pivots_[size_t(j)] > window_) return false;
    for (int i = 0; i < j; ++i)
      if (!entries_[size_t(j)][size_t(i)].is_zero_known() &&
          entries_[size_t(j)][size_t(i)].valuation() < -window_)
        return false;
  }
  long prec = 2 * window_ + 4;
  for (int k = 0; k < n_; ++k) {
    std::vector<FqSeries> v(static_cast<size_t>(n_), FqSeries::zero(q_, prec));
    v[size_t(k)] = FqSeries::monomial(q_, window_, 1, prec);
    if (!contains(std::move(v))) return false;
  }
  return true;
}

LatticeRep LatticeRep::from_columns(long q, long window, std::vector<std::vector<FqSeries>> cols,
                                    long prec) {
  int n = (int)cols.size();
  // triangularize: for rows n-1 .. 0 pick the column of minimal valuation in
  // that row among the unassigned ones, clear the row in the others
  std::vector<int> assigned(static_cast<size_t>(n), -1);
  std::vector<char> used(static_cast<size_t>(n), 0);
  for (int row = n - 1; row >= 0; --row) {
    int best = -1;
    long bestval = 0;
    for (int c = 0; c < n; ++c) {
      if (used[size_t(c)] || cols[size_t(c)][size_t(row)].is_zero_known()) continue;
      long v = cols[size_t(c)][size_t(row)].valuation();
      if (best < 0 || v < bestval) {
        best = c;
        bestval = v;
      }
    }
    if (best < 0) throw computation_error("degenerate basis in lattice canonicalization");
    used[size_t(best)] = 1;
    assigned[size_t(row)] = best;
    for (int c = 0; c < n; ++c) {
      if (used[size_t(c)] || cols[size_t(c)][size_t(row)].is_zero_known()) continue;
      FqSeries f = cols[size_t(c)][size_t(row)].divided_by(cols[size_t(best)][size_t(row)]);
      for (int r = 0; r <= row; ++r)
        cols[size_t(c)][size_t(r)] = cols[size_t(c)][size_t(r)] - f * cols[size_t(best)][size_t(r)];
    }
  }
  std::vector<std::vector<FqSeries>> tri(static_cast<size_t>(n));
  std::vector<long> pivots(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    tri[size_t(j)] = cols[size_t(assigned[size_t(j)])];
    pivots[size_t(j)] = tri[size_t(j)][size_t(j)].valuation();
  }
  // normalize pivots to eps^{a_j}: divide the column by the unit part
  for (int j = 0; j < n; ++j) {
    FqSeries unit = tri[size_t(j)][size_t(j)].shifted(-pivots[size_t(j)]);
    for (int r = 0; r <= j; ++r) tri[size_t(j)][size_t(r)] = tri[size_t(j)][size_t(r)].divided_by(unit);
  }
  // reduce entries above each pivot modulo the earlier columns
  for (int j = n - 1; j >= 0; --j) {
    for (int i = j - 1; i >= 0; --i) {
      // kill coefficients of rows i at exponents >= a_i in column j
      FqSeries e = tri[size_t(j)][size_t(i)];
      if (e.is_zero_known()) continue;
      FqSeries head = FqSeries::zero(q, e.prec());
      for (long k = std::max(e.valuation(), pivots[size_t(i)]); k < std::min(e.prec(), pivots[size_t(i)] + 2 * window + 4); ++k) {
        Fq c = e.coeff(k);
        if (!c.zero()) head = head + FqSeries::monomial(q, k, c.v, e.prec());
      }
      if (head.is_zero_known()) continue;
      FqSeries u = head.shifted(-pivots[size_t(i)]);
      for (int r = 0; r <= i; ++r)
        tri[size_t(j)][size_t(r)] = tri[size_t(j)][size_t(r)] - u * tri[size_t(i)][size_t(r)];
    }
  }
  std::vector<std::vector<FqSeries>> entries(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    entries[size_t(j)].assign(size_t(j), FqSeries::zero(q, prec));
    for (int i = 0; i < j; ++i) entries[size_t(j)][size_t(i)] = tri[size_t(j)][size_t(i)].truncated(pivots[size_t(i)]);
  }
  return LatticeRep(q, n, window, pivots, entries);
}

long LatticeRep::det_val() const {
  return std::accumulate(pivots_.begin(), pivots_.end(), 0L);
}

std::vector<long> LatticeRep::h_vector(const std::vector<int>& sigma, long prec) const {
  // copy columns and reduce with respect to the permuted row order
  std::vector<std::vector<FqSeries>> cols(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) cols[size_t(j)] = column(j, prec);
  std::vector<long> h(static_cast<size_t>(n_), 0);
  std::vector<char> used(static_cast<size_t>(n_), 0);
  for (int k = n_ - 1; k >= 0; --k) {
    int row = sigma[size_t(k)] - 1;
    int best = -1;
    long bestval = 0;
    for (int c = 0; c < n_; ++c) {
      if (used[size_t(c)] || cols[size_t(c)][size_t(row)].is_zero_known()) continue;
      long v = cols[size_t(c)][size_t(row)].valuation();
      if (best < 0 || v < bestval) {
        best = c;
        bestval = v;
      }
    }
    if (best < 0) throw computation_error("degenerate lattice in h_vector");
    used[size_t(best)] = 1;
    h[size_t(row)] = bestval;
    for (int c = 0; c < n_; ++c) {
      if (used[size_t(c)] || cols[size_t(c)][size_t(row)].is_zero_known()) continue;
      FqSeries f = cols[size_t(c)][size_t(row)].divided_by(cols[size_t(best)][size_t(row)]);
      for (int r = 0; r < n_; ++r)
        cols[size_t(c)][size_t(r)] = cols[size_t(c)][size_t(r)] - f * cols[size_t(best)][size_t(r)];
    }
  }
  return h;
}

std::vector<std::vector<long>> LatticeRep::residual_matrix(const GammaSpec& gamma) const {
  long prec = gamma.prec;
  std::vector<std::vector<long>> m(static_cast<size_t>(n_), std::vector<long>(static_cast<size_t>(n_), 0));
  for (int j = 0; j < n_; ++j) {
    auto v = column(j, prec);
    for (int i = 0; i < n_; ++i) v[size_t(i)] = v[size_t(i)] * gamma.entries[size_t(i)];
    for (int i = n_ - 1; i >= 0; --i) {
      if (v[size_t(i)].is_zero_known()) {
        m[size_t(i)][size_t(j)] = 0;
        continue;
      }
      if (v[size_t(i)].valuation() < pivots_[size_t(i)])
        throw computation_error("residual matrix of an unstable lattice");
      FqSeries u = v[size_t(i)].shifted(-pivots_[size_t(i)]);
      m[size_t(i)][size_t(j)] = u.coeff(0).v;
      for (int r = 0; r < i; ++r)
        v[size_t(r)] = v[size_t(r)] - u * entries_[size_t(i)][size_t(r)];
    }
  }
  return m;
}

namespace {

// polynomial arithmetic over F_q for the minimal polynomial test
using Poly = std::vector<long>;  // coefficients, low degree first, normalized

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

Poly poly_rem(Poly a, const Poly& b, long q) {
  a = poly_trim(a);
  Poly bb = b;
  long inv_lead = Fq(q, bb.back()).inv().v;
  while (a.size() >= bb.size() && !a.empty()) {
    long f = a.back() * inv_lead % q;
    size_t off = a.size() - bb.size();
    for (size_t i = 0; i < bb.size(); ++i) a[off + i] = ((a[off + i] - f * bb[i]) % q + q) % q;
    a = poly_trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, long q) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, q);
    a = b;
    b = r;
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, long q) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % q;
  return out;
}

Poly poly_div_exact(Poly a, const Poly& b, long q) {
  a = poly_trim(a);
  if (a.size() < b.size()) return {};
  Poly out(a.size() - b.size() + 1, 0);
  long inv_lead = Fq(q, b.back()).inv().v;
  for (long off = (long)a.size() - (long)b.size(); off >= 0; --off) {
    long f = a[size_t(off) + b.size() - 1] * inv_lead % q;
    out[size_t(off)] = f;
    if (!f) continue;
    for (size_t i = 0; i < b.size(); ++i)
      a[size_t(off) + i] = ((a[size_t(off) + i] - f * b[i]) % q + q) % q;
  }
  return out;
}

// minimal annihilator of the vector v under the matrix action, from the first
// linear dependence among v, Mv, M^2 v, ...
Poly vector_annihilator(const std::vector<std::vector<long>>& m, std::vector<long> v, long q) {
  int n = (int)m.size();
  std::vector<std::vector<long>> ech;    // echelon rows, length n
  std::vector<std::vector<long>> combo;  // each length n+2: ech row as combo of Krylov rows
  std::vector<int> pivots;
  std::vector<long> w = v;
  for (int s = 0; s <= n; ++s) {
    std::vector<long> row = w;
    std::vector<long> cb(static_cast<size_t>(n + 2), 0);
    cb[size_t(s)] = 1;
    for (size_t r = 0; r < ech.size(); ++r) {
      long c = row[size_t(pivots[r])];
      if (!c) continue;
      long f = c * Fq(q, ech[r][size_t(pivots[r])]).inv().v % q;
      for (int k = 0; k < n; ++k) row[size_t(k)] = ((row[size_t(k)] - f * ech[r][size_t(k)]) % q + q) % q;
      for (size_t k = 0; k < cb.size(); ++k) cb[k] = ((cb[k] - f * combo[r][k]) % q + q) % q;
    }
    int p = -1;
    for (int k = 0; k < n; ++k)
      if (row[size_t(k)]) {
        p = k;
        break;
      }
    if (p < 0) {
      cb.resize(static_cast<size_t>(s + 1));
      return poly_trim(cb);
    }
    ech.push_back(row);
    combo.push_back(cb);
    pivots.push_back(p);
    std::vector<long> nv(static_cast<size_t>(n), 0);
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) nv[size_t(r)] = (nv[size_t(r)] + m[size_t(r)][size_t(k)] * w[size_t(k)]) % q;
    w = nv;
  }
  throw computation_error("no annihilator found (impossible)");
}

Poly poly_lcm(const Poly& a, const Poly& b, long q) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Poly g = poly_gcd(a, b, q);
  return poly_div_exact(poly_mul(a, b, q), g, q);
}

}  // namespace

bool LatticeRep::residual_regular(const GammaSpec& gamma) const {
  auto m = residual_matrix(gamma);
  Poly mp = {1};
  for (int i = 0; i < n_; ++i) {
    std::vector<long> e(static_cast<size_t>(n_), 0);
    e[size_t(i)] = 1;
    mp = poly_lcm(mp, vector_annihilator(m, e, q_), q_);
    if ((int)mp.size() == n_ + 1) return true;  // degree n reached
  }
  return (int)mp.size() == n_ + 1;
}

bool LatticeRep::operator==(const LatticeRep& o) const {
  if (pivots_ != o.pivots_) return false;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < j; ++i)
      if (!(entries_[size_t(j)][size_t(i)] == o.entries_[size_t(j)][size_t(i)])) return false;
  return true;
}

bool LatticeRep::operator<(const LatticeRep& o) const { return str() < o.str(); }

std::string LatticeRep::str() const {
  std::ostringstream os;
  os << "[";
  for (int j = 0; j < n_; ++j) {
    if (j) os << "; ";
    os << "e" << pivots_[size_t(j)];
    for (int i = 0; i < j; ++i) os << "," << entries_[size_t(j)][size_t(i)].str();
  }
  os << "]";
  return os.str();
}

AMVector hp_vector(const LatticeRep& l, const ParabolicChain& p, long prec) {
  // refine to a Borel order compatible with the chain, canonical inside blocks
  std::vector<int> sigma;
  for (const auto& b : p.ordered_blocks()) sigma.insert(sigma.end(), b.begin(), b.end());
  auto h = l.h_vector(sigma, prec);
  std::vector<Rational> coords;
  for (long v : h) coords.emplace_back(v);
  return project_coords(coords, p.levi());
}

OrthogonalSet ec_set(const LatticeRep& l, const LeviPartition& m, long prec) {
  OrthogonalSet out(LeviPartition::group(m.n()), m);
  for (const auto& p : parabolics_with_levi(m)) out.points.emplace(p.key(), hp_vector(l, p, prec));
  return out;
}

}  // namespace asflab
