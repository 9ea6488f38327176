#include "asflab/engine.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>

namespace asflab {

std::string CountRecord::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["n"] = n;
  j["q"] = q;
  j["window"] = window;
  j["component"] = component;
  j["count"] = count.str();
  j["base_point"] = base_point;
  j["engine"] = engine;
  return j.dump();
}

CountRecord CountRecord::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  CountRecord r;
  r.d = j.at("d").get<int>();
  r.n = j.at("n").get<std::vector<long>>();
  r.q = j.at("q").get<long>();
  r.window = j.at("window").get<long>();
  r.component = j.at("component").get<long>();
  r.count = Int(j.at("count").get<std::string>());
  r.base_point = j.at("base_point").get<std::string>();
  r.engine = j.at("engine").get<std::string>();
  return r;
}

namespace {

// Digit layout of the free entries of one column: entry (i, j) contributes
// digits for the exponents [-N, a_i).
struct DigitLayout {
  struct Slot {
    int row;
    long exp;
  };
  std::vector<Slot> slots;
};

DigitLayout column_layout(int j, const std::vector<long>& pivots, long window) {
  DigitLayout lay;
  for (int i = 0; i < j; ++i)
    for (long e = -window; e < pivots[size_t(i)]; ++e) lay.slots.push_back({i, e});
  return lay;
}

// Violation digits of gamma . c_j against eps^shift L, as a function of the
// digit vector; affine over F_q.
std::vector<long> violation_vector(const GammaSpec& gamma, const std::vector<long>& pivots,
                                   const std::vector<std::vector<FqSeries>>& prev_entries,
                                   int j, const DigitLayout& lay, const std::vector<long>& digits,
                                   long shift, long window) {
  long q = gamma.q;
  long prec = gamma.prec;
  // assemble the column
  std::vector<FqSeries> col(size_t(j + 1), FqSeries::zero(q, prec));
  col[size_t(j)] = FqSeries::monomial(q, pivots[size_t(j)], 1, prec);
  for (size_t s = 0; s < lay.slots.size(); ++s) {
    if (!digits[s]) continue;
    auto& slot = lay.slots[s];
    col[size_t(slot.row)] = col[size_t(slot.row)] + FqSeries::monomial(q, slot.exp, digits[s], prec);
  }
  // v = gamma . c_j, then reduce against eps^shift * (c_j, c_{j-1}, ..., c_0)
  std::vector<FqSeries> v(size_t(j + 1), FqSeries::zero(q, prec));
  for (int i = 0; i <= j; ++i) v[size_t(i)] = col[size_t(i)] * gamma.entries[size_t(i)];
  std::vector<long> out;
  // fixed collection window so the violation vector has a digit-independent shape
  long floor_exp = -(window + (long)(j + 1) * (2 * window + labs(shift) + 2));
  for (int i = j; i >= 0; --i) {
    long piv = pivots[size_t(i)] + shift;
    for (long e = floor_exp; e < piv; ++e) out.push_back(v[size_t(i)].coeff(e).v);
    // subtract the O-part times the column
    FqSeries u = FqSeries::zero(q, prec - piv);
    for (long e = piv; e < std::min(v[size_t(i)].prec(), prec); ++e) {
      Fq c = v[size_t(i)].coeff(e);
      if (!c.zero()) u = u + FqSeries::monomial(q, e - piv, c.v, prec - piv);
    }
    if (!u.is_zero_known()) {
      // column i of the shifted lattice: shift cancels in u * eps^shift c_i
      if (i == j) {
        for (size_t s = 0; s < lay.slots.size(); ++s) {
          if (!digits[s]) continue;
          auto& slot = lay.slots[s];
          v[size_t(slot.row)] =
              v[size_t(slot.row)] - u.shifted(shift) * FqSeries::monomial(q, slot.exp, digits[s], prec);
        }
      } else {
        for (int r = 0; r < i; ++r)
          v[size_t(r)] = v[size_t(r)] - u.shifted(shift) * prev_entries[size_t(i)][size_t(r)];
      }
    }
    v[size_t(i)] = FqSeries::zero(q, prec);
  }
  return out;
}

// All digit vectors solving the affine stability system for column j.
std::vector<std::vector<long>> solve_column(const GammaSpec& gamma, const std::vector<long>& pivots,
                                            const std::vector<std::vector<FqSeries>>& prev_entries,
                                            int j, const DigitLayout& lay, long shift, long window) {
  long q = gamma.q;
  size_t nd = lay.slots.size();
  std::vector<long> zero(nd, 0);
  std::vector<long> base = violation_vector(gamma, pivots, prev_entries, j, lay, zero, shift, window);
  size_t nv = base.size();
  // response matrix
  std::vector<std::vector<long>> a(nv, std::vector<long>(nd, 0));
  for (size_t s = 0; s < nd; ++s) {
    auto probe = zero;
    probe[s] = 1;
    auto resp = violation_vector(gamma, pivots, prev_entries, j, lay, probe, shift, window);
    if (resp.size() != nv) throw computation_error("violation window mismatch");
    for (size_t r = 0; r < nv; ++r) a[r][s] = ((resp[r] - base[r]) % q + q) % q;
  }
  // solve a x = -base over F_q
  std::vector<long> rhs(nv);
  for (size_t r = 0; r < nv; ++r) rhs[r] = ((-base[r]) % q + q) % q;
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t c = 0; c < nd && row < nv; ++c) {
    size_t p = row;
    while (p < nv && a[p][c] == 0) ++p;
    if (p == nv) continue;
    std::swap(a[p], a[row]);
    std::swap(rhs[p], rhs[row]);
    long inv = Fq(q, a[row][c]).inv().v;
    for (size_t r2 = 0; r2 < nv; ++r2) {
      if (r2 == row || a[r2][c] == 0) continue;
      long f = a[r2][c] * inv % q;
      for (size_t c2 = c; c2 < nd; ++c2) a[r2][c2] = ((a[r2][c2] - f * a[row][c2]) % q + q) % q;
      rhs[r2] = ((rhs[r2] - f * rhs[row]) % q + q) % q;
    }
    pivot_col.push_back((int)c);
    ++row;
  }
  for (size_t r2 = row; r2 < nv; ++r2)
    if (rhs[r2] != 0) return {};  // inconsistent: no stable column
  // particular solution + free columns
  std::vector<long> part(nd, 0);
  std::vector<char> is_pivot(nd, 0);
  for (size_t r2 = 0; r2 < pivot_col.size(); ++r2) {
    int c = pivot_col[r2];
    is_pivot[size_t(c)] = 1;
    part[size_t(c)] = rhs[r2] * Fq(q, a[r2][size_t(c)]).inv().v % q;
  }
  std::vector<int> free_cols;
  for (size_t c = 0; c < nd; ++c)
    if (!is_pivot[c]) free_cols.push_back((int)c);
  if (free_cols.size() > 24) throw computation_error("stability solution space too large");
  // null space basis
  std::vector<std::vector<long>> null_basis;
  for (int fc : free_cols) {
    std::vector<long> vec(nd, 0);
    vec[size_t(fc)] = 1;
    for (size_t r2 = 0; r2 < pivot_col.size(); ++r2) {
      int c = pivot_col[r2];
      vec[size_t(c)] = ((-(long)a[r2][size_t(fc)]) % q + q) % q * Fq(q, a[r2][size_t(c)]).inv().v % q;
    }
    null_basis.push_back(vec);
  }
  std::vector<std::vector<long>> out;
  std::vector<long> sel(free_cols.size(), 0);
  while (true) {
    std::vector<long> x = part;
    for (size_t i = 0; i < sel.size(); ++i) {
      if (!sel[i]) continue;
      for (size_t c = 0; c < nd; ++c) x[c] = (x[c] + sel[i] * null_basis[i][c]) % q;
    }
    out.push_back(x);
    size_t i = 0;
    while (i < sel.size()) {
      if (++sel[i] < q) break;
      sel[i++] = 0;
    }
    if (i == sel.size()) break;
  }
  return out;
}

std::vector<std::vector<FqSeries>> entries_from_digits(const GammaSpec& gamma,
                                                       const std::vector<long>& pivots, int upto,
                                                       const std::vector<DigitLayout>& lays,
                                                       const std::vector<std::vector<long>>& digit_choice) {
  long q = gamma.q;
  long prec = gamma.prec;
  std::vector<std::vector<FqSeries>> entries(size_t(upto + 1));
  for (int j = 0; j <= upto; ++j) {
    entries[size_t(j)].assign(size_t(j), FqSeries::zero(q, prec));
    if (j == 0) continue;
    for (size_t s = 0; s < lays[size_t(j)].slots.size(); ++s) {
      long dv = digit_choice[size_t(j)][s];
      if (!dv) continue;
      auto& slot = lays[size_t(j)].slots[s];
      entries[size_t(j)][size_t(slot.row)] =
          entries[size_t(j)][size_t(slot.row)] + FqSeries::monomial(q, slot.exp, dv, prec);
    }
  }
  return entries;
}

void enumerate_for_pivots(const GammaSpec& gamma, const EnumOptions& opt,
                          const std::vector<long>& pivots,
                          std::vector<LatticeRep>& out) {
  int n = gamma.n();
  std::vector<DigitLayout> lays(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) lays[size_t(j)] = column_layout(j, pivots, opt.window);
  std::vector<std::vector<long>> digit_choice(static_cast<size_t>(n));
  std::function<void(int)> rec = [&](int j) {
    if (j == n) {
      auto entries = entries_from_digits(gamma, pivots, n - 1, lays, digit_choice);
      LatticeRep lat(gamma.q, n, opt.window, pivots, entries);
      if (!lat.window_valid()) return;
      out.push_back(lat);
      return;
    }
    auto prev = entries_from_digits(gamma, pivots, j - 1 >= 0 ? j - 1 : 0, lays, digit_choice);
    prev.resize(size_t(j));
    auto sols = solve_column(gamma, pivots, prev, j, lays[size_t(j)], opt.shift, opt.window);
    for (auto& sol : sols) {
      digit_choice[size_t(j)] = sol;
      rec(j + 1);
    }
  };
  rec(0);
}

}  // namespace

std::vector<LatticeRep> enumerate_fixed_lattices(const GammaSpec& gamma, const EnumOptions& opt) {
  int n = gamma.n();
  if (gamma.prec < 2 * opt.window + 2)
    throw computation_error("gamma precision " + std::to_string(gamma.prec) +
                            " too small for window " + std::to_string(opt.window));
  std::vector<std::pair<long, long>> bounds(static_cast<size_t>(n), {-opt.window, opt.window});
  if (opt.pivot_bounds) {
    bounds = *opt.pivot_bounds;
    for (auto& [lo, hi] : bounds) {
      lo = std::max(lo, -opt.window);
      hi = std::min(hi, opt.window);
    }
  }
  std::vector<LatticeRep> out;
  std::vector<long> pivots(static_cast<size_t>(n));
  std::function<void(int, long)> rec = [&](int j, long sum) {
    if (j == n) {
      if (opt.component && sum != *opt.component) return;
      enumerate_for_pivots(gamma, opt, pivots, out);
      return;
    }
    if (opt.fixed_pivots) {
      pivots[size_t(j)] = (*opt.fixed_pivots)[size_t(j)];
      rec(j + 1, sum + pivots[size_t(j)]);
      return;
    }
    for (long a = bounds[size_t(j)].first; a <= bounds[size_t(j)].second; ++a) {
      pivots[size_t(j)] = a;
      rec(j + 1, sum + a);
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

long window_auto(const std::vector<long>& n) {
  long s = 0;
  for (long v : n) s += v;
  return s + 2;
}

LatticeRep find_regular_point(const GammaSpec& gamma, long window, int index) {
  EnumOptions opt;
  opt.window = window;
  opt.fixed_pivots = std::vector<long>(size_t(gamma.n()), 0);
  auto slice = enumerate_fixed_lattices(gamma, opt);
  int seen = 0;
  for (const auto& lat : slice) {
    if (lat.residual_regular(gamma)) {
      if (seen == index) return lat;
      ++seen;
    }
  }
  throw computation_error("no regular point with index " + std::to_string(index) +
                          " in window " + std::to_string(window) + "; enlarge the window");
}

FundamentalDomain fundamental_domain(const GammaSpec& gamma, long window,
                                     std::optional<LatticeRep> base) {
  int n = gamma.n();
  auto a = LeviPartition::torus(n);
  FundamentalDomain fd;
  fd.base = base ? *base : find_regular_point(gamma, window);
  fd.ec_base = ec_set(fd.base, a, gamma.prec);
  if (validate(fd.ec_base).verdict != OrthogonalVerdict::positive)
    throw invariant_error("Ec(x0) is not a positive orthogonal set");
  // pivot bounds from the vertex box of Ec(x0)
  std::vector<std::pair<long, long>> bounds(static_cast<size_t>(n));
  bool first = true;
  for (const auto& [k, v] : fd.ec_base.points) {
    for (int i = 0; i < n; ++i) {
      // H_B coordinates of window lattices are integers
      Rational c = v.coords[size_t(i)];
      long lo = (long)boost::multiprecision::numerator(c).convert_to<long long>();
      if (first) bounds[size_t(i)] = {lo, lo};
      bounds[size_t(i)].first = std::min(bounds[size_t(i)].first, lo);
      bounds[size_t(i)].second = std::max(bounds[size_t(i)].second, lo);
    }
    first = false;
  }
  EnumOptions opt;
  opt.window = window;
  opt.component = fd.base.det_val();
  opt.pivot_bounds = bounds;
  auto all = enumerate_fixed_lattices(gamma, opt);
  for (const auto& lat : all) {
    auto ec = ec_set(lat, a, gamma.prec);
    if (validate(ec).verdict != OrthogonalVerdict::positive)
      throw invariant_error("Ec(x) is not positive at " + lat.str());
    if (set_contains(fd.ec_base, ec)) fd.points.push_back(lat);
  }
  return fd;
}

// Working precision with headroom for the chains of exact divisions in the
// flag reductions.
static long prec_needed(int n, long window) { return (n + 2) * (2 * window + 4); }

static GammaSpec with_precision(const GammaSpec& gamma, long prec) {
  return gamma.prec >= prec ? gamma : gamma.extended(prec);
}

CountRecord fundamental_domain_count(const GammaSpec& gamma, const std::vector<long>& n_datum,
                                     std::optional<long> window, int saturation_retries,
                                     int base_index) {
  long w = window ? *window : window_auto(n_datum);
  for (int attempt = 0;; ++attempt) {
    auto g = with_precision(gamma, prec_needed(gamma.n(), w + 1));
    auto base = find_regular_point(g, w, base_index);
    auto fd1 = fundamental_domain(g, w, base);
    auto fd2 = fundamental_domain(g, w + 1, base);
    if (fd1.count() == fd2.count()) {
      CountRecord rec;
      rec.d = gamma.n() - 1;
      rec.n = n_datum;
      rec.q = gamma.q;
      rec.window = w;
      rec.component = fd1.base.det_val();
      rec.count = fd1.count();
      rec.base_point = fd1.base.str();
      return rec;
    }
    if (attempt >= saturation_retries)
      throw computation_error("window saturation failed up to N = " + std::to_string(w + 1));
    ++w;
  }
}

Int weight_v_gamma(const LatticeRep& x, const LatticeRep& x0, const GammaSpec& gamma) {
  int n = gamma.n();
  auto a = LeviPartition::torus(n);
  auto ec_x = ec_set(x, a, gamma.prec);
  auto ec_x0 = ec_set(x0, a, gamma.prec);
  // translation count
  std::vector<std::pair<long, long>> box(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    long lo = 0, hi = 0;
    bool first = true;
    for (const auto& [k, v0] : ec_x0.points) {
      for (const auto& [k2, v] : ec_x.points) {
        Rational diff = v0.coords[size_t(i)] - v.coords[size_t(i)];
        long dv = (long)boost::multiprecision::numerator(diff).convert_to<long long>();
        if (first || dv < lo) lo = dv;
        if (first || dv > hi) hi = dv;
        first = false;
      }
    }
    box[size_t(i)] = {lo, hi};
  }
  Int direct = 0;
  std::vector<long> lam(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) lam[size_t(i)] = box[size_t(i)].first;
  while (true) {
    std::vector<Rational> coords;
    for (long v : lam) coords.emplace_back(v);
    if (set_contains(ec_x0, ec_x.translated(AMVector(a, coords)))) ++direct;
    int i = 0;
    while (i < n) {
      if (++lam[size_t(i)] <= box[size_t(i)].second) break;
      lam[size_t(i)] = box[size_t(i)].first;
      ++i;
    }
    if (i == n) break;
  }
  // lattice-count route through lambda(x, x0)
  OrthogonalSet lambda(LeviPartition::group(n), a);
  for (const auto& [k, v0] : ec_x0.points) lambda.points.emplace(k, v0 - ec_x.points.at(k));
  auto rep = validate(lambda);
  if (rep.verdict != OrthogonalVerdict::positive)
    throw invariant_error("lambda(x, x0) is not positive: " + rep.witness);
  Int via_count = lattice_count(lambda, CountMode::enumeration);
  if (via_count != direct)
    throw invariant_error("weight v_gamma mismatch: translations " + direct.str() +
                          " vs lattice count " + via_count.str());
  return direct;
}

OrbitalResult weighted_orbital(const GammaSpec& gamma, const LeviPartition& weight_levi,
                               long shift, std::optional<long> window, int saturation_retries) {
  int n = gamma.n();
  auto a = LeviPartition::torus(n);
  auto r = root_valuation(gamma);
  long disc = 0;
  for (const auto& [key, v] : r)
    if (key.first < key.second) disc += v;
  std::vector<long> datum_bound;
  for (const auto& [key, v] : r)
    if (key.first < key.second) datum_bound.push_back(v);
  long w = window ? *window : window_auto(datum_bound) + labs(shift);

  auto run = [&](long win) -> std::pair<Rational, Int> {
    auto g = with_precision(gamma, prec_needed(gamma.n(), win) + labs(shift));
    EnumOptions opt;
    opt.window = win;
    opt.shift = shift;
    opt.fixed_pivots = std::vector<long>(static_cast<size_t>(n), 0);
    auto slice = enumerate_fixed_lattices(g, opt);
    Rational total = 0;
    for (const auto& lat : slice) {
      auto ec = ec_set(lat, a, g.prec);
      auto proj = project(ec, weight_levi);
      total += hull_volume_direct(proj).lattice_units;
    }
    return {total, Int(slice.size())};
  };

  for (int attempt = 0;; ++attempt) {
    auto [t1, c1] = run(w);
    auto [t2, c2] = run(w + 1);
    if (t1 == t2 && c1 == c2) {
      OrbitalResult res;
      res.value = t1 * rat_pow(Rational(gamma.q), -disc);
      res.slice_points = c1;
      res.window = w;
      return res;
    }
    if (attempt >= saturation_retries)
      throw computation_error("orbital window saturation failed up to N = " + std::to_string(w + 1));
    ++w;
  }
}

Rational levi_orbital(const GammaSpec& gamma, const LeviPartition& m) {
  Rational out = 1;
  for (const auto& block : m.blocks()) {
    auto gb = gamma.restricted(block);
    int nb = (int)block.size();
    out *= weighted_orbital(gb, LeviPartition::torus(nb)).value;
  }
  return out;
}

Int levi_count(const GammaSpec& gamma, const LeviPartition& m) {
  Int out = 1;
  for (const auto& block : m.blocks()) {
    auto gb = gamma.restricted(block);
    auto rv = root_valuation(gb);
    std::vector<long> nb;
    auto mf = (int)block.size() > 1 ? minimal_form(rv, (int)block.size()) : RootValuationDatum{};
    nb = mf.n;
    auto rec = fundamental_domain_count(gb, nb);
    out *= rec.count;
  }
  return out;
}

long discriminant_valuation(const GammaSpec& gamma, const LeviPartition& m) {
  long disc = 0;
  auto r = root_valuation(gamma);
  for (const auto& [key, v] : r)
    if (key.first < key.second && m.block_of(key.first) == m.block_of(key.second)) disc += v;
  return disc;
}

}  // namespace asflab
