#include "asflab/gm.hpp"

#include <algorithm>
#include <json.hpp>

#include "asflab/linalg.hpp"

namespace asflab {

namespace {

// Coroots between consecutive blocks of the chain r that lie in the same
// block of the ambient Levi: the simple coroots of the pair (ambient, M_r).
std::vector<AMVector> simple_coroots_in(const ParabolicChain& r, const LeviPartition& ambient) {
  auto m = r.levi();
  std::vector<AMVector> out;
  for (int b = 0; b + 1 < r.num_blocks(); ++b) {
    int e0 = r.ordered_blocks()[b][0];
    int e1 = r.ordered_blocks()[b + 1][0];
    if (ambient.block_of(e0) != ambient.block_of(e1)) continue;
    out.push_back(block_coroot(m, m.block_of(e0), m.block_of(e1)));
  }
  return out;
}

// Canonical refinement of the chain q by the finer Levi m.
ParabolicChain refine_chain(const ParabolicChain& q, const LeviPartition& m) {
  std::vector<std::vector<int>> ordered;
  for (const auto& qb : q.ordered_blocks()) {
    std::vector<const std::vector<int>*> inside;
    for (const auto& mb : m.blocks())
      if (std::find(qb.begin(), qb.end(), mb[0]) != qb.end()) inside.push_back(&mb);
    std::sort(inside.begin(), inside.end(),
              [](const auto* a, const auto* b) { return (*a)[0] < (*b)[0]; });
    for (auto* mb : inside) ordered.push_back(*mb);
  }
  return ParabolicChain(q.n(), ordered);
}

// Same but reversing the M-blocks inside each q-block; used to cross-check
// that restriction is independent of the refinement.
ParabolicChain refine_chain_reversed(const ParabolicChain& q, const LeviPartition& m) {
  std::vector<std::vector<int>> ordered;
  for (const auto& qb : q.ordered_blocks()) {
    std::vector<const std::vector<int>*> inside;
    for (const auto& mb : m.blocks())
      if (std::find(qb.begin(), qb.end(), mb[0]) != qb.end()) inside.push_back(&mb);
    std::sort(inside.begin(), inside.end(),
              [](const auto* a, const auto* b) { return (*a)[0] > (*b)[0]; });
    for (auto* mb : inside) ordered.push_back(*mb);
  }
  return ParabolicChain(q.n(), ordered);
}

// Coordinates of v minus its ambient part in the block-coroot basis of the
// pair; the coordinate lattice is exactly the volume-normalizing lattice.
std::vector<Rational> slice_coords(const std::vector<AMVector>& basis, const AMVector& v,
                                   const LeviPartition& ambient) {
  auto c = project_coords(v.coords, ambient);
  std::vector<Rational> rel(v.coords);
  for (size_t i = 0; i < rel.size(); ++i) rel[i] -= c.coords[i];
  std::vector<std::vector<Rational>> cols;
  for (const auto& b : basis) cols.push_back(b.coords);
  return solve_in_basis(cols, rel);
}

using Pt2 = std::pair<Rational, Rational>;

Rational cross(const Pt2& o, const Pt2& a, const Pt2& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

std::vector<Pt2> hull2d(std::vector<Pt2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Pt2> h(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  size_t lower = k + 1;
  for (size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

Rational polygon_area(const std::vector<Pt2>& poly) {
  if (poly.size() < 3) return 0;
  Rational s = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a.first * b.second - b.first * a.second;
  }
  return boost::multiprecision::abs(s) / 2;
}

// Keep {x : a*x + b*y + c >= 0}.
std::vector<Pt2> clip_halfplane(const std::vector<Pt2>& poly, const Rational& a,
                                const Rational& b, const Rational& c) {
  std::vector<Pt2> out;
  size_t n = poly.size();
  if (n == 0) return out;
  auto side = [&](const Pt2& p) { return a * p.first + b * p.second + c; };
  for (size_t i = 0; i < n; ++i) {
    const Pt2& p = poly[i];
    const Pt2& q = poly[(i + 1) % n];
    Rational sp = side(p), sq = side(q);
    if (sp >= 0) out.push_back(p);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      Rational t = sp / (sp - sq);
      out.push_back({p.first + t * (q.first - p.first), p.second + t * (q.second - p.second)});
    }
  }
  return out;
}

}  // namespace

OrthogonalSet OrthogonalSet::zero(const LeviPartition& m) {
  OrthogonalSet h(LeviPartition::group(m.n()), m);
  std::vector<Rational> z(m.n(), 0);
  for (const auto& p : parabolics_with_levi(m)) h.points.emplace(p.key(), AMVector(m, z));
  return h;
}

const AMVector& OrthogonalSet::at(const ParabolicChain& p) const {
  auto it = points.find(p.key());
  if (it == points.end()) throw computation_error("orthogonal set has no point for " + p.key());
  return it->second;
}

int OrthogonalSet::rel_dim() const { return levi.num_blocks() - ambient.num_blocks(); }

OrthogonalSet OrthogonalSet::operator+(const OrthogonalSet& o) const {
  if (!(levi == o.levi) || !(ambient == o.ambient))
    throw computation_error("orthogonal set sum needs matching pair");
  OrthogonalSet out(ambient, levi);
  for (const auto& [k, v] : points) out.points.emplace(k, v + o.points.at(k));
  return out;
}

OrthogonalSet OrthogonalSet::negated() const { return scaled(Rational(-1)); }

OrthogonalSet OrthogonalSet::scaled(const Rational& c) const {
  OrthogonalSet out(ambient, levi);
  for (const auto& [k, v] : points) out.points.emplace(k, v.scaled(c));
  return out;
}

OrthogonalSet OrthogonalSet::translated(const AMVector& lambda) const {
  OrthogonalSet out(ambient, levi);
  for (const auto& [k, v] : points) out.points.emplace(k, v + lambda);
  return out;
}

bool OrthogonalSet::integral() const {
  for (const auto& [k, v] : points)
    if (!v.in_lambda()) return false;
  return true;
}

std::string OrthogonalSet::to_json() const {
  nlohmann::json j;
  j["n"] = levi.n();
  j["levi"] = levi.key();
  nlohmann::json pts = nlohmann::json::object();
  for (const auto& [k, v] : points) {
    std::vector<std::string> cs;
    for (const auto& c : v.coords) cs.push_back(rat_str(c));
    pts[k] = cs;
  }
  j["points"] = pts;
  return j.dump();
}

OrthogonalSet OrthogonalSet::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  int n = j.at("n").get<int>();
  auto levi = LeviPartition::from_key(n, j.at("levi").get<std::string>());
  OrthogonalSet out(LeviPartition::group(n), levi);
  for (auto it = j.at("points").begin(); it != j.at("points").end(); ++it) {
    std::vector<Rational> coords;
    for (const auto& s : it.value()) coords.push_back(parse_rational(s.get<std::string>()));
    out.points.emplace(ParabolicChain::from_key(n, it.key()).key(), AMVector(levi, coords));
  }
  return out;
}

ValidationReport validate(const OrthogonalSet& h) {
  auto chains = parabolics_with_levi_in(h.levi, h.ambient);
  for (const auto& p : chains) {
    if (!h.points.count(p.key())) return {OrthogonalVerdict::invalid, "missing " + p.key()};
  }
  // common projection to the ambient Levi
  const AMVector& first = h.points.begin()->second;
  auto pi0 = first.project(h.ambient);
  for (const auto& [k, v] : h.points) {
    if (!(v.project(h.ambient) == pi0))
      return {OrthogonalVerdict::invalid, "ambient projection differs at " + k};
  }
  bool positive = true;
  std::string witness;
  for (size_t a = 0; a < chains.size(); ++a) {
    for (size_t b = a + 1; b < chains.size(); ++b) {
      auto beta = adjacency(chains[a], chains[b]);
      if (!beta) continue;
      AMVector diff = h.at(chains[a]) - h.at(chains[b]);
      // diff must be a rational multiple of beta
      Rational coef = 0;
      bool found = false;
      for (int i = 0; i < h.levi.n() && !found; ++i) {
        if (beta->coords[i] != 0) {
          coef = diff.coords[i] / beta->coords[i];
          found = true;
        }
      }
      bool proportional = true;
      for (int i = 0; i < h.levi.n(); ++i)
        if (diff.coords[i] != beta->coords[i] * coef) proportional = false;
      if (!proportional)
        return {OrthogonalVerdict::invalid,
                chains[a].key() + " vs " + chains[b].key() + ": difference not on the coroot line"};
      if (coef < 0 && positive) {
        positive = false;
        witness = chains[a].key() + " vs " + chains[b].key();
      }
    }
  }
  if (!positive) return {OrthogonalVerdict::orthogonal_not_positive, witness};
  return {OrthogonalVerdict::positive, ""};
}

bool hull_contains(const OrthogonalSet& h, const AMVector& a) {
  // a must lie in the same affine slice
  if (!(a.project(h.ambient) == h.points.begin()->second.project(h.ambient))) return false;
  for (const auto& r : parabolics_with_levi_in(h.levi, h.ambient)) {
    auto coroots = simple_coroots_in(r, h.ambient);
    if (coroots.empty()) continue;
    std::vector<std::vector<Rational>> cols;
    for (const auto& b : coroots) cols.push_back(b.coords);
    AMVector diff = h.at(r) - a;
    std::vector<Rational> coeffs;
    try {
      coeffs = solve_in_basis(cols, diff.coords);
    } catch (const computation_error&) {
      return false;
    }
    for (const auto& c : coeffs)
      if (c < 0) return false;
  }
  return true;
}

bool set_contains(const OrthogonalSet& h, const OrthogonalSet& c) {
  if (!(h.levi == c.levi) || !(h.ambient == c.ambient))
    throw computation_error("set_contains needs matching pair");
  for (const auto& r : parabolics_with_levi_in(h.levi, h.ambient)) {
    auto coroots = simple_coroots_in(r, h.ambient);
    AMVector diff = h.at(r) - c.at(r);
    if (coroots.empty()) {
      for (const auto& x : diff.coords)
        if (x != 0) return false;
      continue;
    }
    std::vector<std::vector<Rational>> cols;
    for (const auto& b : coroots) cols.push_back(b.coords);
    std::vector<Rational> coeffs;
    try {
      coeffs = solve_in_basis(cols, diff.coords);
    } catch (const computation_error&) {
      return false;
    }
    for (const auto& x : coeffs)
      if (x < 0) return false;
  }
  return true;
}

HullVolume hull_volume_direct(const OrthogonalSet& h) {
  int dim = h.rel_dim();
  HullVolume out;
  out.kappa_sq = kappa_sq(h.levi, h.ambient);
  if (dim == 0) {
    out.lattice_units = 1;
    return out;
  }
  auto basis = pair_lattice_basis(h.levi, h.ambient);
  std::vector<std::vector<Rational>> coords;
  for (const auto& [k, v] : h.points) coords.push_back(slice_coords(basis, v, h.ambient));
  if (dim == 1) {
    Rational lo = coords[0][0], hi = coords[0][0];
    for (const auto& c : coords) {
      lo = std::min(lo, c[0]);
      hi = std::max(hi, c[0]);
    }
    out.lattice_units = hi - lo;
    return out;
  }
  if (dim == 2) {
    std::vector<Pt2> pts;
    for (const auto& c : coords) pts.push_back({c[0], c[1]});
    out.lattice_units = polygon_area(hull2d(pts));
    return out;
  }
  throw computation_error("hull volumes implemented for relative dimension <= 2");
}

Int lattice_count_enumerate(const OrthogonalSet& h) {
  if (!h.integral()) throw computation_error("lattice_count needs an integral set");
  if (validate(h).verdict != OrthogonalVerdict::positive)
    throw computation_error("lattice_count needs a positive set");
  int k = h.levi.num_blocks();
  // Bounding box of block sums over the vertices.
  std::vector<Int> lo(k), hi(k);
  bool first = true;
  for (const auto& [key, v] : h.points) {
    for (int b = 0; b < k; ++b) {
      Rational s = v.block_value(b) * (int)h.levi.blocks()[b].size();
      Int si = to_int(s);
      if (first || si < lo[b]) lo[b] = si;
      if (first || si > hi[b]) hi[b] = si;
    }
    first = false;
  }
  Int count = 0;
  std::vector<Int> s(k);
  for (int b = 0; b < k; ++b) s[b] = lo[b];
  while (true) {
    std::vector<Rational> coords(h.levi.n());
    for (int b = 0; b < k; ++b) {
      Rational val = Rational(s[b], (int)h.levi.blocks()[b].size());
      for (int e : h.levi.blocks()[b]) coords[e - 1] = val;
    }
    AMVector cand(h.levi, coords);
    if (hull_contains(h, cand)) ++count;
    int b = 0;
    while (b < k) {
      ++s[b];
      if (s[b] <= hi[b]) break;
      s[b] = lo[b];
      ++b;
    }
    if (b == k) break;
  }
  return count;
}

OrthogonalSet facet(const OrthogonalSet& h, const ParabolicChain& q) {
  auto lq = q.levi();
  if (!h.levi.refines(lq) || !lq.refines(h.ambient))
    throw computation_error("facet parabolic must lie in F^ambient(levi)");
  OrthogonalSet out(lq, h.levi);
  for (const auto& r : parabolics_with_levi_in(h.levi, lq))
    out.points.emplace(r.key(), h.at(glue(r, q)));
  return out;
}

OrthogonalSet project(const OrthogonalSet& h, const LeviPartition& lp) {
  if (!h.levi.refines(lp) || !lp.refines(h.ambient))
    throw computation_error("projection Levi must sit between the pair");
  OrthogonalSet out(h.ambient, lp);
  for (const auto& qp : parabolics_with_levi_in(lp, h.ambient)) {
    auto r1 = refine_chain(qp, h.levi);
    auto r2 = refine_chain_reversed(qp, h.levi);
    AMVector p1 = h.at(r1).project(lp);
    AMVector p2 = h.at(r2).project(lp);
    if (!(p1 == p2))
      throw invariant_error("projection of orthogonal set not well defined at " + qp.key());
    out.points.emplace(qp.key(), p1);
  }
  return out;
}

int SymbolicFamily::rel_dim() const { return levi.num_blocks() - ambient.num_blocks(); }

SymbolicFamily exponential_family(const OrthogonalSet& h) {
  SymbolicFamily f;
  f.ambient = h.ambient;
  f.levi = h.levi;
  f.kind = "exponential";
  for (const auto& [k, v] : h.points) {
    std::vector<Rational> coords = v.coords;
    f.members.emplace(k, [coords](const std::vector<Rational>& mu, int order) {
      Rational a = 0;
      for (size_t i = 0; i < coords.size(); ++i) a += coords[i] * mu[i];
      return LaurentSeriesQ::exp_linear(a, order);
    });
  }
  return f;
}

namespace {

// x/(1 - e^{-x}) along x = c t, truncated; the factor is 1 on walls (c = 0).
LaurentSeriesQ unit_factor(const Rational& c, int order) {
  if (c == 0) return LaurentSeriesQ::constant(1, order);
  std::vector<Rational> den(order + 1, Rational(0));
  Rational term = 1;  // builds 1 - e^{-ct} = sum_{k>=1} -(-c)^k t^k / k!
  for (int k = 1; k <= order; ++k) {
    term = term * (-c) / k;
    den[size_t(k)] = -term;
  }
  LaurentSeriesQ d(0, den);
  return LaurentSeriesQ::monomial(1, c, order + 1) * d.inverse();
}

}  // namespace

SymbolicFamily e_family(const LeviPartition& ambient, const LeviPartition& m) {
  SymbolicFamily f;
  f.ambient = ambient;
  f.levi = m;
  f.kind = "e-family";
  for (const auto& r : parabolics_with_levi_in(m, ambient)) {
    auto coroots = simple_coroots_in(r, ambient);
    f.members.emplace(r.key(), [coroots](const std::vector<Rational>& mu, int order) {
      LaurentSeriesQ out = LaurentSeriesQ::constant(1, order + 1);
      for (const auto& beta : coroots) out = out * unit_factor(beta.dot_coords(mu), order);
      return out;
    });
  }
  return f;
}

SymbolicFamily e_inverse(const LeviPartition& ambient, const LeviPartition& m) {
  return family_inverse(e_family(ambient, m));
}

SymbolicFamily family_product(const SymbolicFamily& a, const SymbolicFamily& b) {
  if (!(a.levi == b.levi) || !(a.ambient == b.ambient))
    throw computation_error("family product needs matching pair");
  SymbolicFamily f;
  f.ambient = a.ambient;
  f.levi = a.levi;
  f.kind = "product";
  for (const auto& [k, eva] : a.members) {
    auto evb = b.members.at(k);
    auto ea = eva;
    f.members.emplace(k, [ea, evb](const std::vector<Rational>& mu, int order) {
      return ea(mu, order + 1) * evb(mu, order + 1);
    });
  }
  return f;
}

SymbolicFamily family_inverse(const SymbolicFamily& a) {
  SymbolicFamily f;
  f.ambient = a.ambient;
  f.levi = a.levi;
  f.kind = "inverse";
  for (const auto& [k, ev] : a.members) {
    auto e = ev;
    f.members.emplace(k, [e](const std::vector<Rational>& mu, int order) {
      return e(mu, order + 1).inverse();
    });
  }
  return f;
}

SymbolicFamily family_facet(const SymbolicFamily& f, const ParabolicChain& q) {
  auto lq = q.levi();
  if (!f.levi.refines(lq) || !lq.refines(f.ambient))
    throw computation_error("facet parabolic must lie in F^ambient(levi)");
  SymbolicFamily out;
  out.ambient = lq;
  out.levi = f.levi;
  out.kind = f.kind + "^" + q.key();
  for (const auto& r : parabolics_with_levi_in(f.levi, lq))
    out.members.emplace(r.key(), f.members.at(glue(r, q).key()));
  return out;
}

SymbolicFamily family_restrict(const SymbolicFamily& f, const LeviPartition& lp) {
  if (!f.levi.refines(lp) || !lp.refines(f.ambient))
    throw computation_error("restriction Levi must sit between the pair");
  SymbolicFamily out;
  out.ambient = f.ambient;
  out.levi = lp;
  out.kind = f.kind + "|" + lp.key();
  for (const auto& qp : parabolics_with_levi_in(lp, f.ambient)) {
    auto e1 = f.members.at(refine_chain(qp, f.levi).key());
    auto e2 = f.members.at(refine_chain_reversed(qp, f.levi).key());
    bool same = refine_chain(qp, f.levi) == refine_chain_reversed(qp, f.levi);
    out.members.emplace(qp.key(), [e1, e2, same](const std::vector<Rational>& mu, int order) {
      auto s1 = e1(mu, order);
      if (!same) {
        auto s2 = e2(mu, order);
        if (!(s1 - s2).is_zero_to_order())
          throw invariant_error("family restriction depends on the refinement");
      }
      return s1;
    });
  }
  return out;
}

std::vector<Rational> generic_direction(const LeviPartition& ambient, const LeviPartition& m,
                                        int attempt) {
  int n = m.n();
  if (m.num_blocks() == ambient.num_blocks()) return std::vector<Rational>(n, 0);
  auto basis = pair_lattice_basis(m, ambient);
  int found = -1;
  for (int seed = 0; seed < attempt + 64; ++seed) {
    // block values: powers of (seed+2), then remove the ambient-block average
    std::vector<Rational> raw(n);
    for (int b = 0; b < m.num_blocks(); ++b) {
      Rational v = rat_pow(Rational(seed + 2), b);
      for (int e : m.blocks()[b]) raw[e - 1] = v;
    }
    AMVector cand = project_coords(raw, m) - project_coords(raw, ambient);
    bool generic = true;
    for (int a = 0; a < m.num_blocks() && generic; ++a)
      for (int b = 0; b < m.num_blocks() && generic; ++b) {
        if (a == b) continue;
        if (ambient.block_of(m.blocks()[a][0]) != ambient.block_of(m.blocks()[b][0])) continue;
        if (cand.dot(block_coroot(m, a, b)) == 0) generic = false;
      }
    if (!generic) continue;
    if (++found == attempt) return cand.coords;
  }
  throw computation_error("no generic direction found for pair " + m.key() + " in " + ambient.key());
}

namespace {

Rational volume_limit_order(const SymbolicFamily& f, const std::vector<Rational>& mu, int order,
                            bool& clean) {
  int dim = f.rel_dim();
  LaurentSeriesQ total(0, {});
  bool empty = true;
  for (const auto& r : parabolics_with_levi_in(f.levi, f.ambient)) {
    auto coroots = simple_coroots_in(r, f.ambient);
    Rational dp = 1;
    for (const auto& beta : coroots) {
      Rational c = beta.dot_coords(mu);
      if (c == 0) throw computation_error("direction not generic for " + r.key());
      dp *= c;
    }
    LaurentSeriesQ member = f.members.at(r.key())(mu, order);
    LaurentSeriesQ term = member.shifted(-dim).scaled(Rational(1) / dp);
    total = empty ? term : total + term;
    empty = false;
  }
  if (!total.known(0))
    throw computation_error("working order too small for family volume; need order >= " +
                            std::to_string(dim + 1));
  clean = true;
  for (long k = total.low(); k < 0; ++k)
    if (total.coeff(k) != 0) clean = false;
  return total.coeff(0);
}

}  // namespace

Rational volume_limit_at(const SymbolicFamily& f, const std::vector<Rational>& mu) {
  int dim = f.rel_dim();
  int order = dim + 5;
  bool clean = false;
  Rational v = volume_limit_order(f, mu, order, clean);
  if (!clean) {
    v = volume_limit_order(f, mu, 2 * order, clean);
    if (!clean)
      throw invariant_error("family volume has a pole at t -> 0 (pole order exceeds dim a_M^L)");
  }
  return v;
}

Rational volume_limit(const SymbolicFamily& f) {
  return volume_limit_at(f, generic_direction(f.ambient, f.levi, 0));
}

Rational volume_limit_checked(const SymbolicFamily& f, int checks) {
  Rational v0 = volume_limit_at(f, generic_direction(f.ambient, f.levi, 0));
  for (int a = 1; a < checks && f.rel_dim() > 0; ++a) {
    Rational v = volume_limit_at(f, generic_direction(f.ambient, f.levi, a));
    if (v != v0) throw invariant_error("family volume depends on the direction mu");
  }
  return v0;
}

Int lattice_count(const OrthogonalSet& h, CountMode mode) {
  if (mode == CountMode::enumeration) return lattice_count_enumerate(h);
  if (!h.integral()) throw computation_error("formula mode needs an integral set");
  if (validate(h).verdict != OrthogonalVerdict::positive)
    throw computation_error("formula mode needs a positive set");
  auto fam = family_product(exponential_family(h), e_family(h.ambient, h.levi));
  Rational v = volume_limit_checked(fam);
  Int c = to_int(v);
  if (c < 0) throw invariant_error("negative lattice count from formula");
  return c;
}

Rational family_prime(const OrthogonalSet& h, const ParabolicChain& q) {
  if (!(h.ambient == LeviPartition::group(h.levi.n())))
    throw computation_error("family_prime implemented for full ambient group");
  if (validate(h).verdict != OrthogonalVerdict::positive)
    throw computation_error("family_prime implemented for positive orthogonal sets");
  auto l = q.levi();
  auto proj = project(h, l);
  int dim = l.rel_dim();
  if (dim == 0) return 1;
  auto basis = pair_lattice_basis(l, LeviPartition::group(l.n()));
  std::vector<std::vector<Rational>> coords;
  for (const auto& [k, v] : proj.points) coords.push_back(slice_coords(basis, v, proj.ambient));
  // chamber inequalities alpha_j >= 0 in lattice coordinates
  std::vector<std::vector<Rational>> ineqs;
  for (int b = 0; b + 1 < q.num_blocks(); ++b) {
    int e0 = q.ordered_blocks()[b][0];
    int e1 = q.ordered_blocks()[b + 1][0];
    std::vector<Rational> row;
    for (const auto& bas : basis) row.push_back(bas.coords[e0 - 1] - bas.coords[e1 - 1]);
    ineqs.push_back(row);
  }
  if (dim == 1) {
    Rational lo = coords[0][0], hi = coords[0][0];
    for (const auto& c : coords) {
      lo = std::min(lo, c[0]);
      hi = std::max(hi, c[0]);
    }
    // single constraint a*x >= 0
    Rational a = ineqs[0][0];
    if (a > 0) lo = std::max(lo, Rational(0));
    else hi = std::min(hi, Rational(0));
    return hi > lo ? hi - lo : Rational(0);
  }
  if (dim == 2) {
    std::vector<Pt2> pts;
    for (const auto& c : coords) pts.push_back({c[0], c[1]});
    auto poly = hull2d(pts);
    for (const auto& row : ineqs) poly = clip_halfplane(poly, row[0], row[1], Rational(0));
    return polygon_area(poly);
  }
  throw computation_error("family_prime implemented for relative dimension <= 2");
}

namespace {

std::vector<Rational> linsolve_prime(const std::vector<std::vector<Rational>>& a,
                                     const std::vector<Rational>& rhs, size_t unknowns) {
  if (matrix_rank_exact(a) != unknowns)
    throw invariant_error("probe families do not determine the derived constants uniquely");
  auto sol = linsolve_exact(a, rhs);
  if (!sol) throw invariant_error("product formula equations are inconsistent");
  return *sol;
}

}  // namespace

OrthogonalSet probe_orthogonal_set(const LeviPartition& ambient, const LeviPartition& m, int seed) {
  // zonotope of block coroots with small deterministic multiplicities, then a
  // lattice translate
  auto chains = parabolics_with_levi_in(m, ambient);
  int k = m.num_blocks();
  auto mult = [&](int a, int b) {
    unsigned long x = (unsigned long)(seed + 1) * 2654435761UL + (unsigned long)(a + 1) * 40503UL +
                      (unsigned long)(b + 1) * 9973UL;
    x ^= x >> 7;
    return Rational((long)(x % 4));
  };
  OrthogonalSet h(ambient, m);
  for (const auto& p : chains) {
    std::vector<Rational> coords(size_t(m.n()), 0);
    AMVector acc(m, coords);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        if (ambient.block_of(m.blocks()[size_t(a)][0]) != ambient.block_of(m.blocks()[size_t(b)][0]))
          continue;
        // vertex of the segment mult*[0, beta^vee_{ab}] selected by the chamber of p
        if (p.position_of(m.blocks()[size_t(a)][0]) < p.position_of(m.blocks()[size_t(b)][0]) && a < b)
          acc = acc + block_coroot(m, a, b).scaled(mult(a, b));
      }
    }
    h.points.emplace(p.key(), acc);
  }
  // lattice translate: block sums shifted by seed-dependent integers
  std::vector<Rational> t(size_t(m.n()), 0);
  for (int b = 0; b < k; ++b) {
    Rational shift = Rational((seed + 2 * b) % 3, (long)m.blocks()[size_t(b)].size());
    for (int e : m.blocks()[size_t(b)]) t[size_t(e - 1)] = shift;
  }
  auto rep = validate(h);
  if (rep.verdict != OrthogonalVerdict::positive)
    throw invariant_error("probe set not positive: " + rep.witness);
  return h.translated(AMVector(m, t));
}

std::map<std::string, Rational> derived_constants(const SymbolicFamily& s) {
  // One unknown per Levi between the pair: the sum of the derived constants
  // over P(L).  Zonotope probes have equal facet volumes across P(L), so the
  // product formula closes on these sums.
  std::vector<LeviPartition> levis;
  for (const auto& l : levis_above(s.levi))
    if (l.refines(s.ambient)) levis.push_back(l);
  size_t nu = levis.size();
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  for (int seed = 0; seed < (int)(2 * nu + 10); ++seed) {
    auto r = probe_orthogonal_set(s.ambient, s.levi, seed);
    std::vector<Rational> row;
    for (const auto& l : levis) {
      Rational common = 0;
      bool first = true;
      for (const auto& q : parabolics_with_levi_in(l, s.ambient)) {
        Rational v = hull_volume_direct(facet(r, q)).lattice_units;
        if (first) common = v;
        else if (v != common)
          throw invariant_error("probe facet volumes differ across P(" + l.key() + ")");
        first = false;
      }
      row.push_back(common);
    }
    a.push_back(row);
    rhs.push_back(volume_limit_checked(family_product(exponential_family(r), s), 2));
  }
  auto sol = linsolve_prime(a, rhs, nu);
  std::map<std::string, Rational> out;
  for (size_t i = 0; i < nu; ++i) out[levis[i].key()] = sol[i];
  if (out.at(s.levi.key()) != volume_limit_checked(s, 2))
    throw invariant_error("derived constants violate the volume identity");
  return out;
}

std::map<std::string, Rational> count_inversion_constants(const LeviPartition& ambient) {
  auto torus = LeviPartition::torus(ambient.n());
  std::vector<LeviPartition> levis;
  for (const auto& m : levis_above(torus))
    if (m.refines(ambient)) levis.push_back(m);
  size_t nu = levis.size();
  std::map<std::string, Rational> out;
  if (nu == 1) {
    out[torus.key()] = 1;
    return out;
  }
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  for (int seed = 0; seed < (int)(2 * nu + 10); ++seed) {
    auto h = probe_orthogonal_set(ambient, torus, seed);
    std::vector<Rational> row;
    for (const auto& m : levis) {
      Rational common = 0;
      bool first = true;
      for (const auto& q : parabolics_with_levi_in(m, ambient)) {
        Rational v = Rational(lattice_count_enumerate(facet(h, q)));
        if (first) common = v;
        else if (v != common)
          throw invariant_error("probe facet counts differ across P(" + m.key() + ")");
        first = false;
      }
      row.push_back(common);
    }
    a.push_back(row);
    rhs.push_back(hull_volume_direct(h).lattice_units);
  }
  auto sol = linsolve_prime(a, rhs, nu);
  for (size_t i = 0; i < nu; ++i) out[levis[i].key()] = sol[i];
  return out;
}

Rational region_volume(const OrthogonalSet& c, const OrthogonalSet& d, const ParabolicChain& q) {
  auto g = LeviPartition::group(c.levi.n());
  if (!(c.ambient == g)) throw computation_error("region_volume implemented for full ambient group");
  auto sum = c + d;
  auto l = q.levi();
  int dim = c.rel_dim();
  if (dim == 0) return 1;
  auto basis = pair_lattice_basis(c.levi, g);
  auto coords_of = [&](const AMVector& v) { return slice_coords(basis, v, g); };
  if (dim == 1) {
    // chambers: full interval for Q = G, half lines at the two vertices otherwise
    Rational lo, hi;
    bool first = true;
    for (const auto& [k, v] : sum.points) {
      Rational x = coords_of(v)[0];
      if (first || x < lo) lo = x;
      if (first || x > hi) hi = x;
      first = false;
    }
    if (l == g) {
      auto hv = hull_volume_direct(c);
      return hv.lattice_units;
    }
    // facet of c at q is a single vertex
    Rational vx = coords_of(facet(c, q).points.begin()->second)[0];
    int e0 = q.ordered_blocks()[0][0];
    int e1 = q.ordered_blocks()[1][0];
    Rational a = basis[0].coords[e0 - 1] - basis[0].coords[e1 - 1];
    if (a > 0) return hi > vx ? hi - vx : Rational(0);
    return vx > lo ? vx - lo : Rational(0);
  }
  if (dim != 2) throw computation_error("region_volume implemented for relative dimension <= 2");
  // polygon of E(c+d)
  std::vector<Pt2> spts;
  for (const auto& [k, v] : sum.points) {
    auto x = coords_of(v);
    spts.push_back({x[0], x[1]});
  }
  auto poly = hull2d(spts);
  if (l == g) return hull_volume_direct(c).lattice_units;
  auto fc = facet(c, q);
  std::vector<Pt2> fpts;
  for (const auto& [k, v] : fc.points) {
    auto x = coords_of(v);
    fpts.push_back({x[0], x[1]});
  }
  std::sort(fpts.begin(), fpts.end());
  fpts.erase(std::unique(fpts.begin(), fpts.end()), fpts.end());
  if (q.num_blocks() == q.n()) {
    // Borel chamber at a vertex: clip by the two chamber walls based there
    const Pt2& v0 = fpts[0];
    for (int b = 0; b + 1 < q.num_blocks(); ++b) {
      int e0 = q.ordered_blocks()[b][0];
      int e1 = q.ordered_blocks()[b + 1][0];
      Rational ax = basis[0].coords[e0 - 1] - basis[0].coords[e1 - 1];
      Rational ay = basis[1].coords[e0 - 1] - basis[1].coords[e1 - 1];
      poly = clip_halfplane(poly, ax, ay, -(ax * v0.first + ay * v0.second));
    }
    return polygon_area(poly);
  }
  // maximal parabolic: edge + ray
  if (fpts.size() != 2) throw computation_error("degenerate facet in region_volume");
  const Pt2& p = fpts[0];
  const Pt2& r = fpts[1];
  // ray direction: a_L^G in lattice coordinates, oriented into the chamber
  int e0 = q.ordered_blocks()[0][0];
  int e1 = q.ordered_blocks()[1][0];
  auto lbasis = pair_lattice_basis(l, g);  // one vector
  auto ucoords = slice_coords(basis, AMVector(c.levi, lbasis[0].coords), g);
  Pt2 u{ucoords[0], ucoords[1]};
  Rational alpha_u = (lbasis[0].coords[e0 - 1] - lbasis[0].coords[e1 - 1]);
  if (alpha_u < 0) u = {-u.first, -u.second};
  // region {p + s(r-p) + t u : s in [0,1], t >= 0}
  Pt2 e{r.first - p.first, r.second - p.second};
  auto cr = [](const Pt2& a, const Pt2& b) { return a.first * b.second - a.second * b.first; };
  Rational ce = cr(e, u);
  if (ce == 0) throw computation_error("ray parallel to facet in region_volume");
  // t >= 0 : sign(cross(e, x - p)) == sign(ce)
  {
    Rational ax = -e.second, ay = e.first;  // cross(e, x-p) = ax*(x-px)+ay*(y-py)
    Rational s = ce > 0 ? 1 : -1;
    poly = clip_halfplane(poly, s * ax, s * ay, s * (-(ax * p.first + ay * p.second)));
  }
  // 0 <= s <= 1 : cross(u, x - p)/cross(u, e) in [0,1]
  {
    Rational ax = -u.second, ay = u.first;
    Rational cu = cr(u, e);
    Rational s = cu > 0 ? 1 : -1;
    poly = clip_halfplane(poly, s * ax, s * ay, s * (-(ax * p.first + ay * p.second)));
    // cross(u, x - r) on the other side
    Rational s2 = cu > 0 ? -1 : 1;
    poly = clip_halfplane(poly, s2 * ax, s2 * ay, s2 * (-(ax * r.first + ay * r.second)));
  }
  return polygon_area(poly);
}

}  // namespace asflab
