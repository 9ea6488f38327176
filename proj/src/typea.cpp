#include "asflab/typea.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace asflab {

std::vector<RootIndex> all_roots(int n) {
  std::vector<RootIndex> out;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) out.emplace_back(i, j);
  return out;
}

std::vector<RootIndex> positive_roots(int n) {
  std::vector<RootIndex> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.emplace_back(i, j);
  return out;
}

static std::vector<std::vector<int>> normalize_blocks(int n, std::vector<std::vector<int>> blocks) {
  std::vector<char> seen(n, 0);
  for (auto& b : blocks) {
    if (b.empty()) throw computation_error("empty block in partition");
    std::sort(b.begin(), b.end());
    for (int e : b) {
      if (e < 1 || e > n || seen[e - 1]) throw computation_error("bad partition of {1.." + std::to_string(n) + "}");
      seen[e - 1] = 1;
    }
  }
  for (char c : seen)
    if (!c) throw computation_error("partition does not cover {1..n}");
  return blocks;
}

LeviPartition::LeviPartition(int n, std::vector<std::vector<int>> blocks) : n_(n) {
  blocks_ = normalize_blocks(n, std::move(blocks));
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  block_of_.assign(n_, -1);
  for (int b = 0; b < (int)blocks_.size(); ++b)
    for (int e : blocks_[b]) block_of_[e - 1] = b;
}

LeviPartition LeviPartition::torus(int n) {
  std::vector<std::vector<int>> bl;
  for (int i = 1; i <= n; ++i) bl.push_back({i});
  return LeviPartition(n, bl);
}

LeviPartition LeviPartition::group(int n) {
  std::vector<int> b(n);
  std::iota(b.begin(), b.end(), 1);
  return LeviPartition(n, {b});
}

static std::vector<std::vector<int>> parse_key_blocks(const std::string& key) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> cur;
  for (char c : key) {
    if (c == '|') {
      blocks.push_back(cur);
      cur.clear();
    } else if (c >= '1' && c <= '9') {
      cur.push_back(c - '0');
    } else {
      throw computation_error("bad partition key: " + key);
    }
  }
  blocks.push_back(cur);
  return blocks;
}

LeviPartition LeviPartition::from_key(int n, const std::string& key) {
  return LeviPartition(n, parse_key_blocks(key));
}

static std::string blocks_key(const std::vector<std::vector<int>>& blocks) {
  std::ostringstream os;
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (b) os << '|';
    for (int e : blocks[b]) os << e;
  }
  return os.str();
}

std::string LeviPartition::key() const { return blocks_key(blocks_); }

bool LeviPartition::refines(const LeviPartition& coarser) const {
  if (n_ != coarser.n_) return false;
  for (const auto& b : blocks_) {
    int target = coarser.block_of(b[0]);
    for (int e : b)
      if (coarser.block_of(e) != target) return false;
  }
  return true;
}

ParabolicChain::ParabolicChain(int n, std::vector<std::vector<int>> ordered_blocks) : n_(n) {
  ordered_ = std::move(ordered_blocks);
  normalize_blocks(n, ordered_);  // validates; keeps given order
  for (auto& b : ordered_) std::sort(b.begin(), b.end());
  pos_of_.assign(n_, -1);
  for (int b = 0; b < (int)ordered_.size(); ++b)
    for (int e : ordered_[b]) pos_of_[e - 1] = b;
}

ParabolicChain ParabolicChain::from_key(int n, const std::string& key) {
  return ParabolicChain(n, parse_key_blocks(key));
}

LeviPartition ParabolicChain::levi() const { return LeviPartition(n_, ordered_); }

std::string ParabolicChain::key() const { return blocks_key(ordered_); }

std::vector<LeviPartition> enumerate_levis(int n) {
  if (n < 1) throw computation_error("enumerate_levis needs n >= 1");
  // Restricted growth strings, lexicographic.
  std::vector<LeviPartition> out;
  std::vector<int> rgs(n, 0);
  while (true) {
    int k = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<int>> blocks(k);
    for (int i = 0; i < n; ++i) blocks[rgs[i]].push_back(i + 1);
    out.emplace_back(n, blocks);
    int i = n - 1;
    for (; i > 0; --i) {
      int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
      if (rgs[i] < cap) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
      rgs[i] = 0;
    }
    if (i == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ParabolicChain> parabolics_with_levi(const LeviPartition& m) {
  int k = m.num_blocks();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<ParabolicChain> out;
  do {
    std::vector<std::vector<int>> ordered;
    for (int b : perm) ordered.push_back(m.blocks()[b]);
    out.emplace_back(m.n(), ordered);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LeviPartition> levis_above(const LeviPartition& m) {
  std::vector<LeviPartition> out;
  for (const auto& l : enumerate_levis(m.num_blocks())) {
    // l partitions the blocks of m
    std::vector<std::vector<int>> merged;
    for (const auto& group : l.blocks()) {
      std::vector<int> blk;
      for (int b : group) {
        const auto& src = m.blocks()[b - 1];
        blk.insert(blk.end(), src.begin(), src.end());
      }
      merged.push_back(blk);
    }
    out.emplace_back(m.n(), merged);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ParabolicChain> parabolics_above(const LeviPartition& m) {
  std::vector<ParabolicChain> out;
  for (const auto& l : levis_above(m)) {
    auto ps = parabolics_with_levi(l);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ParabolicChain> parabolics_with_levi_in(const LeviPartition& m, const LeviPartition& l) {
  if (!m.refines(l)) throw computation_error("P^L(M) needs M refining L");
  // Per L-block, the M-blocks inside it get permuted independently.
  std::vector<std::vector<int>> members(l.num_blocks());
  for (int b = 0; b < m.num_blocks(); ++b)
    members[l.block_of(m.blocks()[b][0])].push_back(b);
  std::vector<std::vector<std::vector<int>>> per_lblock;  // orderings per L-block
  for (auto& ms : members) {
    std::vector<std::vector<int>> perms;
    std::sort(ms.begin(), ms.end());
    do perms.push_back(ms);
    while (std::next_permutation(ms.begin(), ms.end()));
    per_lblock.push_back(perms);
  }
  std::vector<ParabolicChain> out;
  std::vector<size_t> idx(per_lblock.size(), 0);
  while (true) {
    std::vector<std::vector<int>> ordered;
    for (size_t g = 0; g < per_lblock.size(); ++g)
      for (int b : per_lblock[g][idx[g]]) ordered.push_back(m.blocks()[b]);
    out.emplace_back(m.n(), ordered);
    size_t g = 0;
    while (g < idx.size() && ++idx[g] == per_lblock[g].size()) idx[g++] = 0;
    if (g == idx.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParabolicChain glue(const ParabolicChain& r, const ParabolicChain& q) {
  // Reorder r's blocks so that blocks inside earlier q-blocks come first,
  // preserving the relative order of r within each q-block.
  std::vector<std::pair<std::pair<int, int>, std::vector<int>>> tagged;
  for (int b = 0; b < r.num_blocks(); ++b) {
    int e = r.ordered_blocks()[b][0];
    tagged.push_back({{q.position_of(e), b}, r.ordered_blocks()[b]});
  }
  std::stable_sort(tagged.begin(), tagged.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::vector<int>> ordered;
  for (auto& t : tagged) ordered.push_back(t.second);
  return ParabolicChain(r.n(), ordered);
}

AMVector::AMVector(LeviPartition m, std::vector<Rational> c) : levi(std::move(m)), coords(std::move(c)) {
  if ((int)coords.size() != levi.n()) throw computation_error("AMVector length mismatch");
  for (const auto& b : levi.blocks()) {
    for (int e : b)
      if (coords[e - 1] != coords[b[0] - 1])
        throw computation_error("AMVector not constant on blocks of " + levi.key());
  }
}

Rational AMVector::dot(const AMVector& o) const { return dot_coords(o.coords); }

Rational AMVector::dot_coords(const std::vector<Rational>& v) const {
  Rational s = 0;
  for (size_t i = 0; i < coords.size(); ++i) s += coords[i] * v[i];
  return s;
}

AMVector AMVector::project(const LeviPartition& coarser) const {
  if (!levi.refines(coarser)) throw computation_error("projection target must be coarser");
  return project_coords(coords, coarser);
}

bool AMVector::in_lambda() const {
  for (const auto& b : levi.blocks()) {
    Rational s = coords[b[0] - 1] * (int)b.size();
    if (!is_integer(s)) return false;
  }
  return true;
}

AMVector AMVector::operator+(const AMVector& o) const {
  std::vector<Rational> c(coords);
  for (size_t i = 0; i < c.size(); ++i) c[i] += o.coords[i];
  return AMVector(levi, c);
}

AMVector AMVector::operator-(const AMVector& o) const {
  std::vector<Rational> c(coords);
  for (size_t i = 0; i < c.size(); ++i) c[i] -= o.coords[i];
  return AMVector(levi, c);
}

AMVector AMVector::scaled(const Rational& c) const {
  std::vector<Rational> v(coords);
  for (auto& x : v) x *= c;
  return AMVector(levi, v);
}

Rational AMVector::total() const {
  Rational s = 0;
  for (const auto& x : coords) s += x;
  return s;
}

AMVector project_coords(const std::vector<Rational>& v, const LeviPartition& m) {
  std::vector<Rational> out(v.size());
  for (const auto& b : m.blocks()) {
    Rational s = 0;
    for (int e : b) s += v[e - 1];
    s /= (int)b.size();
    for (int e : b) out[e - 1] = s;
  }
  return AMVector(m, out);
}

AMVector block_coroot(const LeviPartition& m, int b_from, int b_to) {
  std::vector<Rational> v(m.n(), 0);
  const auto& bf = m.blocks()[b_from];
  const auto& bt = m.blocks()[b_to];
  for (int e : bf) v[e - 1] = Rational(1, (int)bf.size());
  for (int e : bt) v[e - 1] = Rational(-1, (int)bt.size());
  return AMVector(m, v);
}

Rational rational_det(std::vector<std::vector<Rational>> a) {
  int n = (int)a.size();
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

std::vector<Rational> solve_in_basis(const std::vector<std::vector<Rational>>& basis_cols,
                                     const std::vector<Rational>& v) {
  size_t dim = v.size(), k = basis_cols.size();
  // Normal equations are avoided: plain elimination on the rectangular system.
  std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(k + 1));
  for (size_t r = 0; r < dim; ++r) {
    for (size_t c = 0; c < k; ++c) a[r][c] = basis_cols[c][r];
    a[r][k] = v[r];
  }
  size_t row = 0;
  std::vector<int> pivot_of_col(k, -1);
  for (size_t c = 0; c < k && row < dim; ++c) {
    size_t p = row;
    while (p < dim && a[p][c] == 0) ++p;
    if (p == dim) continue;
    std::swap(a[p], a[row]);
    for (size_t r = 0; r < dim; ++r) {
      if (r == row || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[row][c];
      for (size_t x = c; x <= k; ++x) a[r][x] -= f * a[row][x];
    }
    pivot_of_col[c] = (int)row;
    ++row;
  }
  std::vector<Rational> sol(k, 0);
  for (size_t c = 0; c < k; ++c) {
    if (pivot_of_col[c] < 0) throw computation_error("degenerate basis in solve_in_basis");
    sol[c] = a[pivot_of_col[c]][k] / a[pivot_of_col[c]][c];
  }
  for (size_t r = 0; r < dim; ++r) {
    Rational s = 0;
    for (size_t c = 0; c < k; ++c) s += basis_cols[c][r] * sol[c];
    if (s != v[r]) throw computation_error("vector not in span in solve_in_basis");
  }
  return sol;
}

static Rational gram_det(const std::vector<AMVector>& vs) {
  int k = (int)vs.size();
  if (k == 0) return 1;
  std::vector<std::vector<Rational>> g(k, std::vector<Rational>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) g[a][b] = vs[a].dot(vs[b]);
  return rational_det(g);
}

SimpleData simple_data(const ParabolicChain& p) {
  SimpleData out;
  auto m = p.levi();
  for (int b = 0; b + 1 < p.num_blocks(); ++b) {
    const auto& bf = p.ordered_blocks()[b];
    const auto& bt = p.ordered_blocks()[b + 1];
    int from = m.block_of(bf[0]);
    int to = m.block_of(bt[0]);
    out.coroots.push_back(block_coroot(m, from, to));
    out.root_reps.emplace_back(bf[0], bt[0]);
  }
  out.covol_sq = gram_det(out.coroots);
  return out;
}

std::optional<AMVector> adjacency(const ParabolicChain& p, const ParabolicChain& q) {
  if (!(p.levi() == q.levi())) throw computation_error("adjacency needs parabolics in the same P(M)");
  int k = p.num_blocks();
  int diff = -1;
  for (int b = 0; b < k; ++b) {
    if (p.ordered_blocks()[b] != q.ordered_blocks()[b]) {
      diff = b;
      break;
    }
  }
  if (diff < 0) return std::nullopt;  // equal
  if (diff + 1 >= k) return std::nullopt;
  if (p.ordered_blocks()[diff] != q.ordered_blocks()[diff + 1] ||
      p.ordered_blocks()[diff + 1] != q.ordered_blocks()[diff])
    return std::nullopt;
  for (int b = diff + 2; b < k; ++b)
    if (p.ordered_blocks()[b] != q.ordered_blocks()[b]) return std::nullopt;
  auto m = p.levi();
  return block_coroot(m, m.block_of(p.ordered_blocks()[diff][0]),
                      m.block_of(p.ordered_blocks()[diff + 1][0]));
}

std::vector<AMVector> pair_lattice_basis(const LeviPartition& m, const LeviPartition& l) {
  if (!m.refines(l)) throw computation_error("kappa needs M refining L");
  std::vector<std::vector<int>> members(l.num_blocks());
  for (int b = 0; b < m.num_blocks(); ++b)
    members[l.block_of(m.blocks()[b][0])].push_back(b);
  std::vector<AMVector> basis;
  for (auto& ms : members) {
    std::sort(ms.begin(), ms.end());
    for (size_t i = 0; i + 1 < ms.size(); ++i)
      basis.push_back(block_coroot(m, ms[i], ms[i + 1]));
  }
  return basis;
}

Rational kappa_sq(const LeviPartition& m, const LeviPartition& l) {
  return gram_det(pair_lattice_basis(m, l));
}

Rational theta_coefficient(const LeviPartition& m, const LeviPartition& l, const LeviPartition& lp) {
  if (!m.refines(l) || !m.refines(lp)) throw computation_error("theta needs M contained in L and L'");
  auto g = LeviPartition::group(m.n());
  int diml = l.num_blocks() == 0 ? 0 : m.num_blocks() - l.num_blocks();
  int dimlp = m.num_blocks() - lp.num_blocks();
  int dimg = m.num_blocks() - 1;
  if (diml + dimlp != dimg) return 0;
  auto bl = pair_lattice_basis(m, l);
  auto blp = pair_lattice_basis(m, lp);
  std::vector<AMVector> all = bl;
  all.insert(all.end(), blp.begin(), blp.end());
  Rational gd = gram_det(all);
  if (gd == 0) return 0;  // spans overlap
  Rational theta_sq = gd / (kappa_sq(m, l) * kappa_sq(l, g));
  auto r = rat_sqrt_exact(theta_sq);
  if (!r) throw invariant_error("theta coefficient is not rational: theta^2 = " + theta_sq.str());
  return *r;
}

}  // namespace asflab
