#include "asflab/valuation.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <numeric>
#include <sstream>

namespace asflab {

Fq Fq::inv() const {
  if (v == 0) throw computation_error("inverse of 0 in F_q");
  long r = 1, b = v, e = q - 2;
  while (e) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return Fq(q, r);
}

FqSeries::FqSeries(long q, long low, std::vector<long> coeffs, long prec)
    : q_(q), low_(low), prec_(prec), c_(std::move(coeffs)) {
  for (auto& x : c_) x = ((x % q) + q) % q;
  if (low_ + (long)c_.size() > prec_) c_.resize(size_t(std::max<long>(0, prec_ - low_)));
  trim();
}

void FqSeries::trim() {
  while (!c_.empty() && c_.front() == 0) {
    c_.erase(c_.begin());
    ++low_;
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  if (c_.empty()) low_ = 0;
}

FqSeries FqSeries::monomial(long q, long exp, long coeff, long prec) {
  return FqSeries(q, exp, {coeff}, prec);
}

Fq FqSeries::coeff(long k) const {
  if (k >= prec_) throw computation_error("coefficient read beyond working precision");
  if (k < low_ || k >= low_ + (long)c_.size()) return Fq(q_, 0);
  return Fq(q_, c_[size_t(k - low_)]);
}

FqSeries FqSeries::operator+(const FqSeries& o) const {
  long prec = std::min(prec_, o.prec_);
  long lo = std::min(c_.empty() ? prec : low_, o.c_.empty() ? prec : o.low_);
  std::vector<long> out;
  for (long k = lo; k < prec; ++k) {
    long a = (k >= low_ && k < low_ + (long)c_.size()) ? c_[size_t(k - low_)] : 0;
    long b = (k >= o.low_ && k < o.low_ + (long)o.c_.size()) ? o.c_[size_t(k - o.low_)] : 0;
    out.push_back((a + b) % q_);
  }
  return FqSeries(q_, lo, out, prec);
}

FqSeries FqSeries::operator-(const FqSeries& o) const {
  FqSeries neg = o;
  for (auto& x : neg.c_) x = (q_ - x) % q_;
  neg.trim();
  return *this + neg;
}

FqSeries FqSeries::operator*(const FqSeries& o) const {
  if (c_.empty() || o.c_.empty()) {
    // zero to known order; product known at least to the better bound
    long prec = std::min(prec_ + (o.c_.empty() ? 0 : o.low_), o.prec_ + (c_.empty() ? 0 : low_));
    if (c_.empty() && o.c_.empty()) prec = std::min(prec_ + o.prec_, prec_ + o.prec_);
    return FqSeries(q_, 0, {}, prec);
  }
  long lo = low_ + o.low_;
  long prec = std::min(low_ + o.prec_, o.low_ + prec_);
  std::vector<long> out(size_t(std::max<long>(0, prec - lo)), 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      long k = low_ + (long)i + o.low_ + (long)j;
      if (k >= prec) break;
      out[size_t(k - lo)] = (out[size_t(k - lo)] + c_[i] * o.c_[j]) % q_;
    }
  }
  return FqSeries(q_, lo, out, prec);
}

FqSeries FqSeries::shifted(long k) const {
  FqSeries out = *this;
  out.low_ += k;
  out.prec_ += k;
  return out;
}

FqSeries FqSeries::poly_extended(long new_prec) const {
  FqSeries out = *this;
  out.prec_ = std::max(prec_, new_prec);
  return out;
}

FqSeries FqSeries::truncated(long new_prec) const {
  FqSeries out = *this;
  out.prec_ = std::min(prec_, new_prec);
  if (out.low_ + (long)out.c_.size() > out.prec_)
    out.c_.resize(size_t(std::max<long>(0, out.prec_ - out.low_)));
  out.trim();
  return out;
}

bool FqSeries::is_zero_known() const { return c_.empty(); }

long FqSeries::valuation() const {
  if (c_.empty())
    throw computation_error("series vanishes to working precision " + std::to_string(prec_));
  return low_;
}

bool FqSeries::val_at_least(long k) const {
  if (c_.empty()) {
    if (prec_ < k) throw computation_error("precision too small to decide valuation bound");
    return true;
  }
  return low_ >= k;
}

FqSeries FqSeries::divided_by(const FqSeries& o) const {
  long ov = o.valuation();
  if (c_.empty()) return FqSeries(q_, 0, {}, prec_ - ov);
  long v = low_;
  // long division; the remainder precision shrinks as multiples of o are
  // subtracted, so the loop reads only what stays known
  FqSeries rem = *this;
  std::vector<long> out;
  long out_low = v - ov;
  long k = out_low;
  for (; k + ov < rem.prec(); ++k) {
    Fq c = rem.coeff(k + ov);
    Fq qc = c * o.coeff(ov).inv();
    out.push_back(qc.v);
    if (!qc.zero()) rem = rem - (o.shifted(k) * FqSeries(q_, 0, {qc.v}, prec_));
  }
  return FqSeries(q_, out_low, out, k);
}

std::string FqSeries::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    if (!first) os << " + ";
    first = false;
    long e = low_ + (long)i;
    if (e == 0) os << c_[i];
    else {
      if (c_[i] != 1) os << c_[i] << "*";
      os << "eps";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

bool FqSeries::operator==(const FqSeries& o) const {
  return q_ == o.q_ && low_ == o.low_ && c_ == o.c_;
}

std::string GammaSpec::to_json() const {
  nlohmann::json j;
  j["q"] = q;
  j["K"] = prec;
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json terms = nlohmann::json::array();
    for (long k = 0; k < prec; ++k) {
      Fq c = e.coeff(k);
      if (!c.zero()) terms.push_back({k, c.v});
    }
    es.push_back(terms);
  }
  j["entries"] = es;
  return j.dump();
}

GammaSpec GammaSpec::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  GammaSpec g;
  g.q = j.at("q").get<long>();
  g.prec = j.at("K").get<long>();
  for (const auto& terms : j.at("entries")) {
    FqSeries s = FqSeries::zero(g.q, g.prec);
    for (const auto& t : terms)
      s = s + FqSeries::monomial(g.q, t.at(0).get<long>(), t.at(1).get<long>(), g.prec);
    g.entries.push_back(s);
  }
  return g;
}

std::string GammaSpec::fingerprint() const {
  std::ostringstream os;
  os << "q" << q << "K" << prec;
  for (const auto& e : entries) os << ";" << e.str();
  return os.str();
}

GammaSpec GammaSpec::restricted(const std::vector<int>& elements) const {
  GammaSpec g;
  g.q = q;
  g.prec = prec;
  for (int e : elements) g.entries.push_back(entries.at(size_t(e - 1)));
  return g;
}

GammaSpec GammaSpec::extended(long new_prec) const {
  GammaSpec g;
  g.q = q;
  g.prec = std::max(prec, new_prec);
  for (const auto& e : entries) g.entries.push_back(e.poly_extended(g.prec));
  return g;
}

GammaSpec GammaSpec::scaled_by_eps(long k) const {
  GammaSpec g;
  g.q = q;
  g.prec = prec + k;
  for (const auto& e : entries) g.entries.push_back(e.shifted(k));
  return g;
}

std::map<std::pair<int, int>, long> root_valuation(const GammaSpec& gamma) {
  std::map<std::pair<int, int>, long> out;
  int n = gamma.n();
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      FqSeries diff = gamma.entries[size_t(i - 1)] - gamma.entries[size_t(j - 1)];
      if (diff.is_zero_known())
        throw computation_error("entries " + std::to_string(i) + "," + std::to_string(j) +
                                " coincide to precision " + std::to_string(gamma.prec));
      long v = diff.valuation();
      if (v < 0) throw computation_error("gamma is not integral");
      out[{i, j}] = v;
    }
  }
  return out;
}

namespace {

// Check the min rule for the ordering w: for every i <= j,
// R(w_i, w_{j+1}) = min of the consecutive values.
bool min_rule_holds(const std::map<std::pair<int, int>, long>& r, const std::vector<int>& w) {
  int d = (int)w.size() - 1;
  for (int i = 0; i < d; ++i) {
    long m = r.at({w[size_t(i)], w[size_t(i + 1)]});
    for (int j = i + 1; j < d; ++j) {
      m = std::min(m, r.at({w[size_t(j)], w[size_t(j + 1)]}));
      if (r.at({w[size_t(i)], w[size_t(j + 1)]}) != m) return false;
    }
  }
  return true;
}

}  // namespace

RootValuationDatum minimal_form(const std::map<std::pair<int, int>, long>& r, int n) {
  for (const auto& [key, v] : r) {
    if (r.at({key.second, key.first}) != v)
      throw computation_error("valuation map not symmetric under negation");
    if (v < 0) throw computation_error("negative root valuation");
  }
  std::vector<int> w(static_cast<size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  do {
    if (min_rule_holds(r, w)) {
      RootValuationDatum out;
      out.w = w;
      for (int i = 0; i + 1 < n; ++i) out.n.push_back(r.at({w[size_t(i)], w[size_t(i + 1)]}));
      return out;
    }
  } while (std::next_permutation(w.begin(), w.end()));
  throw computation_error("no ordering satisfies the min rule; inconsistent valuation map");
}

RootFiltration filtration(const std::map<std::pair<int, int>, long>& r, int n) {
  std::vector<long> values;
  for (const auto& [k, v] : r) values.push_back(v);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  RootFiltration out;
  for (long m : values) {
    // blocks: i ~ j iff val >= m (transitive by the ultrametric inequality)
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[size_t(x)] == x ? x : parent[size_t(x)] = find(parent[size_t(x)]); };
    for (const auto& [key, v] : r)
      if (v >= m) parent[size_t(find(key.first - 1))] = find(key.second - 1);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i + 1);
    std::vector<std::vector<int>> blocks;
    for (auto& [root, members] : groups) blocks.push_back(members);
    LeviPartition levi(n, blocks);
    if (levi.num_blocks() == n) continue;  // empty root system
    if (!out.chain.empty() && out.chain.back() == levi) continue;
    out.breaking_points.push_back(m);
    out.chain.push_back(levi);
  }
  return out;
}

long default_precision(const std::vector<long>& n) {
  long mx = 0;
  for (long v : n) mx = std::max(mx, v);
  return 2 * mx + 2;
}

GammaSpec make_gamma(const std::vector<long>& n, long q, long prec, int variant) {
  for (long v : n)
    if (v < 0) throw computation_error("datum entries must be nonnegative");
  int d = (int)n.size();
  GammaSpec g;
  g.q = q;
  g.prec = prec;
  if (prec < default_precision(n)) g.prec = default_precision(n);

  // entries a_1 = 0, a_{i+1} = a_i + c_i eps^{n_i}; choose the c_i by
  // backtracking so that every window sum keeps exact valuation min(n_l).
  std::vector<long> c(size_t(d), 0);
  std::function<bool(int)> place = [&](int i) -> bool {
    if (i == d) return true;
    for (long step = 0; step < q - 1; ++step) {
      long cand = 1 + (step + variant) % (q - 1);
      c[size_t(i)] = cand;
      bool ok = true;
      // windows ending at i+1: sum_{l=j..i} c_l eps^{n_l} must have valuation
      // min(n_j..n_i)
      for (int j = i; j >= 0 && ok; --j) {
        long m = *std::min_element(n.begin() + j, n.begin() + i + 1);
        long coeff = 0;
        for (int l = j; l <= i; ++l)
          if (n[size_t(l)] == m) coeff = (coeff + c[size_t(l)]) % q;
        if (coeff == 0) ok = false;
      }
      if (ok && place(i + 1)) return true;
    }
    c[size_t(i)] = 0;
    return false;
  };
  if (!place(0))
    throw computation_error("q = " + std::to_string(q) +
                            " too small: no diagonal element over F_q realizes this datum");

  FqSeries acc = FqSeries::zero(q, g.prec);
  g.entries.push_back(acc);
  for (int i = 0; i < d; ++i) {
    acc = acc + FqSeries::monomial(q, n[size_t(i)], c[size_t(i)], g.prec);
    g.entries.push_back(acc);
  }
  // variants beyond coefficient rotation: add a high-order tail that cannot
  // change any root valuation
  if (variant > 0) {
    long tail_exp = *std::max_element(n.begin(), n.end()) + 1 + variant;
    if (tail_exp < g.prec) {
      for (size_t i = 1; i < g.entries.size(); ++i) {
        long co = (long(i) + variant) % q;
        if (co) g.entries[i] = g.entries[i] + FqSeries::monomial(q, tail_exp + (long)i, co, g.prec);
      }
    }
  }

  auto r = root_valuation(g);
  auto datum = minimal_form(r, d + 1);
  std::vector<int> identity(size_t(d + 1));
  std::iota(identity.begin(), identity.end(), 1);
  if (!min_rule_holds(r, identity) ||
      [&] {
        for (int i = 0; i < d; ++i)
          if (r.at({i + 1, i + 2}) != n[size_t(i)]) return true;
        return false;
      }())
    throw invariant_error("make_gamma failed to realize the datum exactly");
  (void)datum;
  return g;
}

}  // namespace asflab
