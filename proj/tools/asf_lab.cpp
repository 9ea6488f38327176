#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "asflab/cache.hpp"
#include "asflab/series.hpp"
#include "asflab/transition.hpp"

using namespace asflab;

namespace {

std::vector<long> parse_longs(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stol(tok));
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  out << text << "\n";
  std::cerr << "wrote " << out_path << "\n";
}

struct Args {
  int d = 1;
  std::string n_str, q_str = "2,3,5";
  std::string out_path, format = "json", set_path, levi, cache_dir, parabolic;
  long window = -1;
  long nmax = 4;
  std::string validate_str;
  bool orbital_series = false;
  bool family_prime_enabled = false;
  std::string mode = "enumeration";
  int degree_cap = -1;
};

int run_count(const Args& a) {
  auto ns = parse_longs(a.n_str);
  auto qs = parse_longs(a.q_str);
  if ((int)ns.size() != a.d) throw computation_error("--n must have d entries");
  Cache cache(a.cache_dir);
  std::map<long, Rational> values;
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "n,q,count\n";
  for (long q : qs) {
    std::ostringstream key;
    key << "count d=" << a.d << " n=";
    for (long v : ns) key << v << ",";
    key << " q=" << q << " window=" << (a.window > 0 ? a.window : window_auto(ns));
    CountRecord rec;
    if (auto hit = cache.get(key.str())) {
      rec = CountRecord::from_json(*hit);
      std::cerr << "cache hit q=" << q << "\n";
    } else {
      std::cerr << "counting q=" << q << " ...\n";
      auto gamma = make_gamma(ns, q, default_precision(ns));
      rec = fundamental_domain_count(gamma, ns,
                                     a.window > 0 ? std::optional<long>(a.window) : std::nullopt);
      cache.put(key.str(), rec.to_json());
    }
    values[q] = Rational(rec.count);
    rows.push_back(nlohmann::json::parse(rec.to_json()));
    for (size_t i = 0; i < ns.size(); ++i) csv << (i ? " " : "") << ns[i];
    csv << "," << q << "," << rec.count.str() << "\n";
  }
  nlohmann::json j;
  j["counts"] = rows;
  long cap = a.degree_cap >= 0 ? a.degree_cap : (long)values.size() - 2;
  if ((int)values.size() >= cap + 2 && cap >= 0) {
    try {
      auto poly = interpolate_q(values, (int)cap);
      j["interpolation"] = poly.str();
      csv << "# F(q) = " << poly.str() << "\n";
    } catch (const computation_error& e) {
      j["interpolation_error"] = e.what();
    }
  }
  emit(a.format == "csv" ? csv.str() : j.dump(2), a.out_path);
  return 0;
}

int run_orbital(const Args& a) {
  auto ns = parse_longs(a.n_str);
  auto qs = parse_longs(a.q_str);
  if ((int)ns.size() != a.d) throw computation_error("--n must have d entries");
  nlohmann::json out = nlohmann::json::array();
  for (long q : qs) {
    std::cerr << "orbital q=" << q << " ...\n";
    auto gamma = make_gamma(ns, q, default_precision(ns));
    auto levi = a.levi.empty() ? LeviPartition::torus(a.d + 1)
                               : LeviPartition::from_key(a.d + 1, a.levi);
    nlohmann::json row;
    row["q"] = q;
    row["levi"] = levi.key();
    if (a.levi.empty()) {
      auto res = weighted_orbital(gamma, levi);
      row["J"] = rat_str(res.value);
      row["slice_points"] = res.slice_points.str();
      row["window"] = res.window;
    } else {
      row["J"] = rat_str(weighted_orbital(gamma, levi).value);
      row["J_reduced"] = rat_str(reduce_weighted(gamma, levi));
    }
    out.push_back(row);
  }
  emit(out.dump(2), a.out_path);
  return 0;
}

int run_transition(const Args& a) {
  auto ns = parse_longs(a.n_str);
  auto qs = parse_longs(a.q_str);
  if ((int)ns.size() != a.d) throw computation_error("--n must have d entries");
  bool all_ok = true;
  nlohmann::json out = nlohmann::json::array();
  for (long q : qs) {
    std::cerr << "transition q=" << q << " ...\n";
    auto gamma = make_gamma(ns, q, default_precision(ns));
    auto rep = transition_verify(gamma, ns);
    out.push_back(nlohmann::json::parse(rep.to_json()));
    all_ok = all_ok && rep.count_ok && rep.orbital_ok;
    if (!a.levi.empty()) {
      auto m = LeviPartition::from_key(a.d + 1, a.levi);
      Rational direct = weighted_orbital(gamma, m).value;
      Rational reduced = reduce_weighted(gamma, m);
      nlohmann::json red;
      red["levi"] = m.key();
      red["q"] = q;
      red["J_direct"] = rat_str(direct);
      red["J_reduced"] = rat_str(reduced);
      red["ok"] = direct == reduced;
      out.push_back(red);
      all_ok = all_ok && direct == reduced;
    }
  }
  emit(out.dump(2), a.out_path);
  if (!all_ok) throw invariant_error("transition identity failed");
  return 0;
}

int run_series(const Args& a) {
  auto qs = parse_longs(a.q_str);
  auto validate = parse_longs(a.validate_str.empty() ? std::to_string(a.nmax + 1) : a.validate_str);
  long train_max = a.nmax;
  long full_max = train_max;
  for (long v : validate) full_max = std::max(full_max, v);
  std::cerr << "building grid d=" << a.d << " n<=" << full_max << " ...\n";
  auto grid = build_series_grid(a.d, full_max, qs, a.orbital_series);
  nlohmann::json out;
  out["grid_csv"] = grid.to_csv();
  nlohmann::json fits = nlohmann::json::array();
  for (long q : qs) {
    std::map<Exponent, Rational> coeffs;
    std::vector<Exponent> train, val;
    for (const auto& cell : grid.cells) {
      if (cell.q != q) continue;
      Exponent e(cell.n.begin(), cell.n.end());
      if (a.orbital_series && cell.orbital) coeffs[e] = *cell.orbital;
      if (!a.orbital_series && cell.count) coeffs[e] = Rational(*cell.count);
      long mx = *std::max_element(cell.n.begin(), cell.n.end());
      if (mx <= train_max) train.push_back(e);
      else val.push_back(e);
    }
    auto fit = fit_rational(coeffs, train, val, a.d, 2 * a.d + 2, 2 * a.d + 2);
    nlohmann::json f = nlohmann::json::parse(fit.to_json());
    f["q"] = q;
    fits.push_back(f);
  }
  out["fits"] = fits;
  emit(a.format == "csv" ? grid.to_csv() : out.dump(2), a.out_path);
  return 0;
}

int run_gm(const std::string& op, const Args& a) {
  std::ifstream in(a.set_path);
  if (!in) throw computation_error("cannot open --set file " + a.set_path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto h = OrthogonalSet::from_json(ss.str());
  nlohmann::json out;
  if (op == "validate") {
    auto rep = validate(h);
    out["verdict"] = rep.verdict == OrthogonalVerdict::positive ? "positive"
                     : rep.verdict == OrthogonalVerdict::orthogonal_not_positive
                         ? "orthogonal-not-positive"
                         : "invalid";
    out["witness"] = rep.witness;
  } else if (op == "volume") {
    auto hv = hull_volume_direct(h);
    out["volume_lattice_units"] = rat_str(hv.lattice_units);
    out["kappa_sq"] = rat_str(hv.kappa_sq);
    out["volume_euclidean"] = hv.euclidean().str();
    out["volume_limit"] = rat_str(volume_limit_checked(exponential_family(h)));
  } else if (op == "count") {
    Int c = lattice_count(h, a.mode == "formula" ? CountMode::formula : CountMode::enumeration);
    if (a.mode != "formula") {
      Int cf = lattice_count(h, CountMode::formula);
      if (cf != c) throw invariant_error("count modes disagree");
    }
    out["count"] = c.str();
  } else if (op == "prime") {
    if (!a.family_prime_enabled)
      throw computation_error("family_prime is an optional extension; pass --enable-family-prime");
    auto q = ParabolicChain::from_key(h.levi.n(), a.parabolic);
    out["s_prime"] = rat_str(family_prime(h, q));
  } else {
    throw computation_error("unknown gm operation " + op);
  }
  emit(out.dump(2), a.out_path);
  return 0;
}

int run_selftest() {
  std::cerr << "selftest: partitions ... ";
  if (enumerate_levis(3).size() != 5 || enumerate_levis(4).size() != 15)
    throw invariant_error("Bell numbers");
  if (parabolics_above(LeviPartition::torus(3)).size() != 13)
    throw invariant_error("ordered set partitions");
  std::cerr << "ok\n";

  std::cerr << "selftest: gm counts and volumes ... ";
  auto g3 = LeviPartition::group(3);
  auto a3 = LeviPartition::torus(3);
  for (int seed = 0; seed < 12; ++seed) {
    auto h = probe_orthogonal_set(g3, a3, seed);
    if (lattice_count(h, CountMode::enumeration) != lattice_count(h, CountMode::formula))
      throw invariant_error("count modes disagree");
    if (hull_volume_direct(h).lattice_units != volume_limit_checked(exponential_family(h)))
      throw invariant_error("hull volume vs family volume");
  }
  std::cerr << "ok\n";

  std::cerr << "selftest: minimal form ... ";
  for (int seed = 0; seed < 25; ++seed) {
    std::vector<long> n{seed % 3, (seed / 3) % 3};
    auto gamma = make_gamma(n, 5, default_precision(n));
    auto datum = minimal_form(root_valuation(gamma), 3);
    (void)datum;
  }
  std::cerr << "ok\n";

  std::cerr << "selftest: engine + transition (GL2, n=1, q=2) ... ";
  auto gamma = make_gamma({1}, 2, 12);
  auto rep = transition_verify(gamma, {1});
  if (!rep.count_ok || !rep.orbital_ok) throw invariant_error("transition identity");
  if (rep.count_direct != 3) throw invariant_error("GL2 n=1 q=2 count");
  std::cerr << "ok\n";
  std::cout << "{\"selftest\": \"pass\"}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations on fundamental domains of affine Springer fibers"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* c, bool with_n = true) {
    c->add_option("--d", a.d, "rank parameter d (group GL_{d+1})");
    if (with_n) c->add_option("--n", a.n_str, "root valuation datum, comma separated");
    c->add_option("--q", a.q_str, "primes, comma separated");
    c->add_option("--window", a.window, "eps-window override");
    c->add_option("--out", a.out_path, "output path (default stdout)");
    c->add_option("--format", a.format, "json|csv");
    c->add_option("--cache-dir", a.cache_dir, "cache directory (default ASF_CACHE_DIR)");
  };

  auto* count = app.add_subcommand("count", "fundamental-domain counts and q-interpolation");
  add_common(count);
  count->add_option("--degree-cap", a.degree_cap, "interpolation degree cap");

  auto* orbital = app.add_subcommand("orbital", "weighted orbital integrals");
  add_common(orbital);
  orbital->add_option("--levi", a.levi, "Levi weight (blocks key, e.g. 12|3)");

  auto* transition = app.add_subcommand("transition", "verify the transition identities");
  auto* verify = transition->add_subcommand("verify", "counts vs weighted orbital integrals");
  add_common(verify);
  verify->add_option("--levi", a.levi, "also check the Levi reduction for this Levi");

  auto* series = app.add_subcommand("series", "grid build and rational fit");
  add_common(series, false);
  series->add_option("--nmax", a.nmax, "training box bound");
  series->add_option("--validate", a.validate_str, "held-out entries, comma separated");
  series->add_flag("--orbital", a.orbital_series, "fit the orbital series instead of counts");

  auto* gm = app.add_subcommand("gm", "orthogonal-set calculator");
  std::string gm_op;
  gm->add_option("op", gm_op, "validate|volume|count|prime")->required();
  gm->add_option("--set", a.set_path, "orthogonal set JSON file")->required();
  gm->add_option("--mode", a.mode, "enumeration|formula");
  gm->add_option("--parabolic", a.parabolic, "parabolic key for prime");
  gm->add_flag("--enable-family-prime", a.family_prime_enabled, "enable the optional extension");
  gm->add_option("--out", a.out_path, "output path");

  auto* selftest = app.add_subcommand("selftest", "run the invariant suites");
  (void)selftest;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (count->parsed()) return run_count(a);
    if (orbital->parsed()) return run_orbital(a);
    if (transition->parsed()) return run_transition(a);
    if (series->parsed()) return run_series(a);
    if (gm->parsed()) return run_gm(gm_op, a);
    if (selftest->parsed()) return run_selftest();
  } catch (const invariant_error& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 3;
  } catch (const computation_error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
