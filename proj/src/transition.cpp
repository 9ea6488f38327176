#include "asflab/transition.hpp"

#include <algorithm>
#include <json.hpp>

namespace asflab {

Rational e_restricted_volume(const LeviPartition& l) {
  // grouped derived constants of the global e-family, solved from the
  // product formula; agrees with the volume of the restricted family
  static std::map<int, std::map<std::string, Rational>> cache;
  auto g = LeviPartition::group(l.n());
  auto a = LeviPartition::torus(l.n());
  auto it = cache.find(l.n());
  if (it == cache.end()) it = cache.emplace(l.n(), derived_constants(e_family(g, a))).first;
  return it->second.at(l.key());
}

Rational e_inverse_restricted_volume(const LeviPartition& l, const LeviPartition& m) {
  // the count-to-volume inversion constants inside L; these play the role of
  // the grouped derived constants of the inverse lattice-count family
  static std::map<std::string, std::map<std::string, Rational>> cache;
  auto it = cache.find(l.key());
  if (it == cache.end()) it = cache.emplace(l.key(), count_inversion_constants(l)).first;
  return it->second.at(m.key());
}

Rational facet_volume_checked(const OrthogonalSet& ec, const LeviPartition& m,
                              const LeviPartition& l) {
  auto ecm = project(ec, m);
  bool first = true;
  Rational vol = 0;
  for (const auto& q : parabolics_with_levi(l)) {
    Rational v = hull_volume_direct(facet(ecm, q)).lattice_units;
    if (first) vol = v;
    else if (v != vol)
      throw invariant_error("facet volume of Ec(x0) depends on the parabolic in P(" + l.key() + ")");
    first = false;
  }
  return vol;
}

TransitionInstance build_instance(const GammaSpec& gamma, const std::vector<long>& datum) {
  TransitionInstance inst;
  inst.gamma = gamma;
  inst.datum = datum;
  long w = window_auto(datum);
  auto g = gamma.extended((gamma.n() + 2) * (2 * (w + 1) + 4));
  inst.gamma = g;
  inst.base = find_regular_point(g, w);
  inst.ec_base = ec_set(inst.base, LeviPartition::torus(g.n()), g.prec);
  inst.levis = enumerate_levis(g.n());
  for (const auto& m : inst.levis) {
    inst.orbital[m.key()] = levi_orbital(g, m);
    inst.count[m.key()] = levi_count(g, m);
    inst.disc[m.key()] = discriminant_valuation(g, m);
  }
  return inst;
}

Rational predict_count(const TransitionInstance& inst, std::vector<TransitionTerm>* terms) {
  int n = inst.gamma.n();
  auto gp = LeviPartition::group(n);
  Rational total = 0;
  for (const auto& m : inst.levis) {
    for (const auto& l : levis_above(m)) {
      int sign = (n - m.num_blocks()) % 2 ? -1 : 1;
      Rational vml = facet_volume_checked(inst.ec_base, m, l);
      Rational el = e_restricted_volume(l);
      Rational summand = sign * inst.orbital.at(m.key()) * vml * el;
      total += summand;
      if (terms) {
        TransitionTerm t;
        t.levi_m = m.key();
        t.levi_l = l.key();
        t.sign = sign;
        t.orbital = inst.orbital.at(m.key());
        t.gm_constant = vml * el;
        t.value = summand;
        terms->push_back(t);
      }
    }
  }
  (void)gp;
  Rational predicted = total * rat_pow(Rational(inst.gamma.q), inst.disc.at(gp.key()));
  if (!is_integer(predicted))
    throw invariant_error("predicted count is not an integer: " + predicted.str());
  return predicted;
}

Rational orbitals_from_counts(const TransitionInstance& inst, std::vector<TransitionTerm>* terms) {
  int n = inst.gamma.n();
  Rational total = 0;
  for (const auto& m : inst.levis) {
    for (const auto& l : levis_above(m)) {
      int sign = (n - l.num_blocks()) % 2 ? -1 : 1;
      Rational einv = e_inverse_restricted_volume(l, m);
      Rational ecl = hull_volume_direct(project(inst.ec_base, l)).lattice_units;
      Rational dm = rat_pow(Rational(inst.gamma.q), -inst.disc.at(m.key()));
      Rational summand = sign * dm * Rational(inst.count.at(m.key())) * einv * ecl;
      total += summand;
      if (terms) {
        TransitionTerm t;
        t.levi_m = m.key();
        t.levi_l = l.key();
        t.sign = sign;
        t.orbital = dm * Rational(inst.count.at(m.key()));
        t.gm_constant = einv * ecl;
        t.value = summand;
        terms->push_back(t);
      }
    }
  }
  return total;
}

TransitionReport transition_verify(const GammaSpec& gamma, const std::vector<long>& datum) {
  TransitionReport rep;
  rep.datum = datum;
  rep.q = gamma.q;
  auto inst = build_instance(gamma, datum);
  rep.per_levi_orbitals = inst.orbital;
  rep.per_levi_counts = inst.count;
  auto gp = LeviPartition::group(gamma.n());
  rep.count_direct = inst.count.at(gp.key());
  rep.count_predicted = predict_count(inst, &rep.count_terms);
  rep.orbital_direct = inst.orbital.at(gp.key());
  rep.orbital_from_counts = orbitals_from_counts(inst, &rep.orbital_terms);
  rep.count_ok = Rational(rep.count_direct) == rep.count_predicted;
  rep.orbital_ok = rep.orbital_direct == rep.orbital_from_counts;
  return rep;
}

std::string TransitionReport::to_json() const {
  nlohmann::json j;
  j["datum"] = datum;
  j["q"] = q;
  j["count_direct"] = count_direct.str();
  j["count_predicted"] = rat_str(count_predicted);
  j["orbital_direct"] = rat_str(orbital_direct);
  j["orbital_from_counts"] = rat_str(orbital_from_counts);
  j["count_ok"] = count_ok;
  j["orbital_ok"] = orbital_ok;
  auto dump_terms = [](const std::vector<TransitionTerm>& ts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : ts) {
      nlohmann::json e;
      e["M"] = t.levi_m;
      e["L"] = t.levi_l;
      e["sign"] = t.sign;
      e["orbital_factor"] = rat_str(t.orbital);
      e["gm_factor"] = rat_str(t.gm_constant);
      e["value"] = rat_str(t.value);
      arr.push_back(e);
    }
    return arr;
  };
  j["count_terms"] = dump_terms(count_terms);
  j["orbital_terms"] = dump_terms(orbital_terms);
  nlohmann::json pl = nlohmann::json::object();
  for (const auto& [k, v] : per_levi_orbitals) pl[k] = rat_str(v);
  j["per_levi_orbitals"] = pl;
  nlohmann::json pc = nlohmann::json::object();
  for (const auto& [k, v] : per_levi_counts) pc[k] = v.str();
  j["per_levi_counts"] = pc;
  return j.dump(2);
}

ParabolicChain chamber_of(const std::vector<Rational>& xi, const LeviPartition& lp) {
  AMVector z = project_coords(xi, lp);
  std::vector<std::pair<Rational, int>> order;
  for (int b = 0; b < lp.num_blocks(); ++b) order.push_back({z.block_value(b), b});
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t i = 0; i + 1 < order.size(); ++i)
    if (order[i].first == order[i + 1].first)
      throw computation_error("xi not generic: projection has equal block values on " + lp.key());
  std::vector<std::vector<int>> blocks;
  for (const auto& [v, b] : order) blocks.push_back(lp.blocks()[size_t(b)]);
  return ParabolicChain(lp.n(), blocks);
}

std::vector<Rational> descent_xi(const LeviPartition& m, const LeviPartition& l, int attempt) {
  // generic vector in a_M^L: block-constant on M, zero projection to a_L
  auto raw = generic_direction(l, m, attempt);
  return raw;
}

Rational reduce_weighted(const GammaSpec& gamma, const LeviPartition& m, int xi_draws) {
  auto a = LeviPartition::torus(gamma.n());
  std::map<std::string, Rational> orbital_cache;
  Rational value = 0;
  bool have = false;
  int attempt = 0;
  for (int draw = 0; draw < std::max(1, xi_draws); ++draw) {
    // draw xi until the chamber selection is generic for every contributing L
    std::vector<std::pair<LeviPartition, ParabolicChain>> selection;
    std::vector<std::pair<LeviPartition, Rational>> thetas;
    for (;; ++attempt) {
      try {
        std::vector<Rational> xi = descent_xi(a, m, attempt);
        selection.clear();
        thetas.clear();
        for (const auto& l : enumerate_levis(gamma.n())) {
          Rational theta = theta_coefficient(a, m, l);
          if (theta == 0) continue;
          selection.push_back({l, chamber_of(xi, l)});
          thetas.push_back({l, theta});
        }
        ++attempt;
        break;
      } catch (const computation_error&) {
        // xi not generic; redraw
      }
    }
    Rational total = 0;
    for (size_t i = 0; i < thetas.size(); ++i) {
      const auto& l = thetas[i].first;
      // the descent of 1_k along Q_L^xi is 1_{l cap k}, independent of the
      // chamber; the selection above is what the formula prescribes
      if (!orbital_cache.count(l.key())) orbital_cache[l.key()] = levi_orbital(gamma, l);
      total += thetas[i].second * orbital_cache[l.key()];
    }
    if (!have) {
      value = total;
      have = true;
    } else if (total != value) {
      throw invariant_error("reduce_weighted depends on the xi draw");
    }
  }
  return value;
}

}  // namespace asflab
