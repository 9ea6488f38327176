#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asflab/series.hpp"
#include "asflab/transition.hpp"

namespace py = pybind11;
using namespace asflab;

namespace {

GammaSpec gamma_for(const std::vector<long>& n, long q, int variant) {
  return make_gamma(n, q, default_precision(n), variant);
}

}  // namespace

PYBIND11_MODULE(_asflab, m) {
  m.doc() = "exact computations on fundamental domains of affine Springer fibers";

  py::register_exception<computation_error>(m, "ComputationError");
  py::register_exception<invariant_error>(m, "InvariantError");

  m.def("enumerate_levis", [](int n) {
    std::vector<std::string> out;
    for (const auto& l : enumerate_levis(n)) out.push_back(l.key());
    return out;
  });

  m.def("parabolic_sets", [](int n, const std::string& levi_key) {
    auto m_ = LeviPartition::from_key(n, levi_key);
    py::dict out;
    std::vector<std::string> ps, ls, fs;
    for (const auto& p : parabolics_with_levi(m_)) ps.push_back(p.key());
    for (const auto& l : levis_above(m_)) ls.push_back(l.key());
    for (const auto& f : parabolics_above(m_)) fs.push_back(f.key());
    out["P"] = ps;
    out["L"] = ls;
    out["F"] = fs;
    return out;
  });

  m.def("theta_coefficient",
        [](int n, const std::string& mk, const std::string& lk, const std::string& lpk) {
          return rat_str(theta_coefficient(LeviPartition::from_key(n, mk),
                                           LeviPartition::from_key(n, lk),
                                           LeviPartition::from_key(n, lpk)));
        });

  m.def("make_gamma",
        [](const std::vector<long>& n, long q, int variant) {
          return gamma_for(n, q, variant).to_json();
        },
        py::arg("n"), py::arg("q"), py::arg("variant") = 0);

  m.def("root_valuation", [](const std::string& gamma_json) {
    auto g = GammaSpec::from_json(gamma_json);
    std::map<std::pair<int, int>, long> r = root_valuation(g);
    py::dict out;
    for (const auto& [k, v] : r)
      out[py::make_tuple(k.first, k.second)] = v;
    return out;
  });

  m.def("minimal_form", [](const std::string& gamma_json) {
    auto g = GammaSpec::from_json(gamma_json);
    auto d = minimal_form(root_valuation(g), g.n());
    py::dict out;
    out["n"] = d.n;
    out["w"] = d.w;
    return out;
  });

  m.def("gm_validate", [](const std::string& set_json) {
    auto rep = validate(OrthogonalSet::from_json(set_json));
    return rep.verdict == OrthogonalVerdict::positive ? "positive"
           : rep.verdict == OrthogonalVerdict::orthogonal_not_positive ? "orthogonal-not-positive"
                                                                       : "invalid";
  });

  m.def("gm_volume", [](const std::string& set_json) {
    auto h = OrthogonalSet::from_json(set_json);
    auto hv = hull_volume_direct(h);
    py::dict out;
    out["lattice_units"] = rat_str(hv.lattice_units);
    out["kappa_sq"] = rat_str(hv.kappa_sq);
    out["euclidean"] = hv.euclidean().str();
    return out;
  });

  m.def("gm_count",
        [](const std::string& set_json, const std::string& mode) {
          auto h = OrthogonalSet::from_json(set_json);
          return lattice_count(h, mode == "formula" ? CountMode::formula : CountMode::enumeration)
              .str();
        },
        py::arg("set_json"), py::arg("mode") = "enumeration");

  m.def("fundamental_domain_count",
        [](const std::vector<long>& n, long q, int variant) {
          auto rec = fundamental_domain_count(gamma_for(n, q, variant), n);
          return rec.count.str();
        },
        py::arg("n"), py::arg("q"), py::arg("variant") = 0);

  m.def("weighted_orbital",
        [](const std::vector<long>& n, long q, const std::string& levi_key) {
          auto g = gamma_for(n, q, 0);
          auto levi = levi_key.empty() ? LeviPartition::torus(g.n())
                                       : LeviPartition::from_key(g.n(), levi_key);
          if (levi == LeviPartition::torus(g.n())) return rat_str(weighted_orbital(g, levi).value);
          return rat_str(reduce_weighted(g, levi));
        },
        py::arg("n"), py::arg("q"), py::arg("levi") = "");

  m.def("transition_verify", [](const std::vector<long>& n, long q) {
    return transition_verify(gamma_for(n, q, 0), n).to_json();
  });

  m.def("interpolate_q", [](const std::map<long, std::string>& pts, int cap) {
    std::map<long, Rational> values;
    for (const auto& [k, v] : pts) values[k] = parse_rational(v);
    return interpolate_q(values, cap).str();
  });

  m.def("datum_independence_check",
        [](const std::vector<long>& n, long q, int variants) {
          return datum_independence_check(n, q, variants);
        },
        py::arg("n"), py::arg("q"), py::arg("variants") = 3);

  m.attr("engine_version") = kEngineVersion;
}
