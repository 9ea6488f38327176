#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asflab/lattice.hpp"

// Brute-force enumeration of gamma-stable lattices in a finite eps-window,
// fundamental domain counting and direct evaluation of weighted orbital
// integrals for split regular gamma.
namespace asflab {

inline const char* kEngineVersion = "asflab-engine-1";

struct CountRecord {
  int d = 0;
  std::vector<long> n;
  long q = 0;
  long window = 0;
  long component = 0;
  Int count;
  std::string base_point;
  std::string engine = kEngineVersion;
  std::string to_json() const;
  static CountRecord from_json(const std::string& text);
};

struct EnumOptions {
  long window = 0;             // N
  long shift = 0;              // stability gamma L <= eps^shift L
  std::optional<long> component;                  // fix det_val
  std::optional<std::vector<long>> fixed_pivots;  // fix the full pivot pattern
  // per-coordinate pivot bounds (inclusive), else [-N, N]
  std::optional<std::vector<std::pair<long, long>>> pivot_bounds;
};

// Every stable lattice in the window matching the options, canonical order,
// each exactly once.
std::vector<LatticeRep> enumerate_fixed_lattices(const GammaSpec& gamma, const EnumOptions& opt);

// Working window for a datum: sum of the entries plus a margin, then
// saturation-checked by the callers.
long window_auto(const std::vector<long>& n);

// k-th regular point (residual action has full minimal polynomial) in the
// canonical order of the H_{B_0} = 0 slice.
LatticeRep find_regular_point(const GammaSpec& gamma, long window, int index = 0);

struct FundamentalDomain {
  LatticeRep base;             // x0
  OrthogonalSet ec_base;       // Ec(x0)
  std::vector<LatticeRep> points;
  Int count() const { return Int(points.size()); }
};

// All x in the window with det_val = det_val(x0) and Ec(x) inside Ec(x0).
FundamentalDomain fundamental_domain(const GammaSpec& gamma, long window,
                                     std::optional<LatticeRep> base = std::nullopt);

// Saturation-verified count: windows N and N+1 must agree; retries up to the
// cap, then fails.
CountRecord fundamental_domain_count(const GammaSpec& gamma, const std::vector<long>& n_datum,
                                     std::optional<long> window = std::nullopt,
                                     int saturation_retries = 2, int base_index = 0);

// v_gamma(x) both as a translation count and through the lattice-point count
// of lambda(x, x0); the two are asserted equal.
Int weight_v_gamma(const LatticeRep& x, const LatticeRep& x0, const GammaSpec& gamma);

// J_A^{M'}(gamma, 1_{m' cap eps^shift k}) restricted to the Levi weight M:
// |D|^{1/2} sum over the H_{B_0} = 0 slice of the (G,M)-hull volumes of
// Ec_M(x), in block-coroot units; exact rational.
struct OrbitalResult {
  Rational value;       // J in block-coroot units of the pair (ambient, M)
  Int slice_points;     // number of contributing lattice classes
  long window = 0;
};

OrbitalResult weighted_orbital(const GammaSpec& gamma, const LeviPartition& weight_levi,
                               long shift = 0, std::optional<long> window = std::nullopt,
                               int saturation_retries = 2);

// Product over the blocks of M of the block orbital integrals: the A-weighted
// integral J_A^M(gamma, 1_{m cap k}).
Rational levi_orbital(const GammaSpec& gamma, const LeviPartition& m);

// Product over the blocks of M of the block fundamental-domain counts:
// |F_gamma^M(F_q)|.
Int levi_count(const GammaSpec& gamma, const LeviPartition& m);

// Sum of val(alpha(gamma)) over the positive roots of M.
long discriminant_valuation(const GammaSpec& gamma, const LeviPartition& m);

}  // namespace asflab
