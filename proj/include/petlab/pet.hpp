#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "petlab/poly.hpp"

namespace petlab {

// Total order on polynomials used for canonical listing: terms compared in
// GradedDescending order, monomial first, then coefficient.
bool poly_less(const Poly& a, const Poly& b);

// One PET state. Variable 0 is m; step s has introduced h1..hs.
struct PolyFamily {
  std::vector<Poly> active;     // Q_s
  std::vector<Poly> constants;  // members of Q_s constant in m
  std::vector<Poly> retired;    // Q_s dagger
  int step = 0;

  // Sorts and deduplicates the lists and recomputes `constants`.
  void normalize();
};

// w_j at index j-1: number of classes of members of active \ constants with
// degree j in m, two members sharing a class when their leading coefficients
// in m agree.
using TypeVector = std::vector<std::int64_t>;

TypeVector family_type(const PolyFamily& family, std::size_t length);
bool is_zero_type(const TypeVector& t);

// Compares from the highest degree down; shorter vectors are zero-padded.
bool type_less(const TypeVector& a, const TypeVector& b);

// (S_h A - q) u (A - q) with A = active \ constants; retired becomes
// (constants - q) u (retired - q). Throws InvalidArgument if q is constant
// in m or not an active member.
PolyFamily vdc_operation(const PolyFamily& family, const Poly& q, std::size_t new_var);

// Member of active \ constants whose vdC step strictly lowers the type,
// searched by ascending degree in m, then poly_less. Throws InvalidArgument
// on a zero-type family and InternalError if no candidate works.
Poly choose_q(const PolyFamily& family, std::size_t length);

struct ClaimCheck {
  bool c1 = true;  // no two members of active u retired differ by an integer
  bool c2 = true;  // p - q non-constant in m, p retired, q in active \ constants
  bool c3 = true;  // retired members non-constant in m (s >= 1)
  bool all() const { return c1 && c2 && c3; }
};

ClaimCheck check_claims(const PolyFamily& family);

struct PetStep {
  int s = 0;  // index of the family produced
  Poly q;
  std::string new_var;
  PolyFamily family;  // empty lists unless families are recorded
  std::size_t active_size = 0;
  std::size_t constants_size = 0;
  std::size_t retired_size = 0;
  TypeVector type_before;
  TypeVector type_after;
  ClaimCheck claims;
};

struct PetOptions {
  BigInt W = 1;
  int max_steps = 10000;
  std::size_t max_family = 1u << 16;
  // 0: use the largest degree of the input system.
  int max_total_degree = 0;
  bool record_families = true;
};

struct PetTrace {
  std::vector<Poly> input;     // as given
  std::vector<Poly> rescaled;  // P_i(Wm)/W
  BigInt W = 1;
  PolyFamily initial;
  TypeVector initial_type;
  std::vector<PetStep> steps;
  int t = 0;
  int d = 1;
  int group_multiplier = 3;
  // Largest |coefficient| seen in any state divided by the largest in the
  // rescaled input.
  double coefficient_growth = 1.0;
  std::size_t max_family_size = 0;
};

// Runs vdC steps from {P_i(Wm)/W} until every active member is constant in
// m. Claim failures raise InternalError with a dump of the offending state;
// exceeding the step, family or degree budgets raises ResourceError.
PetTrace pet_run(const std::vector<Poly>& system, const PetOptions& options = {});

// JSON text of the trace: {input, W, steps:[{s, q, new_var, active,
// constants, retired, type_before, type_after, claims:{c1,c2,c3}}], t, d,
// group_multiplier, ...}. Deterministic for a given trace.
std::string pet_trace_json(const PetTrace& trace, int indent = 2);

}  // namespace petlab
