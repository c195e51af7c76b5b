#include "holo/cohomology.hpp"

#include <algorithm>
#include <map>

#include "holo/error.hpp"
#include "holo/holonomy.hpp"
#include "holo/localsys.hpp"
#include "holo/residues.hpp"

namespace holo {
namespace {

void check_range(int genus, int n) {
  if (genus < 0 || genus > 1) throw Error(ErrorCode::GenusUnsupported, "dimension formulas cover genus 0 and 1");
  if (n < 0) throw Error(ErrorCode::InvalidSpec, "negative number of cone points");
  if (genus == 1 && n == 0) return;
  if (n < 1 || 2 * genus - 2 + n <= 0)
    throw Error(ErrorCode::UnstableConfiguration,
                "(g, n) = (" + std::to_string(genus) + ", " + std::to_string(n) + ") is unstable");
}

// Degree-0 bundles below are trivial exactly on the unpunctured torus.
LineBundleDims bundle(int genus, int degree, int n) { return line_bundle_dims(genus, degree, genus == 1 && n == 0); }

// Positions modulo automorphisms plus tau: the chart of M_{g,n}.
int moduli_parameters(int genus, int n) {
  if (genus == 0) return n - 3;
  return n == 0 ? 1 : 1 + (n - 1);
}

// Free connection parameters over a point of M_{g,n}: orders with fixed sum,
// plus lambda at genus 1.
int connection_parameters(int genus, int n) { return genus == 0 ? n - 1 : std::max(n - 1, 0) + 1; }

}  // namespace

LineBundleDims line_bundle_dims(int genus, int degree, bool trivial) {
  if (genus == 0) return {std::max(0, degree + 1), std::max(0, -degree - 1)};
  if (genus != 1) throw Error(ErrorCode::GenusUnsupported, "Riemann-Roch is implemented for genus 0 and 1");
  if (degree > 0) return {degree, 0};
  if (degree < 0) return {0, -degree};
  return trivial ? LineBundleDims{1, 1} : LineBundleDims{0, 0};
}

int dim_H1_L(int genus, int n) {
  check_range(genus, n);
  return bundle(genus, 2 * genus - 2 + n, n).h0 + bundle(genus, 2 - 2 * genus - n, n).h1;
}

DimReport coderivative_rows(int genus, int n) {
  check_range(genus, n);
  DimReport r;
  r.genus = genus;
  r.n = n;
  r.h0_omega_C = bundle(genus, 2 * genus - 2 + n, n).h0;
  r.h1_T_minus_C = bundle(genus, 2 - 2 * genus - n, n).h1;
  r.dim_H1_L = r.h0_omega_C + r.h1_T_minus_C;
  r.dim_moduli = moduli_parameters(genus, n) + connection_parameters(genus, n);
  r.dim_hol_target = 2 * genus + std::max(n - 1, 0);
  const int h1_o = bundle(genus, -n, n).h1;
  r.top = {line_bundle_dims(genus, 2 * genus - 2, genus == 1).h0, r.dim_hol_target, h1_o};
  r.bottom = {bundle(genus, 4 * genus - 4 + n, n).h0, r.dim_H1_L, h1_o};
  r.top_exact = r.top[0] + r.top[2] == r.top[1];
  r.bottom_exact = r.bottom[0] + r.bottom[2] == r.bottom[1];
  return r;
}

TransDims trans_dims(const AffineSurfaceSpec& spec, const Quadrature& q) {
  require_valid(spec);
  const auto report = character_on_basis(spec, standard_basis(spec), q);
  const bool trivial = has_trivial_holonomy(report);

  // Non-integral cone points become boundary circles; their loop values (all
  // but the last, which the surface relation fixes) and the lattice loops
  // determine the local system.
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < spec.cone_points.size(); ++j)
    if (!is_integral_pole(spec.cone_points[j].order)) kept.push_back(j);
  const auto k = SurfaceComplex::standard(spec.genus, static_cast<int>(kept.size()));
  std::map<std::string, cplx> values;
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) values["d" + std::to_string(i)] = report.chi[kept[i]];
  if (spec.genus == 1) {
    for (std::size_t i = 0; i < report.ids.size(); ++i)
      if (report.ids[i] == "a" || report.ids[i] == "b") values[report.ids[i]] = report.chi[i];
  }
  const auto chi = values.empty() ? Character::trivial(k) : Character::from_generators(k, values);

  TransDims out;
  out.h2 = trivial ? 1 : 0;
  out.h1 = compact_support_cohomology(k, chi).h1;
  const bool all_poles = std::all_of(spec.cone_points.begin(), spec.cone_points.end(), [](const ConePoint& c) {
    return std::abs(c.order.imag()) <= kIntegralTol && c.order.real() <= -1.0 + kIntegralTol;
  });
  out.h0 = trivial && all_poles ? 1 : 0;
  return out;
}

int trans_euler_defect(const AffineSurfaceSpec& spec, const TransDims& dims) {
  const int n = static_cast<int>(spec.cone_points.size());
  const auto t = bundle(spec.genus, 2 - 2 * spec.genus - n, n);
  const auto o = line_bundle_dims(spec.genus, 0, true);
  const int poles = static_cast<int>(integral_poles(spec).size());
  return (dims.h0 - dims.h1 + dims.h2) - (t.h0 - t.h1) + (o.h0 - o.h1) - poles;
}

}  // namespace holo
