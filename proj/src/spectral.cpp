#include "parastab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <set>

#include "parastab/errors.hpp"

namespace parastab {

namespace {

double sinc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0 + z * z * z * z / 120.0;
  return std::sin(z) / z;
}

double axis_eigen_part(Boundary bc, int j, double L, double nu) {
  const double k = (bc == Boundary::Dirichlet) ? j : j - 1;
  return nu * std::numbers::pi * std::numbers::pi * k * k / (L * L);
}

}  // namespace

const char* to_string(Boundary bc) { return bc == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

Boundary boundary_from_string(const char* s) {
  if (std::strcmp(s, "dirichlet") == 0) return Boundary::Dirichlet;
  if (std::strcmp(s, "neumann") == 0) return Boundary::Neumann;
  throw InvalidArgument(std::string("unknown boundary condition: ") + s);
}

void IntervalDomain::validate() const {
  if (!(L > 0) || !std::isfinite(L)) throw InvalidArgument("domain length must be positive");
  if (!(nu > 0) || !std::isfinite(nu)) throw InvalidArgument("diffusion coefficient must be positive");
}

double Mode::operator()(double x) const { return amp * std::cos(omega * x - phase); }

double eigenvalue(const IntervalDomain& dom, int i) {
  if (i < 1) throw InvalidArgument("eigen index must be positive");
  return axis_eigen_part(dom.bc, i, dom.L, dom.nu) + 1.0;
}

Mode eigenmode(const IntervalDomain& dom, int i) {
  if (i < 1) throw InvalidArgument("eigen index must be positive");
  const double pi = std::numbers::pi;
  if (dom.bc == Boundary::Dirichlet) return {std::sqrt(2.0 / dom.L), i * pi / dom.L, pi / 2};
  if (i == 1) return {std::sqrt(1.0 / dom.L), 0.0, 0.0};
  return {std::sqrt(2.0 / dom.L), (i - 1) * pi / dom.L, 0.0};
}

SpectralBasis eigenpairs(const IntervalDomain& dom, const std::vector<int>& indices) {
  dom.validate();
  if (indices.empty()) throw InvalidArgument("index set is empty");
  std::set<int> seen;
  for (int i : indices) {
    if (i < 1) throw InvalidArgument("eigen index must be positive");
    if (!seen.insert(i).second) throw InvalidArgument("duplicate eigen index " + std::to_string(i));
  }
  SpectralBasis b;
  b.domain = dom;
  b.indices = indices;
  for (int i : indices) {
    b.alphas.push_back(eigenvalue(dom, i));
    b.modes.push_back(eigenmode(dom, i));
  }
  return b;
}

SpectralBasis first_modes(const IntervalDomain& dom, int M) {
  if (M < 1) throw InvalidArgument("number of modes must be positive");
  std::vector<int> idx(M);
  for (int i = 0; i < M; ++i) idx[i] = i + 1;
  return eigenpairs(dom, idx);
}

EigRatioReport eig_extremes(const SpectralBasis& basis, double ratio_bound) {
  EigRatioReport r{};
  r.alpha_M = *std::max_element(basis.alphas.begin(), basis.alphas.end());
  // alpha_i is increasing in i, so the smallest excluded natural gives alpha_Mplus
  std::set<int> in(basis.indices.begin(), basis.indices.end());
  int j = 1;
  while (in.count(j)) ++j;
  r.alpha_Mplus = eigenvalue(basis.domain, j);
  r.ratio = r.alpha_M / r.alpha_Mplus;
  r.ratio_bound = ratio_bound;
  r.within_bound = r.ratio <= ratio_bound;
  return r;
}

TensorIndexReport tensor_index_set(int per_axis_M, int dims, const std::vector<double>& lengths,
                                   Boundary bc, double nu, long long budget) {
  if (dims < 1 || dims > 3) throw InvalidArgument("dims must be 1, 2 or 3");
  if (per_axis_M < 1) throw InvalidArgument("per-axis M must be positive");
  if (static_cast<int>(lengths.size()) != dims) throw InvalidArgument("need one length per axis");
  for (double L : lengths)
    if (!(L > 0)) throw InvalidArgument("axis lengths must be positive");
  if (!(nu > 0)) throw InvalidArgument("diffusion coefficient must be positive");

  long long cand = 1;
  for (int n = 0; n < dims; ++n) {
    cand *= per_axis_M + 1;
    if (cand > budget) throw ResourceLimit("tensor index enumeration exceeds budget");
  }

  TensorIndexReport rep{};
  rep.dims = dims;
  rep.alpha_M = -std::numeric_limits<double>::infinity();
  rep.alpha_Mplus = std::numeric_limits<double>::infinity();
  const int E = per_axis_M + 1;
  std::array<int, 3> j{1, 1, 1};
  const int e1 = E, e2 = dims > 1 ? E : 1, e3 = dims > 2 ? E : 1;
  // lexicographic scan so the first minimiser wins ties
  for (j[0] = 1; j[0] <= e1; ++j[0])
    for (j[1] = 1; j[1] <= e2; ++j[1])
      for (j[2] = 1; j[2] <= e3; ++j[2]) {
        double a = 1.0;
        bool in_box = true;
        for (int n = 0; n < dims; ++n) {
          a += axis_eigen_part(bc, j[n], lengths[n], nu);
          if (j[n] > per_axis_M) in_box = false;
        }
        if (in_box) {
          rep.indices.push_back(j);
          rep.alpha_M = std::max(rep.alpha_M, a);
        } else if (a < rep.alpha_Mplus) {
          rep.alpha_Mplus = a;
          rep.argmin_plus = j;
        }
      }
  return rep;
}

double integrate_mode(const Mode& e, double a, double b) {
  const double m = 0.5 * (a + b), s = 0.5 * (b - a);
  return e.amp * 2.0 * s * std::cos(e.omega * m - e.phase) * sinc(e.omega * s);
}

double mode_inner_product(const Mode& e1, const Mode& e2, double L) {
  // cos(A)cos(B) = (cos(A-B) + cos(A+B))/2
  Mode d{0.5 * e1.amp * e2.amp, e1.omega - e2.omega, e1.phase - e2.phase};
  Mode s{0.5 * e1.amp * e2.amp, e1.omega + e2.omega, e1.phase + e2.phase};
  return integrate_mode(d, 0.0, L) + integrate_mode(s, 0.0, L);
}

}  // namespace parastab
