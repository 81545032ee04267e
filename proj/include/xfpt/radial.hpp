#pragma once

// Vertex-centred finite-volume discretisation of the radial backward operator
//   w(r)^{-1} d/dr ( w(r) d/dr ),   w = r^{d-1}            (annulus)
//                                   w = r^{d-1} e^{-r^2/eps} (OU ball)
// shared by the time stepper and the eigensolver.  The result is the
// symmetric system  M dS/dt = -K S  on the non-Dirichlet nodes, with M the
// diagonal of control-volume masses and K tridiagonal, both already scaled so
// that time is measured in the model's absolute units (multiples of t_diff).

#include <cstddef>
#include <variant>
#include <vector>

#include "xfpt/model.hpp"

namespace xfpt {

enum class Grading { Uniform, Refined };

struct GridSpec {
  int num_cells = 2048;
  /// Refined clusters nodes toward the target with a 5:1 spacing ratio.
  Grading grading = Grading::Refined;

  void validate() const;
};

/// Models with a radial backward operator.
using RadialModel = std::variant<AnnulusModel, OUWellModel>;

void validate(const RadialModel& m);
const InitialCondition& initial_condition(const RadialModel& m);
double diffusion_time(const RadialModel& m);

namespace radial {

struct Discretization {
  std::vector<double> nodes;  ///< all nodes, increasing
  std::vector<double> mass;   ///< control-volume mass per node
  std::vector<double> flux;   ///< per cell, K-scaled conductance between nodes i and i+1
  double robin = 0.0;         ///< K-scaled boundary term added at a Robin target node
  double total_mass = 0.0;

  std::size_t lo = 0;  ///< unknowns are nodes [lo, hi)
  std::size_t hi = 0;
  /// Unknown index (relative to lo) adjacent to the reflecting boundary.
  std::size_t reflecting = 0;

  // Reduced system over the unknowns.
  std::vector<double> diag;    ///< K diagonal
  std::vector<double> off;     ///< K off-diagonal, size n-1
  std::vector<double> mass_u;  ///< M restricted to unknowns
  std::vector<double> source;  ///< K 1, the absorption source for U = 1 - S

  std::size_t size() const { return hi - lo; }
  /// Flux-form quotient (u, K u) / (u, M u) for u given on the unknowns.
  double rayleigh_quotient(const std::vector<double>& u) const;
  /// Pads a vector on the unknowns with zeros at Dirichlet nodes.
  std::vector<double> expand(const std::vector<double>& u) const;
};

Discretization discretize(const RadialModel& model, const GridSpec& grid);

/// Discrete initial measure on the unknowns (sums to 1).  `ground_state` is the
/// principal eigenvector on the unknowns, required for a quasi-stationary start.
std::vector<double> initial_weights(const Discretization& disc, const RadialModel& model,
                                    const std::vector<double>* ground_state = nullptr);

/// Mean exit time at each unknown from K tau = M 1.
std::vector<double> mean_exit_time_profile(const Discretization& disc);

/// Thomas algorithm.  sub/sup have size n-1; the system must be diagonally
/// dominant or SPD.
std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& sup, std::vector<double> rhs);

}  // namespace radial
}  // namespace xfpt
