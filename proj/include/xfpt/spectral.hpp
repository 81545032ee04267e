#pragma once

#include <string>
#include <vector>

#include "xfpt/pde.hpp"
#include "xfpt/radial.hpp"

namespace xfpt {

/// Lowest eigenpairs of -L with the model's boundary conditions.  The
/// eigenfunctions live on the unknowns of `disc` and are orthonormal under
///   (f, g)_rho = sum_i M_i f_i g_i / sum_i M_i.
struct EigenSystem {
  RadialModel model;
  radial::Discretization disc;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenfunctions;

  std::size_t size() const { return eigenvalues.size(); }
  double inner(const std::vector<double>& f, const std::vector<double>& g) const;
};

struct SpectralCoefficients {
  std::vector<double> values;
};

/// Modes n = 0..n_max.  Requires n_max <= num_cells / 8.
EigenSystem eigenpairs(const RadialModel& model, int n_max, const GridSpec& grid = {});

/// Principal eigenvector on the unknowns of `disc`, positive at the reflecting end.
std::vector<double> ground_state(const radial::Discretization& disc);

/// A_n = (u_n, 1)_rho  int u_n dmu_0.
SpectralCoefficients expansion_coefficients(const EigenSystem& sys, const InitialCondition& initial);

struct SpectralSurvival {
  SurvivalCurve curve;
  /// Estimated size of the discarded modes at each time.
  std::vector<double> truncation_bound;
};

SpectralSurvival survival_from_expansion(const EigenSystem& sys, const SpectralCoefficients& coeffs,
                                         const std::vector<double>& times);

/// u_0 / (u_0, 1)_rho on all nodes (zero at a Dirichlet node).
std::vector<double> quasi_stationary_density(const EigenSystem& sys);

/// eta(x) = A_0 - 1 + sum_{n>=1} A_n exp((1 - lambda_n / lambda_0) x).
double eta_error(const SpectralCoefficients& coeffs, const EigenSystem& sys, double x);

/// N exp(-lambda_1 / (lambda_0 N)), the unsimplified exponential-regime statistic.
double spectral_exponential_stat(const EigenSystem& sys, long long n);

/// CSV `n,lambda_n,A_n`.
std::string spectrum_csv(const EigenSystem& sys, const SpectralCoefficients& coeffs);

}  // namespace xfpt
