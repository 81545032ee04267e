#include "xfpt/radial.hpp"

#include <array>
#include <cmath>
#include <string>

#include "xfpt/errors.hpp"

namespace xfpt {

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 4> kGlNodes = {0.18343464249564980494, 0.52553240991632898582,
                                            0.79666647741362673959, 0.96028985649753623168};
constexpr std::array<double, 4> kGlWeights = {0.36268378337836198297, 0.31370664587788728734,
                                              0.22238103445337447054, 0.10122853629037625915};

template <class F>
double gauss8(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    s += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
  }
  return s * half;
}

// xi in [0,1] -> [0,1] with the fine end at 0
double grade(double xi, Grading g) {
  if (g == Grading::Uniform) {
    return xi;
  }
  return (std::pow(5.0, xi) - 1.0) / 4.0;
}

std::vector<double> annulus_nodes(const AnnulusModel& m, const GridSpec& grid) {
  const int n = grid.num_cells;
  std::vector<double> r(n + 1);
  for (int i = 0; i <= n; ++i) {
    r[i] = m.sigma + (1.0 - m.sigma) * grade(static_cast<double>(i) / n, grid.grading);
  }
  r[n] = 1.0;
  return r;
}

std::vector<double> ou_nodes(const GridSpec& grid) {
  const int n = grid.num_cells;
  std::vector<double> r(n + 1);
  for (int i = 0; i <= n; ++i) {
    r[i] = 1.0 - grade(1.0 - static_cast<double>(i) / n, grid.grading);
  }
  r[0] = 0.0;
  r[n] = 1.0;
  return r;
}

// int_a^b r^{d-1} dr
double shell_volume(int d, double a, double b) {
  switch (d) {
    case 1:
      return b - a;
    case 2:
      return 0.5 * (b - a) * (b + a);
    default:
      return (b - a) * (b * b + a * b + a * a) / 3.0;
  }
}

// 1 / int_a^b r^{1-d} dr, the exact conductance of a radial shell
double shell_conductance(int d, double a, double b) {
  switch (d) {
    case 1:
      return 1.0 / (b - a);
    case 2:
      return 1.0 / std::log1p((b - a) / a);
    default:
      return a * b / (b - a);
  }
}

void finish(radial::Discretization& disc) {
  const std::size_t n = disc.size();
  disc.diag.assign(n, 0.0);
  disc.off.assign(n > 0 ? n - 1 : 0, 0.0);
  disc.mass_u.assign(disc.mass.begin() + disc.lo, disc.mass.begin() + disc.hi);
  for (std::size_t c = 0; c + 1 < disc.nodes.size(); ++c) {
    const double k = disc.flux[c];
    const bool left_in = c >= disc.lo && c < disc.hi;
    const bool right_in = c + 1 >= disc.lo && c + 1 < disc.hi;
    if (left_in) {
      disc.diag[c - disc.lo] += k;
    }
    if (right_in) {
      disc.diag[c + 1 - disc.lo] += k;
    }
    if (left_in && right_in) {
      disc.off[c - disc.lo] = -k;
    }
  }
  if (disc.robin > 0.0) {
    disc.diag[0] += disc.robin;
  }
  // K 1 vanishes identically in the interior; build it from the boundary
  // couplings so that no rounding residue leaks into the far field.
  disc.source.assign(n, 0.0);
  if (disc.lo > 0) {
    disc.source[0] += disc.flux[disc.lo - 1];
  }
  if (disc.hi < disc.nodes.size()) {
    disc.source[n - 1] += disc.flux[disc.hi - 1];
  }
  if (disc.robin > 0.0) {
    disc.source[0] += disc.robin;
  }
  disc.total_mass = 0.0;
  for (double v : disc.mass) {
    disc.total_mass += v;
  }
}

radial::Discretization discretize_annulus(const AnnulusModel& m, const GridSpec& grid) {
  radial::Discretization disc;
  disc.nodes = annulus_nodes(m, grid);
  const auto& r = disc.nodes;
  const std::size_t nn = r.size();
  const double scale = 1.0 / m.outer_time_scale();

  disc.mass.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double a = i == 0 ? r[0] : 0.5 * (r[i - 1] + r[i]);
    const double b = i + 1 == nn ? r[nn - 1] : 0.5 * (r[i] + r[i + 1]);
    disc.mass[i] = shell_volume(m.dim, a, b);
  }
  disc.flux.resize(nn - 1);
  for (std::size_t c = 0; c + 1 < nn; ++c) {
    disc.flux[c] = scale * shell_conductance(m.dim, r[c], r[c + 1]);
  }
  if (m.perfect()) {
    disc.lo = 1;
  } else {
    disc.lo = 0;
    const double w = m.dim == 1 ? 1.0 : std::pow(m.sigma, m.dim - 1);
    disc.robin = scale * w * m.kappa_bar();
  }
  disc.hi = nn;
  disc.reflecting = disc.hi - disc.lo - 1;
  finish(disc);
  return disc;
}

radial::Discretization discretize_ou(const OUWellModel& m, const GridSpec& grid) {
  radial::Discretization disc;
  disc.nodes = ou_nodes(grid);
  const auto& r = disc.nodes;
  const std::size_t nn = r.size();
  const double scale = 1.0 / m.t_diff;
  const int d = m.dim;
  const double eps = m.eps;
  auto weight = [d, eps](double x) {
    const double radial = d == 1 ? 1.0 : std::pow(x, d - 1);
    return radial * std::exp(-x * x / eps);
  };

  disc.mass.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double v = 0.0;
    if (i > 0) {
      v += gauss8(weight, 0.5 * (r[i - 1] + r[i]), r[i]);
    }
    if (i + 1 < nn) {
      v += gauss8(weight, r[i], 0.5 * (r[i] + r[i + 1]));
    }
    disc.mass[i] = v;
  }
  disc.flux.resize(nn - 1);
  for (std::size_t c = 0; c + 1 < nn; ++c) {
    disc.flux[c] = scale * weight(0.5 * (r[c] + r[c + 1])) / (r[c + 1] - r[c]);
  }
  disc.lo = 0;
  disc.hi = nn - 1;
  disc.reflecting = 0;
  finish(disc);
  return disc;
}

}  // namespace

void GridSpec::validate() const {
  if (num_cells < 64) {
    throw DomainError("grid: num_cells must be >= 64, got " + std::to_string(num_cells));
  }
}

void validate(const RadialModel& m) {
  std::visit([](const auto& x) { x.validate(); }, m);
}

const InitialCondition& initial_condition(const RadialModel& m) {
  return std::visit([](const auto& x) -> const InitialCondition& { return x.initial; }, m);
}

double diffusion_time(const RadialModel& m) {
  return std::visit([](const auto& x) { return x.t_diff; }, m);
}

namespace radial {

double Discretization::rayleigh_quotient(const std::vector<double>& u) const {
  const std::vector<double> full = expand(u);
  double num = 0.0;
  for (std::size_t c = 0; c < flux.size(); ++c) {
    const double du = full[c + 1] - full[c];
    num += flux[c] * du * du;
  }
  if (robin > 0.0) {
    num += robin * full[lo] * full[lo];
  }
  double den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    den += mass_u[i] * u[i] * u[i];
  }
  return num / den;
}

std::vector<double> Discretization::expand(const std::vector<double>& u) const {
  std::vector<double> full(nodes.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    full[lo + i] = u[i];
  }
  return full;
}

Discretization discretize(const RadialModel& model, const GridSpec& grid) {
  validate(model);
  grid.validate();
  if (const auto* a = std::get_if<AnnulusModel>(&model)) {
    return discretize_annulus(*a, grid);
  }
  return discretize_ou(std::get<OUWellModel>(model), grid);
}

std::vector<double> initial_weights(const Discretization& disc, const RadialModel& model,
                                    const std::vector<double>* ground_state) {
  const std::size_t n = disc.size();
  std::vector<double> mu(n, 0.0);
  const InitialCondition& ic = initial_condition(model);
  if (std::holds_alternative<DeltaAtOuter>(ic)) {
    if (!std::holds_alternative<AnnulusModel>(model)) {
      throw DomainError("initial weights: outer start requires an annulus");
    }
    mu[n - 1] = 1.0;
    return mu;
  }
  if (std::holds_alternative<DeltaAtCenter>(ic)) {
    if (!std::holds_alternative<OUWellModel>(model)) {
      throw DomainError("initial weights: centre start requires an OU well");
    }
    mu[0] = 1.0;
    return mu;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = disc.mass_u[i];
    if (std::holds_alternative<QuasiStationary>(ic)) {
      if (ground_state == nullptr || ground_state->size() != n) {
        throw DomainError("initial weights: quasi-stationary start needs the ground state");
      }
      v *= (*ground_state)[i];
    }
    mu[i] = v;
    total += v;
  }
  // A uniform start averages over the whole domain; the half cell of a
  // Dirichlet target carries mass but no unknown, so the weights fall short of
  // one by the share that is absorbed at once.
  if (std::holds_alternative<Uniform>(ic)) {
    total = disc.total_mass;
  }
  for (double& v : mu) {
    v /= total;
  }
  return mu;
}

std::vector<double> mean_exit_time_profile(const Discretization& disc) {
  return solve_tridiagonal(disc.off, disc.diag, disc.off, disc.mass_u);
}

std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& sup, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (rhs.size() != n || (n > 0 && (sub.size() != n - 1 || sup.size() != n - 1))) {
    throw DomainError("solve_tridiagonal: inconsistent sizes");
  }
  std::vector<double> c(n > 0 ? n - 1 : 0);
  double beta = diag[0];
  if (beta == 0.0) {
    throw NumericalError("solve_tridiagonal: zero pivot");
  }
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i - 1] = sup[i - 1] / beta;
    beta = diag[i] - sub[i - 1] * c[i - 1];
    if (beta == 0.0) {
      throw NumericalError("solve_tridiagonal: zero pivot");
    }
    rhs[i] = (rhs[i] - sub[i - 1] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= c[i] * rhs[i + 1];
  }
  return rhs;
}

}  // namespace radial
}  // namespace xfpt
