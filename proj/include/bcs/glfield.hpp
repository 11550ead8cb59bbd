#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

namespace bcs {

// Periodic order parameter on the d-dimensional unit cell, represented by
// Fourier coefficients psi(x) = sum_n c_n e^{i 2pi n.x}, |n_a| <= N.
class PeriodicField {
 public:
  PeriodicField(int dim, int nmax);

  int dim() const { return dim_; }
  int nmax() const { return nmax_; }
  int side() const { return 2 * nmax_ + 1; }
  Eigen::Index mode_count() const { return modes_.size(); }

  Eigen::VectorXcd& modes() { return modes_; }
  const Eigen::VectorXcd& modes() const { return modes_; }

  // flat index of the mode (nx, ny, nz); components beyond dim must be 0
  Eigen::Index index(int nx, int ny = 0, int nz = 0) const;
  std::complex<double>& at(int nx, int ny = 0, int nz = 0);

  double norm2() const { return modes_.squaredNorm(); }  // = int |psi|^2 (Parseval)

 private:
  int dim_;
  int nmax_;
  Eigen::VectorXcd modes_;
};

// Periodic external fields W (scalar) and A (vector), sparse Fourier data.
// Every added coefficient is paired with its Hermitian mirror so the fields
// are real in space; list each +-n pair once.
struct ExternalFields {
  struct Entry {
    std::array<int, 3> n{0, 0, 0};
    std::complex<double> c;
  };
  int dim = 2;
  std::vector<Entry> W;
  std::array<std::vector<Entry>, 3> A;

  void add_W(std::array<int, 3> n, std::complex<double> c);
  void add_A(int axis, std::array<int, 3> n, std::complex<double> c);
  int max_mode() const;
  bool empty() const;

  // lines "W p1 p2 p3 re im" / "A axis p1 p2 p3 re im", '#' comments
  static ExternalFields parse_file(const std::string& path, int dim);
};

struct GLTriple {
  double lambda1 = 0.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
};

// E[psi] = int |(-i grad + 2A) psi|^2 + lambda1 W |psi|^2 - lambda2 D |psi|^2
//          + lambda3 |psi|^4 over the unit cell; spectral evaluation with a
// dealiased collocation grid for the quartic term.
double gl_energy(const PeriodicField& psi, const ExternalFields& fields,
                 const GLTriple& coeffs, double D);

// dE/d conj(c_n); E decreases along -gradient
Eigen::VectorXcd gl_gradient(const PeriodicField& psi, const ExternalFields& fields,
                             const GLTriple& coeffs, double D);

struct MinimizeOptions {
  int max_iter = 6000;
  double grad_tol = 1e-9;
  int seeds = 4;
  unsigned rng_seed = 12345;
};

struct MinimizeResult {
  PeriodicField psi{1, 1};
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double psi_sup = 0.0;  // max_x |psi|
};

MinimizeResult minimize_gl(const ExternalFields& fields, const GLTriple& coeffs,
                           double D, int dim, int nmax, const MinimizeOptions& = {});

// D_c = (1/lambda2) infspec((-i grad + 2A)^2 + lambda1 W) with periodic
// boundary conditions, plane-wave discretization |n_a| <= nmax; the result is
// accepted only if it is stable under nmax -> nmax + 2.
double critical_D(const ExternalFields& fields, double lambda1, double lambda2,
                  int nmax, int dim, double trunc_tol = 1e-7);

struct PhaseCall {
  bool superconducting = false;
  bool critical_window = false;  // |D - D_c| within the band
  double D_c = 0.0;
  double min_energy = 0.0;
  double psi_sup = 0.0;
};

PhaseCall superconducting_phase_boundary(const ExternalFields& fields,
                                         const GLTriple& coeffs, double D, int dim,
                                         int nmax, double band = 1e-8);

}  // namespace bcs
