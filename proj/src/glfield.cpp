#include "bcs/glfield.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "bcs/errors.hpp"

namespace bcs {

namespace {

using cd = std::complex<double>;

// separable mode <-> collocation transforms for small spectral problems
struct SpectralTransform {
  int dim, N, M, side;
  Eigen::MatrixXcd E;  // M x side, E(j, n+N) = e^{i 2pi n j / M}

  SpectralTransform(int dim_, int N_, int M_) : dim(dim_), N(N_), M(M_), side(2 * N_ + 1) {
    E.resize(M, side);
    for (int j = 0; j < M; ++j)
      for (int n = -N; n <= N; ++n)
        E(j, n + N) = std::polar(1.0, 2.0 * M_PI * n * j / static_cast<double>(M));
  }

  Eigen::Index grid_count() const {
    Eigen::Index c = 1;
    for (int a = 0; a < dim; ++a) c *= M;
    return c;
  }

  // contract one axis at a time: modes (side^dim) -> grid (M^dim)
  Eigen::VectorXcd to_grid(const Eigen::VectorXcd& modes) const {
    Eigen::VectorXcd cur = modes;
    Eigen::Index pre = 1, post = 1;
    for (int a = 0; a < dim; ++a) post *= side;
    for (int a = 0; a < dim; ++a) {
      post /= side;
      Eigen::VectorXcd next(pre * M * post);
      for (Eigen::Index ip = 0; ip < pre; ++ip)
        for (Eigen::Index io = 0; io < post; ++io) {
          for (int j = 0; j < M; ++j) {
            cd s = 0.0;
            for (int k = 0; k < side; ++k)
              s += E(j, k) * cur[(ip * side + k) * post + io];
            next[(ip * M + j) * post + io] = s;
          }
        }
      cur.swap(next);
      pre *= M;
    }
    return cur;
  }

  // adjoint with 1/M^dim: grid -> modes (exact for band-limited data)
  Eigen::VectorXcd to_modes(const Eigen::VectorXcd& grid) const {
    Eigen::VectorXcd cur = grid;
    Eigen::Index pre = 1, post = 1;
    for (int a = 0; a < dim; ++a) post *= M;
    for (int a = 0; a < dim; ++a) {
      post /= M;
      Eigen::VectorXcd next(pre * side * post);
      for (Eigen::Index ip = 0; ip < pre; ++ip)
        for (Eigen::Index io = 0; io < post; ++io) {
          for (int k = 0; k < side; ++k) {
            cd s = 0.0;
            for (int j = 0; j < M; ++j)
              s += std::conj(E(j, k)) * cur[(ip * M + j) * post + io];
            next[(ip * side + k) * post + io] = s / static_cast<double>(M);
          }
        }
      cur.swap(next);
      pre *= side;
    }
    return cur;
  }
};

// sample a sparse field on the collocation grid (real by hermitian pairing)
Eigen::VectorXd field_on_grid(const std::vector<ExternalFields::Entry>& entries, int dim,
                              int M) {
  Eigen::Index count = 1;
  for (int a = 0; a < dim; ++a) count *= M;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(count);
  if (entries.empty()) return out;
  std::vector<Eigen::Index> stride(dim);
  stride[dim - 1] = 1;
  for (int a = dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * M;
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    double x[3] = {0, 0, 0};
    Eigen::Index rem = idx;
    for (int a = 0; a < dim; ++a) {
      x[a] = static_cast<double>(rem / stride[a]) / M;
      rem %= stride[a];
    }
    cd s = 0.0;
    for (const auto& e : entries) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += e.n[a] * x[a];
      s += e.c * std::polar(1.0, 2.0 * M_PI * phase);
    }
    out[idx] = s.real();  // imaginary parts cancel by construction
  }
  return out;
}

struct GLWorkspace {
  int dim, N, M;
  SpectralTransform T;
  Eigen::VectorXd W;                  // lambda-free W on grid
  std::array<Eigen::VectorXd, 3> A;   // A components on grid
  std::array<Eigen::VectorXd, 3> kfac;  // per-axis derivative factors 2 pi n_a

  GLWorkspace(const ExternalFields& f, int dim_, int N_)
      : dim(dim_), N(N_), M(pick_M(f, dim_, N_)), T(dim_, N_, M) {
    W = field_on_grid(f.W, dim, M);
    for (int a = 0; a < dim; ++a) A[a] = field_on_grid(f.A[a], dim, M);
    const int side = 2 * N + 1;
    Eigen::Index count = 1;
    for (int a = 0; a < dim; ++a) count *= side;
    for (int a = 0; a < dim; ++a) {
      kfac[a].resize(count);
      for (Eigen::Index idx = 0; idx < count; ++idx)
        kfac[a][idx] = 2.0 * M_PI * mode_component(idx, a, side, dim);
    }
  }

  static int mode_component(Eigen::Index idx, int axis, int side, int dim) {
    Eigen::Index stride = 1;
    for (int a = dim - 1; a > axis; --a) stride *= side;
    return static_cast<int>((idx / stride) % side) - (side - 1) / 2;
  }

  static int pick_M(const ExternalFields& f, int dim, int N) {
    const int K = f.max_mode();
    // highest collocated product: |psi|^4 -> 4N; |(..A)psi|^2 -> 2(N+K); W|psi|^2 -> 2N+K
    int M = std::max({4 * N, 2 * (N + K), 2 * N + K}) + 1;
    (void)dim;
    return M + (M % 2);  // even is convenient
  }
};

struct EnergyParts {
  double kinetic = 0.0, potential = 0.0, quadratic = 0.0, quartic = 0.0;
  double total() const { return kinetic + potential + quadratic + quartic; }
};

EnergyParts gl_energy_parts(const GLWorkspace& ws, const Eigen::VectorXcd& c,
                            const GLTriple& coeffs, double D,
                            std::array<Eigen::VectorXcd, 3>* u_out = nullptr,
                            Eigen::VectorXcd* psi_out = nullptr) {
  EnergyParts parts;
  const Eigen::VectorXcd psi = ws.T.to_grid(c);
  const double vol = static_cast<double>(ws.T.grid_count());
  for (int a = 0; a < ws.dim; ++a) {
    Eigen::VectorXcd da = ws.T.to_grid(c.cwiseProduct(ws.kfac[a].cast<cd>()));
    // u_a = (-i d_a + 2 A_a) psi
    for (Eigen::Index j = 0; j < da.size(); ++j)
      da[j] += 2.0 * ws.A[a][j] * psi[j];
    parts.kinetic += da.squaredNorm() / vol;
    if (u_out) (*u_out)[a] = std::move(da);
  }
  double pw = 0.0, quart = 0.0;
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    const double a2 = std::norm(psi[j]);
    pw += ws.W[j] * a2;
    quart += a2 * a2;
  }
  parts.potential = coeffs.lambda1 * pw / vol;
  parts.quadratic = -coeffs.lambda2 * D * c.squaredNorm();
  parts.quartic = coeffs.lambda3 * quart / vol;
  if (psi_out) *psi_out = psi;
  return parts;
}

Eigen::VectorXcd gl_gradient_ws(const GLWorkspace& ws, const Eigen::VectorXcd& c,
                                const GLTriple& coeffs, double D) {
  std::array<Eigen::VectorXcd, 3> u;
  Eigen::VectorXcd psig;
  gl_energy_parts(ws, c, coeffs, D, &u, &psig);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(c.size());
  for (int a = 0; a < ws.dim; ++a) {
    // L_a u_a with L_a = -i d_a + 2 A_a (self-adjoint per component)
    g += ws.T.to_modes(u[a]).cwiseProduct(ws.kfac[a].cast<cd>());
    Eigen::VectorXcd au = u[a];
    for (Eigen::Index j = 0; j < au.size(); ++j) au[j] *= 2.0 * ws.A[a][j];
    g += ws.T.to_modes(au);
  }
  Eigen::VectorXcd nl(psig.size());
  for (Eigen::Index j = 0; j < psig.size(); ++j)
    nl[j] = (coeffs.lambda1 * ws.W[j] + 2.0 * coeffs.lambda3 * std::norm(psig[j])) * psig[j];
  g += ws.T.to_modes(nl);
  g -= coeffs.lambda2 * D * c;
  return g;
}

}  // namespace

PeriodicField::PeriodicField(int dim, int nmax) : dim_(dim), nmax_(nmax) {
  if (dim < 1 || dim > 3) throw ConfigError("PeriodicField: dim must be 1, 2 or 3");
  if (nmax < 1 || nmax > 64) throw ConfigError("PeriodicField: nmax out of range");
  Eigen::Index count = 1;
  for (int a = 0; a < dim; ++a) count *= side();
  modes_ = Eigen::VectorXcd::Zero(count);
}

Eigen::Index PeriodicField::index(int nx, int ny, int nz) const {
  const int n[3] = {nx, ny, nz};
  for (int a = dim_; a < 3; ++a)
    if (n[a] != 0) throw ConfigError("PeriodicField: mode beyond dimension");
  Eigen::Index idx = 0;
  for (int a = 0; a < dim_; ++a) {
    if (std::abs(n[a]) > nmax_) throw ConfigError("PeriodicField: mode beyond truncation");
    idx = idx * side() + (n[a] + nmax_);
  }
  return idx;
}

std::complex<double>& PeriodicField::at(int nx, int ny, int nz) {
  return modes_[index(nx, ny, nz)];
}

void ExternalFields::add_W(std::array<int, 3> n, std::complex<double> c) {
  for (int a = dim; a < 3; ++a)
    if (n[a] != 0) throw ConfigError("ExternalFields: W mode beyond dimension");
  const bool zero = n[0] == 0 && n[1] == 0 && n[2] == 0;
  if (zero) {
    if (std::abs(c.imag()) > 1e-14 * (1.0 + std::abs(c.real())))
      throw ConfigError("ExternalFields: W zero mode must be real");
    W.push_back({n, cd(c.real(), 0.0)});
    return;
  }
  W.push_back({n, c});
  W.push_back({{-n[0], -n[1], -n[2]}, std::conj(c)});
}

void ExternalFields::add_A(int axis, std::array<int, 3> n, std::complex<double> c) {
  if (axis < 0 || axis >= dim) throw ConfigError("ExternalFields: A axis beyond dimension");
  for (int a = dim; a < 3; ++a)
    if (n[a] != 0) throw ConfigError("ExternalFields: A mode beyond dimension");
  const bool zero = n[0] == 0 && n[1] == 0 && n[2] == 0;
  if (zero) {
    if (std::abs(c.imag()) > 1e-14 * (1.0 + std::abs(c.real())))
      throw ConfigError("ExternalFields: A zero mode must be real");
    A[axis].push_back({n, cd(c.real(), 0.0)});
    return;
  }
  A[axis].push_back({n, c});
  A[axis].push_back({{-n[0], -n[1], -n[2]}, std::conj(c)});
}

int ExternalFields::max_mode() const {
  int m = 0;
  auto scan = [&m](const std::vector<Entry>& v) {
    for (const auto& e : v)
      m = std::max({m, std::abs(e.n[0]), std::abs(e.n[1]), std::abs(e.n[2])});
  };
  scan(W);
  for (const auto& a : A) scan(a);
  return m;
}

bool ExternalFields::empty() const {
  if (!W.empty()) return false;
  for (const auto& a : A)
    if (!a.empty()) return false;
  return true;
}

ExternalFields ExternalFields::parse_file(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fields file: " + path);
  ExternalFields f;
  f.dim = dim;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind)) continue;
    auto bad = [&](const std::string& why) {
      throw ConfigError("fields file " + path + ":" + std::to_string(lineno) + ": " + why);
    };
    if (kind == "W") {
      int n1, n2, n3;
      double re, im;
      if (!(ss >> n1 >> n2 >> n3 >> re >> im)) bad("expected 'W p1 p2 p3 re im'");
      f.add_W({n1, n2, n3}, {re, im});
    } else if (kind == "A") {
      int axis, n1, n2, n3;
      double re, im;
      if (!(ss >> axis >> n1 >> n2 >> n3 >> re >> im)) bad("expected 'A axis p1 p2 p3 re im'");
      f.add_A(axis, {n1, n2, n3}, {re, im});
    } else {
      bad("unknown record '" + kind + "'");
    }
    std::string extra;
    if (ss >> extra) bad("trailing tokens");
  }
  return f;
}

double gl_energy(const PeriodicField& psi, const ExternalFields& fields,
                 const GLTriple& coeffs, double D) {
  if (fields.dim != psi.dim()) throw ConfigError("gl_energy: field/psi dimension mismatch");
  GLWorkspace ws(fields, psi.dim(), psi.nmax());
  return gl_energy_parts(ws, psi.modes(), coeffs, D).total();
}

Eigen::VectorXcd gl_gradient(const PeriodicField& psi, const ExternalFields& fields,
                             const GLTriple& coeffs, double D) {
  GLWorkspace ws(fields, psi.dim(), psi.nmax());
  return gl_gradient_ws(ws, psi.modes(), coeffs, D);
}

MinimizeResult minimize_gl(const ExternalFields& fields, const GLTriple& coeffs,
                           double D, int dim, int nmax, const MinimizeOptions& opts) {
  if (!(coeffs.lambda3 > 0.0)) throw DomainError("minimize_gl: requires lambda3 > 0");
  GLWorkspace ws(fields, dim, nmax);
  std::mt19937_64 rng(opts.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double ref_amp =
      std::sqrt(std::max(coeffs.lambda2 * std::abs(D), 1e-6) / (2.0 * coeffs.lambda3));
  MinimizeResult best{PeriodicField(dim, nmax),
                      std::numeric_limits<double>::infinity(), 0.0, 0, false, 0.0};

  for (int seed = 0; seed < opts.seeds; ++seed) {
    PeriodicField psi(dim, nmax);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(psi.mode_count());
    const Eigen::Index i0 = psi.index(0, 0, 0);
    if (seed == 0) {
      c[i0] = ref_amp;
    } else {
      for (Eigen::Index i = 0; i < c.size(); ++i)
        c[i] = 0.2 * ref_amp * cd(gauss(rng), gauss(rng)) /
               (1.0 + ws.kfac[0].cwiseAbs()[i]);
      c[i0] += 0.5 * ref_amp;
    }

    double E = gl_energy_parts(ws, c, coeffs, D).total();
    double step = 1.0 / (4.0 * M_PI * M_PI * (2.0 * nmax + 1.0) +
                         std::abs(coeffs.lambda2 * D) + 1.0);
    Eigen::VectorXcd g_prev, c_prev;
    int it = 0;
    double gnorm = 0.0;
    bool ok = false;
    for (; it < opts.max_iter; ++it) {
      Eigen::VectorXcd g = gl_gradient_ws(ws, c, coeffs, D);
      gnorm = g.norm();
      const double scale = std::max({1.0, std::abs(E), c.squaredNorm()});
      if (gnorm <= opts.grad_tol * scale) {
        ok = true;
        break;
      }
      if (it > 0) {
        // Barzilai-Borwein step from the last move
        const Eigen::VectorXcd dc = c - c_prev, dg = g - g_prev;
        const double dgg = dg.squaredNorm();
        if (dgg > 0.0) {
          const double bb = std::abs(std::real(dc.dot(dg))) / dgg;
          if (std::isfinite(bb) && bb > 0.0) step = std::clamp(bb, 1e-12, 1e4);
        }
      }
      c_prev = c;
      g_prev = g;
      // Armijo backtracking on the Wirtinger descent direction
      double eta = step;
      bool moved = false;
      for (int bt = 0; bt < 60 && eta >= 1e-17; ++bt) {
        Eigen::VectorXcd trial = c - eta * g;
        const double Et = gl_energy_parts(ws, trial, coeffs, D).total();
        if (Et <= E - 1e-4 * eta * gnorm * gnorm) {
          c = std::move(trial);
          E = Et;
          moved = true;
          break;
        }
        eta *= 0.5;
      }
      if (!moved) {
        // at the floating-point floor of the energy; accept when the gradient
        // is already small on the problem scale
        ok = gnorm <= 1e-6 * scale;
        break;
      }
    }
    if (E < best.energy) {
      best.energy = E;
      best.psi.modes() = c;
      best.grad_norm = gnorm;
      best.iterations = it;
      best.converged = ok;
    }
  }

  Eigen::VectorXcd psig = ws.T.to_grid(best.psi.modes());
  best.psi_sup = 0.0;
  for (Eigen::Index j = 0; j < psig.size(); ++j)
    best.psi_sup = std::max(best.psi_sup, std::abs(psig[j]));
  if (!best.converged)
    throw ConvergenceError("minimize_gl did not reach the gradient tolerance",
                           best.grad_norm, best.iterations);
  return best;
}

namespace {

struct PlaneWaveHamiltonian {
  int dim, nmax, side;
  double lambda1;
  Eigen::Index m;
  std::vector<ExternalFields::Entry> stencil;  // off-diagonal couplings, combined
  Eigen::VectorXd diag_kinetic;
  std::vector<std::array<int, 3>> mode_of;

  PlaneWaveHamiltonian(const ExternalFields& fields, double l1, int nmax_, int dim_)
      : dim(dim_), nmax(nmax_), side(2 * nmax_ + 1), lambda1(l1) {
    m = 1;
    for (int a = 0; a < dim; ++a) m *= side;
    mode_of.resize(m);
    diag_kinetic.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::Index rem = i;
      std::array<int, 3> n{0, 0, 0};
      for (int a = dim - 1; a >= 0; --a) {
        n[a] = static_cast<int>(rem % side) - nmax;
        rem /= side;
      }
      mode_of[i] = n;
      double k2 = 0.0;
      for (int a = 0; a < dim; ++a) k2 += 4.0 * M_PI * M_PI * n[a] * n[a];
      diag_kinetic[i] = k2;
    }
    // W and A.A parts depend only on the mode difference
    for (const auto& e : fields.W) stencil.push_back({e.n, l1 * e.c});
    for (int ax = 0; ax < dim; ++ax)
      for (const auto& e1 : fields.A[ax])
        for (const auto& e2 : fields.A[ax])
          stencil.push_back({{e1.n[0] + e2.n[0], e1.n[1] + e2.n[1], e1.n[2] + e2.n[2]},
                             4.0 * e1.c * e2.c});
    a_entries = fields.A;
  }

  std::array<std::vector<ExternalFields::Entry>, 3> a_entries;

  Eigen::Index shifted(Eigen::Index i, const std::array<int, 3>& d) const {
    std::array<int, 3> n = mode_of[i];
    Eigen::Index idx = 0;
    for (int a = 0; a < dim; ++a) {
      const int c = n[a] - d[a];
      if (std::abs(c) > nmax) return -1;
      idx = idx * side + (c + nmax);
    }
    return idx;
  }

  // y = H x
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    y = diag_kinetic.cwiseProduct(x.real()).cast<cd>() +
        cd(0, 1) * diag_kinetic.cwiseProduct(x.imag());
    for (Eigen::Index i = 0; i < m; ++i) {
      cd acc = 0.0;
      for (const auto& e : stencil) {
        const Eigen::Index j = shifted(i, e.n);
        if (j >= 0) acc += e.c * x[j];
      }
      for (int a = 0; a < dim; ++a)
        for (const auto& e : a_entries[a]) {
          const Eigen::Index j = shifted(i, e.n);
          if (j >= 0)
            acc += 2.0 * (2.0 * M_PI) * (mode_of[i][a] + mode_of[j][a]) * e.c * x[j];
        }
      y[i] += acc;
    }
  }

  Eigen::MatrixXcd dense() const {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m, m);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m), col(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      e.setZero();
      e[j] = 1.0;
      apply(e, col);
      H.col(j) = col;
    }
    return H;
  }
};

// smallest eigenvalue by LOBPCG(1) with a diagonal (kinetic) preconditioner
double lobpcg_lowest(const PlaneWaveHamiltonian& H, int maxit = 500, double tol = 1e-11) {
  const Eigen::Index m = H.m;
  std::mt19937_64 rng(20240229);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd x(m);
  for (Eigen::Index i = 0; i < m; ++i) x[i] = cd(gauss(rng), gauss(rng)) / (1.0 + H.diag_kinetic[i]);
  x[H.m / 2] += 1.0;  // bias towards the zero mode
  x.normalize();
  Eigen::VectorXcd hx(m), p = Eigen::VectorXcd::Zero(m), hp = Eigen::VectorXcd::Zero(m);
  H.apply(x, hx);
  double rho = std::real(x.dot(hx));
  for (int it = 0; it < maxit; ++it) {
    Eigen::VectorXcd r = hx - rho * x;
    if (r.norm() <= tol * std::max(1.0, std::abs(rho))) return rho;
    Eigen::VectorXcd z(m);
    for (Eigen::Index i = 0; i < m; ++i)
      z[i] = r[i] / (H.diag_kinetic[i] - rho + 1.0);
    // Rayleigh-Ritz on span{x, z, p}
    std::vector<Eigen::VectorXcd> basis{x, z};
    if (it > 0) basis.push_back(p);
    // Gram-Schmidt
    std::vector<Eigen::VectorXcd> Q;
    for (auto& b : basis) {
      Eigen::VectorXcd v = b;
      for (const auto& qv : Q) v -= qv.dot(v) * qv;
      const double nv = v.norm();
      if (nv > 1e-12) Q.push_back(v / nv);
    }
    const int k = static_cast<int>(Q.size());
    Eigen::MatrixXcd Hk(k, k);
    std::vector<Eigen::VectorXcd> HQ(k, Eigen::VectorXcd(m));
    for (int a = 0; a < k; ++a) H.apply(Q[a], HQ[a]);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) Hk(a, b) = Q[a].dot(HQ[b]);
    Hk = 0.5 * (Hk + Hk.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hk);
    const Eigen::VectorXcd y = es.eigenvectors().col(0);
    Eigen::VectorXcd xn = Eigen::VectorXcd::Zero(m), hxn = Eigen::VectorXcd::Zero(m);
    for (int a = 0; a < k; ++a) {
      xn += y[a] * Q[a];
      hxn += y[a] * HQ[a];
    }
    p = xn - x * (x.dot(xn));
    x = xn.normalized();
    hx = hxn / xn.norm();
    rho = es.eigenvalues()(0);
  }
  throw NumericsError("critical_D: iterative eigensolver did not converge");
}

double critical_D_at(const ExternalFields& fields, double lambda1, double lambda2,
                     int nmax, int dim) {
  PlaneWaveHamiltonian H(fields, lambda1, nmax, dim);
  if (H.m <= 3000) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense());
    if (es.info() != Eigen::Success) throw NumericsError("critical_D: eigensolver failed");
    return es.eigenvalues()(0) / lambda2;
  }
  return lobpcg_lowest(H) / lambda2;
}

}  // namespace

double critical_D(const ExternalFields& fields, double lambda1, double lambda2,
                  int nmax, int dim, double trunc_tol) {
  if (!(lambda2 > 0.0)) throw DomainError("critical_D: requires lambda2 > 0");
  const double d1 = critical_D_at(fields, lambda1, lambda2, nmax, dim);
  const double d2 = critical_D_at(fields, lambda1, lambda2, nmax + 2, dim);
  const double move = std::abs(d2 - d1);
  if (move > trunc_tol * std::max(1.0, std::abs(d2)))
    throw AccuracyError("critical_D: not converged in the plane-wave truncation", move);
  return d2;
}

PhaseCall superconducting_phase_boundary(const ExternalFields& fields,
                                         const GLTriple& coeffs, double D, int dim,
                                         int nmax, double band) {
  PhaseCall out;
  out.D_c = critical_D(fields, coeffs.lambda1, coeffs.lambda2, nmax, dim);
  MinimizeResult mr = minimize_gl(fields, coeffs, D, dim, nmax);
  out.min_energy = mr.energy;
  out.psi_sup = mr.psi_sup;
  const double ref =
      std::sqrt(std::max(coeffs.lambda2 * std::abs(D), 1e-12) / (2.0 * coeffs.lambda3));
  const bool nontrivial = mr.psi_sup > 1e-5 * std::max(ref, 1e-6);
  const bool above = D > out.D_c;
  out.critical_window = std::abs(D - out.D_c) <= band * std::max(1.0, std::abs(out.D_c)) ||
                        (above != nontrivial);
  out.superconducting = above;
  return out;
}

}  // namespace bcs
