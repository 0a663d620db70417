#ifndef HK_AIRYNUM_HPP
#define HK_AIRYNUM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hk/hadamard.hpp"

namespace hk {

struct AiryEvalConfig {
  KappaSign kappa = KappaSign::standard(3);
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::optional<double> contour_shift;  // odd N only; chosen per z when unset
  double initial_radius = 2.0;
  unsigned max_depth = 18;  // bisection depth per panel

  int N() const { return kappa.N; }

  /// Sign the contour shift must have for odd N.
  int shift_sign() const {
    const int up = ((N() + 1) / 2) % 2 ? -1 : 1;  // (-1)^{(N+1)/2}
    return kappa.kappa == up ? 1 : -1;
  }

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw std::invalid_argument("airy: tolerances must be positive");
    if (N() % 2 && contour_shift && !(*contour_shift * shift_sign() > 0))
      throw std::invalid_argument("airy: contour shift has the wrong sign for this kappa");
  }
};

struct AiryValue {
  double value = 0;
  double error = 0;
};

namespace detail {

// Integrates f over [0, inf) in panels. The tail beyond R is bounded by
// envelope(R)/decay(R), valid once the log-envelope is concave and decreasing.
template <class F, class Env, class Decay, class Step>
AiryValue integrate_half_line(const AiryEvalConfig &cfg, F f, Env envelope, Decay decay, Step step) {
  double R = cfg.initial_radius;
  for (int it = 0;; ++it) {
    const double d = decay(R);
    if (d > 0 && envelope(R) / d < 0.01 * cfg.abs_tol) break;
    if (it > 60) throw std::runtime_error("airy: no truncation radius found");
    R *= 1.25;
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  AiryValue out;
  double a = 0;
  while (a < R) {
    const double b = std::min(R, a + step(a));
    double err = 0;
    out.value += GK::integrate(f, a, b, cfg.max_depth, cfg.rel_tol, &err);
    out.error += err;
    a = b;
  }
  out.error += 0.01 * cfg.abs_tol;
  return out;
}

}  // namespace detail

/// Contour shift for odd N: the admissible c whose line keeps the largest value of
/// Re(z xi + kappa xi^N) lowest, with a mild preference against tiny |c|
/// (slow decay). Large interior peaks would cost digits to cancellation.
inline double default_contour_shift(const AiryEvalConfig &cfg, double z) {
  const int N = cfg.N();
  const double kappa = cfg.kappa.kappa;
  auto peak = [&](double c) {
    double best = -1e300;
    for (double u = 0; u < 60; u += 0.01) {
      std::complex<double> xi(c, u);
      const double r = (z * xi + kappa * std::pow(xi, N)).real();
      best = std::max(best, r);
      if (u > 1 && r < best - 60) break;
    }
    return best;
  };
  double best_c = 1, best_cost = 1e300;
  for (int i = 0; i <= 40; ++i) {
    const double c = 0.2 * std::pow(20.0, i / 40.0);
    const double cost = peak(cfg.shift_sign() * c) - 0.5 * std::log(c);
    if (cost < best_cost) {
      best_cost = cost;
      best_c = c;
    }
  }
  return cfg.shift_sign() * best_c;
}

/// A_N^{(j)}(z) with an error estimate.
inline AiryValue airy_eval_with_error(const AiryEvalConfig &cfg, double z, int j) {
  cfg.validate();
  if (j < 0) throw std::invalid_argument("airy: negative derivative order");
  const int N = cfg.N();
  const double pi = std::numbers::pi;
  AiryValue r;
  if (N % 2 == 0) {
    // (1/pi) int_0^inf s^j cos(zs + j pi/2) e^{-s^N} ds
    auto f = [&](double s) { return std::pow(s, j) * std::cos(z * s + j * pi / 2) * std::exp(-std::pow(s, N)); };
    auto env = [&](double s) { return std::pow(s, j) * std::exp(-std::pow(s, N)); };
    auto decay = [&](double s) { return N * std::pow(s, N - 1) - j / s; };
    auto step = [&](double) { return std::min(1.0, 4.0 / (std::abs(z) + 1)); };
    r = detail::integrate_half_line(cfg, f, env, decay, step);
  } else {
    // xi = c + iu: (1/pi) int_0^inf Re[e^{z xi + kappa xi^N} xi^j] du
    const double c = cfg.contour_shift ? *cfg.contour_shift : default_contour_shift(cfg, z);
    const double kappa = cfg.kappa.kappa;
    using C = std::complex<double>;
    auto phi = [&](double u) {
      C xi(c, u);
      return z * xi + kappa * std::pow(xi, N);
    };
    auto f = [&](double u) {
      C xi(c, u);
      return (std::exp(phi(u)) * std::pow(xi, j)).real();
    };
    auto env = [&](double u) { return std::pow(std::abs(C(c, u)), j) * std::exp(phi(u).real()); };
    auto decay = [&](double u) {
      C xi(c, u);
      C dphi = (z + kappa * N * std::pow(xi, N - 1)) * C(0, 1);
      return -(dphi.real() + j * u / std::norm(xi));
    };
    auto step = [&](double u) {
      C xi(c, u);
      return std::clamp(8.0 / (std::abs(z + kappa * N * std::pow(xi, N - 1)) + 1.0), 1e-3, 1.0);
    };
    r = detail::integrate_half_line(cfg, f, env, decay, step);
  }
  r.value /= pi;
  r.error /= pi;
  if (!(r.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value))))
    throw std::runtime_error("airy: quadrature did not converge (error " + std::to_string(r.error) + ")");
  return r;
}

inline double airy_eval(const AiryEvalConfig &cfg, double z, int j = 0) { return airy_eval_with_error(cfg, z, j).value; }

/// A^{(N-1)}(z) + (kappa/N) z A(z)
inline double airy_ode_residual(const AiryEvalConfig &cfg, double z) {
  const int N = cfg.N();
  return airy_eval(cfg, z, N - 1) + cfg.kappa.kappa * z * airy_eval(cfg, z, 0) / N;
}

struct KernelSample {
  double x = 0, y = 0, t = 0;
  double value = 0;
  double residual = 0;
};

/// Finite heat kernel of d_t v = kappa L v assembled from an exact Hadamard table.
class KernelModel {
public:
  static constexpr double kPoleThreshold = 1e-8;

  KernelModel(const HadamardTable &table, const Pdo<RatFunc> &l, AiryEvalConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.kappa = table.kappa;
    N_ = require_normal_form(l);
    if (N_ != table.N()) throw std::invalid_argument("kernel: operator order differs from the table");
    if (!table.cutoff) throw std::invalid_argument("kernel: the table is not known to be finite");
    for (int i = 0; i < N_; ++i) u_.push_back(numeric(l.coeff(i)));
    // d_x^n H_k^j for n <= N
    dH_.assign(static_cast<std::size_t>(N_ - 1), {});
    for (int j = 0; j <= N_ - 2; ++j)
      for (int k = 1; k < *table.cutoff; ++k) {
        RatFunc h = numeric(table.entry(k, j));
        std::vector<RatFunc> ds{h};
        for (int n = 1; n <= N_; ++n) ds.push_back(ds.back().derivative(Var::X));
        dH_[static_cast<std::size_t>(j)].push_back(std::move(ds));
      }
  }

  KernelSample sample(double x, double y, double t) const {
    if (!(t > 0)) throw std::invalid_argument("kernel: t must be positive");
    const double s = std::pow(t, -1.0 / N_);
    const double zeta = (x - y) * s;
    std::array<double, kNumVars> pt{};
    pt[0] = x;
    pt[1] = y;
    // G_j and derivatives: g[j][n] = d_x^n G_j, gt[j] = d_t G_j
    std::vector<std::vector<double>> g(static_cast<std::size_t>(N_ - 1), std::vector<double>(N_ + 1, 0.0));
    std::vector<double> gt(static_cast<std::size_t>(N_ - 1), 0.0);
    g[0][0] = 1;
    for (int j = 0; j <= N_ - 2; ++j) {
      const auto &rows = dH_[static_cast<std::size_t>(j)];
      for (std::size_t kk = 0; kk < rows.size(); ++kk) {
        const int k = static_cast<int>(kk) + 1;
        for (int n = 0; n <= N_; ++n) {
          const double v = eval(rows[kk][static_cast<std::size_t>(n)], pt);
          g[j][n] += v * std::pow(t, k);
          if (n == 0) gt[j] += k * v * std::pow(t, k - 1);
        }
      }
    }
    // Linear combinations of A^{(i)}(zeta), i <= 2N - 2.
    std::vector<double> value(2 * N_, 0.0), dt(2 * N_, 0.0), lv(2 * N_, 0.0);
    for (int j = 0; j <= N_ - 2; ++j) {
      const double a = std::pow(t, -(j + 1.0) / N_);
      value[j] += a * g[j][0];
      dt[j] += a * (gt[j] - (j + 1.0) / (N_ * t) * g[j][0]);
      dt[j + 1] -= a * zeta / (N_ * t) * g[j][0];
      for (int n = 0; n <= N_; ++n) {
        const double un = n == N_ ? 1.0 : eval(u_[static_cast<std::size_t>(n)], pt);
        if (un == 0) continue;
        for (int l = 0; l <= n; ++l)
          lv[j + l] += un * a * binom(n, l).to_double() * std::pow(s, l) * g[j][n - l];
      }
    }
    auto basis = airy_basis(zeta);
    auto reduce = [&](const std::vector<double> &c) {
      auto rep = derivative_representation(zeta);
      double r = 0;
      for (std::size_t i = 0; i < c.size(); ++i)
        for (int b = 0; b <= N_ - 2; ++b) r += c[i] * rep[i][static_cast<std::size_t>(b)] * basis[static_cast<std::size_t>(b)];
      return r;
    };
    std::vector<double> res(2 * N_, 0.0);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = dt[i] - cfg_.kappa.kappa * lv[i];
    return KernelSample{x, y, t, reduce(value), reduce(res)};
  }

  const AiryEvalConfig &config() const { return cfg_; }

private:
  AiryEvalConfig cfg_;
  int N_ = 0;
  std::vector<RatFunc> u_;
  std::vector<std::vector<std::vector<RatFunc>>> dH_;

  static RatFunc numeric(const RatFunc &f) {
    for (Var v : {Var::S1, Var::S2, Var::S3, Var::H})
      if (f.num().depends_on(v) || f.den().depends_on(v))
        throw std::invalid_argument(std::string("kernel: unbound parameter ") + var_name(v));
    return f;
  }

  static double eval(const RatFunc &f, const std::array<double, kNumVars> &pt) {
    const double d = f.den().evaluate(pt);
    if (std::abs(d) < kPoleThreshold) throw std::domain_error("kernel: sample point too close to a pole");
    return f.num().evaluate(pt) / d;
  }

  std::vector<double> airy_basis(double zeta) const {
    std::vector<double> b;
    for (int i = 0; i <= N_ - 2; ++i) b.push_back(airy_eval(cfg_, zeta, i));
    return b;
  }

  // rows: A^{(m)} in the basis A, ..., A^{(N-2)} via A^{(N-1+i)} = -(kappa/N)(z A^{(i)} + i A^{(i-1)})
  std::vector<std::vector<double>> derivative_representation(double zeta) const {
    std::vector<std::vector<double>> rep;
    const double c = -cfg_.kappa.kappa / static_cast<double>(N_);
    for (int m = 0; m < 2 * N_; ++m) {
      std::vector<double> r(static_cast<std::size_t>(N_ - 1), 0.0);
      if (m <= N_ - 2) {
        r[static_cast<std::size_t>(m)] = 1;
      } else {
        const int i = m - N_ + 1;
        for (int b = 0; b <= N_ - 2; ++b) {
          double v = zeta * rep[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
          if (i >= 1) v += i * rep[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(b)];
          r[static_cast<std::size_t>(b)] = c * v;
        }
      }
      rep.push_back(std::move(r));
    }
    return rep;
  }
};

inline KernelSample kernel_assemble(const HadamardTable &table, const Pdo<RatFunc> &l, const AiryEvalConfig &cfg,
                                    double x, double y, double t) {
  return KernelModel(table, l, cfg).sample(x, y, t);
}

/// 5 x 5 x 3 grid on [-2, 2]^2 x {0.1, 0.5, 1}.
inline std::vector<std::array<double, 3>> default_kernel_grid() {
  std::vector<std::array<double, 3>> g;
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0})
    for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0})
      for (double t : {0.1, 0.5, 1.0}) g.push_back({x, y, t});
  return g;
}

inline void write_kernel_csv(std::ostream &os, const std::vector<KernelSample> &samples) {
  os << "x,y,t,value,residual\n";
  char buf[160];
  for (const auto &s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.x, s.y, s.t, s.value, s.residual);
    os << buf;
  }
}

}  // namespace hk

#endif  // HK_AIRYNUM_HPP
