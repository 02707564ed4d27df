#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "insdecay/besov/besov_norm.hpp"
#include "insdecay/io/csv.hpp"
#include "insdecay/solver/density.hpp"
#include "insdecay/solver/integrator.hpp"

namespace insdecay {

/// Velocity as a function of time; `steady` lets the transport reuse one
/// nodal evaluation for every stage.
struct VelocitySource {
  std::function<VelocityField(double)> at;
  bool steady = false;

  static VelocitySource constant(VelocityField u) {
    return {[u = std::move(u)](double) { return u; }, true};
  }
};

/// Linear interpolation in time between trajectory snapshots, held constant
/// outside their range.
inline VelocitySource trajectory_velocity(std::vector<Snapshot> snaps) {
  if (snaps.empty()) throw DomainError("trajectory_velocity: no snapshots");
  return {[s = std::move(snaps)](double t) {
            if (t <= s.front().state.t) return s.front().state.u;
            if (t >= s.back().state.t) return s.back().state.u;
            auto it = std::upper_bound(s.begin(), s.end(), t,
                                       [](double v, const Snapshot& x) { return v < x.state.t; });
            const Snapshot& b = *it;
            const Snapshot& a = *(it - 1);
            const double w = (t - a.state.t) / (b.state.t - a.state.t);
            SpectralVector v = a.state.u.vec();
            v *= 1.0 - w;
            SpectralVector vb = b.state.u.vec();
            vb *= w;
            v += vb;
            return VelocityField::from_components(std::move(v));
          },
          false};
}

/// ||grad u||_{B^0_{inf,2}} with the pointwise Frobenius norm of each block
/// of the velocity gradient.
inline double grad_u_b0_inf2(const VelocityField& u) {
  const Grid& g = u.grid();
  const int jm = j_max(g);
  const SpectralVector d1 = gradient(u.u1()), d2 = gradient(u.u2());
  double acc = 0.0;
  for (int j = -1; j <= jm; ++j) {
    auto [a, b] = to_physical(dyadic_block(d1.x, j), dyadic_block(d1.y, j));
    auto [c, d] = to_physical(dyadic_block(d2.x, j), dyadic_block(d2.y, j));
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      m = std::max(m, a[i] * a[i] + b[i] * b[i] + c[i] * c[i] + d[i] * d[i]);
    }
    acc += m;
  }
  return std::sqrt(acc);
}

struct BlockTransportExperiment {
  SpectralField rho0;
  VelocitySource velocity;
  double eta = 1.5;
  double horizon = 1.0;
  double dt = 0.01;
  int sample_every = 10;  // steps between growth samples
  double cfl_max = 1.0;
  int threads = 1;
};

enum class BlockRegion { low, middle, high };

/// Region of the (q, j) plane in the proof's split: j < q/2 - N, j > 3q/2 + N,
/// or the band in between.
inline BlockRegion block_region(int q, int j, int N) {
  if (2 * j < q - 2 * N) return BlockRegion::low;
  if (2 * j > 3 * q + 2 * N) return BlockRegion::high;
  return BlockRegion::middle;
}

struct GrowthSample {
  double t = 0.0;
  double norm = 0.0;          // ||rho(t)||_{B^{eta ln}_{inf,1}}
  double split_low = 0.0;     // weighted sum of ||Delta_q rho_j|| over j < q/2 - N
  double split_middle = 0.0;
  double split_high = 0.0;    // j > 3q/2 + N
  double grad_integral = 0.0; // int_0^t ||grad u||_{B^0_{inf,2}}
  double floored = 1.0;       // max(1, grad_integral)
  int N = 1;
  double bound_rhs = 0.0;     // C_fit ||rho0||_{(eta+1) ln} floored^{eta+1}
};

struct GrowthReport {
  double eta = 0.0;
  double rho0_norm_eta = 0.0;   // ||rho0||_{B^{eta ln}}
  double rho0_norm_eta1 = 0.0;  // ||rho0||_{B^{(eta+1) ln}}
  double C_fit = 0.0;
  double superposition_error = 0.0;  // ||sum_j rho_j - rho||_{L^2} / ||rho||_{L^2} at the end
  double max_block_growth = 0.0;     // max_{j,t} ||rho_j(t)||_inf / ||Delta_j rho0||_inf - 1
  std::vector<GrowthSample> samples;
  std::vector<std::vector<double>> block_matrix;  // ||Delta_q rho_j||_inf at the last sample, [q+1][j+1]
  int steps = 0;
};

namespace detail {

inline std::vector<std::vector<double>> block_norm_matrix(const std::vector<SpectralField>& rho_j) {
  std::vector<std::vector<double>> m;
  m.reserve(rho_j.size());
  for (const auto& f : rho_j) m.push_back(block_norms(f, kInf));
  // Transpose to [q][j].
  std::vector<std::vector<double>> out(m.front().size(), std::vector<double>(m.size()));
  for (std::size_t j = 0; j < m.size(); ++j) {
    for (std::size_t q = 0; q < m[j].size(); ++q) out[q][j] = m[j][q];
  }
  return out;
}

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const int t = std::min(threads, count);
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Transport every block rho_j = Delta_j rho0 separately, measure the (q, j)
/// block matrix along the way and fit the constant of
/// ||rho(t)||_{eta ln} <= C ||rho0||_{(eta+1) ln} max(1, int ||grad u||)^{eta+1}.
inline GrowthReport transport_block_experiment(const BlockTransportExperiment& e) {
  if (!(e.eta > 0.0)) throw DomainError("transport_block_experiment: eta must be > 0");
  if (!(e.dt > 0.0) || !(e.horizon >= 0.0)) {
    throw DomainError("transport_block_experiment: need dt > 0 and horizon >= 0");
  }
  if (e.sample_every < 1) throw DomainError("transport_block_experiment: sample_every >= 1");
  const Grid& g = e.rho0.grid();
  const BesovSpec spec = BesovSpec::logarithmic(e.eta);

  GrowthReport rep;
  rep.eta = e.eta;
  rep.rho0_norm_eta = log_besov_norm(e.rho0, e.eta);
  rep.rho0_norm_eta1 = log_besov_norm(e.rho0, e.eta + 1.0);

  const DyadicDecomposition dec(e.rho0);
  std::vector<SpectralField> blocks;
  std::vector<double> block0_sup;
  for (int j = -1; j <= dec.j_max(); ++j) {
    blocks.push_back(dec.block(j));
    block0_sup.push_back(lp_norm(blocks.back(), kInf));
  }
  // Blocks holding only transform round-off are dropped; their relative
  // growth is meaningless and they cost a full transport each.
  const double top = *std::max_element(block0_sup.begin(), block0_sup.end());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (block0_sup[j] <= 1e-13 * top) {
      blocks[j] = SpectralField(g);
      block0_sup[j] = 0.0;
    }
  }
  const int nb = static_cast<int>(blocks.size());
  SpectralField direct = e.rho0;

  auto nodal_at = [&](double t) {
    const VelocityField u = e.velocity.at(t);
    if (divergence_ratio(u.vec()) > 1e-8) {
      throw DomainError("transport_block_experiment: velocity is not divergence-free");
    }
    return NodalVelocity::from(u.vec());
  };

  double t = 0.0, integral = 0.0;
  double grad_prev = grad_u_b0_inf2(e.velocity.at(0.0));
  NodalVelocity steady_u;
  if (e.velocity.steady) steady_u = nodal_at(0.0);

  auto record = [&] {
    GrowthSample s;
    s.t = t;
    s.grad_integral = integral;
    s.floored = std::max(1.0, integral);
    s.N = std::max(1, static_cast<int>(std::ceil(integral)));
    auto mat = detail::block_norm_matrix(blocks);
    SpectralField sum(g);
    for (const auto& b : blocks) sum += b;
    s.norm = log_besov_norm(sum, e.eta);
    for (int q = -1; q + 1 < static_cast<int>(mat.size()); ++q) {
      for (int j = -1; j + 1 < nb; ++j) {
        const double v = spec.weight(q) * mat[q + 1][j + 1];
        switch (block_region(q, j, s.N)) {
          case BlockRegion::low:
            s.split_low += v;
            break;
          case BlockRegion::middle:
            s.split_middle += v;
            break;
          case BlockRegion::high:
            s.split_high += v;
            break;
        }
      }
    }
    for (int j = 0; j < nb; ++j) {
      if (block0_sup[j] == 0.0) continue;
      rep.max_block_growth =
          std::max(rep.max_block_growth, lp_norm(blocks[j], kInf) / block0_sup[j] - 1.0);
    }
    rep.block_matrix = std::move(mat);
    rep.samples.push_back(s);
  };

  const int total = static_cast<int>(std::ceil(e.horizon / e.dt - 1e-9));
  record();
  for (int k = 0; k < total; ++k) {
    const double h = std::min(e.dt, e.horizon - t);
    NodalVelocity v0 = e.velocity.steady ? steady_u : nodal_at(t);
    NodalVelocity vh = e.velocity.steady ? steady_u : nodal_at(t + 0.5 * h);
    NodalVelocity v1 = e.velocity.steady ? steady_u : nodal_at(t + h);
    require_cfl(v0, g, h, e.cfl_max);
    require_cfl(v1, g, h, e.cfl_max);
    auto stage = [&](double frac) -> const NodalVelocity& {
      return frac == 0.0 ? v0 : (frac == 0.5 ? vh : v1);
    };
    detail::parallel_for(nb + 1, e.threads, [&](int i) {
      SpectralField& q = i < nb ? blocks[i] : direct;
      if (i < nb && block0_sup[i] == 0.0) return;
      q += rk4_transport_increment(q, h, stage);
    });
    const double grad_next =
        e.velocity.steady ? grad_prev : grad_u_b0_inf2(e.velocity.at(t + h));
    integral += 0.5 * h * (grad_prev + grad_next);
    grad_prev = grad_next;
    t += h;
    rep.steps = k + 1;
    if ((k + 1) % e.sample_every == 0 || k + 1 == total) record();
  }

  SpectralField sum(g);
  for (const auto& b : blocks) sum += b;
  const double dn = l2_norm(direct);
  sum -= direct;
  rep.superposition_error = dn > 0.0 ? l2_norm(sum) / dn : l2_norm(sum);

  if (rep.rho0_norm_eta1 > 0.0) {
    for (const auto& s : rep.samples) {
      rep.C_fit = std::max(rep.C_fit,
                           s.norm / (rep.rho0_norm_eta1 * std::pow(s.floored, e.eta + 1.0)));
    }
  }
  for (auto& s : rep.samples) {
    s.bound_rhs = rep.C_fit * rep.rho0_norm_eta1 * std::pow(s.floored, e.eta + 1.0);
  }
  return rep;
}

struct DegreeFit {
  double degree = 0.0;
  int samples = 0;
};

/// Least-squares slope of ln ||rho(t)|| against ln int ||grad u|| over the
/// samples where the integral is at least f_min.
inline DegreeFit fit_growth_degree(const GrowthReport& r, double f_min = 1.0) {
  std::vector<double> x, y;
  for (const auto& s : r.samples) {
    if (s.grad_integral < f_min || !(s.norm > 0.0)) continue;
    x.push_back(std::log(s.grad_integral));
    y.push_back(std::log(s.norm));
  }
  const std::size_t n = x.size();
  if (n < 3) throw DomainError("fit_growth_degree: need >= 3 samples past the floor");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_growth_degree: no spread in the integral");
  return {sxy / sxx, static_cast<int>(n)};
}

inline io::Table growth_table(const GrowthReport& r) {
  io::Table t;
  t.columns = {"t", "norm", "bound_rhs", "grad_integral", "N", "split_low", "split_middle",
               "split_high"};
  for (const auto& s : r.samples) {
    t.rows.push_back({s.t, s.norm, s.bound_rhs, s.grad_integral, static_cast<double>(s.N),
                      s.split_low, s.split_middle, s.split_high});
  }
  return t;
}

/// Dense (q, j) matrix: one row per q, columns j = -1..J.
inline io::Table block_matrix_table(const GrowthReport& r) {
  io::Table t;
  t.columns = {"q"};
  const std::size_t nj = r.block_matrix.empty() ? 0 : r.block_matrix.front().size();
  for (std::size_t j = 0; j < nj; ++j) t.columns.push_back("j" + std::to_string(int(j) - 1));
  for (std::size_t q = 0; q < r.block_matrix.size(); ++q) {
    std::vector<double> row = {static_cast<double>(int(q) - 1)};
    row.insert(row.end(), r.block_matrix[q].begin(), r.block_matrix[q].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Rigid rotation with angular speed omega about the box centre inside a core
/// of radius r_core, brought smoothly to rest by r_core + width. Built from a
/// stream function psi = omega R(r)^2 / 2, so it is exactly divergence-free.
inline VelocityField rigid_rotation(const Grid& g, double omega, double r_core, double width) {
  if (!(r_core > 0.0 && width > 0.0 && r_core + width <= 0.5 * g.l())) {
    throw DomainError("rigid_rotation: core plus taper must fit inside the box");
  }
  const double c = 0.5 * g.l();
  auto psi = sample(g, [&](double x, double y) {
    const double r = std::hypot(x - c, y - c);
    // R' = 1 - 3s^2 + 2s^3 on the taper, so R is C^1 and constant outside.
    const double s = std::clamp((r - r_core) / width, 0.0, 1.0);
    const double R = r <= r_core ? r : r_core + width * (s - s * s * s + 0.5 * s * s * s * s);
    return 0.5 * omega * R * R;
  });
  return velocity_from_stream(to_spectral(psi, g));
}

}  // namespace insdecay
