#include "wavecho/flume.hpp"

#include "wavecho/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wavecho {

namespace {

constexpr int kGhost = 3;
constexpr double kMp5Alpha = 4.0;
constexpr double kMp5Eps = 0.0;
constexpr double kMinStep = 1e-6;
constexpr double kDiffusionCap = 0.25;  // nu dt / dx^2
constexpr double kEnvelopeReach = 3.5;

double minmod2(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::copysign(std::min(std::abs(a), std::abs(b)), a);
}

double minmod4(double a, double b, double c, double d) {
  const bool pos = a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0;
  const bool neg = a < 0.0 && b < 0.0 && c < 0.0 && d < 0.0;
  if (!pos && !neg) return 0.0;
  const double m = std::min({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  return pos ? m : -m;
}

// Mirror extension across both walls: sign = +1 for eta, -1 for u.
void extend(std::span<const double> v, double sign, std::vector<double>& out) {
  const int n = static_cast<int>(v.size());
  out.resize(n + 2 * kGhost);
  for (int i = 0; i < n; ++i) out[i + kGhost] = v[i];
  for (int g = 0; g < kGhost; ++g) {
    const int inner = std::min(g, n - 1);
    out[kGhost - 1 - g] = sign * v[inner];
    out[kGhost + n + g] = sign * v[n - 1 - inner];
  }
}

// u_xx and (h u)_xx with wall ghosts u_{-1} = -u_0, h_{-1} = h_0.
void second_derivatives(std::span<const double> u, std::span<const double> h, double dx,
                        std::vector<double>& uxx, std::vector<double>& huxx) {
  const int n = static_cast<int>(u.size());
  uxx.resize(n);
  huxx.resize(n);
  const double inv = 1.0 / (dx * dx);
  for (int i = 0; i < n; ++i) {
    const double ul = i > 0 ? u[i - 1] : -u[0];
    const double ur = i + 1 < n ? u[i + 1] : -u[n - 1];
    const double hl = i > 0 ? h[i - 1] : h[0];
    const double hr = i + 1 < n ? h[i + 1] : h[n - 1];
    uxx[i] = (ur - 2.0 * u[i] + ul) * inv;
    huxx[i] = (hr * ur - 2.0 * h[i] * u[i] + hl * ul) * inv;
  }
}

void dispersion_from_derivatives(std::span<const double> h, double dx, double zc,
                                 const std::vector<double>& uxx, const std::vector<double>& huxx,
                                 std::vector<double>& psi_c, std::vector<double>& psi_p,
                                 std::vector<double>& q) {
  const int n = static_cast<int>(h.size());
  psi_c.resize(n);
  psi_p.resize(n);
  q.resize(n);
  for (int i = 0; i < n; ++i) {
    const double z = zc * h[i];
    psi_p[i] = 0.5 * z * z * uxx[i] + z * huxx[i];
    q[i] = (0.5 * z * z - h[i] * h[i] / 6.0) * h[i] * uxx[i] + (z + 0.5 * h[i]) * h[i] * huxx[i];
  }
  // (q)_x through face averages; wall faces carry no flux.
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? 0.5 * (q[i - 1] + q[i]) : 0.0;
    const double right = i + 1 < n ? 0.5 * (q[i] + q[i + 1]) : 0.0;
    psi_c[i] = (right - left) / dx;
  }
}

}  // namespace

// --- config ------------------------------------------------------------------

double FlumeConfig::depth_at(double x) const {
  if (flat_bottom) return offshore_depth;
  if (x <= slope_toe) return offshore_depth;
  return std::max(shelf_depth, offshore_depth - slope * (x - slope_toe));
}

void FlumeConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Configuration, what); };
  if (!(length > 0.0)) fail("flume length must be positive");
  if (cells < 2 * kGhost) fail("flume needs at least " + std::to_string(2 * kGhost) + " cells");
  if (!(offshore_depth > 0.0) || !(shelf_depth > 0.0)) fail("still depths must be positive");
  if (shelf_depth > offshore_depth) fail("shelf depth exceeds offshore depth");
  if (!(slope > 0.0)) fail("slope must be positive");
  if (sponge_cells < 0 || 2 * sponge_cells >= cells) fail("sponge zones overlap");
  if (sponge_strength < 0.0) fail("sponge strength must be non-negative");
  if (!(gauge_x >= 0.0 && gauge_x <= length)) fail("gauge outside the flume");
  if (!(wavemaker_center > 0.0 && wavemaker_center < length)) fail("wavemaker outside the flume");
  if (!(courant > 0.0 && courant <= 1.0)) fail("courant number must lie in (0, 1]");
  if (manning_n < 0.0) fail("manning n must be non-negative");
  if (!(z_alpha_coeff < 0.0 && z_alpha_coeff > -1.0)) fail("z_alpha coefficient must lie in (-1, 0)");
  if (!(duration > 0.0)) fail("duration must be positive");
  if (!(output_rate > 0.0)) fail("output rate must be positive");
  if (record_start < 0.0 || record_start >= duration) fail("record start outside the run");
}

FlumeConfig FlumeConfig::desk_scale() {
  FlumeConfig c;
  c.duration = 2000.0;
  c.record_start = 500.0;
  return c;
}

// --- reconstruction and fluxes ---------------------------------------------

double mp5_face(double vm2, double vm1, double v0, double vp1, double vp2) {
  const double vor = (2.0 * vm2 - 13.0 * vm1 + 47.0 * v0 + 27.0 * vp1 - 3.0 * vp2) / 60.0;
  const double vmp = v0 + minmod2(vp1 - v0, kMp5Alpha * (v0 - vm1));
  if ((vor - v0) * (vor - vmp) <= kMp5Eps) return vor;

  const double djm1 = vm2 - 2.0 * vm1 + v0;
  const double dj = vm1 - 2.0 * v0 + vp1;
  const double djp1 = v0 - 2.0 * vp1 + vp2;
  const double dm4p = minmod4(4.0 * dj - djp1, 4.0 * djp1 - dj, dj, djp1);
  const double dm4m = minmod4(4.0 * dj - djm1, 4.0 * djm1 - dj, dj, djm1);
  const double vul = v0 + kMp5Alpha * (v0 - vm1);
  const double vav = 0.5 * (v0 + vp1);
  const double vmd = vav - 0.5 * dm4p;
  const double vlc = v0 + 0.5 * (v0 - vm1) + 4.0 / 3.0 * dm4m;
  const double vmin = std::max(std::min({v0, vp1, vmd}), std::min({v0, vul, vlc}));
  const double vmax = std::min(std::max({v0, vp1, vmd}), std::max({v0, vul, vlc}));
  return vor + minmod2(vmin - vor, vmax - vor);
}

FaceStates reconstruct_interfaces(std::span<const double> eta, std::span<const double> u) {
  if (eta.size() != u.size() || eta.size() < static_cast<std::size_t>(kGhost)) {
    throw Error(ErrorKind::Shape, "reconstruction needs matching fields of at least 3 cells");
  }
  const int n = static_cast<int>(eta.size());
  std::vector<double> e, v;
  extend(eta, 1.0, e);
  extend(u, -1.0, v);
  FaceStates f;
  f.eta_left.resize(n + 1);
  f.eta_right.resize(n + 1);
  f.u_left.resize(n + 1);
  f.u_right.resize(n + 1);
  for (int face = 0; face <= n; ++face) {
    const int l = face - 1 + kGhost;  // cell left of the face, extended index
    const int r = l + 1;
    f.eta_left[face] = mp5_face(e[l - 2], e[l - 1], e[l], e[l + 1], e[l + 2]);
    f.eta_right[face] = mp5_face(e[r + 2], e[r + 1], e[r], e[r - 1], e[r - 2]);
    f.u_left[face] = mp5_face(v[l - 2], v[l - 1], v[l], v[l + 1], v[l + 2]);
    f.u_right[face] = mp5_face(v[r + 2], v[r + 1], v[r], v[r - 1], v[r - 2]);
  }
  return f;
}

FaceStates reconstruct_interfaces(std::span<const double> eta, std::span<const double> u,
                                  std::span<const double> h) {
  if (eta.size() != u.size() || eta.size() != h.size() ||
      eta.size() < static_cast<std::size_t>(kGhost)) {
    throw Error(ErrorKind::Shape, "reconstruction needs matching fields of at least 3 cells");
  }
  const int n = static_cast<int>(eta.size());
  std::vector<double> e, v, d;
  extend(eta, 1.0, e);
  extend(u, -1.0, v);
  extend(h, 1.0, d);
  FaceStates f;
  f.eta_left.resize(n + 1);
  f.eta_right.resize(n + 1);
  f.u_left.resize(n + 1);
  f.u_right.resize(n + 1);
  double wp[6], wm[6];
  for (int face = 0; face <= n; ++face) {
    const int l = face - 1 + kGhost;
    const int r = l + 1;
    // Characteristic variables u +- sqrt(g/H) eta of the system linearised
    // about the face depth.
    const double depth = std::max(0.5 * (e[l] + d[l] + e[r] + d[r]), 1e-12);
    const double s = std::sqrt(kGravity / depth);
    for (int j = 0; j < 6; ++j) {
      wp[j] = v[l - 2 + j] + s * e[l - 2 + j];
      wm[j] = v[l - 2 + j] - s * e[l - 2 + j];
    }
    const double pl = mp5_face(wp[0], wp[1], wp[2], wp[3], wp[4]);
    const double ml = mp5_face(wm[0], wm[1], wm[2], wm[3], wm[4]);
    const double pr = mp5_face(wp[5], wp[4], wp[3], wp[2], wp[1]);
    const double mr = mp5_face(wm[5], wm[4], wm[3], wm[2], wm[1]);
    f.eta_left[face] = (pl - ml) / (2.0 * s);
    f.u_left[face] = 0.5 * (pl + ml);
    f.eta_right[face] = (pr - mr) / (2.0 * s);
    f.u_right[face] = 0.5 * (pr + mr);
  }
  return f;
}

FluxPair physical_flux(ShallowState s, double still_depth) {
  const double eta = s.depth - still_depth;
  return {s.depth * s.velocity,
          s.depth * s.velocity * s.velocity + 0.5 * kGravity * eta * eta +
              kGravity * eta * still_depth};
}

FluxPair hllc_flux(ShallowState left, ShallowState right, double still_depth) {
  if (!(left.depth > 0.0) || !(right.depth > 0.0)) {
    throw Error(ErrorKind::Drying, "non-positive water depth at a cell face");
  }
  const double cl = std::sqrt(kGravity * left.depth);
  const double cr = std::sqrt(kGravity * right.depth);
  // Two-rarefaction star depth, with the shock correction where the star
  // depth exceeds the side depth.
  const double c_star =
      std::max(0.0, 0.5 * (cl + cr) + 0.25 * (left.velocity - right.velocity));
  const double h_star = c_star * c_star / kGravity;
  auto q = [h_star](double h) {
    return h_star > h ? std::sqrt(0.5 * (h_star + h) * h_star / (h * h)) : 1.0;
  };
  const double sl = left.velocity - cl * q(left.depth);
  const double sr = right.velocity + cr * q(right.depth);

  const FluxPair fl = physical_flux(left, still_depth);
  const FluxPair fr = physical_flux(right, still_depth);
  if (sl >= 0.0) return fl;
  if (sr <= 0.0) return fr;

  // Without a transported scalar the contact wave carries no jump, so the
  // mass and momentum components of HLLC are the HLL average.
  const double inv = 1.0 / (sr - sl);
  const double dm = right.depth * right.velocity - left.depth * left.velocity;
  return {(sr * fl.mass - sl * fr.mass + sl * sr * (right.depth - left.depth)) * inv,
          (sr * fl.momentum - sl * fr.momentum + sl * sr * dm) * inv};
}

// --- dispersion and turbulence ----------------------------------------------

DispersiveTerms dispersive_terms(std::span<const double> u, std::span<const double> h, double dx,
                                 double z_alpha_coeff) {
  if (u.size() != h.size() || u.empty()) throw Error(ErrorKind::Shape, "u and h sizes differ");
  std::vector<double> uxx, huxx, q;
  second_derivatives(u, h, dx, uxx, huxx);
  DispersiveTerms t;
  dispersion_from_derivatives(h, dx, z_alpha_coeff, uxx, huxx, t.psi_c, t.psi_p, q);
  return t;
}

double eddy_viscosity(double k, double length_scale) {
  return kTkeCnu * length_scale * std::sqrt(std::max(k, 0.0));
}

namespace {

const double kTkeCd = kTkeCnu * kTkeCnu * kTkeCnu;

// k_t = -u k_x - C_d k^1.5 / l + P + nu k_xx with l = h.
void tke_rate(std::span<const double> k, std::span<const double> u, std::span<const double> eta,
              std::span<const double> h, const std::vector<double>& uxx,
              const std::vector<double>& huxx, double dx, double zc, std::vector<double>& out) {
  const int n = static_cast<int>(k.size());
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    const double kl = i > 0 ? k[i - 1] : k[i];
    const double kr = i + 1 < n ? k[i + 1] : k[i];
    const double advection = u[i] > 0.0 ? u[i] * (k[i] - kl) / dx : u[i] * (kr - k[i]) / dx;
    const double kk = std::max(k[i], 0.0);
    const double destruction = kTkeCd * kk * std::sqrt(kk) / h[i];
    const double diffusion = kWaterViscosity * (kr - 2.0 * k[i] + kl) / (dx * dx);

    const double z = zc * h[i];
    const double e = eta[i];
    const double u_surface = u[i] + 0.5 * (z * z - e * e) * uxx[i] + (z - e) * huxx[i];
    double production = 0.0;
    if (std::abs(u_surface) >= std::sqrt(kGravity * (h[i] + e))) {
      const double shear = std::abs(-e * uxx[i] - huxx[i]);
      production = h[i] * h[i] / std::sqrt(kTkeCd) * shear * shear * shear;
    }
    out[i] = -advection - destruction + production + diffusion;
  }
}

}  // namespace

void tke_step(FlumeState& state, std::span<const double> h, double dx, double dt,
              double z_alpha_coeff) {
  const std::size_t n = h.size();
  if (state.k.size() != n || state.u.size() != n || state.eta.size() != n) {
    throw Error(ErrorKind::Shape, "state and bathymetry sizes differ");
  }
  std::vector<double> uxx, huxx, rate;
  second_derivatives(state.u, h, dx, uxx, huxx);
  tke_rate(state.k, state.u, state.eta, h, uxx, huxx, dx, z_alpha_coeff, rate);
  state.nu_t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    state.k[i] = std::max(0.0, state.k[i] + dt * rate[i]);
    state.nu_t[i] = eddy_viscosity(state.k[i], h[i]);
  }
}

// --- solver ------------------------------------------------------------------

FlumeSolver::FlumeSolver(FlumeConfig config, std::optional<Wavemaker> wavemaker)
    : config_(std::move(config)), wavemaker_(std::move(wavemaker)) {
  config_.validate();
  const int n = config_.cells;
  const double dx = config_.dx();
  h_.resize(n);
  h_face_.resize(n + 1);
  for (int i = 0; i < n; ++i) h_[i] = config_.depth_at((i + 0.5) * dx);
  for (int f = 0; f <= n; ++f) h_face_[f] = config_.depth_at(f * dx);

  sponge_rate_.assign(n, 0.0);
  if (config_.sponges && config_.sponge_cells > 0) {
    const double zone = config_.sponge_cells * dx;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) * dx;
      const double d = std::min(x, config_.length - x);
      if (d < zone) {
        const double c = std::cos(0.5 * std::numbers::pi * d / zone);
        sponge_rate_[i] = config_.sponge_strength * c * c;
      }
    }
  }

  if (wavemaker_ && config_.wavemaker) wavemaker_->bind_grid(dx, n);

  state_.eta.assign(n, 0.0);
  state_.u.assign(n, 0.0);
  state_.P.assign(n, 0.0);
  state_.k.assign(n, 0.0);
  state_.nu_t.assign(n, 0.0);
}

FlumeSolver FlumeSolver::for_sea_state(const FlumeConfig& config, double hs, double tp,
                                       std::uint64_t seed) {
  config.validate();
  if (hs < 0.0 || !(tp > 0.0)) throw Error(ErrorKind::InvalidSeaState, "Hs >= 0 and Tp > 0 required");
  if (hs == 0.0 || !config.wavemaker) return FlumeSolver(config);

  SpectrumSpec spectrum =
      discretize_spectrum(hs, tp, config.duration, config.offshore_depth, seed);
  const double kp = airy_wavenumber(2.0 * std::numbers::pi / tp, config.offshore_depth);
  const double peak_length = 2.0 * std::numbers::pi / kp;
  const double sponge_end = config.sponge_cells * config.dx();
  const double room = std::min(config.wavemaker_center - sponge_end,
                               (config.flat_bottom ? config.length : config.slope_toe) -
                                   config.wavemaker_center);
  if (!(room > 0.0)) throw Error(ErrorKind::Configuration, "wavemaker sits inside a sponge zone");
  const double width = std::min(0.5 * peak_length, room / kEnvelopeReach);
  return FlumeSolver(config, Wavemaker(std::move(spectrum), config.wavemaker_center, width,
                                       config.z_alpha_coeff));
}

void FlumeSolver::solve_velocity(const std::vector<double>& eta, const std::vector<double>& P,
                                 std::vector<double>& u) const {
  const int n = config_.cells;
  u.resize(n);
  if (!config_.dispersion) {
    for (int i = 0; i < n; ++i) u[i] = P[i] / (h_[i] + eta[i]);
    return;
  }
  // u + z^2/2 u_xx + z (h u)_xx = P / H, wall ghosts mirrored.
  auto& a = tri_lower_;
  auto& b = tri_diag_;
  auto& c = tri_upper_;
  auto& w = tri_work_;
  a.resize(n);
  b.resize(n);
  c.resize(n);
  w.resize(n);
  const double inv = 1.0 / (config_.dx() * config_.dx());
  for (int i = 0; i < n; ++i) {
    const double z = config_.z_alpha_coeff * h_[i];
    const double A = 0.5 * z * z * inv;
    const double B = z * inv;
    const double hl = i > 0 ? h_[i - 1] : h_[0];
    const double hr = i + 1 < n ? h_[i + 1] : h_[n - 1];
    a[i] = A + B * hl;
    b[i] = 1.0 - 2.0 * A - 2.0 * B * h_[i];
    c[i] = A + B * hr;
    u[i] = P[i] / (h_[i] + eta[i]);
  }
  b[0] -= a[0];
  b[n - 1] -= c[n - 1];
  // Thomas algorithm
  w[0] = c[0] / b[0];
  u[0] /= b[0];
  for (int i = 1; i < n; ++i) {
    const double m = b[i] - a[i] * w[i - 1];
    w[i] = c[i] / m;
    u[i] = (u[i] - a[i] * u[i - 1]) / m;
  }
  for (int i = n - 2; i >= 0; --i) u[i] -= w[i] * u[i + 1];
}

void FlumeSolver::rebuild_momentum() {
  const int n = config_.cells;
  if (!config_.dispersion) {
    for (int i = 0; i < n; ++i) state_.P[i] = (h_[i] + state_.eta[i]) * state_.u[i];
    return;
  }
  const DispersiveTerms t = dispersive_terms(state_.u, h_, config_.dx(), config_.z_alpha_coeff);
  for (int i = 0; i < n; ++i) {
    state_.P[i] = (h_[i] + state_.eta[i]) * (state_.u[i] + t.psi_p[i]);
  }
}

void FlumeSolver::set_fields(std::span<const double> eta, std::span<const double> u) {
  const std::size_t n = config_.cells;
  if (eta.size() != n || u.size() != n) throw Error(ErrorKind::Shape, "field size differs from cells");
  state_.eta.assign(eta.begin(), eta.end());
  state_.u.assign(u.begin(), u.end());
  rebuild_momentum();
  check_state();
}

double FlumeSolver::stable_dt() const {
  double speed = 0.0;
  for (int i = 0; i < config_.cells; ++i) {
    const double H = h_[i] + state_.eta[i];
    if (!(H > 0.0)) throw Error(ErrorKind::Drying, "non-positive water depth");
    speed = std::max(speed, std::abs(state_.u[i]) + std::sqrt(kGravity * H));
  }
  return config_.courant * config_.dx() / speed;
}

void FlumeSolver::evaluate(const Fields& f, double t, Rates& out) {
  const int n = config_.cells;
  const double dx = config_.dx();
  for (int i = 0; i < n; ++i) {
    if (!(h_[i] + f.eta[i] > 0.0)) {
      throw Error(ErrorKind::Drying, "non-positive water depth at x = " +
                                         std::to_string((i + 0.5) * dx) + " m");
    }
  }
  solve_velocity(f.eta, f.P, u_stage_);
  const std::vector<double>& u = u_stage_;

  const FaceStates faces = reconstruct_interfaces(f.eta, u, h_);
  std::vector<double> mass_flux(n + 1), mom_flux(n + 1);
  for (int face = 0; face <= n; ++face) {
    const double hf = h_face_[face];
    if (face == 0 || face == n) {
      // Solid wall: no mass through it, hydrostatic pressure only.
      const double e = face == 0 ? faces.eta_right[face] : faces.eta_left[face];
      mass_flux[face] = 0.0;
      mom_flux[face] = 0.5 * kGravity * e * e + kGravity * e * hf;
      continue;
    }
    const FluxPair flux = hllc_flux({hf + faces.eta_left[face], faces.u_left[face]},
                                    {hf + faces.eta_right[face], faces.u_right[face]}, hf);
    mass_flux[face] = flux.mass;
    mom_flux[face] = flux.momentum;
  }

  std::vector<double> uxx, huxx, psi_c, psi_p, q;
  const bool need_derivatives = config_.dispersion || config_.breaking;
  if (need_derivatives) second_derivatives(u, h_, dx, uxx, huxx);
  if (config_.dispersion) {
    dispersion_from_derivatives(h_, dx, config_.z_alpha_coeff, uxx, huxx, psi_c, psi_p, q);
  }

  if (wavemaker_ && config_.wavemaker) {
    wavemaker_->fill(source_, t);
  } else {
    source_.assign(n, 0.0);
  }

  out.eta.resize(n);
  out.P.resize(n);
  for (int i = 0; i < n; ++i) {
    double rate = -(mass_flux[i + 1] - mass_flux[i]) / dx + source_[i];
    if (config_.dispersion) rate -= psi_c[i];
    out.eta[i] = rate;
  }

  std::vector<double> nu(n, 0.0);
  if (config_.breaking) {
    const double cap = kDiffusionCap * dx * dx / std::max(last_dt_, 1e-12);
    for (int i = 0; i < n; ++i) nu[i] = std::min(eddy_viscosity(f.k[i], h_[i]), cap);
  }

  for (int i = 0; i < n; ++i) {
    const double H = h_[i] + f.eta[i];
    double rate = -(mom_flux[i + 1] - mom_flux[i]) / dx +
                  kGravity * f.eta[i] * (h_face_[i + 1] - h_face_[i]) / dx;
    if (config_.dispersion) rate += -u[i] * psi_c[i] + out.eta[i] * psi_p[i];
    if (config_.friction) {
      rate -= kGravity * config_.manning_n * config_.manning_n * u[i] * std::abs(u[i]) /
              std::cbrt(H);
    }
    if (config_.breaking) {
      auto face_flux = [&](int l) {  // between cells l and l+1
        if (l < 0 || l + 1 >= n) return 0.0;
        const double nf = 0.5 * (nu[l] + nu[l + 1]);
        if (nf == 0.0) return 0.0;
        const double Hf = 0.5 * (h_[l] + f.eta[l] + h_[l + 1] + f.eta[l + 1]);
        return nf * Hf * (u[l + 1] - u[l]) / dx;
      };
      rate += (face_flux(i) - face_flux(i - 1)) / dx;
    }
    out.P[i] = rate;
  }

  out.k.assign(n, 0.0);
  if (config_.breaking) {
    tke_rate(f.k, u, f.eta, h_, uxx, huxx, dx, config_.z_alpha_coeff, out.k);
  }
}

void FlumeSolver::apply_sponges(double dt) {
  if (!config_.sponges) return;
  bool touched = false;
  for (int i = 0; i < config_.cells; ++i) {
    if (sponge_rate_[i] == 0.0) continue;
    const double damp = std::exp(-sponge_rate_[i] * dt);
    state_.eta[i] *= damp;
    state_.u[i] *= damp;
    touched = true;
  }
  if (touched) rebuild_momentum();
}

void FlumeSolver::update_viscosity() {
  for (int i = 0; i < config_.cells; ++i) state_.nu_t[i] = eddy_viscosity(state_.k[i], h_[i]);
}

void FlumeSolver::check_state() const {
  for (int i = 0; i < config_.cells; ++i) {
    if (!std::isfinite(state_.eta[i]) || !std::isfinite(state_.u[i]) ||
        !std::isfinite(state_.P[i]) || !std::isfinite(state_.k[i])) {
      throw Error(ErrorKind::Instability, "non-finite state at t = " + std::to_string(state_.t) +
                                              " s, x = " +
                                              std::to_string((i + 0.5) * config_.dx()) + " m");
    }
    if (!(h_[i] + state_.eta[i] > 0.0)) {
      throw Error(ErrorKind::Drying, "non-positive water depth at t = " + std::to_string(state_.t) +
                                         " s");
    }
  }
}

void FlumeSolver::rk2_step(double dt) {
  if (!(dt >= kMinStep)) {
    throw Error(ErrorKind::BlowUp, "time step " + std::to_string(dt) + " s below " +
                                       std::to_string(kMinStep) + " s at t = " +
                                       std::to_string(state_.t) + " s");
  }
  last_dt_ = dt;
  const int n = config_.cells;
  Fields u0{state_.eta, state_.P, state_.k};
  Rates l0, l1;
  evaluate(u0, state_.t, l0);

  Fields w{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    w.eta[i] = u0.eta[i] + dt * l0.eta[i];
    w.P[i] = u0.P[i] + dt * l0.P[i];
    w.k[i] = std::max(0.0, u0.k[i] + dt * l0.k[i]);
  }
  evaluate(w, state_.t + dt, l1);

  for (int i = 0; i < n; ++i) {
    state_.eta[i] = 0.5 * (u0.eta[i] + w.eta[i]) + 0.5 * dt * l1.eta[i];
    state_.P[i] = 0.5 * (u0.P[i] + w.P[i]) + 0.5 * dt * l1.P[i];
    state_.k[i] = std::max(0.0, 0.5 * (u0.k[i] + w.k[i]) + 0.5 * dt * l1.k[i]);
  }
  state_.t += dt;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(state_.eta[i]) || !std::isfinite(state_.P[i])) check_state();
  }
  solve_velocity(state_.eta, state_.P, state_.u);
  apply_sponges(dt);
  update_viscosity();
  check_state();
}

double FlumeSolver::rk2_step() {
  const double dt = stable_dt();
  rk2_step(dt);
  return dt;
}

void FlumeSolver::advance_to(double time) {
  while (state_.t < time) {
    const double remaining = time - state_.t;
    const double limit = stable_dt();
    if (!(limit >= kMinStep)) rk2_step(limit);  // reports the blow-up
    const double steps = std::ceil(remaining / limit * (1.0 - 1e-12));
    const double dt = remaining / std::max(steps, 1.0);
    if (steps <= 1.0) {
      rk2_step(remaining);
      state_.t = time;
    } else {
      rk2_step(dt);
    }
  }
}

double FlumeSolver::elevation_at(double x) const {
  const double dx = config_.dx();
  const int n = config_.cells;
  const double s = x / dx - 0.5;
  if (s <= 0.0) return state_.eta[0];
  if (s >= n - 1) return state_.eta[n - 1];
  const int i = static_cast<int>(std::floor(s));
  const double w = s - i;
  return (1.0 - w) * state_.eta[i] + w * state_.eta[i + 1];
}

double FlumeSolver::volume() const {
  double sum = 0.0;
  for (int i = 0; i < config_.cells; ++i) sum += h_[i] + state_.eta[i];
  return sum * config_.dx();
}

GaugeSeries run_scenario(double hs, double tp, const FlumeConfig& config, std::uint64_t seed) {
  GaugeSeries series;
  series.hs = hs;
  series.tp = tp;
  series.seed = seed;
  series.dx = config.dx();
  series.gauge_x = config.gauge_x;
  series.sample_rate = config.output_rate;
  series.start_time = config.record_start;

  const auto key = [&] {
    return "scenario Hs=" + std::to_string(hs) + " Tp=" + std::to_string(tp) + ": ";
  };
  try {
    FlumeSolver solver = FlumeSolver::for_sea_state(config, hs, tp, seed);
    const auto samples = static_cast<std::size_t>(
        std::llround((config.duration - config.record_start) * config.output_rate));
    series.eta.reserve(samples);
    for (std::size_t j = 0; j < samples; ++j) {
      solver.advance_to(config.record_start + static_cast<double>(j) / config.output_rate);
      series.eta.push_back(solver.elevation_at(config.gauge_x));
    }
  } catch (const Error& e) {
    throw Error(e.kind(), key() + e.what());
  }
  return series;
}

}  // namespace wavecho
