#pragma once

#include "wavecho/gauge_series.hpp"
#include "wavecho/sea_spectrum.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wavecho {

/// 1D flume: offshore flat bed, a linear slope, then a flat shelf. The
/// default slope reaches the shelf depth exactly at the gauge.
struct FlumeConfig {
  double length = 4000.0;  // m
  int cells = 800;
  double offshore_depth = 30.0;
  double shelf_depth = 5.0;
  double slope = 1.0 / 100.0;
  double slope_toe = 1000.0;  // m
  bool flat_bottom = false;   // whole domain at offshore_depth

  double wavemaker_center = 500.0;
  int sponge_cells = 50;
  double sponge_strength = 1.0;  // relaxation rate at the outer boundary, 1/s
  double gauge_x = 3500.0;
  double courant = 0.5;
  double manning_n = 0.025;  // s m^-1/3
  double z_alpha_coeff = kDefaultZAlphaCoeff;

  double duration = 7200.0;  // simulated time, s; also sets df = 1/duration
  double record_start = 0.0; // first recorded sample, s
  double output_rate = 1.0;  // Hz

  bool wavemaker = true;
  bool sponges = true;
  bool dispersion = true;
  bool breaking = true;
  bool friction = true;

  double dx() const { return length / cells; }
  double depth_at(double x) const;
  void validate() const;

  /// 2000 s simulated, samples recorded from 500 s: 1500 gauge samples,
  /// enough for a 900 s training plus 600 s evaluation run.
  static FlumeConfig desk_scale();
};

struct FlumeState {
  std::vector<double> eta;   // free surface, m
  std::vector<double> P;     // momentum evolution variable, m^2/s
  std::vector<double> u;     // velocity at z_alpha, m/s
  std::vector<double> k;     // turbulent kinetic energy, m^2/s^2
  std::vector<double> nu_t;  // eddy viscosity, m^2/s
  double t = 0.0;
};

// --- building blocks (exposed for testing) ---------------------------------

/// Left-biased fifth-order face value at i+1/2 from cells i-2..i+2 with the
/// monotonicity-preserving limiter.
double mp5_face(double vm2, double vm1, double v0, double vp1, double vp2);

struct FaceStates {
  std::vector<double> eta_left, eta_right, u_left, u_right;  // cells + 1 faces
};

/// Face values of eta and u; solid walls are mirrored (eta even, u odd).
FaceStates reconstruct_interfaces(std::span<const double> eta, std::span<const double> u);

/// As above, limiting the characteristic variables u +- sqrt(g/H) eta frozen
/// at each face instead of eta and u separately.
FaceStates reconstruct_interfaces(std::span<const double> eta, std::span<const double> u,
                                  std::span<const double> h);

struct ShallowState {
  double depth;     // total depth H
  double velocity;  // u
};

struct FluxPair {
  double mass;
  double momentum;
};

/// [H u, H u^2 + g eta^2/2 + g eta h] with eta = H - h.
FluxPair physical_flux(ShallowState s, double still_depth);

/// HLLC flux across a face of still depth `still_depth`. Throws Drying for
/// non-positive depth.
FluxPair hllc_flux(ShallowState left, ShallowState right, double still_depth);

struct DispersiveTerms {
  std::vector<double> psi_c;
  std::vector<double> psi_p;
};

/// Central differences of the z_alpha-weighted derivatives; psi_c is written
/// in flux form with zero flux through the walls so it conserves mass.
DispersiveTerms dispersive_terms(std::span<const double> u, std::span<const double> h, double dx,
                                 double z_alpha_coeff = kDefaultZAlphaCoeff);

inline constexpr double kTkeCnu = 0.55;
inline constexpr double kWaterViscosity = 1.0e-6;  // m^2/s

/// nu_t = C_nu * l_t * sqrt(k)
double eddy_viscosity(double k, double length_scale);

/// One explicit step of k_t = -A - E + P + D on its own; the solver integrates
/// the same rate with its Runge-Kutta stages.
void tke_step(FlumeState& state, std::span<const double> h, double dx, double dt,
              double z_alpha_coeff = kDefaultZAlphaCoeff);

// --- solver ------------------------------------------------------------------

class FlumeSolver {
 public:
  explicit FlumeSolver(FlumeConfig config, std::optional<Wavemaker> wavemaker = std::nullopt);

  /// Solver with a wavemaker for a Pierson-Moskowitz sea state; phases come
  /// from `seed`. Hs == 0 gives no forcing.
  static FlumeSolver for_sea_state(const FlumeConfig& config, double hs, double tp,
                                   std::uint64_t seed);

  const FlumeConfig& config() const { return config_; }
  const FlumeState& state() const { return state_; }
  const std::vector<double>& still_depth() const { return h_; }
  const std::optional<Wavemaker>& wavemaker() const { return wavemaker_; }

  /// Replaces the surface and velocity fields; P is rebuilt from them.
  void set_fields(std::span<const double> eta, std::span<const double> u);

  /// dx / (2 max(|u| + sqrt(g H))), scaled by courant/0.5.
  double stable_dt() const;

  /// One predictor/corrector step of size dt.
  void rk2_step(double dt);

  /// One step at the stable dt; returns the step taken.
  double rk2_step();

  /// Steps until t reaches `time` exactly.
  void advance_to(double time);

  /// Linear interpolation between cell centres.
  double elevation_at(double x) const;

  /// sum H dx
  double volume() const;

 private:
  struct Fields {
    std::vector<double> eta, P, k;
  };
  struct Rates {
    std::vector<double> eta, P, k;
  };

  void solve_velocity(const std::vector<double>& eta, const std::vector<double>& P,
                      std::vector<double>& u) const;
  void rebuild_momentum();
  void evaluate(const Fields& f, double t, Rates& out);
  void apply_sponges(double dt);
  void update_viscosity();
  void check_state() const;

  FlumeConfig config_;
  std::optional<Wavemaker> wavemaker_;
  FlumeState state_;
  std::vector<double> h_;       // cell centres
  std::vector<double> h_face_;  // cells + 1
  std::vector<double> sponge_rate_;

  double last_dt_ = 0.0;

  // scratch
  std::vector<double> u_stage_, source_;
  mutable std::vector<double> tri_lower_, tri_diag_, tri_upper_, tri_work_;
};

/// Integrates a sea state and samples the free surface at gauge_x.
GaugeSeries run_scenario(double hs, double tp, const FlumeConfig& config, std::uint64_t seed);

}  // namespace wavecho
