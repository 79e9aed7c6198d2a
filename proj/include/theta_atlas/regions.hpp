#pragma once

// Region predicates for zero locations, sweeps that check the containment
// theorems over a q grid, and numeric checks of the quantities used in their
// proofs.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "theta_atlas/complexzeros.hpp"
#include "theta_atlas/types.hpp"

namespace theta_atlas {

enum class RegionKind { HalfAnnulusA, DomainD, DomainEPlus, KatsnelsonInterior, Disk, LeftHalfDisk };

const char* to_string(RegionKind kind);

struct Region {
  RegionKind kind = RegionKind::Disk;
  // Disk and LeftHalfDisk only.
  double radius = 0.0;

  /// Re x >= 0, 1 < |x| < 5.
  static Region half_annulus_a() { return {RegionKind::HalfAnnulusA, 0.0}; }
  /// |x| <= 3, Re x <= 0, |Im x| <= 3/sqrt(2).
  static Region domain_d() { return {RegionKind::DomainD, 0.0}; }
  /// (-5792.7 < Re x < 0 and |Im x| < 132) or |x| < 18.
  static Region domain_e_plus() { return {RegionKind::DomainEPlus, 0.0}; }
  /// |x| < e^{|arg x|}, arg in (-pi, pi].
  static Region katsnelson_interior() { return {RegionKind::KatsnelsonInterior, 0.0}; }
  static Region disk(double radius) { return {RegionKind::Disk, radius}; }
  static Region left_half_disk(double radius = 49.8) { return {RegionKind::LeftHalfDisk, radius}; }
};

/// Exact membership test (evaluated at the precision of z).
bool contains(const Region& region, const ComplexPoint& z);
bool contains(const Region& region, std::complex<double> z);

/// Signed distance to the boundary, positive inside. For the Katsnelson
/// interior this is the radial gap e^{|arg z|} - |z|.
double boundary_margin(const Region& region, std::complex<double> z);

/// Points of the upper branch (e^t cos t, e^t sin t), t in [0, pi].
std::vector<std::complex<double>> katsnelson_contour(int points);

// Theorem sweeps -----------------------------------------------------------

enum class TheoremId { T1, T2b, T3 };

const char* to_string(TheoremId id);
/// Parses "T1", "T2b", "T3" (case-insensitive).
std::optional<TheoremId> parse_theorem(const std::string& name);

/// q^{1/4} bound 0.2^{1/4} below which no zero has Re >= 0.
double t2b_q_limit();

struct QZeros {
  double q = 0.0;
  std::optional<ZeroSet> zeros;
  // Set when the zero search failed at this q.
  std::string error;
};

/// Zero sets for every grid point, in grid order. Grid points are split into
/// fixed blocks of consecutive q, each solved sequentially with warm starts;
/// blocks run on up to THETA_ATLAS_THREADS threads.
std::vector<QZeros> sweep_zeros(const std::vector<double>& q_grid, double radius_cap,
                                const PrecisionConfig& prec = {});

struct ZeroFinding {
  double q = 0.0;
  std::complex<double> zero;
  double margin = 0.0;
};

struct SweepWarning {
  double q = 0.0;
  std::string message;
};

struct RegionReport {
  TheoremId theorem = TheoremId::T1;
  Region region;
  std::vector<double> q_grid;
  std::vector<QZeros> zero_inventory;
  std::vector<ZeroFinding> violations;
  // Minimum signed margin over the tested zeros (+inf if none was tested).
  double worst_margin = 0.0;
  int tested_zeros = 0;
  std::vector<SweepWarning> warnings;
  // Largest modulus of a certified non-real zero in each half-plane
  // (Re >= 0, Re < 0).
  double max_modulus_right = 0.0;
  double max_modulus_left = 0.0;
  // Complex zeros outside the Katsnelson contour or outside E+; exploratory.
  std::vector<ZeroFinding> outside_katsnelson;
  std::vector<ZeroFinding> outside_e_plus;

  bool passed() const { return violations.empty(); }
};

/// T1: zeros with Re >= 0 lie in A. T2b: no zero has Re >= 0 (q <= 0.2^{1/4}).
/// T3: non-real zeros with Re < 0 have |z| < 49.8.
RegionReport verify_theorem(TheoremId theorem, const std::vector<double>& q_grid, double radius_cap = 55.0,
                            const PrecisionConfig& prec = {});
/// Same check on an existing sweep.
RegionReport verify_theorem(TheoremId theorem, const std::vector<QZeros>& inventory);

// Sums from the derivative of |Theta*(q, 5i)|^2 --------------------------

struct RealEstimate {
  Real value;
  double abs_error = 0.0;
  int terms_used = 0;
};

/// S = -sum_{m>=1} 2m q^{m-1} / (1 - q^m).
RealEstimate eval_S(const Parameter& q, const PrecisionConfig& prec = {});
/// W = sum_{m>=1} W_m'(q) / W_m(q), W_m = 1 + (626/25) q^{2m} + q^{4m}.
RealEstimate eval_W(const Parameter& q, const PrecisionConfig& prec = {});

/// pi^2 / (3 q ln^2 q), the bound claimed for |S|.
double s_bound(double q);
/// 4.46 / (q ln^2 q), the bound claimed for W.
double w_bound(double q);

struct ProofConstants {
  double zeta0 = 0.0;  // zero of U on (-5, 0)
  double kappa = 0.0;  // integral of the W integrand over (0, inf)
  double kappa_error = 0.0;
  double r0 = 0.0;  // integrand at |zeta0|
  double truncation = 0.0;  // upper integration limit
  double tail_bound = 0.0;
};

/// 625 U(t).
double u_function(double t);
/// t ((626/25) e^{-t} + 2 e^{-2t}) / (1 + (626/25) e^{-t} + e^{-2t}).
double w_integrand(double t);

ProofConstants proof_constants(const PrecisionConfig& prec = {});

struct PropMainRow {
  double q = 0.0;
  double modulus = 0.0;     // |Theta*(q, 5i)|
  double derivative = 0.0;  // central difference of |Theta*(q, 5i)|^2
};

struct PropMainReport {
  std::vector<PropMainRow> rows;
  bool derivative_positive = false;
  bool modulus_increasing = false;
  double step = 1e-6;
};

PropMainReport check_propmain(const std::vector<double>& q_grid, const PrecisionConfig& prec = {});

struct BoundRow {
  double q = 0.0;
  double s = 0.0;
  double w = 0.0;
  double s_bound = 0.0;
  double w_bound = 0.0;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  bool s_bound_holds = false;  // |S| <= s_bound everywhere
  bool w_bound_holds = false;  // W > w_bound everywhere
  bool sum_positive = false;   // S + W > 0 everywhere
  // Smallest W / w_bound over the grid.
  double worst_w_ratio = 0.0;
  double worst_w_q = 0.0;
};

BoundReport check_sw_bounds(const std::vector<double>& q_grid, const PrecisionConfig& prec = {});

struct ArcReport {
  double q = 0.0;
  double radius = 0.0;
  int samples = 0;
  double min_modulus = 0.0;
  double argmin_angle = 0.0;
  double angle_step = 0.0;
  // Minimum within one step of +-pi/2.
  bool minimum_on_axis = false;
  // |Theta*(q, R i)| non-decreasing for R from 5 to 50.
  bool radial_nondecreasing = false;
  double radial_min_radius = 0.0;
};

/// |Theta*| on the right half of the circle |x| = radius (double-precision scan).
ArcReport check_arc_minimality(const Parameter& q, double radius, int samples);

struct CircleReport {
  double q = 0.0;
  double x0 = 0.0;
  Real theta_x0;
  double theta_x0_error = 0.0;
  double floor = 0.0;  // 3/4 or 11/20
  double min_modulus = 0.0;
  std::complex<double> argmin;
  // |Theta*(q, z)| >= |Theta*(q, x0)| at every sample.
  bool star_minimal_at_x0 = false;
  bool passed = false;
};

/// Throws PreconditionUnmet when |theta(q, x0)| < 1 and Domain unless x0 < -5.
CircleReport check_circle_lemma(const Parameter& q, double x0, int samples, const PrecisionConfig& prec = {});

/// q^6 (1 + q^2) / ((1 - q^2)(1 - q^4)).
double phi_c1(double q);
/// 2^{-9/2} 2 q^3 / (1 - q^2).
double delta_c1(double q);
/// 2^{11/2}.
double rho0();
/// q^3 - phi_c1 - 1/rho0^2 - delta_c1.
double c1_margin(double q);

struct C1Report {
  double q = 0.0;
  Real s2;          // sum_{k<m} 1/(xi_k xi_m) over the zeros used, plus tail
  double s2_error = 0.0;
  double identity_residual = 0.0;  // |q^3 - s2|
  int zeros_used = 0;
  std::complex<double> pair;  // upper zero of the complex pair
  double phi = 0.0;
  double delta = 0.0;
  double margin = 0.0;
  // Minimum of c1_margin over [0.3, 0.5].
  double min_margin = 0.0;
  double min_margin_q = 0.0;
  bool margin_positive = false;
};

/// Requires q in (q_1, 0.5], where theta has exactly one complex pair.
C1Report check_c1_coefficient_argument(const Parameter& q, const PrecisionConfig& prec = {});

struct TauReport {
  Real tau1, tau2;  // theta(0.2, -0.2^{-1.2}), theta(0.2, -0.2^{-1.8})
  double tau1_error = 0.0;
  double tau2_error = 0.0;
  // tau1 - 1 + q^{-0.2} and tau2 - 1 + q^{-0.8} at q = 0.2.
  Real leibniz_a, leibniz_b;
  std::vector<double> grid;
  std::vector<double> tau1_grid, tau2_grid;
  bool tau1_increasing = false;
  bool tau2_increasing = false;
};

TauReport check_tau_lemma(const PrecisionConfig& prec = {});

/// q_s^{-2s-3} for s = 4..25 from the published spectral values.
std::vector<std::pair<int, double>> spectral_disk_radii();

}  // namespace theta_atlas
