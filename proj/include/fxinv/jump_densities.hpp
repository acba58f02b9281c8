#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fxinv/measure.hpp"
#include "fxinv/rng.hpp"

namespace fxinv::jumps {

/// One piece of a piecewise-exponential upper envelope for the density of
/// Z = log(1+X): log h(z) <= a + b*z on [z_lo, z_hi]. The first segment may
/// have z_lo = -inf (requires b > 0) and the last z_hi = +inf (requires
/// b < 0) so the envelope mass stays finite.
struct EnvelopeSegment {
    double z_lo = 0.0;
    double z_hi = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Density of a relative jump size X on (-1, inf). All transforms in this
/// module work through this interface so that analytic families and
/// table-backed densities run through identical code paths.
class JumpDensity {
  public:
    virtual ~JumpDensity() = default;

    virtual double pdf(double x) const = 0;

    /// log pdf; -inf where the density vanishes.
    virtual double log_pdf(double x) const;

    /// Upper envelope of h(z) = pdf(exp(z)-1) * exp(z), the density of
    /// Z = log(1+X), for rejection sampling. The base implementation scans h
    /// on a fine z-grid and returns piecewise-constant bounds inflated by a
    /// safety margin; it assumes the log-density moves by less than ~0.5
    /// between neighbouring scan points. Families with known structure
    /// override this with provable hulls.
    virtual std::vector<EnvelopeSegment> envelope() const;

    virtual std::string family() const { return "opaque"; }
};

/// Two-parameter family f(x) = c (1+x)^{-alpha} exp(-q x^2 / (1+x)) on
/// (-1, inf), normalised at construction (q > 0; any real alpha is
/// integrable thanks to the cutoff factor). In z = log(1+x) the log-density
/// is log c + (2-alpha) z - q (e^z + e^{-z} - 2) up to the Jacobian, which
/// is strictly concave - the family therefore carries an exact tangent-line
/// rejection envelope. The family is closed under measure inversion of the
/// jump size: the inverted law is the member (3 - alpha, q).
class PowerLawCutoffDensity final : public JumpDensity {
  public:
    PowerLawCutoffDensity(double alpha, double q);

    double pdf(double x) const override;
    double log_pdf(double x) const override;
    std::vector<EnvelopeSegment> envelope() const override;
    std::string family() const override { return "power_law_cutoff"; }

    double alpha() const { return alpha_; }
    double q() const { return q_; }
    /// Normalisation constant c (the density integrates to 1 within 1e-12).
    double c() const { return c_; }

  private:
    double alpha_;
    double q_;
    double c_;
    double log_c_;
};

/// Density given by linear interpolation of (grid, pdf) knots, renormalised
/// to unit mass; zero outside [grid.front(), grid.back()]. Grid must be
/// strictly increasing with grid.front() > -1; pdf values non-negative with
/// positive total mass.
class TabulatedDensity final : public JumpDensity {
  public:
    TabulatedDensity(std::vector<double> grid, std::vector<double> pdf);

    double pdf(double x) const override;
    /// Exact per-knot-interval constant bounds (pdf is linear and the
    /// Jacobian factor (1+x) is linear, so h is quadratic on each interval).
    std::vector<EnvelopeSegment> envelope() const override;
    std::string family() const override { return "tabulated"; }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return pdf_; }

  private:
    double h_interval_max(std::size_t i) const;
    std::vector<double> grid_;
    std::vector<double> pdf_;
};

/// E[X] under the density, by adaptive quadrature (abs tol 1e-10).
double mean_jump(const JumpDensity& d);

/// Intensity of the jump counter under the foreign measure,
/// lambda_f = (1 + beta_d) * lambda_d with beta_d = E^d[J^d]. Requires
/// beta_d > -1 so the foreign intensity stays positive.
double foreign_intensity(double lambda_d, double beta_d);

/// Size map between the two measures' jump conventions: if the rate jumps by
/// factor (1+x), the reciprocal rate jumps by factor (1+y) with
/// y = -x/(1+x). An involution.
double jf_of_jd(double x);

/// Density of J^d under the foreign measure,
/// f^f_{J^d}(x) = f^d(x) (1+x) lambda_d / lambda_f. Integrates to 1 by
/// construction of lambda_f.
double foreign_density_Jd(const JumpDensity& d, double lambda_d,
                          double lambda_f, double x);

/// Density transform for Y = -X/(1+X) given the density of X:
/// f_Y(y) = f_X(-y/(1+y)) / (1+y)^2.
double reciprocal_jump_density(const std::function<double(double)>& pdf_x,
                               double y);

/// Density of the reciprocal-rate jump size J^f = -J^d/(1+J^d) under the
/// foreign measure: the previous two transforms composed,
/// f^f_{J^f}(y) = f^d(-y/(1+y)) (1+y)^{-3} lambda_d / lambda_f.
double foreign_density_Jf(const JumpDensity& d, double lambda_d,
                          double lambda_f, double y);

/// Image of a power-law-cutoff member under measure inversion of the jump
/// size: (alpha, q) -> (3 - alpha, q).
std::pair<double, double> family_closure(double alpha, double q);

/// Compound Poisson jump component: sizes iid from density, counter with
/// the given intensity, parameters expressed under the tagged measure.
struct CompoundJumpSpec {
    std::shared_ptr<const JumpDensity> density;
    double lambda = 0.0;
    Measure measure = Measure::domestic;
};

/// Everything the foreign-measure side of a compound Poisson jump needs.
struct ForeignJumpLaw {
    std::shared_ptr<const JumpDensity> density_Jd;  // law of J^d under foreign
    std::shared_ptr<const JumpDensity> density_Jf;  // law of J^f under foreign
    double lambda = 0.0;                            // foreign intensity
    double beta_d = 0.0;                            // E^d[J^d] of the input
};

/// Full measure inversion of a domestic-tagged compound jump. Power-law-
/// cutoff inputs map back into the family ((alpha-1, q) for density_Jd and
/// (3-alpha, q) for density_Jf); other densities get transform-backed
/// implementations of the same formulas. Requires lambda > 0,
/// E^d[J^d] > -1 and a domestic tag.
ForeignJumpLaw invert_compound(const CompoundJumpSpec& spec);

/// Compensation diagnostic lambda_d E^d[J^d] + lambda_f E^f[J^f]; zero for
/// a true inverse pair (both means by independent quadratures).
double no_arb_residual(const CompoundJumpSpec& spec);

/// Rejection sampler. The envelope is prepared once at construction; each
/// draw consumes a variable number of uniforms from the caller's stream.
/// Throws std::runtime_error when a draw needs more than 1000 attempts
/// (envelope acceptance below 0.1%).
class JumpSampler {
  public:
    explicit JumpSampler(const JumpDensity& d);

    /// One jump size X.
    double draw(rng::PathStream& stream) const;

    /// Expected acceptance probability (density mass / envelope mass).
    double acceptance_estimate() const { return acceptance_; }

  private:
    const JumpDensity* density_;
    std::vector<EnvelopeSegment> segments_;
    std::vector<double> cum_;  // cumulative segment masses, last = 1
    double log_scale_ = 0.0;
    double total_mass_ = 0.0;  // envelope mass relative to exp(log_scale_)
    double acceptance_ = 1.0;
};

/// n iid draws from the density, reproducible in the seed.
std::vector<double> sample(const JumpDensity& d, std::size_t n,
                           std::uint64_t seed);

/// Tabulated CDF of a jump density, built once by composite Simpson in
/// z = log(1+x) over the region carrying all but ~1e-20 of the mass.
/// cdf() is monotone, respects cdf(-1) = 0 and cdf(inf) = 1, and is
/// accurate to a few 1e-7 for smooth densities at the default resolution.
class CdfTable {
  public:
    explicit CdfTable(const JumpDensity& d, std::size_t segments = 4096);
    double cdf(double x) const;

  private:
    std::vector<double> z_;
    std::vector<double> h_;
    std::vector<double> cum_;
};

/// Kolmogorov-Smirnov distance between a weighted empirical distribution
/// and a reference CDF. Weights must be positive; they are normalised
/// internally.
double weighted_ks_distance(std::vector<double> values,
                            std::vector<double> weights,
                            const std::function<double(double)>& cdf);

}  // namespace fxinv::jumps
