#include "fxinv/jump_densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fxinv/quadrature.hpp"

namespace fxinv::jumps {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

// log of h(z) = pdf(e^z - 1) e^z, the density of Z = log(1+X).
double log_h(const JumpDensity& d, double z) {
    const double lp = d.log_pdf(std::expm1(z));
    return (lp == kNegInf) ? kNegInf : lp + z;
}

}  // namespace

double JumpDensity::log_pdf(double x) const {
    const double p = pdf(x);
    return p > 0.0 ? std::log(p) : kNegInf;
}

std::vector<EnvelopeSegment> JumpDensity::envelope() const {
    // Conservative scan-based hull. Locate where the z-space log-density
    // lives, then cover it with flat segments bounded by the local maxima of
    // a dense subsampling plus a margin.
    constexpr int coarse_n = 8001;
    constexpr double z_span = 40.0;
    double best = kNegInf;
    std::vector<double> lz(coarse_n);
    for (int i = 0; i < coarse_n; ++i) {
        const double z = -z_span + 2.0 * z_span * i / (coarse_n - 1);
        lz[static_cast<std::size_t>(i)] = log_h(*this, z);
        best = std::max(best, lz[static_cast<std::size_t>(i)]);
    }
    if (best == kNegInf)
        throw std::runtime_error("envelope: density has no visible mass on (-1, e^40)");

    const double floor = best - 46.0;  // exp(-46) ~ 1e-20 relative
    int i_lo = coarse_n - 1, i_hi = 0;
    for (int i = 0; i < coarse_n; ++i) {
        if (lz[static_cast<std::size_t>(i)] >= floor) {
            i_lo = std::min(i_lo, i);
            i_hi = std::max(i_hi, i);
        }
    }
    const double step = 2.0 * z_span / (coarse_n - 1);
    const double z_lo = -z_span + step * std::max(0, i_lo - 1);
    const double z_hi = -z_span + step * std::min(coarse_n - 1, i_hi + 1);

    constexpr int n_seg = 512;
    constexpr int n_sub = 16;
    constexpr double margin = 0.5;
    std::vector<EnvelopeSegment> segs;
    segs.reserve(n_seg);
    const double w = (z_hi - z_lo) / n_seg;
    for (int i = 0; i < n_seg; ++i) {
        const double a0 = z_lo + i * w;
        double m = kNegInf;
        for (int j = 0; j <= n_sub; ++j)
            m = std::max(m, log_h(*this, a0 + w * j / n_sub));
        if (m == kNegInf) continue;
        segs.push_back({a0, a0 + w, m + margin, 0.0});
    }
    if (segs.empty())
        throw std::runtime_error("envelope: density has no visible mass");
    return segs;
}

PowerLawCutoffDensity::PowerLawCutoffDensity(double alpha, double q)
    : alpha_(alpha), q_(q) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("power_law_cutoff: alpha must be finite");
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("power_law_cutoff: q must be positive");

    auto shape = [alpha, q](double x) {
        if (x <= -1.0) return 0.0;
        return std::exp(-alpha * std::log1p(x) - q * x * x / (1.0 + x));
    };
    const quad::QuadResult r = quad::integrate_jump_support(shape, 1e-13, 8000);
    if (!r.converged || !(r.value > 0.0))
        throw std::runtime_error("power_law_cutoff: normalisation quadrature failed");
    c_ = 1.0 / r.value;
    log_c_ = -std::log(r.value);
}

double PowerLawCutoffDensity::log_pdf(double x) const {
    if (x <= -1.0) return kNegInf;
    return log_c_ - alpha_ * std::log1p(x) - q_ * x * x / (1.0 + x);
}

double PowerLawCutoffDensity::pdf(double x) const {
    const double lp = log_pdf(x);
    return lp == kNegInf ? 0.0 : std::exp(lp);
}

std::vector<EnvelopeSegment> PowerLawCutoffDensity::envelope() const {
    // In z = log(1+x) the density of Z picks up the e^z Jacobian, so its log
    // is
    //   l(z) = log c + (1 - alpha) z - q (e^z + e^{-z} - 2),
    // strictly concave (l'' = -2q cosh z < 0), so tangent lines at a handful
    // of points form an exact piecewise-exponential hull.
    const double slope0 = 1.0 - alpha_;
    const double z_star = std::asinh(slope0 / (2.0 * q_));
    const double scale = 1.0 / std::sqrt(2.0 * q_ * std::cosh(z_star));

    auto l = [&](double z) {
        return log_c_ + slope0 * z - q_ * (std::exp(z) + std::exp(-z) - 2.0);
    };
    auto lp = [&](double z) { return slope0 - 2.0 * q_ * std::sinh(z); };

    constexpr double offsets[] = {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0};
    constexpr int n = static_cast<int>(std::size(offsets));
    double a[n], b[n];
    for (int i = 0; i < n; ++i) {
        const double t = z_star + offsets[i] * scale;
        b[i] = lp(t);
        a[i] = l(t) - b[i] * t;
    }

    std::vector<EnvelopeSegment> segs;
    segs.reserve(n);
    double left = kNegInf;
    for (int i = 0; i < n; ++i) {
        double right;
        if (i == n - 1) {
            right = kInf;
        } else {
            // Tangent intersection; slopes are strictly decreasing.
            right = (a[i + 1] - a[i]) / (b[i] - b[i + 1]);
        }
        if (right > left) segs.push_back({left, right, a[i], b[i]});
        left = std::max(left, right);
    }
    return segs;
}

TabulatedDensity::TabulatedDensity(std::vector<double> grid, std::vector<double> pdf)
    : grid_(std::move(grid)), pdf_(std::move(pdf)) {
    if (grid_.size() < 2) throw std::invalid_argument("tabulated: need at least two knots");
    if (grid_.size() != pdf_.size())
        throw std::invalid_argument("tabulated: grid and pdf sizes differ");
    if (!(grid_.front() > -1.0))
        throw std::invalid_argument("tabulated: grid must start above -1");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw std::invalid_argument("tabulated: grid must be strictly increasing");
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        if (!(pdf_[i] >= 0.0) || !(pdf_[i + 1] >= 0.0))
            throw std::invalid_argument("tabulated: pdf values must be non-negative");
        mass += 0.5 * (pdf_[i] + pdf_[i + 1]) * (grid_[i + 1] - grid_[i]);
    }
    if (!(mass > 0.0)) throw std::invalid_argument("tabulated: zero total mass");
    for (double& v : pdf_) v /= mass;
}

double TabulatedDensity::pdf(double x) const {
    if (x <= grid_.front() || x >= grid_.back()) {
        // Endpoint values still count on the closed support boundary.
        if (x == grid_.front()) return pdf_.front();
        if (x == grid_.back()) return pdf_.back();
        return 0.0;
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double t = (x - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return pdf_[i] + t * (pdf_[i + 1] - pdf_[i]);
}

double TabulatedDensity::h_interval_max(std::size_t i) const {
    // h(x) = pdf(x)(1+x) is quadratic on a knot interval: check the ends and
    // the interior stationary point.
    const double x0 = grid_[i], x1 = grid_[i + 1];
    const double p0 = pdf_[i], p1 = pdf_[i + 1];
    double m = std::max(p0 * (1.0 + x0), p1 * (1.0 + x1));
    const double slope = (p1 - p0) / (x1 - x0);
    if (slope != 0.0) {
        // d/dx [p(x)(1+x)] = slope (1+x) + p(x) = 0
        const double xv = (slope * x0 - slope - p0) / (2.0 * slope);
        if (xv > x0 && xv < x1) {
            const double pv = p0 + slope * (xv - x0);
            m = std::max(m, pv * (1.0 + xv));
        }
    }
    return m;
}

std::vector<EnvelopeSegment> TabulatedDensity::envelope() const {
    std::vector<EnvelopeSegment> segs;
    segs.reserve(grid_.size());
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double m = h_interval_max(i);
        if (!(m > 0.0)) continue;
        segs.push_back({std::log1p(grid_[i]), std::log1p(grid_[i + 1]), std::log(m), 0.0});
    }
    if (segs.empty()) throw std::runtime_error("tabulated: envelope has no mass");
    return segs;
}

double mean_jump(const JumpDensity& d) {
    auto integrand = [&d](double x) { return x * d.pdf(x); };
    quad::QuadResult r;
    if (const auto* tab = dynamic_cast<const TabulatedDensity*>(&d)) {
        // Compact support: integrate it directly so narrow tables cannot be
        // missed by the global node layout.
        r = quad::integrate_jump_range(integrand, tab->grid().front(),
                                       tab->grid().back(), 1e-10, 8000);
    } else {
        r = quad::integrate_jump_support(integrand, 1e-10, 8000);
    }
    if (!r.converged) throw std::runtime_error("mean_jump: quadrature did not converge");
    return r.value;
}

double foreign_intensity(double lambda_d, double beta_d) {
    if (!(lambda_d > 0.0))
        throw std::invalid_argument("foreign_intensity: lambda_d must be positive");
    if (!(beta_d > -1.0))
        throw std::invalid_argument("foreign_intensity: mean jump must exceed -1");
    return (1.0 + beta_d) * lambda_d;
}

double jf_of_jd(double x) {
    if (!(x > -1.0)) throw std::invalid_argument("jf_of_jd: jump size must exceed -1");
    return -x / (1.0 + x);
}

double foreign_density_Jd(const JumpDensity& d, double lambda_d,
                          double lambda_f, double x) {
    if (!(lambda_d > 0.0) || !(lambda_f > 0.0))
        throw std::invalid_argument("foreign_density_Jd: intensities must be positive");
    if (x <= -1.0) return 0.0;
    return d.pdf(x) * (1.0 + x) * lambda_d / lambda_f;
}

double reciprocal_jump_density(const std::function<double(double)>& pdf_x,
                               double y) {
    if (y <= -1.0) return 0.0;
    const double opy = 1.0 + y;
    const double p = pdf_x(-y / opy);
    if (p == 0.0) return 0.0;
    return p / (opy * opy);
}

double foreign_density_Jf(const JumpDensity& d, double lambda_d,
                          double lambda_f, double y) {
    if (!(lambda_d > 0.0) || !(lambda_f > 0.0))
        throw std::invalid_argument("foreign_density_Jf: intensities must be positive");
    if (y <= -1.0) return 0.0;
    const double opy = 1.0 + y;
    const double p = d.pdf(-y / opy);
    if (p == 0.0) return 0.0;
    return p * lambda_d / lambda_f / (opy * opy * opy);
}

std::pair<double, double> family_closure(double alpha, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("family_closure: q must be positive");
    return {3.0 - alpha, q};
}

namespace {

// Generic realisations of the two foreign-measure laws for densities with no
// exploitable structure. They hold a shared_ptr to the source so the result
// of invert_compound owns everything it needs.
class ForeignJdDensity final : public JumpDensity {
  public:
    ForeignJdDensity(std::shared_ptr<const JumpDensity> base, double ratio)
        : base_(std::move(base)), ratio_(ratio) {}
    double pdf(double x) const override {
        if (x <= -1.0) return 0.0;
        return base_->pdf(x) * (1.0 + x) * ratio_;
    }
    std::string family() const override { return "transformed"; }

  private:
    std::shared_ptr<const JumpDensity> base_;
    double ratio_;  // lambda_d / lambda_f
};

class ForeignJfDensity final : public JumpDensity {
  public:
    ForeignJfDensity(std::shared_ptr<const JumpDensity> base, double ratio)
        : base_(std::move(base)), ratio_(ratio) {}
    double pdf(double y) const override {
        if (y <= -1.0) return 0.0;
        const double opy = 1.0 + y;
        const double p = base_->pdf(-y / opy);
        if (p == 0.0) return 0.0;
        return p * ratio_ / (opy * opy * opy);
    }
    std::string family() const override { return "transformed"; }

  private:
    std::shared_ptr<const JumpDensity> base_;
    double ratio_;
};

}  // namespace

ForeignJumpLaw invert_compound(const CompoundJumpSpec& spec) {
    if (!spec.density) throw std::invalid_argument("invert_compound: null density");
    if (!(spec.lambda > 0.0))
        throw std::invalid_argument("invert_compound: lambda must be positive");
    if (spec.measure != Measure::domestic)
        throw std::invalid_argument("invert_compound: spec must be domestic-tagged");

    ForeignJumpLaw law;
    law.beta_d = mean_jump(*spec.density);
    law.lambda = foreign_intensity(spec.lambda, law.beta_d);
    const double ratio = spec.lambda / law.lambda;

    if (const auto* plc = dynamic_cast<const PowerLawCutoffDensity*>(spec.density.get())) {
        // Both foreign laws stay inside the family: reweighting by (1+x)
        // lowers alpha by one, and the full size inversion maps alpha to
        // 3 - alpha at the same q.
        law.density_Jd = std::make_shared<PowerLawCutoffDensity>(plc->alpha() - 1.0, plc->q());
        law.density_Jf = std::make_shared<PowerLawCutoffDensity>(3.0 - plc->alpha(), plc->q());
    } else {
        law.density_Jd = std::make_shared<ForeignJdDensity>(spec.density, ratio);
        law.density_Jf = std::make_shared<ForeignJfDensity>(spec.density, ratio);
    }
    return law;
}

double no_arb_residual(const CompoundJumpSpec& spec) {
    const ForeignJumpLaw law = invert_compound(spec);
    const double mean_d = mean_jump(*spec.density);
    const double mean_f = mean_jump(*law.density_Jf);
    return spec.lambda * mean_d + law.lambda * mean_f;
}

JumpSampler::JumpSampler(const JumpDensity& d) : density_(&d), segments_(d.envelope()) {
    if (segments_.empty()) throw std::invalid_argument("jump sampler: empty envelope");

    // Scale everything by the envelope's peak log-value so the masses stay
    // representable regardless of how concentrated the density is.
    log_scale_ = kNegInf;
    for (const EnvelopeSegment& s : segments_) {
        if (!(s.z_hi > s.z_lo)) throw std::invalid_argument("jump sampler: bad segment order");
        if (s.z_lo == kNegInf && !(s.b > 0.0))
            throw std::invalid_argument("jump sampler: left-infinite segment needs b > 0");
        if (s.z_hi == kInf && !(s.b < 0.0))
            throw std::invalid_argument("jump sampler: right-infinite segment needs b < 0");
        const double peak = (s.b >= 0.0) ? s.a + s.b * std::min(s.z_hi, 1e308)
                                         : s.a + s.b * std::max(s.z_lo, -1e308);
        log_scale_ = std::max(log_scale_, peak);
    }
    if (!std::isfinite(log_scale_))
        throw std::invalid_argument("jump sampler: envelope peak not finite");

    cum_.reserve(segments_.size());
    total_mass_ = 0.0;
    for (const EnvelopeSegment& s : segments_) {
        double m;
        if (s.z_lo == kNegInf) {
            m = std::exp(s.a + s.b * s.z_hi - log_scale_) / s.b;
        } else if (s.z_hi == kInf) {
            m = std::exp(s.a + s.b * s.z_lo - log_scale_) / (-s.b);
        } else if (s.b == 0.0) {
            m = std::exp(s.a - log_scale_) * (s.z_hi - s.z_lo);
        } else {
            const double peak = (s.b > 0.0) ? s.a + s.b * s.z_hi : s.a + s.b * s.z_lo;
            const double drop = std::fabs(s.b) * (s.z_hi - s.z_lo);
            m = std::exp(peak - log_scale_) * (-std::expm1(-drop)) / std::fabs(s.b);
        }
        total_mass_ += m;
        cum_.push_back(total_mass_);
    }
    if (!(total_mass_ > 0.0))
        throw std::invalid_argument("jump sampler: envelope mass is zero");
    for (double& c : cum_) c /= total_mass_;
    cum_.back() = 1.0;

    // Density mass is 1, envelope mass is exp(log_scale_) * total_mass_.
    acceptance_ = std::exp(-log_scale_ - std::log(total_mass_));
    if (acceptance_ < 1e-3)
        throw std::runtime_error("jump sampler: envelope acceptance estimate below 0.1%");
}

double JumpSampler::draw(rng::PathStream& stream) const {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double u1 = stream.uniform();
        const std::size_t k = static_cast<std::size_t>(
            std::lower_bound(cum_.begin(), cum_.end(), u1) - cum_.begin());
        const EnvelopeSegment& s = segments_[std::min(k, segments_.size() - 1)];

        const double u2 = stream.uniform();
        double z;
        if (s.z_lo == kNegInf) {
            z = s.z_hi + std::log(u2) / s.b;
        } else if (s.z_hi == kInf) {
            z = s.z_lo + std::log1p(-u2) / s.b;
        } else if (s.b == 0.0) {
            z = s.z_lo + u2 * (s.z_hi - s.z_lo);
        } else {
            // Inverse CDF of exp(b z) on [z_lo, z_hi], anchored at the end
            // carrying the peak so expm1 never overflows.
            const double w = s.z_hi - s.z_lo;
            const double v = -std::log1p(u2 * std::expm1(-std::fabs(s.b) * w)) / std::fabs(s.b);
            z = (s.b > 0.0) ? s.z_hi - v : s.z_lo + v;
        }

        const double bound = s.a + s.b * z;
        const double lh = log_h(*density_, z);
        if (lh > bound + 1e-9)
            throw std::logic_error("jump sampler: envelope violated by density");
        const double u3 = stream.uniform();
        if (std::log(u3) <= lh - bound) return std::expm1(z);
    }
    throw std::runtime_error("jump sampler: envelope acceptance below 0.1%");
}

std::vector<double> sample(const JumpDensity& d, std::size_t n, std::uint64_t seed) {
    const JumpSampler sampler(d);
    rng::PathStream stream(seed, 0);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = sampler.draw(stream);
    return out;
}

CdfTable::CdfTable(const JumpDensity& d, std::size_t segments) {
    if (segments < 16) throw std::invalid_argument("cdf table: too few segments");

    constexpr int coarse_n = 8001;
    constexpr double z_span = 40.0;
    double best = kNegInf;
    std::vector<double> lz(coarse_n);
    for (int i = 0; i < coarse_n; ++i) {
        const double z = -z_span + 2.0 * z_span * i / (coarse_n - 1);
        lz[static_cast<std::size_t>(i)] = log_h(d, z);
        best = std::max(best, lz[static_cast<std::size_t>(i)]);
    }
    if (best == kNegInf) throw std::runtime_error("cdf table: density has no visible mass");
    const double floor = best - 60.0;
    int i_lo = coarse_n - 1, i_hi = 0;
    for (int i = 0; i < coarse_n; ++i) {
        if (lz[static_cast<std::size_t>(i)] >= floor) {
            i_lo = std::min(i_lo, i);
            i_hi = std::max(i_hi, i);
        }
    }
    const double step = 2.0 * z_span / (coarse_n - 1);
    const double z_lo = -z_span + step * std::max(0, i_lo - 1);
    const double z_hi = -z_span + step * std::min(coarse_n - 1, i_hi + 1);

    const std::size_t n = segments;
    z_.resize(n + 1);
    h_.resize(n + 1);
    cum_.resize(n + 1);
    const double w = (z_hi - z_lo) / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
        z_[i] = z_lo + w * static_cast<double>(i);
        const double lhz = log_h(d, z_[i]);
        h_[i] = (lhz == kNegInf) ? 0.0 : std::exp(lhz);
    }
    cum_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lhm = log_h(d, 0.5 * (z_[i] + z_[i + 1]));
        const double hm = (lhm == kNegInf) ? 0.0 : std::exp(lhm);
        cum_[i + 1] = cum_[i] + w / 6.0 * (h_[i] + 4.0 * hm + h_[i + 1]);
    }
    if (!(cum_.back() > 0.0)) throw std::runtime_error("cdf table: zero mass");
}

double CdfTable::cdf(double x) const {
    if (!(x > -1.0)) return 0.0;
    const double z = std::log1p(x);
    if (z <= z_.front()) return 0.0;
    if (z >= z_.back()) return 1.0;
    const auto it = std::upper_bound(z_.begin(), z_.end(), z);
    const std::size_t i = static_cast<std::size_t>(it - z_.begin()) - 1;
    const double t = (z - z_[i]) / (z_[i + 1] - z_[i]);
    const double hz = h_[i] + t * (h_[i + 1] - h_[i]);
    const double partial = 0.5 * (h_[i] + hz) * (z - z_[i]);
    const double c = (cum_[i] + partial) / cum_.back();
    return std::clamp(c, 0.0, 1.0);
}

double weighted_ks_distance(std::vector<double> values,
                            std::vector<double> weights,
                            const std::function<double(double)>& cdf) {
    if (values.empty() || values.size() != weights.size())
        throw std::invalid_argument("ks distance: empty or mismatched inputs");

    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("ks distance: weights must be positive");
        total += w;
    }

    double running = 0.0;
    double dist = 0.0;
    for (std::size_t idx : order) {
        const double f = cdf(values[idx]);
        dist = std::max(dist, std::fabs(running / total - f));
        running += weights[idx];
        dist = std::max(dist, std::fabs(running / total - f));
    }
    return dist;
}

}  // namespace fxinv::jumps
