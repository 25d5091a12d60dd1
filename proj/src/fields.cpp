#include "scalarmc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scalarmc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_canonical(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }

struct Cplx {
    double re, im;
};

inline Cplx cmul(Cplx a, Cplx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

// Power tables e^{2 pi i j x} for j = 0..n, reused across calls per thread.
void fill_powers(std::vector<Cplx>& p, double x, int n) {
    p.resize(static_cast<std::size_t>(n) + 1);
    p[0] = {1.0, 0.0};
    if (n == 0) return;
    const double a = kTwoPi * x;
    const Cplx e{std::cos(a), std::sin(a)};
    p[1] = e;
    for (int j = 2; j <= n; ++j) p[static_cast<std::size_t>(j)] = cmul(p[static_cast<std::size_t>(j - 1)], e);
}

}  // namespace

FourierVelocityField::FourierVelocityField(std::vector<VelocityMode> modes, int max_wavenumber) {
    if (max_wavenumber <= 0)
        throw std::invalid_argument("FourierVelocityField: max_wavenumber must be positive");
    max_k_ = max_wavenumber;

    for (auto& m : modes) {
        if (m.k1 == 0 && m.k2 == 0)
            throw std::invalid_argument("FourierVelocityField: k = (0,0) is not allowed");
        const double knorm_sq = double(m.k1) * m.k1 + double(m.k2) * m.k2;
        if (knorm_sq > double(max_k_) * max_k_ + 1e-9)
            throw std::invalid_argument("FourierVelocityField: |k| exceeds max_wavenumber");
        if (!std::isfinite(m.coeff.real()) || !std::isfinite(m.coeff.imag()))
            throw std::invalid_argument("FourierVelocityField: non-finite coefficient");
        if (!is_canonical(m.k1, m.k2)) {
            // Normalize to the canonical representative: v_k = -conj(v_{-k}).
            m = {-m.k1, -m.k2, -std::conj(m.coeff)};
        }
    }
    std::sort(modes.begin(), modes.end(), [](const VelocityMode& a, const VelocityMode& b) {
        return std::pair(a.k1, a.k2) < std::pair(b.k1, b.k2);
    });
    for (std::size_t i = 1; i < modes.size(); ++i) {
        if (modes[i].k1 == modes[i - 1].k1 && modes[i].k2 == modes[i - 1].k2)
            throw std::invalid_argument(
                "FourierVelocityField: duplicate mode (both members of a +/-k pair given?)");
    }
    modes_ = std::move(modes);

    prepared_.reserve(modes_.size());
    for (const auto& m : modes_) {
        const double kn = std::sqrt(double(m.k1) * m.k1 + double(m.k2) * m.k2);
        prepared_.push_back({m.k1, m.k2, m.coeff.real(), m.coeff.imag(),
                             -double(m.k2) / kn, double(m.k1) / kn});
    }
}

Vec2 FourierVelocityField::operator()(Point2 x) const {
    if (prepared_.empty()) return {0.0, 0.0};
    thread_local std::vector<Cplx> p1, p2;
    fill_powers(p1, x.x1, max_k_);
    fill_powers(p2, x.x2, max_k_);

    double v1 = 0.0, v2 = 0.0;
    for (const auto& m : prepared_) {
        const Cplx a = p1[static_cast<std::size_t>(m.k1)];
        Cplx b = p2[static_cast<std::size_t>(m.k2 >= 0 ? m.k2 : -m.k2)];
        if (m.k2 < 0) b.im = -b.im;
        const Cplx e = cmul(a, b);
        // 2 Re(v_k e^{2 pi i k.x}) accounts for the conjugate partner at -k.
        const double w = 2.0 * (m.re * e.re - m.im * e.im);
        v1 += w * m.d1;
        v2 += w * m.d2;
    }
    return {v1, v2};
}

std::array<std::complex<double>, 2> FourierVelocityField::eval_complex(Point2 x) const {
    const std::complex<double> i2pi(0.0, kTwoPi);
    std::complex<double> v1 = 0.0, v2 = 0.0;
    for (const auto& m : modes_) {
        const double kn = std::sqrt(double(m.k1) * m.k1 + double(m.k2) * m.k2);
        const Vec2 dir{-double(m.k2) / kn, double(m.k1) / kn};
        const std::complex<double> ep = std::exp(i2pi * (m.k1 * x.x1 + m.k2 * x.x2));
        const std::complex<double> em = std::exp(-i2pi * (m.k1 * x.x1 + m.k2 * x.x2));
        const std::complex<double> c_minus = -std::conj(m.coeff);
        v1 += m.coeff * dir.x1 * ep + c_minus * (-dir.x1) * em;
        v2 += m.coeff * dir.x2 * ep + c_minus * (-dir.x2) * em;
    }
    return {v1, v2};
}

double FourierVelocityField::amplitude_bound() const {
    double s = 0.0;
    for (const auto& m : modes_) s += 2.0 * std::abs(m.coeff);
    return s;
}

std::vector<FourierVelocityField::VectorCoeff> FourierVelocityField::vector_coefficients() const {
    std::vector<VectorCoeff> out;
    out.reserve(2 * modes_.size());
    for (const auto& m : modes_) {
        const double kn = std::sqrt(double(m.k1) * m.k1 + double(m.k2) * m.k2);
        const Vec2 dir{-double(m.k2) / kn, double(m.k1) / kn};
        out.push_back({m.k1, m.k2, m.coeff * dir.x1, m.coeff * dir.x2});
        const std::complex<double> cm = -std::conj(m.coeff);
        out.push_back({-m.k1, -m.k2, cm * (-dir.x1), cm * (-dir.x2)});
    }
    return out;
}

bool operator==(const FourierVelocityField& a, const FourierVelocityField& b) {
    if (a.max_k_ != b.max_k_ || a.modes_.size() != b.modes_.size()) return false;
    for (std::size_t i = 0; i < a.modes_.size(); ++i) {
        const auto& ma = a.modes_[i];
        const auto& mb = b.modes_[i];
        if (ma.k1 != mb.k1 || ma.k2 != mb.k2 || ma.coeff != mb.coeff) return false;
    }
    return true;
}

VelocityField VelocityField::constant(Vec2 v) {
    VelocityField f;
    f.is_constant_ = true;
    f.constant_ = v;
    return f;
}

VelocityField VelocityField::fourier(FourierVelocityField field) {
    VelocityField f;
    f.is_constant_ = false;
    f.fourier_ = std::move(field);
    return f;
}

double VelocityField::amplitude_bound() const {
    return is_constant_ ? constant_.norm() : fourier_.amplitude_bound();
}

bool operator==(const VelocityField& a, const VelocityField& b) {
    if (a.is_constant_ != b.is_constant_) return false;
    return a.is_constant_ ? a.constant_ == b.constant_ : a.fourier_ == b.fourier_;
}

DiffusionModel DiffusionModel::isotropic(double kappa) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("DiffusionModel: kappa must be >= 0");
    DiffusionModel m;
    m.is_isotropic_ = true;
    m.kappa_ = kappa;
    m.sigma_const_ = std::sqrt(2.0 * kappa);
    return m;
}

DiffusionModel DiffusionModel::diagonal(ScalarFn sigma1, ScalarFn sigma2, ScalarFn dsigma1,
                                        ScalarFn dsigma2) {
    if (!sigma1 || !sigma2)
        throw std::invalid_argument("DiffusionModel::diagonal: sigma functions required");
    if (static_cast<bool>(dsigma1) != static_cast<bool>(dsigma2))
        throw std::invalid_argument(
            "DiffusionModel::diagonal: provide derivatives for both components or neither");
    DiffusionModel m;
    m.is_isotropic_ = false;
    m.sigma1_ = std::move(sigma1);
    m.sigma2_ = std::move(sigma2);
    m.dsigma1_ = std::move(dsigma1);
    m.dsigma2_ = std::move(dsigma2);
    return m;
}

Vec2 DiffusionModel::sigma_prime(Point2 x) const {
    if (is_isotropic_) return {0.0, 0.0};
    if (!dsigma1_)
        throw std::runtime_error("DiffusionModel: no derivative information (required by Milstein)");
    return {dsigma1_(x), dsigma2_(x)};
}

bool DiffusionModel::has_derivative() const {
    return is_isotropic_ || static_cast<bool>(dsigma1_);
}

double DiffusionModel::kappa() const {
    if (!is_isotropic_)
        throw std::runtime_error("DiffusionModel: kappa is defined only for isotropic models");
    return kappa_;
}

ScalarField ScalarField::constant(double value) {
    ScalarField f;
    f.kind_ = Kind::constant;
    f.constant_ = value;
    return f;
}

ScalarField ScalarField::affine(double offset, Vec2 gradient) {
    ScalarField f;
    f.kind_ = Kind::linear;
    f.constant_ = offset;
    f.gradient_ = gradient;
    return f;
}

ScalarField ScalarField::cosine_series(std::vector<CosineTerm> terms) {
    ScalarField f;
    f.kind_ = Kind::cosine;
    f.terms_ = std::move(terms);
    return f;
}

ScalarField ScalarField::cosine_mode(int k1, int k2, double amplitude, double phase) {
    return cosine_series({CosineTerm{amplitude, {kTwoPi * k1, kTwoPi * k2}, phase}});
}

ScalarField ScalarField::gaussian_bumps(std::vector<Bump> bumps, double sharpness) {
    if (!(sharpness > 0.0)) throw std::invalid_argument("ScalarField: sharpness must be positive");
    ScalarField f;
    f.kind_ = Kind::bumps;
    f.bumps_ = std::move(bumps);
    f.sharpness_ = sharpness;
    return f;
}

double ScalarField::operator()(Point2 x) const {
    switch (kind_) {
        case Kind::constant:
            return constant_;
        case Kind::cosine: {
            double s = 0.0;
            for (const auto& t : terms_) s += t.amplitude * std::cos(t.freq.dot(x) + t.phase);
            return s;
        }
        case Kind::bumps: {
            double s = 0.0;
            for (const auto& b : bumps_) s += b.amplitude * std::exp(-sharpness_ * (x - b.center).norm_sq());
            return s;
        }
        case Kind::linear:
            return constant_ + gradient_.dot(x);
    }
    return 0.0;
}

ScalarField ScalarField::with_bump_amplitudes(const std::vector<double>& amplitudes) const {
    if (kind_ != Kind::bumps)
        throw std::runtime_error("ScalarField: amplitude replacement applies to bump sums only");
    if (amplitudes.size() != bumps_.size())
        throw std::invalid_argument("ScalarField: amplitude count mismatch");
    ScalarField f = *this;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) f.bumps_[i].amplitude = amplitudes[i];
    return f;
}

bool operator==(const ScalarField& a, const ScalarField& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
        case ScalarField::Kind::constant:
            return a.constant_ == b.constant_;
        case ScalarField::Kind::cosine: {
            if (a.terms_.size() != b.terms_.size()) return false;
            for (std::size_t i = 0; i < a.terms_.size(); ++i) {
                const auto& ta = a.terms_[i];
                const auto& tb = b.terms_[i];
                if (ta.amplitude != tb.amplitude || !(ta.freq == tb.freq) || ta.phase != tb.phase)
                    return false;
            }
            return true;
        }
        case ScalarField::Kind::bumps: {
            if (a.sharpness_ != b.sharpness_ || a.bumps_.size() != b.bumps_.size()) return false;
            for (std::size_t i = 0; i < a.bumps_.size(); ++i) {
                if (a.bumps_[i].amplitude != b.bumps_[i].amplitude ||
                    !(a.bumps_[i].center == b.bumps_[i].center))
                    return false;
            }
            return true;
        }
        case ScalarField::Kind::linear:
            return a.constant_ == b.constant_ && a.gradient_ == b.gradient_;
    }
    return false;
}

}  // namespace scalarmc
