#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "scalarmc/geometry.hpp"

namespace scalarmc {

// One stored velocity mode: the representative of a +/-k pair. The conjugate
// partner at -k (coefficient -conj(coeff)) is implied by the reality
// condition and synthesized during evaluation.
struct VelocityMode {
    int k1 = 0;
    int k2 = 0;
    std::complex<double> coeff;
};

// Divergence-free velocity field
//   v(x) = sum_k v_k (k_perp / |k|) exp(2 pi i k.x),   k_perp = (-k2, k1),
// with v_{-k} = -conj(v_k) so that v is real-valued. Modes are stored one per
// +/-k pair in canonical form (k1 > 0, or k1 == 0 and k2 > 0). Immutable.
class FourierVelocityField {
public:
    FourierVelocityField() = default;  // zero field
    FourierVelocityField(std::vector<VelocityMode> modes, int max_wavenumber);

    // Real-pair evaluation: each stored mode contributes
    // 2 Re(v_k e^{2 pi i k.x}) * k_perp / |k|. Exact rearrangement of the
    // two-sided complex sum.
    Vec2 operator()(Point2 x) const;

    // Two-sided complex sum over +k and -k, kept in complex arithmetic.
    // Used to verify the reality condition; returns (v1, v2) as complex.
    std::array<std::complex<double>, 2> eval_complex(Point2 x) const;

    const std::vector<VelocityMode>& modes() const { return modes_; }
    int max_wavenumber() const { return max_k_; }
    bool empty() const { return modes_.empty(); }

    // Sup-norm bound: sum over pairs of 2 |v_k|.
    double amplitude_bound() const;

    // Vector Fourier coefficients over both +/-k (for Galerkin assembly):
    // list of (k1, k2, complex 2-vector coefficient).
    struct VectorCoeff {
        int k1, k2;
        std::complex<double> c1, c2;
    };
    std::vector<VectorCoeff> vector_coefficients() const;

    friend bool operator==(const FourierVelocityField& a, const FourierVelocityField& b);

private:
    struct Prepared {
        int k1, k2;          // canonical wavenumber
        double re, im;       // coefficient of the representative
        double d1, d2;       // k_perp / |k|
    };
    std::vector<VelocityMode> modes_;      // canonical, sorted
    std::vector<Prepared> prepared_;
    int max_k_ = 0;
};

// Velocity slot of a problem: either a constant vector or a Fourier field.
class VelocityField {
public:
    VelocityField() = default;  // zero
    static VelocityField constant(Vec2 v);
    static VelocityField fourier(FourierVelocityField f);

    Vec2 operator()(Point2 x) const { return is_constant_ ? constant_ : fourier_(x); }

    bool is_constant() const { return is_constant_; }
    Vec2 constant_value() const { return constant_; }
    const FourierVelocityField& fourier_field() const { return fourier_; }
    double amplitude_bound() const;

    friend bool operator==(const VelocityField& a, const VelocityField& b);

private:
    bool is_constant_ = true;
    Vec2 constant_{0.0, 0.0};
    FourierVelocityField fourier_;
};

// Diffusion coefficient sigma of the SDE. Either isotropic constant,
// sigma = sqrt(2 kappa) I, or diagonal state-dependent with optional
// componentwise derivatives d sigma_d / d x_d (required by Milstein).
class DiffusionModel {
public:
    using ScalarFn = std::function<double(Point2)>;

    DiffusionModel() = default;  // isotropic with kappa = 0
    static DiffusionModel isotropic(double kappa);
    static DiffusionModel diagonal(ScalarFn sigma1, ScalarFn sigma2,
                                   ScalarFn dsigma1 = {}, ScalarFn dsigma2 = {});

    Vec2 sigma(Point2 x) const {
        if (is_isotropic_) return {sigma_const_, sigma_const_};
        return {sigma1_(x), sigma2_(x)};
    }
    // Throws if the model carries no derivative information.
    Vec2 sigma_prime(Point2 x) const;

    bool is_isotropic() const { return is_isotropic_; }
    bool has_derivative() const;
    double kappa() const;  // throws for state-dependent models

private:
    bool is_isotropic_ = true;
    double kappa_ = 0.0;
    double sigma_const_ = 0.0;
    ScalarFn sigma1_, sigma2_, dsigma1_, dsigma2_;
};

// Scalar function family used for theta_0, forcing f, and boundary data:
// a constant, a cosine series sum_m a_m cos(w_m . x + phi_m), or a Gaussian
// bump sum   sum_j f_j exp(-a |x - c_j|^2).
class ScalarField {
public:
    struct CosineTerm {
        double amplitude = 0.0;
        Vec2 freq;           // angular frequency vector (2 pi k for torus modes)
        double phase = 0.0;
    };
    struct Bump {
        double amplitude = 0.0;
        Point2 center;
    };
    enum class Kind { constant, cosine, bumps, linear };

    ScalarField() = default;  // constant zero
    static ScalarField constant(double value);
    // offset + gradient . x
    static ScalarField affine(double offset, Vec2 gradient);
    static ScalarField cosine_series(std::vector<CosineTerm> terms);
    // Convenience for integer torus modes: a cos(2 pi k.x + phase).
    static ScalarField cosine_mode(int k1, int k2, double amplitude, double phase = 0.0);
    static ScalarField gaussian_bumps(std::vector<Bump> bumps, double sharpness = 4.0);

    double operator()(Point2 x) const;

    Kind kind() const { return kind_; }
    double constant_value() const { return constant_; }
    const std::vector<CosineTerm>& cosine_terms() const { return terms_; }
    const std::vector<Bump>& bumps() const { return bumps_; }
    double sharpness() const { return sharpness_; }
    Vec2 gradient() const { return gradient_; }

    // Same bump layout with replaced amplitudes (forcing optimization).
    ScalarField with_bump_amplitudes(const std::vector<double>& amplitudes) const;

    friend bool operator==(const ScalarField& a, const ScalarField& b);

private:
    Kind kind_ = Kind::constant;
    double constant_ = 0.0;
    std::vector<CosineTerm> terms_;
    std::vector<Bump> bumps_;
    double sharpness_ = 4.0;
    Vec2 gradient_;
};

}  // namespace scalarmc
