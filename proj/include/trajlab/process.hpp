#pragma once

#include <functional>
#include <vector>

#include "trajlab/denoise.hpp"
#include "trajlab/rng.hpp"
#include "trajlab/types.hpp"

namespace trajlab {

enum class SchemeKind { VE, VpPreset, Custom };

// Linear diffusion scheme in the (s_t, sigma_t) parameterization of the
// transition kernel N(x_t; s(t) x0, s^2(t) sigma^2(t) I).
struct LinearScheme {
    SchemeKind kind = SchemeKind::VE;
    std::function<double(double)> sigma_of_t;
    std::function<double(double)> scale_of_t;
    double t_min = 0.002;
    double t_max = 80.0;

    double sigma(double t) const { return sigma_of_t(t); }
    double scale(double t) const { return scale_of_t(t); }

    // EDM parameterization: s = 1, sigma = t.
    static LinearScheme ve(double t_min = 0.002, double t_max = 80.0);
    // Variance-preserving preset with the same sigma as VE: s = 1/sqrt(1+t^2),
    // so s^2 (1 + sigma^2) = 1.
    static LinearScheme vp(double t_min = 0.002, double t_max = 80.0);
};

struct ForwardSample {
    double t;
    Vec x;    // s(t) x0 + s(t) sigma(t) eps
    Vec x0;
    Vec eps;  // recorded unit-variance draw
};

// Forward perturbation through the transition kernel.
ForwardSample perturb(const LinearScheme& scheme, const Vec& x0, double t, RngStream& rng);

// Change of variables x = z / s(t) into the VE counterpart, and its inverse.
Vec to_ve(const LinearScheme& scheme, const Vec& z, double t);
Vec from_ve(const LinearScheme& scheme, const Vec& x, double t);

// Runs the semi-linear exact-update Euler sampler in z-space (starting from
// z = s(t_N) x_init_ve) and the plain Euler sampler in x-space along the same
// descending schedule, with the denoiser defined in x-space. Returns the
// maximum over steps of |z/s - x| / |x|. Below 1e-9 for step rules that are
// equivalent in exact arithmetic; exactly 0 for the VE scheme.
double verify_space_equivalence(const LinearScheme& scheme, const Denoiser& denoiser,
                                const std::vector<double>& times_desc, const Vec& x_init_ve);

}  // namespace trajlab
