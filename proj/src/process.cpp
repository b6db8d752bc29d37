#include "trajlab/process.hpp"

#include <cmath>
#include <stdexcept>

namespace trajlab {

LinearScheme LinearScheme::ve(double t_min, double t_max) {
    LinearScheme s;
    s.kind = SchemeKind::VE;
    s.sigma_of_t = [](double t) { return t; };
    s.scale_of_t = [](double) { return 1.0; };
    s.t_min = t_min;
    s.t_max = t_max;
    return s;
}

LinearScheme LinearScheme::vp(double t_min, double t_max) {
    LinearScheme s;
    s.kind = SchemeKind::VpPreset;
    s.sigma_of_t = [](double t) { return t; };
    s.scale_of_t = [](double t) { return 1.0 / std::sqrt(1.0 + t * t); };
    s.t_min = t_min;
    s.t_max = t_max;
    return s;
}

ForwardSample perturb(const LinearScheme& scheme, const Vec& x0, double t, RngStream& rng) {
    if (!x0.allFinite()) throw std::domain_error("perturb: non-finite x0");
    if (t < 0.0 || t > scheme.t_max) throw std::domain_error("perturb: t outside [0, t_max]");

    const double s = scheme.scale(t);
    const double sig = scheme.sigma(t);
    ForwardSample fs;
    fs.t = t;
    fs.x0 = x0;
    fs.eps = rng.gaussian_vector(static_cast<int>(x0.size()));
    fs.x = s * x0 + (s * sig) * fs.eps;
    return fs;
}

Vec to_ve(const LinearScheme& scheme, const Vec& z, double t) {
    const double s = scheme.scale(t);
    if (s <= 0.0) throw std::logic_error("to_ve: scale must be positive");
    return z / s;
}

Vec from_ve(const LinearScheme& scheme, const Vec& x, double t) {
    const double s = scheme.scale(t);
    if (s <= 0.0) throw std::logic_error("from_ve: scale must be positive");
    return s * x;
}

double verify_space_equivalence(const LinearScheme& scheme, const Denoiser& denoiser,
                                const std::vector<double>& times_desc, const Vec& x_init_ve) {
    if (times_desc.size() < 2) throw std::domain_error("verify_space_equivalence: need >= 2 times");
    for (size_t i = 0; i + 1 < times_desc.size(); ++i)
        if (times_desc[i] <= times_desc[i + 1])
            throw std::domain_error("verify_space_equivalence: schedule must be strictly decreasing");
    if (times_desc.front() > scheme.t_max || times_desc.back() < 0.0)
        throw std::domain_error("verify_space_equivalence: schedule outside scheme domain");

    Vec x = x_init_ve;
    Vec z = scheme.scale(times_desc.front()) * x_init_ve;

    double worst = 0.0;
    for (size_t n = 0; n + 1 < times_desc.size(); ++n) {
        const double t_cur = times_desc[n];
        const double t_next = times_desc[n + 1];
        const double sig_cur = scheme.sigma(t_cur);
        const double sig_next = scheme.sigma(t_next);
        const double s_cur = scheme.scale(t_cur);
        const double s_next = scheme.scale(t_next);

        // Both steps freeze the score at the current node. The x-space Euler
        // step integrates dx = eps dsigma directly; the z-space step applies
        // the variation-of-constants update with the same frozen integrand.
        const Vec eps_x = denoiser.evaluate(x, sig_cur).eps;
        const Vec eps_z = denoiser.evaluate(z / s_cur, sig_cur).eps;

        x = x + (sig_next - sig_cur) * eps_x;
        z = (s_next / s_cur) * z + (s_next * (sig_next - sig_cur)) * eps_z;

        const double denom = x.norm();
        const double diff = (z / s_next - x).norm();
        if (denom > 0.0) worst = std::max(worst, diff / denom);
    }
    return worst;
}

}  // namespace trajlab
