#include "hyperqfim/hyperon_state.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

namespace hyperqfim {

namespace {

constexpr double kDenomTol = 1e-12;
constexpr double kPsdTol = 1e-12;

struct Trig {
    double c, s;   // cos(phi), sin(phi)
    double u;      // cos^2(phi)
    double s2, c2; // sin(2phi), cos(2phi) built as 2sc and 2u-1
    double d;      // 1 + alpha cos^2(phi)
};

Trig trig_at(double alpha, double phi) {
    if (!std::isfinite(phi) || !std::isfinite(alpha))
        raise(Errc::non_finite, "state point: non-finite input");
    if (phi < -1e-12 || phi > std::numbers::pi + 1e-12)
        raise(Errc::domain_error, "state point: phi outside [0, pi]");
    Trig t;
    t.c = std::cos(phi);
    t.s = std::sin(phi);
    t.u = t.c * t.c;
    t.s2 = 2.0 * t.s * t.c;
    t.c2 = 2.0 * t.u - 1.0;
    t.d = 1.0 + alpha * t.u;
    if (t.d <= kDenomTol)
        raise(Errc::singular_denominator, "state point: 1 + alpha cos^2(phi) below tolerance");
    return t;
}

// sqrt((alpha + cos 2phi)^2 + gamma^2 sin^2 2phi), with the first argument
// arranged as (alpha - 1) + 2 cos^2 so the small residue near the pure-state
// corners survives in floating point.
double root_term(double alpha, double gamma, const Trig& t) {
    const double e = (alpha - 1.0) + 2.0 * t.u;
    return std::hypot(e, gamma * t.s2);
}

} // namespace

DerivedBetaGamma derived_params(const PhysicsParams& p) {
    if (p.mode != Mode::constrained)
        raise(Errc::mode_mismatch, "derived_params: free mode carries user-supplied beta/gamma");
    const double w2 = 1.0 - p.alpha_psi * p.alpha_psi;
    const double w = w2 > 0.0 ? std::sqrt(w2) : 0.0;
    return {w * std::sin(p.delta_phi), w * std::cos(p.delta_phi)};
}

AlphaBetaGamma effective_abg(const PhysicsParams& p) {
    if (p.mode == Mode::constrained) {
        auto d = derived_params(p);
        return {p.alpha_psi, d.beta_psi, d.gamma_psi};
    }
    return {p.alpha_psi, p.beta_psi, p.gamma_psi};
}

Matrix correlation_matrix(const PhysicsParams& p, double phi) {
    const auto [alpha, beta, gamma] = effective_abg(p);
    const Trig t = trig_at(alpha, phi);

    Matrix s(4, 4);
    const double sc = t.s * t.c;
    s(0, 0) = 1.0;
    s(0, 2) = s(2, 0) = beta * sc / t.d;
    s(1, 1) = t.s * t.s / t.d;
    s(1, 3) = s(3, 1) = gamma * sc / t.d;
    // y is the production-plane normal (polarization axis), z the
    // longitudinal axis carrying the alpha + cos^2 correlation; with this
    // assignment diagonalizing the x-z sector reproduces the X-form
    // coefficients exactly
    s(2, 2) = -alpha * t.s * t.s / t.d;
    s(3, 3) = (alpha + t.u) / t.d;
    return s;
}

XStateCoeffs xstate_coeffs(const PhysicsParams& p, double phi) {
    const auto [alpha, beta, gamma] = effective_abg(p);
    const Trig t = trig_at(alpha, phi);
    const double r = root_term(alpha, gamma, t);

    XStateCoeffs c;
    c.a_z0 = beta * t.s * t.c / t.d;
    c.b_xx = ((1.0 + alpha) + r) / (2.0 * t.d);
    c.b_yy = ((1.0 + alpha) - r) / (2.0 * t.d);
    c.b_zz = -alpha * t.s * t.s / t.d;
    return c;
}

Matrix XState::to_matrix() const {
    Matrix m(4, 4);
    m(0, 0) = r11;
    m(0, 3) = m(3, 0) = r14;
    m(1, 1) = m(2, 2) = r22;
    m(1, 2) = m(2, 1) = r23;
    m(3, 3) = r44;
    return m;
}

XState finalize_xstate(double r11, double r14, double r22, double r23, double r44) {
    XState x;
    x.r11 = r11;
    x.r14 = r14;
    x.r22 = r22;
    x.r23 = r23;
    x.r44 = r44;
    const bool trace_ok = std::abs(x.trace() - 1.0) <= kPsdTol;
    const bool psd_ok = r11 >= -kPsdTol && r44 >= -kPsdTol && r22 >= -kPsdTol &&
                        r11 * r44 - r14 * r14 >= -kPsdTol && r22 - std::abs(r23) >= -kPsdTol;
    x.physical = trace_ok && psd_ok;
    return x;
}

XState density_matrix(const XStateCoeffs& c) {
    if (!std::isfinite(c.a_z0) || !std::isfinite(c.b_xx) || !std::isfinite(c.b_yy) ||
        !std::isfinite(c.b_zz))
        raise(Errc::non_finite, "density_matrix: non-finite coefficients");
    return finalize_xstate(0.25 * (1.0 + 2.0 * c.a_z0 + c.b_zz), //
                           0.25 * (c.b_xx - c.b_yy),             //
                           0.25 * (1.0 - c.b_zz),                //
                           0.25 * (c.b_xx + c.b_yy),             //
                           0.25 * (1.0 - 2.0 * c.a_z0 + c.b_zz));
}

XState make_state(const PhysicsParams& p, double phi) {
    const auto [alpha, beta, gamma] = effective_abg(p);
    const Trig t = trig_at(alpha, phi);
    const double r = root_term(alpha, gamma, t);

    // numerators of 4 D rho_ij; (1 - alpha) + 2 alpha u == 1 + alpha cos2phi
    const double base = (1.0 - alpha) + 2.0 * alpha * t.u;
    const double inner = (1.0 + alpha) / (4.0 * t.d);
    return finalize_xstate((base + beta * t.s2) / (4.0 * t.d), //
                           r / (4.0 * t.d),                    //
                           inner,                              //
                           inner,                              //
                           (base - beta * t.s2) / (4.0 * t.d));
}

Matrix XStatePartials::to_matrix() const {
    Matrix m(4, 4);
    m(0, 0) = dr11;
    m(0, 3) = m(3, 0) = dr14;
    m(1, 1) = m(2, 2) = dr22;
    m(1, 2) = m(2, 1) = dr23;
    m(3, 3) = dr44;
    return m;
}

XStatePartials density_partials(const PhysicsParams& p, double phi, Parameter which) {
    const auto [alpha, beta, gamma] = effective_abg(p);
    const Trig t = trig_at(alpha, phi);
    const double r = root_term(alpha, gamma, t);
    const double e = (alpha - 1.0) + 2.0 * t.u; // alpha + cos(2phi)
    const double d2 = t.d * t.d;
    const double base = (1.0 - alpha) + 2.0 * alpha * t.u;

    XStatePartials out;
    out.parameter = which;

    if (which == Parameter::phi) {
        // d/dphi at fixed (alpha, beta, gamma)
        const double dd = -alpha * t.s2; // d D / d phi
        double dr;                       // d R / d phi
        if (r > 1e-300) {
            dr = 2.0 * t.s2 * (gamma * gamma * t.c2 - e) / r;
        } else {
            dr = -2.0 * t.s2; // one-sided convention at the kink, sign(e) -> +1
        }
        const double dbase = -2.0 * alpha * t.s2;
        out.dr11 = ((dbase + 2.0 * beta * t.c2) * t.d - (base + beta * t.s2) * dd) / (4.0 * d2);
        out.dr44 = ((dbase - 2.0 * beta * t.c2) * t.d - (base - beta * t.s2) * dd) / (4.0 * d2);
        out.dr14 = (dr * t.d - r * dd) / (4.0 * d2);
        const double dinner = -(1.0 + alpha) * dd / (4.0 * d2);
        out.dr22 = dinner;
        out.dr23 = dinner;
        return out;
    }

    // d/d(alpha); in constrained mode beta and gamma are chained through
    // alpha, in free mode they are held fixed.
    double dbeta = 0.0;
    double dgamma = 0.0;
    if (p.mode == Mode::constrained) {
        const double w2 = 1.0 - alpha * alpha;
        if (w2 <= kDenomTol)
            raise(Errc::singular_denominator,
                  "density_partials: constrained d/d(alpha) singular at |alpha| = 1");
        const double w = std::sqrt(w2);
        dbeta = -alpha * std::sin(p.delta_phi) / w;
        dgamma = -alpha * std::cos(p.delta_phi) / w;
    }

    const double dd = t.u;              // d D / d alpha
    const double dbase = 2.0 * t.u - 1.0; // d base / d alpha
    double dr;                          // d R / d alpha
    if (r > 1e-300) {
        dr = (e + gamma * dgamma * t.s2 * t.s2) / r;
    } else {
        dr = 1.0; // one-sided convention at the kink
    }
    out.dr11 = ((dbase + dbeta * t.s2) * t.d - (base + beta * t.s2) * dd) / (4.0 * d2);
    out.dr44 = ((dbase - dbeta * t.s2) * t.d - (base - beta * t.s2) * dd) / (4.0 * d2);
    out.dr14 = (dr * t.d - r * dd) / (4.0 * d2);
    const double dinner = (t.d - (1.0 + alpha) * dd) / (4.0 * d2);
    out.dr22 = dinner;
    out.dr23 = dinner;
    return out;
}

std::array<double, 4> correlation_spectrum(const PhysicsParams& p, double phi) {
    using cd = std::complex<double>;
    static const std::array<std::array<std::array<cd, 2>, 2>, 4> tau = {{
        {{{cd(1, 0), cd(0, 0)}, {cd(0, 0), cd(1, 0)}}},   // identity
        {{{cd(0, 0), cd(1, 0)}, {cd(1, 0), cd(0, 0)}}},   // x
        {{{cd(0, 0), cd(0, -1)}, {cd(0, 1), cd(0, 0)}}},  // y
        {{{cd(1, 0), cd(0, 0)}, {cd(0, 0), cd(-1, 0)}}},  // z
    }};

    const Matrix s = correlation_matrix(p, phi);

    std::array<std::array<cd, 4>, 4> h{};
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            const double w = s(m, n);
            if (w == 0.0) continue;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            h[static_cast<std::size_t>(2 * a + c)][static_cast<std::size_t>(2 * b + d)] +=
                                0.25 * w * tau[static_cast<std::size_t>(m)][static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                                tau[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
        }

    // real embedding [[Re, -Im], [Im, Re]]; its spectrum is the Hermitian
    // spectrum doubled
    Matrix emb(8, 8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double re = h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real();
            const double im = h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].imag();
            emb(i, j) = re;
            emb(i + 4, j + 4) = re;
            emb(i, j + 4) = -im;
            emb(i + 4, j) = im;
        }

    SymEigen eg = eig_sym(emb);
    return {eg.values[0], eg.values[2], eg.values[4], eg.values[6]};
}

double polarization(const PhysicsParams& p, double phi) {
    const auto [alpha, beta, gamma] = effective_abg(p);
    (void)gamma;
    const Trig t = trig_at(alpha, phi);
    return beta * t.c * t.s / t.d;
}

PhysicsParams channel_preset(Channel c) {
    PhysicsParams p;
    p.mode = Mode::constrained;
    switch (c) {
    case Channel::lambda:
        p.alpha_psi = 0.475;
        p.delta_phi = 0.752;
        return p;
    case Channel::sigma_plus:
        p.alpha_psi = -0.508;
        p.delta_phi = -0.270;
        return p;
    case Channel::xi_minus:
        p.alpha_psi = 0.586;
        p.delta_phi = 1.213;
        return p;
    case Channel::xi_zero:
        p.alpha_psi = 0.514;
        p.delta_phi = 1.168;
        return p;
    }
    raise(Errc::unknown_channel, "channel_preset: unknown channel");
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

Channel channel_from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "lambda") return Channel::lambda;
    if (n == "sigmaplus" || n == "sigma+") return Channel::sigma_plus;
    if (n == "ximinus" || n == "xi-") return Channel::xi_minus;
    if (n == "xizero" || n == "xi0") return Channel::xi_zero;
    raise(Errc::unknown_channel, "unknown channel name: " + std::string(name));
}

const std::vector<NamedPreset>& builtin_presets() {
    static const std::vector<NamedPreset> presets = {
        {"Lambda", channel_preset(Channel::lambda)},
        {"SigmaPlus", channel_preset(Channel::sigma_plus)},
        {"XiMinus", channel_preset(Channel::xi_minus)},
        {"XiZero", channel_preset(Channel::xi_zero)},
    };
    return presets;
}

std::vector<NamedPreset> load_channel_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::bad_config, "cannot open preset file: " + path);
    std::vector<NamedPreset> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string name;
        if (!(ss >> name)) continue; // blank / comment-only line
        double alpha = 0.0;
        double dphi = 0.0;
        if (!(ss >> alpha >> dphi))
            raise(Errc::bad_config,
                  "preset file " + path + ": line " + std::to_string(lineno) +
                      ": expected 'name alpha_psi delta_phi'");
        std::string extra;
        if (ss >> extra)
            raise(Errc::bad_config, "preset file " + path + ": line " + std::to_string(lineno) +
                                        ": trailing tokens");
        if (!(alpha >= -1.0 && alpha <= 1.0))
            raise(Errc::bad_config, "preset file " + path + ": line " + std::to_string(lineno) +
                                        ": alpha_psi outside [-1, 1]");
        PhysicsParams p;
        p.mode = Mode::constrained;
        p.alpha_psi = alpha;
        p.delta_phi = dphi;
        out.push_back({name, p});
    }
    return out;
}

PhysicsParams find_preset(std::string_view name, const std::vector<NamedPreset>& extra) {
    const std::string n = lower(name);
    // file-loaded presets override builtins of the same name
    for (const auto& e : extra)
        if (lower(e.name) == n) return e.params;
    for (const auto& e : builtin_presets())
        if (lower(e.name) == n) return e.params;
    raise(Errc::unknown_channel, "unknown channel name: " + std::string(name));
}

} // namespace hyperqfim
