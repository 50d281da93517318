#include "mivt/trawl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mivt/bessel.hpp"
#include "mivt/errors.hpp"
#include "mivt/quadrature.hpp"

namespace mivt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_z(double z) {
    if (!(z <= 0.0)) throw std::domain_error("trawl function argument must be <= 0");
}

void check_h(double h) {
    if (!(h >= 0.0)) throw std::domain_error("lag must be >= 0");
}

double sup_ig_w(double gamma, double z) { return std::sqrt(1.0 - 2.0 * z / (gamma * gamma)); }

// log d(z), used for branch comparisons deep in the tail where d underflows.
double log_evaluate(const TrawlSpec& spec, double z) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return s.lambda * z;
            } else if constexpr (std::is_same_v<T, SupIG>) {
                const double w = sup_ig_w(s.gamma, z);
                return -std::log(w) + s.delta * s.gamma * (1.0 - w);
            } else if constexpr (std::is_same_v<T, GammaLongMemory>) {
                return -s.hurst * std::log1p(-z / s.alpha);
            } else if constexpr (std::is_same_v<T, GIG>) {
                const double w = sup_ig_w(s.gamma, z);
                const double dg = s.delta * s.gamma;
                return -s.nu * std::log(w) + log_bessel_k(s.nu, dg * w) - log_bessel_k(s.nu, dg);
            } else {
                const double a = s.angular();
                const double c = 0.5 * (std::cos(a * z) + 1.0);
                return s.lambda * z + (c > 0.0 ? std::log(c) : -kInf);
            }
        },
        spec);
}

// ---- seasonal overlap machinery ----

double seasonal_tail_mass(const SeasonalExp& s, double z) {
    const double a = s.angular();
    const double l = s.lambda;
    return 0.5 * std::exp(l * z) *
           ((l * std::cos(a * z) + a * std::sin(a * z)) / (l * l + a * a) + 1.0 / l);
}

// Exact leb(A ∩ A_h) for a seasonal trawl against itself. The integrand
// min{d(s), d(s-h)} scales by exp(-lambda P) per period P = 2 pi / a, so one
// period is resolved at its crossing points and the rest sums geometrically.
double seasonal_overlap(const SeasonalExp& s, double h) {
    const double l = s.lambda;
    const double a = s.angular();
    if (a == 0.0) return std::exp(-l * h) / l;
    if (h == 0.0) return lebesgue(TrawlSpec(s));
    const double period = 2.0 * M_PI / a;

    auto d = [&](double z) { return 0.5 * std::exp(l * z) * (std::cos(a * z) + 1.0); };
    auto diff = [&](double z) { return d(z) - d(z - h); };
    // between crossings one branch is the minimum throughout, so the piece
    // integral is simply the smaller of the two branch integrals
    auto piece = [&](double u, double v) {
        const double plain = seasonal_tail_mass(s, v) - seasonal_tail_mass(s, u);
        const double shifted = seasonal_tail_mass(s, v - h) - seasonal_tail_mass(s, u - h);
        return std::min(plain, shifted);
    };

    // crossing points of the two branches within one period
    const int scan = 2048;
    std::vector<double> cuts{-period};
    double prev_x = -period;
    double prev_g = diff(prev_x);
    for (int k = 1; k <= scan; ++k) {
        const double x = -period + period * k / scan;
        const double g = diff(x);
        if ((prev_g < 0.0) != (g < 0.0)) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 100; ++it) {
                const double midp = 0.5 * (lo + hi);
                if ((diff(lo) < 0.0) != (diff(midp) < 0.0))
                    hi = midp;
                else
                    lo = midp;
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_g = g;
    }
    cuts.push_back(0.0);

    double base = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) base += piece(cuts[i], cuts[i + 1]);
    return base / (1.0 - std::exp(-l * period));
}

// ---- exponential pair closed form ----

double exponential_pair(double li, double lj, double h) {
    if (li <= lj) return std::exp(-lj * h) / lj;
    // rates cross at s* = lj h / (lj - li) <= 0; below it the i-branch is smaller
    const double c = li * lj * h / (lj - li);  // common exponent at the crossing
    return std::exp(-lj * h) / lj + std::exp(c) * (1.0 / li - 1.0 / lj);
}

bool is_gamma_lm(const TrawlSpec& s) { return std::holds_alternative<GammaLongMemory>(s); }

}  // namespace

// ---- constructors ----

Exponential::Exponential(double lambda_) : lambda(lambda_) {
    require(lambda > 0.0 && std::isfinite(lambda), "Exponential: lambda must be positive");
}

SupIG::SupIG(double delta_, double gamma_) : delta(delta_), gamma(gamma_) {
    require(delta >= 0.0 && std::isfinite(delta), "SupIG: delta must be >= 0");
    require(gamma > 0.0 && std::isfinite(gamma), "SupIG: gamma must be positive");
}

GammaLongMemory::GammaLongMemory(double alpha_, double hurst_) : alpha(alpha_), hurst(hurst_) {
    require(alpha > 0.0 && std::isfinite(alpha), "GammaLongMemory: alpha must be positive");
    require(hurst > 1.0 && std::isfinite(hurst), "GammaLongMemory: hurst must exceed 1");
}

GIG::GIG(double nu_, double delta_, double gamma_) : nu(nu_), delta(delta_), gamma(gamma_) {
    require(std::isfinite(nu), "GIG: nu must be finite");
    require(delta > 0.0 && std::isfinite(delta), "GIG: delta must be positive");
    require(gamma > 0.0 && std::isfinite(gamma), "GIG: gamma must be positive");
    require(delta * gamma <= 700.0, "GIG: delta*gamma must not exceed 700");
}

SeasonalExp::SeasonalExp(double lambda_, double psi_) : lambda(lambda_), psi(psi_) {
    require(lambda > 0.0 && std::isfinite(lambda), "SeasonalExp: lambda must be positive");
    require(std::isfinite(psi), "SeasonalExp: psi must be finite");
}

double SeasonalExp::angular() const noexcept { return 2.0 * M_PI * std::abs(psi); }

// ---- pointwise evaluation ----

double evaluate(const TrawlSpec& spec, double z) {
    check_z(z);
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(s.lambda * z);
            } else if constexpr (std::is_same_v<T, SupIG>) {
                const double w = sup_ig_w(s.gamma, z);
                return std::exp(s.delta * s.gamma * (1.0 - w)) / w;
            } else if constexpr (std::is_same_v<T, GammaLongMemory>) {
                return std::pow(1.0 - z / s.alpha, -s.hurst);
            } else if constexpr (std::is_same_v<T, GIG>) {
                return std::exp(log_evaluate(spec, z));
            } else {
                return 0.5 * std::exp(s.lambda * z) * (std::cos(s.angular() * z) + 1.0);
            }
        },
        spec);
}

// ---- Lebesgue measure ----

double lebesgue(const TrawlSpec& spec) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / s.lambda;
            } else if constexpr (std::is_same_v<T, SupIG>) {
                if (s.delta == 0.0)
                    throw error("SupIG trawl with delta = 0 has infinite Lebesgue measure");
                return s.gamma / s.delta;
            } else if constexpr (std::is_same_v<T, GammaLongMemory>) {
                return s.alpha / (s.hurst - 1.0);
            } else if constexpr (std::is_same_v<T, GIG>) {
                const double dg = s.delta * s.gamma;
                return s.gamma / s.delta *
                       std::exp(log_bessel_k(s.nu - 1.0, dg) - log_bessel_k(s.nu, dg));
            } else {
                const double a = s.angular();
                const double l = s.lambda;
                return (2.0 * l * l + a * a) / (2.0 * l * (l * l + a * a));
            }
        },
        spec);
}

// ---- autocorrelation function ----

double acf(const TrawlSpec& spec, double h) {
    check_h(h);
    if (h == 0.0) return 1.0;
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(-s.lambda * h);
            } else if constexpr (std::is_same_v<T, SupIG>) {
                const double g2 = s.gamma * s.gamma;
                return std::exp(s.delta * s.gamma * (1.0 - std::sqrt(1.0 + 2.0 * h / g2)));
            } else if constexpr (std::is_same_v<T, GammaLongMemory>) {
                return std::pow(1.0 + h / s.alpha, 1.0 - s.hurst);
            } else if constexpr (std::is_same_v<T, GIG>) {
                const double g2 = s.gamma * s.gamma;
                const double arg_h = s.delta * std::sqrt(g2 + 2.0 * h);
                const double lr = log_bessel_k(s.nu - 1.0, arg_h) -
                                  log_bessel_k(s.nu - 1.0, s.delta * s.gamma) +
                                  0.5 * (1.0 - s.nu) * std::log1p(2.0 * h / g2);
                return std::exp(lr);
            } else {
                return seasonal_overlap(s, h) / lebesgue(spec);
            }
        },
        spec);
}

// ---- exact partial integrals ----

double tail_mass(const TrawlSpec& spec, double z) {
    check_z(z);
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(s.lambda * z) / s.lambda;
            } else if constexpr (std::is_same_v<T, SupIG>) {
                if (s.delta == 0.0) return kInf;
                const double w = sup_ig_w(s.gamma, z);
                return s.gamma / s.delta * std::exp(s.delta * s.gamma * (1.0 - w));
            } else if constexpr (std::is_same_v<T, GammaLongMemory>) {
                return s.alpha / (s.hurst - 1.0) * std::pow(1.0 - z / s.alpha, 1.0 - s.hurst);
            } else if constexpr (std::is_same_v<T, GIG>) {
                const double w = sup_ig_w(s.gamma, z);
                const double dg = s.delta * s.gamma;
                const double lt = std::log(s.gamma / s.delta) + (1.0 - s.nu) * std::log(w) +
                                  log_bessel_k(s.nu - 1.0, dg * w) - log_bessel_k(s.nu, dg);
                return std::exp(lt);
            } else {
                return seasonal_tail_mass(s, z);
            }
        },
        spec);
}

// ---- envelope inverse ----

double envelope_inverse(const TrawlSpec& spec, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("envelope_inverse: eps must be in (0, 1)");
    if (eps >= 1.0) return 0.0;
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::log(eps) / s.lambda;
            } else if constexpr (std::is_same_v<T, SeasonalExp>) {
                return std::log(eps) / s.lambda;
            } else if constexpr (std::is_same_v<T, GammaLongMemory>) {
                return s.alpha * (1.0 - std::pow(eps, -1.0 / s.hurst));
            } else {
                // SupIG / GIG: bisect log d(z) = log eps on an expanding bracket
                const double target = std::log(eps);
                double lo = -1.0;
                while (log_evaluate(spec, lo) > target) {
                    lo *= 2.0;
                    if (lo < -1e300) return lo;
                }
                double hi = 0.0;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (log_evaluate(spec, mid) > target)
                        hi = mid;
                    else
                        lo = mid;
                }
                return 0.5 * (lo + hi);
            }
        },
        spec);
}

bool is_monotone(const TrawlSpec& spec) {
    if (const auto* s = std::get_if<SeasonalExp>(&spec)) return s->psi == 0.0;
    return true;
}

std::string family_name(const TrawlSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) return "exponential";
            else if constexpr (std::is_same_v<T, SupIG>) return "sup-ig";
            else if constexpr (std::is_same_v<T, GammaLongMemory>) return "gamma-lm";
            else if constexpr (std::is_same_v<T, GIG>) return "gig";
            else return "seasonal-exp";
        },
        spec);
}

// ---- autocorrelator ----

double autocorrelator(const TrawlSpec& spec_i, const TrawlSpec& spec_j, double h,
                      const AutocorrelatorOptions& opts) {
    check_h(h);
    if (!opts.force_quadrature) {
        if (const auto* ei = std::get_if<Exponential>(&spec_i)) {
            if (const auto* ej = std::get_if<Exponential>(&spec_j))
                return exponential_pair(ei->lambda, ej->lambda, h);
        }
    }

    // truncation point: both branches below eps_quad
    double s_min = std::min(envelope_inverse(spec_i, opts.eps_quad),
                            envelope_inverse(spec_j, opts.eps_quad) + h) -
                   1.0;
    // keep the branch-comparison monotone below the cut (matters for power laws)
    auto stationary_point = [&](const TrawlSpec& s) -> double {
        if (const auto* g = std::get_if<GammaLongMemory>(&s)) return g->alpha - 4.0 * g->hurst;
        return 0.0;
    };
    s_min = std::min({s_min, stationary_point(spec_i) - 1.0, stationary_point(spec_j) + h - 1.0});
    if (const auto* gi = std::get_if<GammaLongMemory>(&spec_i)) {
        if (const auto* gj = std::get_if<GammaLongMemory>(&spec_j)) {
            // below the single root of (log d_i(s) - log d_j(s-h))' the branch
            // comparison is monotone, so the tail has at most one crossing
            if (gi->hurst != gj->hurst) {
                const double s_c = (gi->hurst * (gj->alpha + h) - gj->hurst * gi->alpha) /
                                   (gi->hurst - gj->hurst);
                if (s_c < 0.0) s_min = std::min(s_min, s_c - 1.0);
            }
        }
    }

    auto integrand = [&](double s) {
        return std::min(evaluate(spec_i, s), evaluate(spec_j, s - h));
    };
    QuadOptions qopts;
    qopts.rel_tol = opts.rel_tol;
    // geometric subdivision keeps the near-origin mass visible to the
    // error estimator when the cut lies very deep (power-law tails)
    std::vector<double> points{s_min};
    for (double edge = -1.0; edge > s_min; edge *= 2.0) points.push_back(edge);
    points.push_back(0.0);
    std::sort(points.begin(), points.end());
    const double body = integrate(integrand, points, qopts).value;

    // exact tail below the cut: the asymptotically smaller branch wins
    auto branch_log = [&](double s) {
        const double li = log_evaluate(spec_i, s);
        const double lj = log_evaluate(spec_j, s - h);
        return std::pair<double, double>(li, lj);
    };
    double tail;
    if (is_gamma_lm(spec_i) || is_gamma_lm(spec_j)) {
        auto [li0, lj0] = branch_log(s_min);
        bool i_wins = li0 <= lj0;
        auto [li1, lj1] = branch_log(8.0 * s_min);
        const bool i_wins_deep = li1 <= lj1;
        if (i_wins != i_wins_deep) {
            // single late crossing: split the tail at it
            double lo = 8.0 * s_min, hi = s_min;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                auto [li, lj] = branch_log(mid);
                if ((li <= lj) == i_wins_deep)
                    lo = mid;
                else
                    hi = mid;
            }
            const double cross = 0.5 * (lo + hi);
            const double upper = i_wins ? tail_mass(spec_i, s_min) - tail_mass(spec_i, cross)
                                        : tail_mass(spec_j, s_min - h) - tail_mass(spec_j, cross - h);
            const double lower =
                i_wins_deep ? tail_mass(spec_i, cross) : tail_mass(spec_j, cross - h);
            tail = upper + lower;
        } else {
            tail = i_wins ? tail_mass(spec_i, s_min) : tail_mass(spec_j, s_min - h);
        }
    } else {
        // all-exponential-decay pair: both tails are O(eps_quad); take the smaller
        tail = std::min(tail_mass(spec_i, s_min), tail_mass(spec_j, s_min - h));
    }

    double result = body + tail;
    // leb(A ∩ A_h) can never exceed either trawl's measure
    auto leb_or_inf = [](const TrawlSpec& s) {
        try {
            return lebesgue(s);
        } catch (const error&) {
            return kInf;
        }
    };
    return std::min(result, std::min(leb_or_inf(spec_i), leb_or_inf(spec_j)));
}

}  // namespace mivt
