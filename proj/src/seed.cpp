#include "mivt/seed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mivt/errors.hpp"

namespace mivt {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void require_positive(std::span<const double> v, const char* msg) {
    for (double x : v) require(x > 0.0 && std::isfinite(x), msg);
}

double checked_sum_p(std::span<const double> p) {
    double total = 0.0;
    for (double pi : p) {
        require(pi > 0.0 && pi < 1.0, "mlsd: each p_i must lie in (0, 1)");
        total += pi;
    }
    require(total < 1.0, "mlsd: sum of p_i must be below 1");
    return total;
}

}  // namespace

// ---- spec construction ----

PoissonFactor::PoissonFactor(std::vector<std::vector<int>> loadings_, std::vector<double> theta_)
    : loadings(std::move(loadings_)), theta(std::move(theta_)) {
    require(!loadings.empty(), "PoissonFactor: needs at least one component");
    require(!theta.empty(), "PoissonFactor: needs at least one factor");
    require_positive(theta, "PoissonFactor: factor rates must be positive");
    const std::size_t m = theta.size();
    for (const auto& row : loadings) {
        require(row.size() == m, "PoissonFactor: loading rows must match theta length");
        for (int e : row) require(e == 0 || e == 1, "PoissonFactor: loadings must be 0/1");
    }
    std::set<std::vector<int>> seen;
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<int> col(loadings.size());
        for (std::size_t i = 0; i < loadings.size(); ++i) col[i] = loadings[i][k];
        require(std::any_of(col.begin(), col.end(), [](int e) { return e != 0; }),
                "PoissonFactor: zero column");
        require(seen.insert(col).second, "PoissonFactor: duplicate columns");
    }
}

NBIndependent::NBIndependent(std::vector<double> kappa_, std::vector<double> beta_)
    : kappa(std::move(kappa_)), beta(std::move(beta_)) {
    require(!kappa.empty() && kappa.size() == beta.size(),
            "NBIndependent: kappa and beta must be non-empty and equal length");
    require_positive(kappa, "NBIndependent: kappa_i must be positive");
    require_positive(beta, "NBIndependent: beta_i must be positive");
}

NBCommonFactor::NBCommonFactor(double kappa_, std::vector<double> alpha_)
    : kappa(kappa_), alpha(std::move(alpha_)) {
    require(kappa > 0.0 && std::isfinite(kappa), "NBCommonFactor: kappa must be positive");
    require(!alpha.empty(), "NBCommonFactor: alpha must be non-empty");
    require_positive(alpha, "NBCommonFactor: alpha_i must be positive");
}

NBCommonPlusIdio::NBCommonPlusIdio(double kappa_, std::vector<double> alpha_,
                                   std::vector<double> kappa_idio_)
    : kappa(kappa_), alpha(std::move(alpha_)), kappa_idio(std::move(kappa_idio_)) {
    require(kappa > 0.0 && std::isfinite(kappa), "NBCommonPlusIdio: kappa must be positive");
    require(!alpha.empty() && alpha.size() == kappa_idio.size(),
            "NBCommonPlusIdio: alpha and kappa_idio must be non-empty and equal length");
    require_positive(alpha, "NBCommonPlusIdio: alpha_i must be positive");
    for (double k : kappa_idio)
        require(k >= 0.0 && std::isfinite(k), "NBCommonPlusIdio: kappa_idio_i must be >= 0");
}

std::size_t dimension(const SeedSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::size_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PoissonFactor>) return s.rows();
            else if constexpr (std::is_same_v<T, NBIndependent>) return s.kappa.size();
            else return s.alpha.size();
        },
        spec);
}

std::string family_name(const SeedSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PoissonFactor>) return "poisson-factor";
            else if constexpr (std::is_same_v<T, NBIndependent>) return "nb-independent";
            else if constexpr (std::is_same_v<T, NBCommonFactor>) return "nb-common";
            else return "nb-common-idio";
        },
        spec);
}

// ---- cumulants ----

SeedCumulants seed_cumulants(const SeedSpec& spec) {
    const std::size_t n = dimension(spec);
    SeedCumulants out;
    out.mean.assign(n, 0.0);
    out.variance.assign(n, 0.0);
    out.covariance.assign(n, std::vector<double>(n, 0.0));
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PoissonFactor>) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = 0; k < s.factors(); ++k)
                        out.mean[i] += s.loadings[i][k] * s.theta[k];
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t k = 0; k < s.factors(); ++k)
                            out.covariance[i][j] +=
                                s.loadings[i][k] * s.theta[k] * s.loadings[j][k];
            } else if constexpr (std::is_same_v<T, NBIndependent>) {
                for (std::size_t i = 0; i < n; ++i) {
                    out.mean[i] = s.kappa[i] * s.beta[i];
                    out.covariance[i][i] = s.kappa[i] * s.beta[i] * (1.0 + s.beta[i]);
                }
            } else if constexpr (std::is_same_v<T, NBCommonFactor>) {
                for (std::size_t i = 0; i < n; ++i) {
                    out.mean[i] = s.kappa * s.alpha[i];
                    for (std::size_t j = 0; j < n; ++j)
                        out.covariance[i][j] = i == j
                                                   ? s.kappa * s.alpha[i] * (1.0 + s.alpha[i])
                                                   : s.kappa * s.alpha[i] * s.alpha[j];
                }
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    const double shape = s.kappa + s.kappa_idio[i];
                    out.mean[i] = shape * s.alpha[i];
                    for (std::size_t j = 0; j < n; ++j)
                        out.covariance[i][j] = i == j
                                                   ? shape * s.alpha[i] * (1.0 + s.alpha[i])
                                                   : s.kappa * s.alpha[i] * s.alpha[j];
                }
            }
        },
        spec);
    for (std::size_t i = 0; i < n; ++i) out.variance[i] = out.covariance[i][i];
    return out;
}

// ---- compound-Poisson representation ----

double CpRepresentation::total_rate() const {
    double v = 0.0;
    for (const CpBlock& b : blocks)
        v += std::visit([](const auto& blk) { return blk.rate; }, b);
    return v;
}

CpRepresentation cp_representation(const SeedSpec& spec) {
    CpRepresentation rep;
    rep.dim = dimension(spec);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PoissonFactor>) {
                CategoricalBlock block;
                block.rate = std::accumulate(s.theta.begin(), s.theta.end(), 0.0);
                for (std::size_t k = 0; k < s.factors(); ++k) {
                    block.probability.push_back(s.theta[k] / block.rate);
                    std::vector<std::int64_t> mark(rep.dim);
                    for (std::size_t i = 0; i < rep.dim; ++i) mark[i] = s.loadings[i][k];
                    block.marks.push_back(std::move(mark));
                }
                rep.blocks.emplace_back(std::move(block));
            } else if constexpr (std::is_same_v<T, NBIndependent>) {
                for (std::size_t i = 0; i < rep.dim; ++i)
                    rep.blocks.emplace_back(LogBlock{s.kappa[i] * std::log1p(s.beta[i]), i,
                                                     s.beta[i] / (1.0 + s.beta[i])});
            } else if constexpr (std::is_same_v<T, NBCommonFactor>) {
                const double alpha = std::accumulate(s.alpha.begin(), s.alpha.end(), 0.0);
                MlsdBlock block;
                block.rate = s.kappa * std::log1p(alpha);
                for (double a : s.alpha) block.p.push_back(a / (alpha + 1.0));
                rep.blocks.emplace_back(std::move(block));
            } else {
                const double alpha = std::accumulate(s.alpha.begin(), s.alpha.end(), 0.0);
                MlsdBlock block;
                block.rate = s.kappa * std::log1p(alpha);
                for (double a : s.alpha) block.p.push_back(a / (alpha + 1.0));
                rep.blocks.emplace_back(std::move(block));
                for (std::size_t i = 0; i < rep.dim; ++i) {
                    if (s.kappa_idio[i] == 0.0) continue;
                    rep.blocks.emplace_back(LogBlock{s.kappa_idio[i] * std::log1p(s.alpha[i]), i,
                                                     s.alpha[i] / (1.0 + s.alpha[i])});
                }
            }
        },
        spec);
    return rep;
}

// ---- pmfs ----

double log_pmf_mlsd(std::span<const double> p, std::span<const std::int64_t> c) {
    require(p.size() == c.size(), "mlsd: dimension mismatch");
    const double total = checked_sum_p(p);
    std::int64_t csum = 0;
    for (std::int64_t ci : c) {
        require(ci >= 0, "mlsd: counts must be non-negative");
        csum += ci;
    }
    if (csum == 0) throw std::domain_error("mlsd pmf undefined at the zero vector");
    double lp = std::lgamma(static_cast<double>(csum)) - std::log(-std::log1p(-total));
    for (std::size_t i = 0; i < p.size(); ++i) {
        lp -= std::lgamma(static_cast<double>(c[i]) + 1.0);
        if (c[i] > 0) lp += static_cast<double>(c[i]) * std::log(p[i]);
    }
    return lp;
}

double pmf_mlsd(std::span<const double> p, std::span<const std::int64_t> c) {
    return std::exp(log_pmf_mlsd(p, c));
}

double log_pmf_nb(double kappa, double p, std::int64_t x) {
    require(kappa > 0.0, "nb: kappa must be positive");
    require(p > 0.0 && p < 1.0, "nb: p must lie in (0, 1)");
    require(x >= 0, "nb: count must be non-negative");
    const double xd = static_cast<double>(x);
    return std::lgamma(kappa + xd) - std::lgamma(kappa) - std::lgamma(xd + 1.0) +
           xd * std::log(p) + kappa * std::log1p(-p);
}

double pmf_nb(double kappa, double p, std::int64_t x) { return std::exp(log_pmf_nb(kappa, p, x)); }

double log_joint_pmf_nb_common(const NBCommonFactor& spec, std::span<const std::int64_t> x) {
    require(x.size() == spec.alpha.size(), "joint nb pmf: dimension mismatch");
    const double alpha = std::accumulate(spec.alpha.begin(), spec.alpha.end(), 0.0);
    double xsum = 0.0;
    double lp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] >= 0, "joint nb pmf: counts must be non-negative");
        const double xd = static_cast<double>(x[i]);
        xsum += xd;
        lp -= std::lgamma(xd + 1.0);
        if (x[i] > 0) lp += xd * (std::log(spec.alpha[i]) - std::log1p(alpha));
    }
    lp += std::lgamma(spec.kappa + xsum) - std::lgamma(spec.kappa) -
          spec.kappa * std::log1p(alpha);
    return lp;
}

double joint_pmf_nb_common(const NBCommonFactor& spec, std::span<const std::int64_t> x) {
    return std::exp(log_joint_pmf_nb_common(spec, x));
}

// ---- samplers ----

LogarithmicSampler::LogarithmicSampler(double p) : p_(p) {
    require(p > 0.0 && p < 1.0, "logarithmic law: p must lie in (0, 1)");
    const double norm = -std::log1p(-p);
    double pmf = p / norm;  // k = 1
    double cum = pmf;
    cdf_.push_back(cum);
    constexpr double kQuantile = 1.0 - 1e-12;
    constexpr std::size_t kMaxTable = 1 << 20;
    for (std::size_t k = 1; cum < kQuantile && k < kMaxTable; ++k) {
        pmf *= p * static_cast<double>(k) / static_cast<double>(k + 1);
        cum += pmf;
        cdf_.push_back(cum);
    }
}

std::int64_t LogarithmicSampler::operator()(Engine& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    for (std::size_t k = 0; k < cdf_.size(); ++k)
        if (u <= cdf_[k]) return static_cast<std::int64_t>(k) + 1;
    // beyond the cached quantile: continue the recursion directly
    std::int64_t k = static_cast<std::int64_t>(cdf_.size());
    double cum = cdf_.back();
    const double norm = -std::log1p(-p_);
    double pmf = std::exp(static_cast<double>(k) * std::log(p_)) /
                 (static_cast<double>(k) * norm);
    while (true) {
        ++k;
        pmf *= p_ * static_cast<double>(k - 1) / static_cast<double>(k);
        cum += pmf;
        if (u <= cum || pmf == 0.0) return k;
    }
}

std::int64_t sample_nb(double kappa, double p, Engine& rng) {
    require(kappa > 0.0, "nb sampler: kappa must be positive");
    require(p > 0.0 && p < 1.0, "nb sampler: p must lie in (0, 1)");
    std::gamma_distribution<double> gamma(kappa, p / (1.0 - p));
    std::poisson_distribution<std::int64_t> pois(gamma(rng));
    return pois(rng);
}

MlsdSampler::MlsdSampler(std::vector<double> p) : p_(std::move(p)) {
    checked_sum_p(p_);
    const std::size_t n = p_.size();
    double remaining = std::accumulate(p_.begin(), p_.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        // marginal of the leading coordinate of the remaining sub-law
        const double ptilde = p_[k] / (1.0 - remaining + p_[k]);
        const double delta = std::log1p(-remaining + p_[k]) / std::log1p(-remaining);
        const double tail_after = remaining - p_[k];
        zero_weight_.push_back(delta);
        nb_p_.push_back(p_[k] / (1.0 - tail_after));
        log_.emplace_back(ptilde);
        remaining = tail_after;
    }
}

std::vector<std::int64_t> MlsdSampler::operator()(Engine& rng) const {
    const std::size_t n = p_.size();
    std::vector<std::int64_t> c(n, 0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::int64_t total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (total == 0) {
            // still inside the zero-prefix branch: modified logarithmic marginal
            if (k + 1 == n) {
                c[k] = log_[k](rng);  // last coordinate must be positive
            } else if (unif(rng) >= zero_weight_[k]) {
                c[k] = log_[k](rng);
            }
        } else {
            c[k] = sample_nb(static_cast<double>(total), nb_p_[k], rng);
        }
        total += c[k];
    }
    return c;
}

std::vector<std::int64_t> sample_mlsd(std::span<const double> p, Engine& rng) {
    return MlsdSampler(std::vector<double>(p.begin(), p.end()))(rng);
}

BlockSampler::BlockSampler(const CpBlock& block, std::size_t dim)
    : rate_(std::visit([](const auto& b) { return b.rate; }, block)),
      dim_(dim),
      impl_(std::visit(
          [&](const auto& b) -> std::variant<Mlsd, Log, Categorical> {
              using T = std::decay_t<decltype(b)>;
              if constexpr (std::is_same_v<T, MlsdBlock>) {
                  return Mlsd{MlsdSampler(b.p)};
              } else if constexpr (std::is_same_v<T, LogBlock>) {
                  return Log{b.component, LogarithmicSampler(b.p)};
              } else {
                  Categorical cat;
                  double cum = 0.0;
                  for (double q : b.probability) {
                      cum += q;
                      cat.cumulative.push_back(cum);
                  }
                  cat.marks = b.marks;
                  return cat;
              }
          },
          block)) {}

std::vector<std::int64_t> BlockSampler::operator()(Engine& rng) const {
    return std::visit(
        [&](const auto& impl) -> std::vector<std::int64_t> {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, Mlsd>) {
                return impl.sampler(rng);
            } else if constexpr (std::is_same_v<T, Log>) {
                std::vector<std::int64_t> mark(dim_, 0);
                mark[impl.component] = impl.sampler(rng);
                return mark;
            } else {
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                const double u = unif(rng);
                std::size_t k = 0;
                while (k + 1 < impl.cumulative.size() && u > impl.cumulative[k]) ++k;
                return impl.marks[k];
            }
        },
        impl_);
}

SeedSampler::SeedSampler(const SeedSpec& spec) : dim_(dimension(spec)) {
    const CpRepresentation rep = cp_representation(spec);
    for (const CpBlock& b : rep.blocks) blocks_.emplace_back(b, dim_);
}

std::vector<std::int64_t> SeedSampler::operator()(Engine& rng) const {
    std::vector<std::int64_t> total(dim_, 0);
    for (const BlockSampler& block : blocks_) {
        std::poisson_distribution<std::int64_t> pois(block.rate());
        const std::int64_t jumps = pois(rng);
        for (std::int64_t j = 0; j < jumps; ++j) {
            const std::vector<std::int64_t> mark = block(rng);
            for (std::size_t i = 0; i < dim_; ++i) total[i] += mark[i];
        }
    }
    return total;
}

std::vector<std::int64_t> sample_seed(const SeedSpec& spec, Engine& rng) {
    return SeedSampler(spec)(rng);
}

}  // namespace mivt
