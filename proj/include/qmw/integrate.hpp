#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/graph.hpp"
#include "qmw/quadric.hpp"
#include "qmw/rational.hpp"

namespace qmw {

/// Deterministic 64-bit generator (SplitMix64). Used instead of <random> so
/// identical (seed, samples) produce identical streams on every platform.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    /// Uniform in the open interval (0, 1).
    double unit() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

inline std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t block) {
    SplitMix64 g{seed ^ (0xD1B54A32D192ED03ULL * (block + 1))};
    return g.next();
}

/// The integrand prefactor / prod_i q_i(1, u)^alpha on the affine chart
/// u0 = 1. Requires every form positive-definite, so the product never
/// vanishes on the real chart.
struct IntegrandSpec {
    QuadricNet net;
    double exponent = 1.0;
    std::optional<Rat> exponent_exact; // set when alpha was given as a rational
    Rat prefactor = Rat(1);

    std::size_t dims() const { return static_cast<std::size_t>(net.ambient_dim()); }
};

inline IntegrandSpec make_integrand(QuadricNet net, const Rat& alpha, Rat prefactor = Rat(1)) {
    for (std::size_t i = 0; i < net.form_count(); ++i)
        if (!no_real_points(net.forms[i]))
            fail(errc::internal, "make_integrand",
                 "form " + net.graph.edge_ids[i] + " is not positive-definite; integrand would have poles");
    IntegrandSpec s;
    s.net = std::move(net);
    s.exponent = rat_double(alpha);
    s.exponent_exact = alpha;
    s.prefactor = std::move(prefactor);
    return s;
}

inline IntegrandSpec make_integrand_real(QuadricNet net, double s_exponent, Rat prefactor = Rat(1)) {
    IntegrandSpec s = make_integrand(std::move(net), Rat(1), std::move(prefactor));
    s.exponent = s_exponent;
    s.exponent_exact.reset();
    return s;
}

struct IntegrationResult {
    double value = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string scheme;
};

struct IntegrateOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::string scheme = "mc-cauchy"; // or "grid"
    int threads = 0;                  // 0: QMW_THREADS env var, else 1
    double tail_radius = 0;           // > 0: integrate only over |u| > R (diagnostic)
    int log_power = 0;                // weight by log^k of the propagator product
};

namespace detail {

inline std::size_t resolve_threads(int requested) {
    if (requested > 0) return static_cast<std::size_t>(requested);
    if (const char* env = std::getenv("QMW_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

struct FormsDouble {
    std::vector<std::vector<double>> diag; // per form: [a00, a11, ...]
    std::vector<std::vector<double>> dense; // set only for non-diagonal forms
    bool all_diagonal = true;
    std::size_t size = 0;

    explicit FormsDouble(const QuadricNet& net) {
        size = net.forms.empty() ? 0 : net.forms[0].size();
        for (const auto& f : net.forms) {
            std::vector<double> d(size);
            bool is_diag = true;
            for (std::size_t i = 0; i < size; ++i) {
                d[i] = rat_double(f.a(i, i));
                for (std::size_t j = 0; j < size; ++j)
                    if (i != j && f.a(i, j) != 0) is_diag = false;
            }
            diag.push_back(std::move(d));
            if (!is_diag) {
                all_diagonal = false;
                std::vector<double> m(size * size);
                for (std::size_t i = 0; i < size; ++i)
                    for (std::size_t j = 0; j < size; ++j) m[i * size + j] = rat_double(f.a(i, j));
                dense.push_back(std::move(m));
            } else {
                dense.emplace_back();
            }
        }
    }

    double form_value(std::size_t f, const double* u) const { // u has length size-1, chart u0 = 1
        if (dense[f].empty()) {
            double acc = diag[f][0];
            for (std::size_t i = 1; i < size; ++i) acc += diag[f][i] * u[i - 1] * u[i - 1];
            return acc;
        }
        double acc = 0;
        for (std::size_t i = 0; i < size; ++i) {
            double ui = i == 0 ? 1.0 : u[i - 1];
            for (std::size_t j = 0; j < size; ++j) {
                double uj = j == 0 ? 1.0 : u[j - 1];
                acc += dense[f][i * size + j] * ui * uj;
            }
        }
        return acc;
    }
};

/// Neumaier compensated accumulator; reduction order is fixed by block index
/// so results do not depend on the thread count.
struct Kahan {
    double sum = 0, comp = 0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
        else comp += (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

inline double cauchy_width(const QuadricNet& net) {
    // geometric mean of the masses
    double acc = 0;
    std::size_t n = 0;
    for (const auto& w : net.witnesses) {
        acc += std::log(rat_double(w.mass_root));
        ++n;
    }
    return n ? std::exp(acc / static_cast<double>(n)) : 1.0;
}

} // namespace detail

/// eta value at a real point of the chart u0 = 1.
inline double eta_value(const IntegrandSpec& spec, const std::vector<double>& u) {
    detail::FormsDouble forms(spec.net);
    if (u.size() + 1 != forms.size) fail(errc::dimension_mismatch, "eta_value", "point length must be LD");
    double prod = 1;
    for (std::size_t f = 0; f < spec.net.form_count(); ++f) prod *= forms.form_value(f, u.data());
    return rat_double(spec.prefactor) * std::pow(prod, -spec.exponent);
}

/// Convergence threshold LD / (2n) for the net's exponent.
inline Rat convergence_threshold(const QuadricNet& net) {
    return Rat(net.ambient_dim()) / (Rat(2) * Rat(static_cast<long>(net.form_count())));
}

namespace detail {

inline constexpr std::uint64_t block_size = 8192;

struct BlockResult {
    double sum = 0;
    double sum_sq = 0;
};

template <typename Weight>
IntegrationResult mc_integrate(const IntegrandSpec& spec, const IntegrateOptions& opts, Weight weight) {
    const std::size_t dims = spec.dims();
    const detail::FormsDouble forms(spec.net);
    const double width = detail::cauchy_width(spec.net);
    const double pref = rat_double(spec.prefactor);
    const double r2cut = opts.tail_radius > 0 ? opts.tail_radius * opts.tail_radius : -1.0;

    const std::uint64_t nblocks = (opts.samples + block_size - 1) / block_size;
    std::vector<BlockResult> blocks(static_cast<std::size_t>(nblocks));

    auto run_block = [&](std::uint64_t b) {
        SplitMix64 rng{mix_stream(opts.seed, b)};
        std::uint64_t count = std::min<std::uint64_t>(block_size, opts.samples - b * block_size);
        double sum = 0, sum_sq = 0;
        std::vector<double> u(dims);
        for (std::uint64_t s = 0; s < count; ++s) {
            double density = 1;
            double radius2 = 0;
            for (std::size_t c = 0; c < dims; ++c) {
                double t = rng.unit();
                double x = width * std::tan(M_PI * (t - 0.5));
                u[c] = x;
                density *= width / (M_PI * (width * width + x * x));
                radius2 += x * x;
            }
            if (r2cut > 0 && radius2 <= r2cut) continue;
            double prod = 1;
            for (std::size_t f = 0; f < spec.net.form_count(); ++f) prod *= forms.form_value(f, u.data());
            double w = pref * std::pow(prod, -spec.exponent) / density;
            w = weight(w, prod);
            sum += w;
            sum_sq += w * w;
        }
        blocks[static_cast<std::size_t>(b)] = {sum, sum_sq};
    };

    std::size_t nthreads = std::min<std::size_t>(detail::resolve_threads(opts.threads),
                                                 static_cast<std::size_t>(nblocks ? nblocks : 1));
    if (nthreads <= 1) {
        for (std::uint64_t b = 0; b < nblocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t]() {
                for (std::uint64_t b = t; b < nblocks; b += nthreads) run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    detail::Kahan sum, sum_sq;
    for (const auto& b : blocks) {
        sum.add(b.sum);
        sum_sq.add(b.sum_sq);
    }
    const double n = static_cast<double>(opts.samples);
    const double mean = sum.total() / n;
    double var = 0;
    if (opts.samples > 1) var = std::max(0.0, (sum_sq.total() - n * mean * mean) / (n - 1));

    IntegrationResult res;
    res.value = mean;
    res.std_error = std::sqrt(var / n);
    res.samples = opts.samples;
    res.seed = opts.seed;
    res.scheme = "mc-cauchy";
    return res;
}

template <typename Weight>
IntegrationResult grid_integrate(const IntegrandSpec& spec, const IntegrateOptions& opts, Weight weight) {
    const std::size_t dims = spec.dims();
    const detail::FormsDouble forms(spec.net);
    const double width = detail::cauchy_width(spec.net);
    const double pref = rat_double(spec.prefactor);

    auto eval_grid = [&](std::uint64_t per_dim) {
        std::vector<std::uint64_t> idx(dims, 0);
        std::vector<double> u(dims);
        detail::Kahan sum;
        std::uint64_t total = 1;
        for (std::size_t c = 0; c < dims; ++c) total *= per_dim;
        for (std::uint64_t flat = 0; flat < total; ++flat) {
            std::uint64_t rest = flat;
            double density = 1;
            for (std::size_t c = 0; c < dims; ++c) {
                std::uint64_t i = rest % per_dim;
                rest /= per_dim;
                double t = (static_cast<double>(i) + 0.5) / static_cast<double>(per_dim);
                double x = width * std::tan(M_PI * (t - 0.5));
                u[c] = x;
                density *= width / (M_PI * (width * width + x * x));
            }
            double prod = 1;
            for (std::size_t f = 0; f < spec.net.form_count(); ++f) prod *= forms.form_value(f, u.data());
            double w = pref * std::pow(prod, -spec.exponent) / density;
            sum.add(weight(w, prod));
        }
        return sum.total() / static_cast<double>(total);
    };

    std::uint64_t per_dim = std::max<std::uint64_t>(
        2, static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(opts.samples), 1.0 / dims))));
    double fine = eval_grid(per_dim);
    double coarse = eval_grid(std::max<std::uint64_t>(2, per_dim / 2));

    IntegrationResult res;
    res.value = fine;
    res.std_error = std::abs(fine - coarse);
    std::uint64_t total = 1;
    for (std::size_t c = 0; c < dims; ++c) total *= per_dim;
    res.samples = total;
    res.seed = opts.seed;
    res.scheme = "grid";
    return res;
}

template <typename Weight>
IntegrationResult integrate_weighted(const IntegrandSpec& spec, const IntegrateOptions& opts, Weight w) {
    if (opts.scheme == "grid") return grid_integrate(spec, opts, w);
    if (opts.scheme == "mc-cauchy") return mc_integrate(spec, opts, w);
    fail(errc::malformed_document, "integrate", "unknown scheme \"" + opts.scheme + "\" (mc-cauchy|grid)");
}

} // namespace detail

/// Monte Carlo / grid estimate of the integral of eta over R^{LD}. The
/// exponent must lie in the convergence half-plane alpha > LD/(2n).
inline IntegrationResult integrate_eta(const IntegrandSpec& spec, const IntegrateOptions& opts = {}) {
    Rat threshold = convergence_threshold(spec.net);
    if (spec.exponent_exact) {
        if (*spec.exponent_exact <= threshold)
            fail(errc::divergent_exponent, "integrate_eta",
                 "alpha = " + rat_str(*spec.exponent_exact) + " <= LD/(2n) = " + rat_str(threshold) +
                     "; the integral diverges and must be regularized");
    } else if (spec.exponent <= rat_double(threshold)) {
        fail(errc::out_of_half_plane, "integrate_eta",
             "s = " + std::to_string(spec.exponent) + " <= LD/(2n) = " + rat_str(threshold));
    }
    return detail::integrate_weighted(spec, opts, [](double w, double) { return w; });
}

/// Igusa zeta value I(s) for real s in the convergence half-plane; the same
/// sampler as integrate_eta, bit for bit.
inline IntegrationResult igusa_zeta(const IntegrandSpec& base, double s, const IntegrateOptions& opts = {}) {
    IntegrandSpec spec = base;
    spec.exponent = s;
    spec.exponent_exact.reset();
    Rat threshold = convergence_threshold(spec.net);
    if (!(s > rat_double(threshold)))
        fail(errc::out_of_half_plane, "igusa_zeta",
             "s = " + std::to_string(s) + " is not in the half-plane Re(s) > LD/(2n) = " + rat_str(threshold));
    return detail::integrate_weighted(spec, opts, [](double w, double) { return w; });
}

/// Laurent coefficient gamma_k at center alpha: ((-1)^k / k!) times the
/// integral of eta weighted by log^k of the propagator product. gamma_0
/// reproduces integrate_eta exactly at equal seed.
inline IntegrationResult laurent_coefficient(const IntegrandSpec& spec, int k,
                                             const IntegrateOptions& opts = {}) {
    if (k < 0) fail(errc::malformed_document, "laurent_coefficient", "k must be >= 0");
    Rat threshold = convergence_threshold(spec.net);
    if (spec.exponent_exact && *spec.exponent_exact <= threshold)
        fail(errc::out_of_half_plane, "laurent_coefficient",
             "alpha = " + rat_str(*spec.exponent_exact) + " <= LD/(2n) = " + rat_str(threshold));
    if (!spec.exponent_exact && spec.exponent <= rat_double(threshold))
        fail(errc::out_of_half_plane, "laurent_coefficient", "alpha outside the convergence half-plane");
    if (k == 0) return detail::integrate_weighted(spec, opts, [](double w, double) { return w; });
    double factorial = 1;
    for (int i = 2; i <= k; ++i) factorial *= i;
    double sign = k % 2 ? -1.0 : 1.0;
    double factor = sign / factorial;
    return detail::integrate_weighted(spec, opts, [k, factor](double w, double prod) {
        return factor * w * std::pow(std::log(prod), k);
    });
}

/// Closed form for the single massive propagator:
/// integral over R^D of (k^2 + m^2)^(-alpha) = pi^{D/2} Gamma(alpha - D/2) /
/// (Gamma(alpha) m^{2 alpha - D}). Test oracle for the sampler.
inline double closed_form_single_propagator(long d, double m, double alpha) {
    if (!(alpha > static_cast<double>(d) / 2.0))
        fail(errc::divergent_exponent, "closed_form_single_propagator",
             "requires alpha > D/2 = " + std::to_string(static_cast<double>(d) / 2.0));
    return std::pow(M_PI, static_cast<double>(d) / 2.0) * std::tgamma(alpha - static_cast<double>(d) / 2.0) /
           (std::tgamma(alpha) * std::pow(m, 2.0 * alpha - static_cast<double>(d)));
}

/// Single-propagator net diag(m^2, 1, ..., 1) in D+1 variables, as used by
/// the oracle comparisons and examples.
inline QuadricNet single_propagator_net(long d, const Rat& mass) {
    QuadricNet net;
    net.loop_count = 1;
    net.dimension = d;
    net.epsilon = 0;
    net.graph.graph_name = "single-propagator";
    net.graph.vertices = {"v"};
    net.graph.edge_ids = {"e1"};
    net.graph.endpoints = {{"v", "v"}};
    DiagWitness w;
    w.mass_root = mass;
    w.tbar.assign(static_cast<std::size_t>(d), Poly(Rat(1)));
    std::vector<Rat> diag(static_cast<std::size_t>(d) + 1, Rat(1));
    diag[0] = mass * mass;
    net.forms.push_back(detail::diagonal_form(diag));
    net.witnesses.push_back(std::move(w));
    return net;
}

inline nlohmann::json integration_to_json(const IntegrationResult& r) {
    nlohmann::json j;
    j["value"] = r.value;
    j["std_error"] = r.std_error;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["scheme"] = r.scheme;
    return j;
}

} // namespace qmw
