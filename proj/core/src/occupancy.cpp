#include "m2m/occupancy.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "m2m/rng.hpp"

namespace m2m {

namespace detail {

namespace {

/// G(u, v): number of ways to place v distinguishable balls into u bins such
/// that no bin ends up with exactly one ball. Inclusion-exclusion over the
/// set of balls designated as singletons:
///   G(u, v) = sum_t (-1)^t C(v,t) * u!/(u-t)! * (u-t)^(v-t)
void no_singleton_count(mpz_class& out, long u, long v) {
    if (v == 0) {
        out = 1;
        return;
    }
    if (u <= 0) {
        out = 0;
        return;
    }
    mpz_class term;
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(u), static_cast<unsigned long>(v));
    out = term;
    mpz_class lead = 1;  // C(v,t) * (u)_t, built incrementally
    mpz_class pw;
    const long tmax = std::min(u, v);
    for (long t = 1; t <= tmax; ++t) {
        lead *= (v - t + 1);
        lead *= (u - t + 1);
        mpz_divexact_ui(lead.get_mpz_t(), lead.get_mpz_t(), static_cast<unsigned long>(t));
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(u - t),
                      static_cast<unsigned long>(v - t));
        pw *= lead;
        if (t % 2 == 0) {
            out += pw;
        } else {
            out -= pw;
        }
    }
}

}  // namespace

std::vector<double> exact_success_pmf(int n, int m) {
    if (n == 0) return {1.0};
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(n));
    mpz_class lead = 1;  // C(m,s) * (n)_s, built incrementally
    mpz_class g, num;
    mpq_class ratio;
    const int smax = std::min(n, m);
    for (int s = 0; s <= smax; ++s) {
        if (s > 0) {
            lead *= (m - s + 1);
            lead *= (n - s + 1);
            mpz_divexact_ui(lead.get_mpz_t(), lead.get_mpz_t(), static_cast<unsigned long>(s));
        }
        no_singleton_count(g, m - s, n - s);
        if (g == 0) continue;
        num = lead * g;
        ratio = mpq_class(num, den);
        ratio.canonicalize();
        out[static_cast<std::size_t>(s)] = ratio.get_d();
    }
    return out;
}

std::vector<double> surrogate_success_pmf(int n, int m) {
    const auto mom = occupancy_factorial_moments(n, m);
    const double mean = mom.mu1;
    const double var = mom.mu2 + mom.mu1 - mom.mu1 * mom.mu1;
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    if (var <= 1e-12 || mean < 1e-9 || n < 2) {
        int idx = std::clamp(static_cast<int>(std::lround(mean)), 0, n);
        if (idx == n - 1 && n >= 2) idx = n;  // impossible outcome
        out[static_cast<std::size_t>(idx)] = 1.0;
        return out;
    }
    const double sd = std::sqrt(var);
    // third central moment from the factorial moments
    const double m3 = mom.mu3 + 3.0 * mom.mu2 + mom.mu1 - 3.0 * mean * (mom.mu2 + mom.mu1) +
                      2.0 * mean * mean * mean;
    double skew = m3 / (sd * sd * sd);
    skew = std::clamp(skew, -2.0, 2.0);
    const int lo = std::max(0, static_cast<int>(std::floor(mean - 8.0 * sd)));
    const int hi = std::min(n, static_cast<int>(std::ceil(mean + 8.0 * sd)));
    double total = 0.0;
    for (int s = lo; s <= hi; ++s) {
        const double z = (s - mean) / sd;
        double dens = std::exp(-0.5 * z * z) * (1.0 + skew / 6.0 * (z * z * z - 3.0 * z));
        dens = std::max(dens, 0.0);
        out[static_cast<std::size_t>(s)] = dens;
        total += dens;
    }
    if (n >= 2) {
        total -= out[static_cast<std::size_t>(n - 1)];
        out[static_cast<std::size_t>(n - 1)] = 0.0;
    }
    if (total <= 0.0) {
        out.assign(out.size(), 0.0);
        out[static_cast<std::size_t>(std::clamp(static_cast<int>(std::lround(mean)), 0, n))] = 1.0;
        return out;
    }
    for (auto& v : out) v /= total;
    return out;
}

}  // namespace detail

OccupancyMoments occupancy_factorial_moments(int n, int m) {
    OccupancyMoments mom;
    if (n < 1 || m < 1) return mom;
    const double dn = n;
    mom.mu1 = dn * std::exp((dn - 1.0) * std::log1p(-1.0 / m));
    if (n >= 2 && m >= 2) {
        mom.mu2 = dn * (dn - 1.0) * (1.0 - 1.0 / m) *
                  std::exp((dn - 2.0) * std::log1p(-2.0 / m));
    }
    if (n >= 3 && m >= 3) {
        mom.mu3 = dn * (dn - 1.0) * (dn - 2.0) * (1.0 - 1.0 / m) * (1.0 - 2.0 / m) *
                  std::exp((dn - 3.0) * std::log1p(-3.0 / m));
    }
    return mom;
}

OccupancyPmf success_pmf(int n, int m, const OccupancyOptions& opts) {
    if (n < 0) throw std::invalid_argument("success_pmf: need n >= 0");
    if (m < 1) throw std::invalid_argument("success_pmf: need m >= 1");
    OccupancyPmf out;
    if (n <= opts.exact_threshold) {
        out.p = detail::exact_success_pmf(n, m);
        out.method = OccupancyPmf::Method::kExact;
        return out;
    }
    out.method = OccupancyPmf::Method::kMonteCarlo;
    out.p.assign(static_cast<std::size_t>(n) + 1, 0.0);
    Rng rng(opts.mc_seed);
    std::vector<int> bins(static_cast<std::size_t>(m));
    std::vector<int> picks(static_cast<std::size_t>(n));
    const double w = 1.0 / opts.mc_replications;
    for (int rep = 0; rep < opts.mc_replications; ++rep) {
        std::fill(bins.begin(), bins.end(), 0);
        for (int i = 0; i < n; ++i) {
            picks[static_cast<std::size_t>(i)] =
                static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
            bins[static_cast<std::size_t>(picks[static_cast<std::size_t>(i)])]++;
        }
        int singles = 0;
        for (int i = 0; i < n; ++i) {
            if (bins[static_cast<std::size_t>(picks[static_cast<std::size_t>(i)])] == 1) ++singles;
        }
        out.p[static_cast<std::size_t>(singles)] += w;
    }
    return out;
}

OccupancyPmf collision_pmf(int n, int m, const OccupancyOptions& opts) {
    OccupancyPmf out = success_pmf(n, m, opts);
    std::reverse(out.p.begin(), out.p.end());  // Pr[N_C=k] = Pr[N_S=n-k]
    return out;
}

}  // namespace m2m
