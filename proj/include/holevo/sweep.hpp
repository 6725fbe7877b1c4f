#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "capacity.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "symmetry.hpp"

namespace holevo {

enum class SweepKind { PSK, ASK3, QAM16 };
enum class SweepScale { LINEAR, LOG };

struct SweepSpec {
    SweepKind kind = SweepKind::PSK;
    std::size_t M = 2; // PSK order; ignored for the other kinds
    double alpha_sq_min = 0.0;
    double alpha_sq_max = 0.0;
    std::size_t points = 1;
    SweepScale scale = SweepScale::LINEAR;
    unsigned jobs = 0; // worker threads; 0 = available parallelism
};

inline void validate_sweep(const SweepSpec& spec) {
    if (spec.kind == SweepKind::PSK && spec.M < 1)
        throw ValidationError("sweep: PSK order M must be at least 1");
    if (!(spec.alpha_sq_min >= 0.0))
        throw ValidationError("sweep: alpha_sq_min must be nonnegative");
    if (!(spec.alpha_sq_min <= spec.alpha_sq_max))
        throw ValidationError("sweep: alpha_sq_min must not exceed alpha_sq_max");
    if (spec.points < 1) throw ValidationError("sweep: points must be at least 1");
    if (spec.scale == SweepScale::LOG && !(spec.alpha_sq_min > 0.0))
        throw ValidationError("sweep: log scale requires alpha_sq_min > 0");
    if (spec.kind == SweepKind::QAM16 && !(spec.alpha_sq_min > 0.0))
        throw ValidationError("sweep: 16QAM requires alpha_sq_min > 0");
}

inline std::vector<double> sweep_grid(const SweepSpec& spec) {
    std::vector<double> grid(spec.points);
    if (spec.points == 1) {
        grid[0] = spec.alpha_sq_min;
        return grid;
    }
    const double n = static_cast<double>(spec.points - 1);
    for (std::size_t k = 0; k < spec.points; ++k) {
        const double t = static_cast<double>(k) / n;
        grid[k] = spec.scale == SweepScale::LINEAR
                      ? spec.alpha_sq_min + t * (spec.alpha_sq_max - spec.alpha_sq_min)
                      : spec.alpha_sq_min * std::pow(spec.alpha_sq_max / spec.alpha_sq_min, t);
    }
    return grid;
}

namespace detail {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Runs fn(k) for k in [0, n) on a pool of worker threads. Each index is
// computed independently and deterministically, so the thread count
// never changes any result; it only changes wall time.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n == 0 ? 1 : n));

    if (jobs <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
            if (k >= n) return;
            try {
                fn(k);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace detail

// Computes a capacity sweep and streams it as CSV: a header line, then
// one row per grid point in ascending |alpha|^2 with the columns
//   psk:    alpha_sq, capacity_bits, iterations
//   ask3:   alpha_sq, capacity_bits, xi1, iterations
//   qam16:  alpha_sq, capacity_bits, xi1, xi2, xi3, iterations
// Values carry 12 significant digits; output is byte-identical across
// runs and thread counts.
inline void run_sweep(const SweepSpec& spec, std::ostream& out) {
    validate_sweep(spec);
    const std::vector<double> grid = sweep_grid(spec);
    std::vector<std::optional<CapacityResult>> results(grid.size());

    detail::parallel_for(grid.size(), spec.jobs, [&](std::size_t k) {
        switch (spec.kind) {
        case SweepKind::PSK:
            results[k] = symmetric_capacity(make_psk(spec.M, std::sqrt(grid[k])));
            break;
        case SweepKind::ASK3:
            results[k] = ask3_capacity(grid[k]);
            break;
        case SweepKind::QAM16:
            results[k] = qam16_capacity(grid[k]);
            break;
        }
    });

    switch (spec.kind) {
    case SweepKind::PSK:
        out << "alpha_sq,capacity_bits,iterations\n";
        break;
    case SweepKind::ASK3:
        out << "alpha_sq,capacity_bits,xi1,iterations\n";
        break;
    case SweepKind::QAM16:
        out << "alpha_sq,capacity_bits,xi1,xi2,xi3,iterations\n";
        break;
    }

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const CapacityResult& r = *results[k];
        out << detail::csv_number(grid[k]) << ',' << detail::csv_number(r.capacity_bits);
        if (spec.kind == SweepKind::ASK3) {
            out << ',' << detail::csv_number(r.optimal_prior[0]);
        } else if (spec.kind == SweepKind::QAM16) {
            const auto [x1, x2] = reduce_qam16(r.optimal_prior);
            double x3 = 0.0;
            for (std::size_t i = 12; i < 16; ++i) x3 += r.optimal_prior[i];
            out << ',' << detail::csv_number(x1) << ',' << detail::csv_number(x2) << ','
                << detail::csv_number(x3 / 4.0);
        }
        out << ',' << r.iterations << '\n';
    }
}

enum class ThresholdParam { XI1, XI2 };

struct ThresholdResult {
    double alpha_sq = 0.0; // bracket midpoint
    double width = 0.0;    // final bracket width
    int evaluations = 0;
};

// Locates the |alpha|^2 at which a reduced prior parameter becomes
// active (exceeds kActivationCutoff at the optimum) by bisection on
// [0, 5], down to a bracket width of 1e-4. Activation is monotone in
// |alpha|^2 for these families over the search bracket.
inline ThresholdResult run_threshold(SweepKind kind, ThresholdParam param) {
    if (kind == SweepKind::PSK)
        throw ValidationError("threshold: PSK has no reduced parameter to activate");
    if (kind == SweepKind::ASK3 && param != ThresholdParam::XI1)
        throw ValidationError("threshold: 3ASK has only xi1");

    int evaluations = 0;
    const auto active = [&](double alpha_sq) {
        ++evaluations;
        if (kind == SweepKind::ASK3) {
            return ask3_capacity(alpha_sq).optimal_prior[0] > kActivationCutoff;
        }
        // qam16_capacity requires a strictly positive energy
        const CapacityResult r = qam16_capacity(std::max(alpha_sq, 1e-9));
        const auto [x1, x2] = reduce_qam16(r.optimal_prior);
        return (param == ThresholdParam::XI1 ? x1 : x2) > kActivationCutoff;
    };

    double lo = 0.0, hi = 5.0;
    if (active(lo))
        throw ValidationError("threshold: parameter is already active at alpha_sq = 0");
    if (!active(hi))
        throw ValidationError("threshold: parameter never activates in the bracket [0, 5]");

    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (active(mid) ? hi : lo) = mid;
    }
    return {0.5 * (lo + hi), hi - lo, evaluations};
}

} // namespace holevo
