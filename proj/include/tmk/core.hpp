#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tmk {

inline constexpr const char* version = "0.1.0";

// Error taxonomy mirrored by the CLI exit codes (2 usage, 3 precision,
// 4 tolerance, 5 internal).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct PrecisionError : Error {
    using Error::Error;
};
struct ToleranceError : Error {
    using Error::Error;
};
struct SizeError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
// Raised when a trigonometric-log argument lands within the guard radius of a
// singular point; carries which shift offended and how close it got.
struct SingularityError : Error {
    std::uint64_t shift;
    double distance;
    SingularityError(const std::string& msg, std::uint64_t shift_, double dist)
        : Error(msg), shift(shift_), distance(dist) {}
};
struct NumericError : Error {
    using Error::Error;
};

/// Parallelism context handed down from the CLI (or tests). Modules never
/// spawn unmanaged workers; everything funnels through parallel_for.
struct ExecContext {
    int threads = 1;

    static ExecContext sequential() { return ExecContext{1}; }
    static ExecContext hardware() {
        unsigned n = std::thread::hardware_concurrency();
        return ExecContext{n == 0 ? 1 : static_cast<int>(n)};
    }
    static ExecContext with_threads(int n) { return ExecContext{n < 1 ? 1 : n}; }
};

/// Chunked parallel loop over [0, n). body(begin, end) must not throw across
/// threads without care; exceptions are rethrown on the caller thread.
template <typename Body>
void parallel_for(const ExecContext& ctx, std::size_t n, Body&& body) {
    if (n == 0) return;
    const std::size_t nt =
        std::min<std::size_t>(static_cast<std::size_t>(ctx.threads), n);
    if (nt <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr err;
    std::mutex err_mtx;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] {
            try {
                body(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

/// Deterministic parallel sum: n blocks are evaluated in parallel, the block
/// results are then combined sequentially in index order, so the value does
/// not depend on the thread count.
template <typename BlockFn>
double parallel_block_sum(const ExecContext& ctx, std::size_t nblocks, BlockFn&& fn) {
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(ctx, nblocks, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) partial[i] = fn(i);
    });
    double sum = 0.0;
    for (double v : partial) sum += v;
    return sum;
}

/// Kahan compensated accumulator. `residual()` bounds the reordering
/// sensitivity of the returned sum.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    double abs_sum = 0.0;
    std::size_t count = 0;

    void add(double x) {
        abs_sum += x < 0 ? -x : x;
        ++count;
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
    // 4 eps |terms|_1 covers compensated summation in any evaluation order.
    double residual() const { return 4.0 * 2.220446049250313e-16 * abs_sum; }
};

}  // namespace tmk
