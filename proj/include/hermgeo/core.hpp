#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hermgeo {

/// Numerical rejection carrying the offending module and grid location.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& module, const std::string& what,
                    std::ptrdiff_t point = -1)
        : std::runtime_error(module + ": " + what +
                             (point >= 0 ? " (grid point " + std::to_string(point) + ")" : "")),
          module_(module), point_(point) {}
    const std::string& module() const { return module_; }
    std::ptrdiff_t point() const { return point_; }
private:
    std::string module_;
    std::ptrdiff_t point_;
};

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

inline int thread_count() {
    if (const char* env = std::getenv("HERMGEO_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Static partition of [0,n) across worker threads. Fields are immutable
/// inputs and each index writes disjoint output, so no synchronization
/// beyond the joins is needed.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    int nt = thread_count();
    if (nt <= 1 || n < 256) {
        body(0, n);
        return;
    }
    std::size_t chunk = (n + nt - 1) / nt;
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hermgeo
