#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "hermgeo/field.hpp"

namespace hermgeo {

enum class DiffMethod { automatic, spectral, fd4 };

namespace detail {

/// Process-wide FFTW plan pair per line length. Plan creation is not
/// thread-safe, execution on distinct buffers is.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans s;
        return s;
    }
    struct Pair {
        fftw_plan fwd = nullptr, bwd = nullptr;
    };
    Pair get(int n) {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        Pair p;
        p.fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_free(buf);
        plans_[n] = p;
        return p;
    }

private:
    FftPlans() = default;
    std::mutex mu_;
    std::map<int, Pair> plans_;
};

/// Differentiate one strided line of length n in place of `scratch`.
/// Multiplies mode m by i*2*pi*m; the caller divides by n (FFTW is unscaled).
inline void spectral_line(const FftPlans::Pair& plans, int n, fftw_complex* scratch) {
    fftw_execute_dft(plans.fwd, scratch, scratch);
    const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    for (int k = 0; k < n; ++k) {
        int m = (k <= n / 2) ? k : k - n;
        if (k == n / 2) m = 0;  // Nyquist mode has no consistent odd derivative
        double w = two_pi * m;
        double re = scratch[k][0], im = scratch[k][1];
        scratch[k][0] = -im * w;
        scratch[k][1] = re * w;
    }
    fftw_execute_dft(plans.bwd, scratch, scratch);
}

}  // namespace detail

/// Spectral derivative of `ncomps` interleaved component arrays
/// (layout in[pt*ncomps + c]) along an active axis. `in` and `out` may not
/// alias.
inline void differentiate_raw(const FlatChart& ch, int axis, std::size_t ncomps,
                              const double* in, double* out) {
    int slot = -1;
    for (int i = 0; i < ch.num_active(); ++i)
        if (ch.active_axes()[i] == axis) slot = i;
    if (slot < 0) throw numerical_error("differentiate", "axis is not active");
    const int n = ch.resolution();
    const std::size_t stride = ch.stride(slot);
    const std::size_t npts = ch.num_points();

    auto plans = detail::FftPlans::instance().get(n);

    // line base points: those whose index along `slot` is zero
    std::vector<std::size_t> bases;
    bases.reserve(npts / n);
    {
        std::vector<int> idx(ch.num_active());
        for (std::size_t p = 0; p < npts; ++p) {
            ch.unravel(p, idx.data());
            if (idx[slot] == 0) bases.push_back(p);
        }
    }

    parallel_for(ncomps * bases.size(), [&](std::size_t lo, std::size_t hi) {
        auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        for (std::size_t w = lo; w < hi; ++w) {
            std::size_t c = w / bases.size();
            std::size_t base = bases[w % bases.size()];
            for (int k = 0; k < n; ++k) {
                scratch[k][0] = in[(base + k * stride) * ncomps + c];
                scratch[k][1] = 0.0;
            }
            detail::spectral_line(plans, n, scratch);
            for (int k = 0; k < n; ++k)
                out[(base + k * stride) * ncomps + c] = scratch[k][0] / n;
        }
        fftw_free(scratch);
    });
}

/// Componentwise coordinate derivative along `axis`. Exact jets take
/// precedence; active axes otherwise use the discrete Fourier transform
/// (frequencies are integers in lattice-fraction coordinates); inactive axes
/// give the zero field. A centered 4th-order finite-difference path exists
/// for diagnostics.
inline TensorField differentiate(const TensorField& f, int axis,
                                 DiffMethod method = DiffMethod::automatic) {
    const FlatChart& ch = f.chart();
    if (axis < 0 || axis >= ch.dim())
        throw numerical_error("differentiate", "axis out of range");
    TensorField out(f.chart_ptr(), f.variance());
    if (!ch.is_active(axis)) return out;  // structurally zero

    if (method != DiffMethod::fd4 && f.jet()) {
        auto dj = f.jet()->derivative ? f.jet()->derivative(axis) : nullptr;
        if (dj) return sample(f.chart_ptr(), dj, f.variance());
    }

    if (method == DiffMethod::fd4) {
        // centered 4th-order stencil with periodic wrap; diagnostics only
        int slot = -1;
        for (int i = 0; i < ch.num_active(); ++i)
            if (ch.active_axes()[i] == axis) slot = i;
        const int n = ch.resolution();
        const double h = 1.0 / n;
        const std::size_t nc = f.comps();
        std::vector<int> idx(ch.num_active());
        for (std::size_t p = 0; p < ch.num_points(); ++p) {
            ch.unravel(p, idx.data());
            auto shifted = [&](int d) {
                std::vector<int> q = idx;
                q[slot] += d;
                return ch.ravel(q.data());
            };
            std::size_t m2 = shifted(-2), m1 = shifted(-1), p1 = shifted(1), p2 = shifted(2);
            for (std::size_t c = 0; c < nc; ++c)
                out(p, c) = (f(m2, c) - 8.0 * f(m1, c) + 8.0 * f(p1, c) - f(p2, c)) / (12.0 * h);
        }
        return out;
    }

    differentiate_raw(ch, axis, f.comps(), f.data(), out.data());
    return out;
}

}  // namespace hermgeo
