#pragma once

#include <Eigen/Dense>

#include "hermgeo/field.hpp"

namespace hermgeo {

/// Metric with its pointwise inverse; both rank-2 fields on the same chart.
struct MetricPack {
    TensorField g;     // lower lower
    TensorField ginv;  // upper upper
    int dim() const { return g.dim(); }
};

/// Invert g at every grid point. Rejects singular points with their location.
inline MetricPack make_metric(TensorField g) {
    const int d = g.dim();
    TensorField gi(g.chart_ptr(), Variance(2, Slot::upper));
    for (std::size_t p = 0; p < g.num_points(); ++p) {
        Eigen::Map<const Eigen::MatrixXd> m(g.at(p), d, d);  // symmetric, order moot
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        if (!lu.isInvertible())
            throw numerical_error("tensor_algebra", "singular metric",
                                  static_cast<std::ptrdiff_t>(p));
        Eigen::Map<Eigen::MatrixXd> out(gi.at(p), d, d);
        out = lu.inverse();
    }
    return MetricPack{std::move(g), std::move(gi)};
}

namespace detail {

inline std::size_t pow_sz(int base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

}  // namespace detail

/// Trace over two slots of opposite variance.
inline TensorField contract(const TensorField& f, int slot_i, int slot_j) {
    const int r = f.rank(), d = f.dim();
    if (slot_i > slot_j) std::swap(slot_i, slot_j);
    if (slot_i < 0 || slot_j >= r || slot_i == slot_j)
        throw numerical_error("tensor_algebra", "bad contraction slots");
    if (f.variance()[slot_i] == f.variance()[slot_j])
        throw numerical_error("tensor_algebra", "contraction needs one upper and one lower slot");
    Variance v;
    for (int s = 0; s < r; ++s)
        if (s != slot_i && s != slot_j) v.push_back(f.variance()[s]);
    TensorField out(f.chart_ptr(), v);

    const std::size_t si = detail::pow_sz(d, r - 1 - slot_i);
    const std::size_t sj = detail::pow_sz(d, r - 1 - slot_j);
    const std::size_t nco = out.comps();
    // map an output component to the base input component with slots i,j = 0
    std::vector<std::size_t> base(nco);
    {
        std::vector<int> oidx(std::max(r - 2, 1), 0);
        for (std::size_t c = 0; c < nco; ++c) {
            std::size_t rem = c;
            for (int s = r - 3; s >= 0; --s) {
                oidx[s] = static_cast<int>(rem % d);
                rem /= d;
            }
            std::size_t b = 0;
            int os = 0;
            for (int s = 0; s < r; ++s) {
                if (s == slot_i || s == slot_j) continue;
                b += static_cast<std::size_t>(oidx[os++]) * detail::pow_sz(d, r - 1 - s);
            }
            base[c] = b;
        }
    }
    parallel_for(f.num_points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const double* in = f.at(p);
            double* o = out.at(p);
            for (std::size_t c = 0; c < nco; ++c) {
                double s = 0.0;
                for (int m = 0; m < d; ++m) s += in[base[c] + m * si + m * sj];
                o[c] = s;
            }
        }
    });
    return out;
}

namespace detail {

/// Contract `slot` of f with a symmetric rank-2 matrix field (g or its
/// inverse), flipping the slot's variance.
inline TensorField metric_move(const TensorField& f, const TensorField& mat, int slot,
                               Slot new_variance) {
    const int r = f.rank(), d = f.dim();
    if (slot < 0 || slot >= r) throw numerical_error("tensor_algebra", "slot out of range");
    Variance v = f.variance();
    v[slot] = new_variance;
    TensorField out(f.chart_ptr(), v);
    const std::size_t ss = pow_sz(d, r - 1 - slot);
    const std::size_t nc = f.comps();
    parallel_for(f.num_points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const double* in = f.at(p);
            const double* M = mat.at(p);
            double* o = out.at(p);
            for (std::size_t c = 0; c < nc; ++c) {
                int ic = static_cast<int>((c / ss) % d);
                std::size_t b = c - static_cast<std::size_t>(ic) * ss;
                double s = 0.0;
                for (int m = 0; m < d; ++m) s += M[ic * d + m] * in[b + m * ss];
                o[c] = s;
            }
        }
    });
    return out;
}

}  // namespace detail

inline TensorField raise_index(const TensorField& f, const MetricPack& mp, int slot) {
    if (f.variance()[slot] != Slot::lower)
        throw numerical_error("tensor_algebra", "raise_index expects a lower slot");
    return detail::metric_move(f, mp.ginv, slot, Slot::upper);
}

inline TensorField lower_index(const TensorField& f, const MetricPack& mp, int slot) {
    if (f.variance()[slot] != Slot::upper)
        throw numerical_error("tensor_algebra", "lower_index expects an upper slot");
    return detail::metric_move(f, mp.g, slot, Slot::lower);
}

/// Pointwise tensor (outer) product.
inline TensorField pointwise_product(const TensorField& a, const TensorField& b) {
    Variance v = a.variance();
    v.insert(v.end(), b.variance().begin(), b.variance().end());
    TensorField out(a.chart_ptr(), v);
    const std::size_t na = a.comps(), nb = b.comps();
    parallel_for(a.num_points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const double* pa = a.at(p);
            const double* pb = b.at(p);
            double* o = out.at(p);
            for (std::size_t i = 0; i < na; ++i)
                for (std::size_t j = 0; j < nb; ++j) o[i * nb + j] = pa[i] * pb[j];
        }
    });
    return out;
}

/// Full metric contraction of f with itself: every slot of the second copy
/// is moved to the opposite variance, then components are dotted.
inline TensorField norm_squared_field(const TensorField& f, const MetricPack& mp) {
    TensorField dual = f;
    for (int s = 0; s < f.rank(); ++s)
        dual = (f.variance()[s] == Slot::lower) ? raise_index(dual, mp, s)
                                                : lower_index(dual, mp, s);
    TensorField out(f.chart_ptr(), {});
    const std::size_t nc = f.comps();
    parallel_for(f.num_points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const double* pa = f.at(p);
            const double* pb = dual.at(p);
            double s = 0.0;
            for (std::size_t c = 0; c < nc; ++c) s += pa[c] * pb[c];
            out(p, 0) = s;
        }
    });
    return out;
}

inline TensorField axpy(double alpha, const TensorField& x, const TensorField& y) {
    TensorField out = y;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] += alpha * x.data()[i];
    return out;
}

inline TensorField scaled(const TensorField& x, double alpha) {
    TensorField out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= alpha;
    return out;
}

inline double max_abs_diff(const TensorField& a, const TensorField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace hermgeo
