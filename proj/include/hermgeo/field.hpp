#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "hermgeo/chart.hpp"
#include "hermgeo/core.hpp"

namespace hermgeo {

enum class Slot : std::uint8_t { upper, lower };
using Variance = std::vector<Slot>;

/// Closed-form tensor: pointwise evaluator plus, when available, its exact
/// per-axis derivative as another AnalyticTensor. Charts with analytic jets
/// differentiate through this chain instead of the spectral path.
struct AnalyticTensor {
    using Eval = std::function<void(const std::vector<double>& x, double* comps)>;
    Eval eval;
    std::function<std::shared_ptr<const AnalyticTensor>(int axis)> derivative;
};

/// Pointwise statistics plus the chart-measure L2 integral of the square.
struct ScalarReport {
    double min = 0.0, max = 0.0, mean = 0.0, l2_integral = 0.0;
};

/// Grid-sampled tensor components over a FlatChart. Components are stored
/// per point, row-major over slots, each index running over the chart
/// dimension. Immutable by convention after construction.
class TensorField {
public:
    TensorField() = default;
    TensorField(std::shared_ptr<const FlatChart> chart, Variance variance)
        : chart_(std::move(chart)), variance_(std::move(variance)) {
        comps_ = 1;
        for (std::size_t r = 0; r < variance_.size(); ++r) comps_ *= static_cast<std::size_t>(dim());
        values_.assign(chart_->num_points() * comps_, 0.0);
    }

    const FlatChart& chart() const { return *chart_; }
    std::shared_ptr<const FlatChart> chart_ptr() const { return chart_; }
    int dim() const { return chart_->dim(); }
    int rank() const { return static_cast<int>(variance_.size()); }
    const Variance& variance() const { return variance_; }
    std::size_t comps() const { return comps_; }
    std::size_t num_points() const { return chart_->num_points(); }
    std::size_t size() const { return values_.size(); }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double* at(std::size_t p) { return values_.data() + p * comps_; }
    const double* at(std::size_t p) const { return values_.data() + p * comps_; }

    double& operator()(std::size_t p, std::size_t c) { return values_[p * comps_ + c]; }
    double operator()(std::size_t p, std::size_t c) const { return values_[p * comps_ + c]; }

    /// Flat component index from slot indices (rank <= 4 overloads).
    std::size_t cidx(int i) const { return static_cast<std::size_t>(i); }
    std::size_t cidx(int i, int j) const { return static_cast<std::size_t>(i * dim() + j); }
    std::size_t cidx(int i, int j, int k) const {
        return static_cast<std::size_t>((i * dim() + j) * dim() + k);
    }
    std::size_t cidx(int i, int j, int k, int l) const {
        return static_cast<std::size_t>(((i * dim() + j) * dim() + k) * dim() + l);
    }

    std::shared_ptr<const AnalyticTensor> jet() const { return jet_; }
    void set_jet(std::shared_ptr<const AnalyticTensor> j) { jet_ = std::move(j); }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    void check_finite(const char* module) const {
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!std::isfinite(values_[i]))
                throw numerical_error(module, "non-finite sample value", static_cast<std::ptrdiff_t>(i / comps_));
    }

private:
    std::shared_ptr<const FlatChart> chart_;
    Variance variance_;
    std::size_t comps_ = 0;
    std::vector<double> values_;
    std::shared_ptr<const AnalyticTensor> jet_;
};

/// Sample component functions at every grid point; attaches the jet when given.
/// Rejects non-finite values naming the grid point.
inline TensorField sample(std::shared_ptr<const FlatChart> chart,
                          const AnalyticTensor::Eval& fn, Variance variance,
                          std::shared_ptr<const AnalyticTensor> jet = nullptr) {
    TensorField f(chart, std::move(variance));
    const std::size_t nc = f.comps();
    parallel_for(f.num_points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) fn(f.chart().point(p), f.at(p));
    });
    for (std::size_t p = 0; p < f.num_points(); ++p)
        for (std::size_t c = 0; c < nc; ++c)
            if (!std::isfinite(f(p, c)))
                throw numerical_error("sample", "non-finite sample value",
                                      static_cast<std::ptrdiff_t>(p));
    f.set_jet(std::move(jet));
    return f;
}

inline TensorField sample(std::shared_ptr<const FlatChart> chart,
                          const std::shared_ptr<const AnalyticTensor>& an, Variance variance) {
    return sample(std::move(chart), an->eval, std::move(variance), an);
}

/// Constant field from per-component values (row-major over slots).
inline TensorField constant_field(std::shared_ptr<const FlatChart> chart, Variance variance,
                                  const std::vector<double>& comps) {
    TensorField f(std::move(chart), std::move(variance));
    for (std::size_t p = 0; p < f.num_points(); ++p)
        std::copy(comps.begin(), comps.end(), f.at(p));
    return f;
}

/// Statistics of a rank-0 field; l2_integral = chart-measure integral of f^2.
inline ScalarReport scalar_report(const TensorField& f) {
    ScalarReport r;
    r.min = f(0, 0);
    r.max = f(0, 0);
    double sum = 0.0, sq = 0.0;
    for (std::size_t p = 0; p < f.num_points(); ++p) {
        double v = f(p, 0);
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
        sum += v;
        sq += v * v;
    }
    r.mean = sum / static_cast<double>(f.num_points());
    r.l2_integral = sq * f.chart().point_weight();
    return r;
}

/// Chart-measure integral of a scalar field (uniform Riemann sum times cell
/// and fiber volumes; exact for trigonometric polynomials below Nyquist).
inline double integrate(const TensorField& f) {
    if (f.rank() != 0) throw numerical_error("integrate", "expects a scalar field");
    double sum = 0.0;
    for (std::size_t p = 0; p < f.num_points(); ++p) sum += f(p, 0);
    return sum * f.chart().point_weight();
}

}  // namespace hermgeo
