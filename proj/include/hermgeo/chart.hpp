#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hermgeo/core.hpp"

namespace hermgeo {

/// Periodic coordinate chart R^{2n}/Lambda in lattice-fraction coordinates:
/// the columns of `basis` generate the lattice, points live in [0,1)^{2n},
/// and fields may vary only along `active_axes`. Grid points along an active
/// axis are the fractions (k + phase)/resolution.
class FlatChart {
public:
    FlatChart(Eigen::MatrixXd basis, std::vector<int> active_axes, int resolution,
              double phase = 0.0)
        : basis_(std::move(basis)),
          active_(std::move(active_axes)),
          res_(resolution),
          phase_(phase) {
        dim_ = static_cast<int>(basis_.rows());
        if (basis_.cols() != dim_) throw numerical_error("chart", "basis must be square");
        det_ = basis_.determinant();
        if (std::abs(det_) <= 0.0) throw numerical_error("chart", "singular lattice basis");
        if (res_ < 8 || res_ % 2 != 0)
            throw numerical_error("chart", "resolution must be even and >= 8, got " + std::to_string(res_));
        for (int a : active_)
            if (a < 0 || a >= dim_) throw numerical_error("chart", "active axis out of range");
        npts_ = 1;
        for (std::size_t i = 0; i < active_.size(); ++i) npts_ *= static_cast<std::size_t>(res_);
        strides_.assign(active_.size(), 1);
        for (int i = static_cast<int>(active_.size()) - 2; i >= 0; --i)
            strides_[i] = strides_[i + 1] * res_;
        // fiber volume: |det basis| over the active-block volume, so that
        // total volume = active cell sum x fiber_volume.
        if (!active_.empty()) {
            Eigen::MatrixXd blk(dim_, static_cast<int>(active_.size()));
            for (std::size_t i = 0; i < active_.size(); ++i) blk.col(static_cast<int>(i)) = basis_.col(active_[i]);
            active_vol_ = std::sqrt((blk.transpose() * blk).determinant());
        } else {
            active_vol_ = 1.0;
        }
        fiber_vol_ = std::abs(det_) / active_vol_;
    }

    int dim() const { return dim_; }
    int resolution() const { return res_; }
    double phase() const { return phase_; }
    std::size_t num_points() const { return npts_; }
    const std::vector<int>& active_axes() const { return active_; }
    int num_active() const { return static_cast<int>(active_.size()); }
    bool is_active(int axis) const {
        for (int a : active_) if (a == axis) return true;
        return false;
    }
    const Eigen::MatrixXd& basis() const { return basis_; }
    double volume() const { return std::abs(det_); }
    double fiber_volume() const { return fiber_vol_; }
    double active_volume() const { return active_vol_; }

    /// Constant coordinate metric of the flat torus: g = B^T B.
    Eigen::MatrixXd coordinate_metric() const { return basis_.transpose() * basis_; }

    /// Grid multi-index of a flat point index, one entry per active axis.
    void unravel(std::size_t p, int* idx) const {
        for (std::size_t i = 0; i < active_.size(); ++i) {
            idx[i] = static_cast<int>(p / strides_[i]);
            p %= strides_[i];
        }
    }
    std::size_t ravel(const int* idx) const {
        std::size_t p = 0;
        for (std::size_t i = 0; i < active_.size(); ++i)
            p += static_cast<std::size_t>((idx[i] % res_ + res_) % res_) * strides_[i];
        return p;
    }
    std::size_t stride(int active_slot) const { return strides_[active_slot]; }

    /// Lattice-fraction coordinates of grid point p (inactive axes are 0).
    std::vector<double> point(std::size_t p) const {
        std::vector<double> x(dim_, 0.0);
        std::vector<int> idx(active_.size());
        unravel(p, idx.data());
        for (std::size_t i = 0; i < active_.size(); ++i)
            x[active_[i]] = (idx[i] + phase_) / res_;
        return x;
    }

    /// Quadrature weight of one grid point, including the fiber factor:
    /// sum_p f(p) * point_weight() is the chart-measure integral of f.
    double point_weight() const { return std::abs(det_) / static_cast<double>(npts_); }

private:
    Eigen::MatrixXd basis_;
    std::vector<int> active_;
    int res_;
    double phase_;
    int dim_;
    double det_, fiber_vol_, active_vol_;
    std::size_t npts_;
    std::vector<std::size_t> strides_;
};

}  // namespace hermgeo
