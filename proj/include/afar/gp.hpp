// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "afar/geodesy.hpp"

namespace afar {

/// RBF-plus-white-noise kernel over 2D ENU positions. Hyperparameters are
/// fixed per episode; no marginal-likelihood optimization.
struct KernelParams {
    double lengthscale_m = 60.0;
    double signal_var = 100.0;     // dB^2
    double noise_var = 25.0;       // dB^2, white term on the training diagonal only
    double prior_mean_dbm = -80.0; // constant prior mean
};

/// signal_var * exp(-|a-b|^2 / (2 * lengthscale^2)), 2D distance (z ignored).
/// The white term never appears in cross-covariances.
double kernel_eval(const EnuPoint& a, const EnuPoint& b, const KernelParams& k);

/// Gaussian-process regressor over 2D positions with cached Cholesky
/// factorization of K + noise_var * I. Refit from scratch on each call to
/// fit(); prediction is O(n) for the mean and O(n^2) for the variance.
class GpModel {
public:
    explicit GpModel(const KernelParams& k = {});
    ~GpModel();
    GpModel(GpModel&&) noexcept;
    GpModel& operator=(GpModel&&) noexcept;
    GpModel(const GpModel&) = delete;
    GpModel& operator=(const GpModel&) = delete;

    /// Fit on n >= 1 points. Targets are centered by the prior mean before
    /// solving; the factorization always exists because noise_var > 0.
    void fit(std::span<const EnuPoint> x, std::span<const double> y);

    /// Posterior (mean_dbm, var_db2) at a query point. An unfit model
    /// returns the prior. Variance is clamped into [0, signal_var].
    std::pair<double, double> predict(const EnuPoint& q) const;

    /// Batched prediction; pass an empty `var` span to skip the variance
    /// solve (the expensive part).
    void predict_batch(std::span<const EnuPoint> q, std::span<double> mean,
                       std::span<double> var) const;

    int size() const;
    const KernelParams& kernel() const { return kernel_; }

private:
    struct Impl;
    KernelParams kernel_;
    std::unique_ptr<Impl> impl_;
};

/// Posterior mean/variance evaluated over a regular lat/lon grid spanning a
/// rectangle. Node (ix, iy) sits at fraction ix/(nx-1) west->east and
/// iy/(ny-1) south->north; the flat index is row-major, iy * nx + ix, and all
/// argmax tie-breaks pick the lowest flat index.
class RadioMapGrid {
public:
    RadioMapGrid(const GeoRect& rect, int nx, int ny, const GeoPoint& enu_origin);

    /// Re-evaluate the posterior over all nodes. Skipping the variance keeps
    /// the previous variance values (prior variance before the first update).
    void update(const GpModel& model, bool with_variance = true);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int size() const { return nx_ * ny_; }
    bool populated() const { return populated_; }
    const GeoRect& rect() const { return rect_; }
    GeoPoint node_geo(int idx) const { return nodes_geo_[static_cast<size_t>(idx)]; }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& var() const { return var_; }
    std::vector<double>& mutable_mean() { return mean_; }
    std::vector<double>& mutable_var() { return var_; }
    void mark_populated() { populated_ = true; }

    /// CSV rows `lon,lat,mean_dbm,var_db2` with a header, 9 significant digits.
    void write_csv(std::ostream& os) const;

private:
    GeoRect rect_;
    int nx_, ny_;
    bool populated_ = false;
    std::vector<GeoPoint> nodes_geo_;
    std::vector<EnuPoint> nodes_enu_;
    std::vector<double> mean_, var_;
};

/// Grid node maximizing mean + kappa * sqrt(var); lowest flat index wins ties.
GeoPoint acquire_ucb(const RadioMapGrid& grid, double kappa);

/// Grid node of maximum posterior mean; lowest flat index wins ties.
GeoPoint estimate_peak(const RadioMapGrid& grid);

} // namespace afar
