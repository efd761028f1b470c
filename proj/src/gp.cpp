// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/gp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "afar/util.hpp"

namespace afar {

double kernel_eval(const EnuPoint& a, const EnuPoint& b, const KernelParams& k) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return k.signal_var * std::exp(-(dx * dx + dy * dy) / (2.0 * k.lengthscale_m * k.lengthscale_m));
}

struct GpModel::Impl {
    std::vector<EnuPoint> x;
    Eigen::MatrixXd chol_lower;  // L with L*L^T = K + noise_var*I
    Eigen::VectorXd alpha;       // (K + noise_var*I)^-1 (y - prior)
};

GpModel::GpModel(const KernelParams& k) : kernel_(k), impl_(std::make_unique<Impl>()) {
    if (k.lengthscale_m <= 1.0 || k.lengthscale_m >= 1000.0)
        throw std::invalid_argument("gp lengthscale must lie in (1, 1000) m");
    if (k.signal_var <= 0.0 || k.noise_var <= 0.0)
        throw std::invalid_argument("gp variances must be positive");
}

GpModel::~GpModel() = default;
GpModel::GpModel(GpModel&&) noexcept = default;
GpModel& GpModel::operator=(GpModel&&) noexcept = default;

int GpModel::size() const { return static_cast<int>(impl_->x.size()); }

void GpModel::fit(std::span<const EnuPoint> x, std::span<const double> y) {
    if (x.empty() || x.size() != y.size())
        throw std::invalid_argument("gp fit needs n >= 1 points with matching targets");
    const int n = static_cast<int>(x.size());

    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = kernel_eval(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)], kernel_);
            K(i, j) = v;
            K(j, i) = v;
        }
        K(i, i) += kernel_.noise_var;
    }

    Eigen::LLT<Eigen::MatrixXd> llt(K);
    assert(llt.info() == Eigen::Success);  // noise_var > 0 keeps K positive definite

    Eigen::VectorXd centered(n);
    for (int i = 0; i < n; ++i) centered(i) = y[static_cast<size_t>(i)] - kernel_.prior_mean_dbm;

    impl_->x.assign(x.begin(), x.end());
    impl_->chol_lower = llt.matrixL();
    impl_->alpha = llt.solve(centered);
}

std::pair<double, double> GpModel::predict(const EnuPoint& q) const {
    double mean, var;
    predict_batch({&q, 1}, {&mean, 1}, {&var, 1});
    return {mean, var};
}

void GpModel::predict_batch(std::span<const EnuPoint> q, std::span<double> mean,
                            std::span<double> var) const {
    const int n = size();
    const int m = static_cast<int>(q.size());
    assert(mean.size() == q.size());
    assert(var.empty() || var.size() == q.size());

    if (n == 0) {
        std::fill(mean.begin(), mean.end(), kernel_.prior_mean_dbm);
        std::fill(var.begin(), var.end(), kernel_.signal_var);
        return;
    }

    Eigen::MatrixXd kstar(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            kstar(i, j) = kernel_eval(impl_->x[static_cast<size_t>(i)], q[static_cast<size_t>(j)], kernel_);

    const Eigen::VectorXd mu = kstar.transpose() * impl_->alpha;
    for (int j = 0; j < m; ++j) mean[static_cast<size_t>(j)] = kernel_.prior_mean_dbm + mu(j);

    if (!var.empty()) {
        // var = k(q,q) - |L^-1 k*|^2
        const Eigen::MatrixXd v =
            impl_->chol_lower.triangularView<Eigen::Lower>().solve(kstar);
        for (int j = 0; j < m; ++j) {
            const double raw = kernel_.signal_var - v.col(j).squaredNorm();
            var[static_cast<size_t>(j)] = std::clamp(raw, 0.0, kernel_.signal_var);
        }
    }
}

RadioMapGrid::RadioMapGrid(const GeoRect& rect, int nx, int ny, const GeoPoint& enu_origin)
    : rect_(rect), nx_(nx), ny_(ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("radio map grid needs nx, ny >= 2");
    const size_t total = static_cast<size_t>(nx) * static_cast<size_t>(ny);
    nodes_geo_.reserve(total);
    nodes_enu_.reserve(total);
    for (int iy = 0; iy < ny; ++iy) {
        const double lat = rect.south + (rect.north - rect.south) * iy / (ny - 1);
        for (int ix = 0; ix < nx; ++ix) {
            const double lon = rect.west + (rect.east - rect.west) * ix / (nx - 1);
            GeoPoint g{lat, lon, 0.0};
            nodes_geo_.push_back(g);
            nodes_enu_.push_back(to_enu(g, enu_origin));
        }
    }
    mean_.assign(total, 0.0);
    var_.assign(total, 0.0);
}

void RadioMapGrid::update(const GpModel& model, bool with_variance) {
    if (!populated_) {
        mean_.assign(mean_.size(), model.kernel().prior_mean_dbm);
        var_.assign(var_.size(), model.kernel().signal_var);
    }
    model.predict_batch(nodes_enu_, mean_, with_variance ? std::span<double>(var_) : std::span<double>());
    populated_ = true;
}

void RadioMapGrid::write_csv(std::ostream& os) const {
    os << "lon,lat,mean_dbm,var_db2\n";
    for (size_t i = 0; i < nodes_geo_.size(); ++i) {
        os << fmt_g9(nodes_geo_[i].lon) << ',' << fmt_g9(nodes_geo_[i].lat) << ','
           << fmt_g9(mean_[i]) << ',' << fmt_g9(var_[i]) << '\n';
    }
}

namespace {
int argmax_index(const RadioMapGrid& grid, bool with_ucb, double kappa) {
    if (!grid.populated()) throw std::logic_error("radio map grid not populated");
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
        const size_t u = static_cast<size_t>(i);
        const double score =
            with_ucb ? grid.mean()[u] + kappa * std::sqrt(std::max(grid.var()[u], 0.0))
                     : grid.mean()[u];
        if (score > best_score) {  // strict: first index wins ties
            best_score = score;
            best = i;
        }
    }
    return best;
}
} // namespace

GeoPoint acquire_ucb(const RadioMapGrid& grid, double kappa) {
    if (kappa < 0.0) throw std::invalid_argument("ucb kappa must be >= 0");
    return grid.node_geo(argmax_index(grid, true, kappa));
}

GeoPoint estimate_peak(const RadioMapGrid& grid) {
    return grid.node_geo(argmax_index(grid, false, 0.0));
}

} // namespace afar
