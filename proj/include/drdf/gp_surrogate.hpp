#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "drdf/error.hpp"

namespace drdf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct KernelParams {
    double length_scale = 1.0;
    /// Starting jitter. fit() escalates by 10x on failure, up to kMaxJitter.
    double jitter = 1e-8;

    static constexpr double kMaxJitter = 1e-4;

    void validate() const {
        if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
            throw InvalidArgument("kernel length_scale must be positive");
        }
        if (!(jitter > 0.0) || jitter > kMaxJitter) {
            throw InvalidArgument("kernel jitter must lie in (0, 1e-4]");
        }
    }
};

/// Matern 5/2 covariance with unit signal variance:
///   (1 + sqrt5 r/l + 5/3 r^2/l^2) exp(-sqrt5 r/l),  r = |a - b|_2
inline double matern52(const Vector& a, const Vector& b, const KernelParams& params) {
    if (a.size() != b.size()) {
        throw InvalidArgument("matern52: dimension mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
    const double r = (a - b).norm();
    const double s = std::sqrt(5.0) * r / params.length_scale;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

namespace detail {
// alpha grows large for clustered training points and the products then
// cancel; accumulate in long double.
template <class A, class B>
double accurate_dot(const A& a, const B& b) {
    long double sum = 0.0L;
    for (Eigen::Index i = 0; i < a.size(); ++i) sum += static_cast<long double>(a(i)) * b(i);
    return static_cast<double>(sum);
}
}  // namespace detail

struct Posterior {
    double mean = 0.0;
    double variance = 0.0;
};

/// Gaussian-process regression model over fixed training data.
///
/// Holds the training inputs, the observation vector, the constant prior
/// mean, the lower Cholesky factor of K + jitter*I and the weights
/// alpha = (K + jitter*I)^-1 (y - m). Immutable once built, so posterior()
/// can be called concurrently.
class GpModel {
public:
    GpModel() = default;

    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] bool empty() const { return points_.empty(); }
    /// Input dimension; 0 for an empty model.
    [[nodiscard]] Eigen::Index dim() const { return points_.empty() ? 0 : points_.front().size(); }

    [[nodiscard]] const std::vector<Vector>& points() const { return points_; }
    [[nodiscard]] const std::vector<double>& observations() const { return observations_; }
    [[nodiscard]] double prior_mean() const { return prior_mean_; }
    [[nodiscard]] const KernelParams& kernel() const { return kernel_; }
    /// Jitter actually used by the successful factorization.
    [[nodiscard]] double jitter_used() const { return jitter_used_; }
    [[nodiscard]] const Matrix& chol() const { return chol_; }
    [[nodiscard]] const Vector& alpha() const { return alpha_; }

    /// Dense covariance matrix K (without jitter).
    [[nodiscard]] Matrix gram() const {
        const auto n = static_cast<Eigen::Index>(points_.size());
        Matrix k(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            k(i, i) = 1.0;
            for (Eigen::Index j = 0; j < i; ++j) {
                k(i, j) = k(j, i) = matern52(points_[i], points_[j], kernel_);
            }
        }
        return k;
    }

    /// Cross-covariance row K' between the query and every training point.
    [[nodiscard]] Vector cross_covariance(const Vector& query) const {
        Vector kq(static_cast<Eigen::Index>(points_.size()));
        for (std::size_t i = 0; i < points_.size(); ++i) {
            kq(static_cast<Eigen::Index>(i)) = matern52(points_[i], query, kernel_);
        }
        return kq;
    }

    /// Posterior variance before clamping at zero.
    [[nodiscard]] Posterior posterior_unclamped(const Vector& query) const {
        if (points_.empty()) return {prior_mean_, 1.0};
        if (query.size() != dim()) {
            throw InvalidArgument("posterior: query dimension " + std::to_string(query.size()) +
                                  " does not match model dimension " + std::to_string(dim()));
        }
        const Vector kq = cross_covariance(query);
        const Vector v = chol_.triangularView<Eigen::Lower>().solve(kq);
        return {prior_mean_ + detail::accurate_dot(kq, alpha_), 1.0 - v.squaredNorm()};
    }

    [[nodiscard]] Posterior posterior(const Vector& query) const {
        auto p = posterior_unclamped(query);
        if (p.variance < 0.0) p.variance = 0.0;
        return p;
    }

    /// Posterior for many queries with a single multi-column triangular solve.
    [[nodiscard]] std::vector<Posterior> posterior_batch(const std::vector<Vector>& queries) const {
        std::vector<Posterior> out(queries.size());
        if (points_.empty()) {
            for (auto& p : out) p = {prior_mean_, 1.0};
            return out;
        }
        const auto n = static_cast<Eigen::Index>(points_.size());
        const auto q = static_cast<Eigen::Index>(queries.size());
        Matrix kq(n, q);
        for (Eigen::Index j = 0; j < q; ++j) {
            if (queries[j].size() != dim()) {
                throw InvalidArgument("posterior: query dimension mismatch");
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                kq(i, j) = matern52(points_[i], queries[j], kernel_);
            }
        }
        const Matrix v = chol_.triangularView<Eigen::Lower>().solve(kq);
        for (Eigen::Index j = 0; j < q; ++j) {
            const double var = 1.0 - v.col(j).squaredNorm();
            out[j] = {prior_mean_ + detail::accurate_dot(kq.col(j), alpha_), var < 0.0 ? 0.0 : var};
        }
        return out;
    }

private:
    friend GpModel fit(std::vector<Vector> points, std::vector<double> observations,
                       double prior_mean, const KernelParams& kernel);

    std::vector<Vector> points_;
    std::vector<double> observations_;
    double prior_mean_ = 0.0;
    KernelParams kernel_{};
    double jitter_used_ = 0.0;
    Matrix chol_;
    Vector alpha_;
};

/// Builds K with matern52, factors K + jitter*I and solves for alpha.
/// Jitter starts at kernel.jitter and grows tenfold per failed attempt.
inline GpModel fit(std::vector<Vector> points, std::vector<double> observations, double prior_mean,
                   const KernelParams& kernel) {
    kernel.validate();
    if (points.size() != observations.size()) {
        throw InvalidArgument("fit: " + std::to_string(points.size()) + " points but " +
                              std::to_string(observations.size()) + " observations");
    }
    for (const auto& p : points) {
        if (p.size() != points.front().size()) throw InvalidArgument("fit: points differ in dimension");
        if (!p.allFinite()) throw InvalidArgument("fit: non-finite training point");
    }
    for (double y : observations) {
        if (!std::isfinite(y)) throw InvalidArgument("fit: non-finite observation");
    }

    GpModel model;
    model.points_ = std::move(points);
    model.observations_ = std::move(observations);
    model.prior_mean_ = prior_mean;
    model.kernel_ = kernel;
    if (model.points_.empty()) {
        model.jitter_used_ = kernel.jitter;
        return model;
    }

    const Matrix k = model.gram();
    const auto n = k.rows();
    Vector residual(n);
    for (Eigen::Index i = 0; i < n; ++i) residual(i) = model.observations_[i] - prior_mean;

    // The ratio guard absorbs rounding: 1e-8 * 10^4 is not exactly 1e-4.
    for (double jitter = kernel.jitter; jitter <= KernelParams::kMaxJitter * (1.0 + 1e-9); jitter *= 10.0) {
        Matrix shifted = k;
        shifted.diagonal().array() += jitter;
        Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() != Eigen::Success) continue;
        Matrix l = llt.matrixL();
        if (!l.diagonal().allFinite() || (l.diagonal().array() <= 0.0).any()) continue;
        model.chol_ = std::move(l);
        model.alpha_ = llt.solve(residual);
        // One round of refinement with the residual accumulated in long double;
        // recovers accuracy lost to near-duplicate training points.
        Vector correction(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            long double r = static_cast<long double>(residual(i)) -
                            static_cast<long double>(jitter) * model.alpha_(i);
            for (Eigen::Index j = 0; j < n; ++j) r -= static_cast<long double>(k(i, j)) * model.alpha_(j);
            correction(i) = static_cast<double>(r);
        }
        model.alpha_ += llt.solve(correction);
        model.jitter_used_ = jitter;
        return model;
    }
    throw SingularKernel("fit: covariance matrix not positive definite even with jitter 1e-4; "
                         "training set likely contains duplicated points");
}

}  // namespace drdf
