#include "reslab/spectral.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace reslab {

namespace {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

double true_residual(const SparseC& A, Complex lambda, const Vec& v) {
    return ((A * v - lambda * v).norm()) / v.norm();
}

std::vector<EigenPair> dense_eigs(const DiscretizedOperator& op, Complex target, int k) {
    const Eigen::Index n = op.matrix.rows();
    std::vector<EigenPair> out;
    if (op.is_real) {
        Eigen::MatrixXd A = op.matrix.toDense().real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        std::vector<int> idx(n);
        for (Eigen::Index i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()[a] - target) < std::abs(es.eigenvalues()[b] - target);
        });
        for (int i = 0; i < std::min<int>(k, static_cast<int>(n)); ++i) {
            EigenPair p;
            p.value = es.eigenvalues()[idx[i]];
            p.vector = es.eigenvectors().col(idx[i]).cast<Complex>();
            p.residual = true_residual(op.matrix, p.value, p.vector);
            out.push_back(std::move(p));
        }
    } else {
        Mat A = op.matrix.toDense();
        Eigen::ComplexEigenSolver<Mat> es(A);
        std::vector<int> idx(n);
        for (Eigen::Index i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()[a] - target) < std::abs(es.eigenvalues()[b] - target);
        });
        for (int i = 0; i < std::min<int>(k, static_cast<int>(n)); ++i) {
            EigenPair p;
            p.value = es.eigenvalues()[idx[i]];
            p.vector = es.eigenvectors().col(idx[i]);
            p.residual = true_residual(op.matrix, p.value, p.vector);
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

std::vector<EigenPair> eigs_near(const DiscretizedOperator& op, Complex target,
                                 int k, const EigsOptions& opts) {
    if (k < 1) throw std::invalid_argument("eigs_near: k must be >= 1");
    const Eigen::Index n = op.matrix.rows();
    if (n <= opts.dense_cutoff) return dense_eigs(op, target, k);

    // shift-invert factorization, with shift perturbation retries
    Eigen::SparseLU<SparseC> lu;
    Complex sigma = target;
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
        SparseC B = op.matrix;
        SparseC I(n, n);
        I.setIdentity();
        B = B - sigma * I;
        B.makeCompressed();
        lu.compute(B);
        if (lu.info() == Eigen::Success) {
            ok = true;
        } else {
            sigma += Complex(1e-8 + attempt * 1e-6, 1e-8);
        }
    }
    if (!ok) throw std::runtime_error("eigs_near: shift factorization failed");

    const int ncv = static_cast<int>(
        std::min<Eigen::Index>(opts.ncv > 0 ? opts.ncv : std::max(3 * k + 8, 32), n - 1));
    std::vector<EigenPair> locked;
    std::mt19937_64 rng(0x5eedULL);
    auto rand_vec = [&]() {
        Vec v(n);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(u(rng), u(rng));
        return v;
    };

    Vec start = rand_vec();
    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        // orthogonalize the start vector against locked eigenvectors
        for (const auto& L : locked) start -= L.vector.dot(start) * L.vector;
        double nrm = start.norm();
        if (nrm < 1e-200) start = rand_vec();
        start.normalize();

        Mat V(n, ncv + 1);
        Mat H = Mat::Zero(ncv + 1, ncv);
        V.col(0) = start;
        int m = ncv;
        for (int j = 0; j < ncv; ++j) {
            Vec w = lu.solve(V.col(j));
            // deflate locked directions, then modified Gram-Schmidt +一 reorth
            for (const auto& L : locked) w -= L.vector.dot(w) * L.vector;
            for (int i = 0; i <= j; ++i) {
                Complex hij = V.col(i).dot(w);
                H(i, j) += hij;
                w -= hij * V.col(i);
            }
            for (int i = 0; i <= j; ++i) {
                Complex c = V.col(i).dot(w);
                H(i, j) += c;
                w -= c * V.col(i);
            }
            double beta = w.norm();
            H(j + 1, j) = beta;
            if (beta < 1e-12) {
                m = j + 1;
                break;
            }
            V.col(j + 1) = w / beta;
        }

        Eigen::ComplexEigenSolver<Mat> es(H.topLeftCorner(m, m));
        // Ritz values sorted by |mu| descending = nearest to sigma first
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
        });

        int lead_unlocked = -1;
        for (int oi = 0; oi < m && static_cast<int>(locked.size()) < k; ++oi) {
            int i = order[oi];
            Complex mu = es.eigenvalues()[i];
            if (std::abs(mu) < 1e-280) continue;
            Vec y = es.eigenvectors().col(i);
            Vec v = V.leftCols(m) * y;
            v.normalize();
            Complex lambda = sigma + 1.0 / mu;
            double res = true_residual(op.matrix, lambda, v);
            // Pairs near the shift are the physics and held to the tight
            // tolerance; remote pairs (weakly compressed by shift-invert)
            // only inform the stability bookkeeping and may be looser. The
            // achieved residual is reported either way.
            bool near = std::abs(lambda - sigma) <= 0.3;
            double tol_eff = (near ? opts.tol : 1e-6) * std::max(1.0, std::abs(lambda));
            if (res <= tol_eff) {
                bool dup = false;
                for (const auto& L : locked)
                    if (std::abs(L.value - lambda) <
                        1e-8 * (1.0 + std::abs(lambda)) && std::abs(L.vector.dot(v)) > 0.5)
                        dup = true;
                if (!dup) locked.push_back({lambda, v, res});
            } else if (lead_unlocked < 0) {
                lead_unlocked = i;
            }
        }
        if (static_cast<int>(locked.size()) >= k) break;
        // restart from the leading unconverged Ritz direction
        int lead = lead_unlocked >= 0 ? lead_unlocked : (order.empty() ? 0 : order[0]);
        start = V.leftCols(m) * es.eigenvectors().col(lead);
        start += 0.02 * rand_vec();
    }
    if (static_cast<int>(locked.size()) < k)
        throw std::runtime_error("eigs_near: Arnoldi failed to converge requested count");

    std::sort(locked.begin(), locked.end(), [&](const EigenPair& a, const EigenPair& b) {
        return std::abs(a.value - target) < std::abs(b.value - target);
    });
    locked.resize(k);
    return locked;
}

TildeSpectrum tilde_spectrum(const DiscretizedOperator& filled, double h,
                             double window_lo, double window_hi) {
    if (filled.kind != OperatorKind::Filled && filled.kind != OperatorKind::Plain)
        throw std::invalid_argument("tilde_spectrum: expected a real operator");
    const double wmax = std::max(std::abs(window_lo), std::abs(window_hi));
    std::vector<EigenPair> pairs;
    for (int k : {12, 24, 48, 96}) {
        pairs = eigs_near(filled, Complex(0.0), k);
        double farthest = 0.0;
        for (const auto& p : pairs) farthest = std::max(farthest, std::abs(p.value.real()));
        if (farthest > wmax) break;  // the window is fully explored
    }

    TildeSpectrum out;
    double best = std::numeric_limits<double>::infinity();
    const EigenPair* bestp = nullptr;
    for (const auto& p : pairs) {
        double e = p.value.real();
        if (e >= window_lo && e <= window_hi) {
            out.in_window.push_back(e);
            if (std::abs(e) < best) {
                best = std::abs(e);
                bestp = &p;
            }
        }
    }
    std::sort(out.in_window.begin(), out.in_window.end());
    if (!bestp)
        throw std::runtime_error(
            "tilde_spectrum: no eigenvalue in the energy window at this h");
    out.selected = bestp->value.real();
    out.state = bestp->vector;
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) {
        if (&p == bestp) continue;
        gap = std::min(gap, std::abs(p.value.real() - out.selected));
    }
    out.gap = 0.5 * gap;
    out.gap_ok = std::isfinite(out.gap) && out.gap >= h * h * h / 10.0;
    return out;
}

ResonanceSelection select_resonances(const std::vector<EigenPair>& base,
                                     const std::vector<Complex>& run_theta,
                                     const std::vector<Complex>& run_grid,
                                     const std::vector<Complex>& run_box,
                                     const SelectionParams& p) {
    ResonanceSelection sel;
    auto nearest = [](const std::vector<Complex>& v, Complex z) -> std::optional<Complex> {
        if (v.empty()) return std::nullopt;
        Complex best = v[0];
        for (const auto& c : v)
            if (std::abs(c - z) < std::abs(best - z)) best = c;
        return best;
    };

    for (const auto& cand : base) {
        const Complex rho = cand.value;
        const Complex shifted = rho + p.level;
        sel.stab_tol = p.stab_tol_scale * std::max(std::abs(shifted), p.h * p.h);
        // FD convergence allowance for the N -> 2N comparison (3/4 of the
        // second-order error, with margin 3x)
        double ks = std::sqrt(std::max(std::abs(shifted), 1e-12)) / p.h;
        double fd = std::abs(shifted) * std::pow(ks * p.grid_dx, 2) / 16.0;
        sel.grid_tol = std::max(sel.stab_tol, p.grid_tol_scale * 3.0 * fd);

        double arg = std::atan2(shifted.imag(), shifted.real());
        bool in_sector = (rho.imag() <= 1e-10) && (arg <= 1e-10) && (arg > -2.0 * p.theta);
        bool in_window = (rho.real() >= p.window_lo && rho.real() <= p.window_hi);

        auto t = nearest(run_theta, rho);
        auto g = nearest(run_grid, rho);
        auto b = nearest(run_box, rho);
        StabilityDrift drift;
        if (t) drift.theta = std::abs(*t - rho);
        if (g) drift.grid = std::abs(*g - rho);
        if (b) drift.box = std::abs(*b - rho);

        bool stable = t && g && b && drift.theta < sel.stab_tol &&
                      drift.grid < sel.grid_tol && drift.box < sel.stab_tol;
        if (p.theta == 0.0) in_sector = false;  // no sector opens at theta = 0

        if (in_sector && in_window && stable) {
            sel.accepted.push_back({rho, cand.residual, drift});
        } else {
            sel.rejected.emplace_back(rho, drift.theta);
        }
    }
    return sel;
}

}  // namespace reslab
