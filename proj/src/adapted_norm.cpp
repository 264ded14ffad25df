#include "toruscohom/adapted_norm.hpp"

#include <cmath>

namespace toruscohom {

Eigen::VectorXd float_vector(const LatticeVector& m) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(m.size()));
    for (size_t i = 0; i < m.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double(m[i]);
    return v;
}

AdaptedNorm build_adapted_norm(const DualMap& B, const HyperbolicSplitting& splitting) {
    AdaptedNorm nm;
    nm.splitting = splitting;
    nm.coords = invariant_coordinates(B, splitting);
    nm.Bf = float_matrix(B.B());
    nm.Binvf = float_matrix(B.B_inverse());
    const int p = B.dim();

    // Smallest n >= 1 with both restricted n-th powers strictly contracting.
    const int cap = 10000;
    Eigen::MatrixXd Ps = nm.coords.Bstable;
    Eigen::MatrixXd Pu = nm.coords.BinvUnstable;
    auto sigma_max = [](const Eigen::MatrixXd& M) {
        if (M.rows() == 0) return 0.0;
        if (M.rows() == 1 && M.cols() == 1) return std::abs(M(0, 0));
        return M.jacobiSvd().singularValues()(0);
    };
    int n = 0;
    double theta_n_minus = 0.0, theta_n_plus = 0.0;
    for (int k = 1; k <= cap; ++k) {
        theta_n_minus = sigma_max(Ps);
        theta_n_plus = sigma_max(Pu);
        if (theta_n_minus < 1.0 && theta_n_plus < 1.0) {
            n = k;
            break;
        }
        Ps = Ps * nm.coords.Bstable;
        Pu = Pu * nm.coords.BinvUnstable;
    }
    if (n == 0)
        throw NotHyperbolicError(
            "build_adapted_norm: no exponent up to 10000 contracts both subspaces");
    nm.n = n;

    // Certified contraction rates under the adapted norm.  For x in E_-:
    //   |Bx|_* = |x|_* - |x| + |B^n x|  <=  |x|_* - (1 - theta_n)|x|,
    // and |x|_* <= (1 + alpha)|x| with alpha = sum_{k=1}^{n-1} |B^k|E_-|, so
    //   |Bx|_* / |x|_*  <=  (alpha + theta_n) / (alpha + 1).
    // Exact (not just a bound) when n = 1.  Symmetrically on E_+.
    double alpha_minus = 0.0, alpha_plus = 0.0;
    for (int k = 1; k < n; ++k) {
        alpha_minus += restricted_stable_norm(nm.coords, k);
        alpha_plus += restricted_unstable_norm(nm.coords, k);
    }
    nm.thetaMinus = (alpha_minus + theta_n_minus) / (alpha_minus + 1.0);
    nm.thetaPlusInv = (alpha_plus + theta_n_plus) / (alpha_plus + 1.0);

    // Certified sandwich constants: |x|_1 <= sqrt(p)|x|_2 <= sqrt(p)(|x_-| + |x_+|)
    // <= 2 sqrt(p) |x|_*, and |x|_* <= n * max_k |B^{+-k}| * (|Pi_-| + |Pi_+|) * |x|_1.
    nm.mu = 2.0 * std::sqrt(static_cast<double>(p));
    double max_power = 1.0;
    Eigen::MatrixXd Fwd = Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd Bwd = Eigen::MatrixXd::Identity(p, p);
    for (int k = 1; k < n; ++k) {
        Fwd = Fwd * nm.Bf;
        Bwd = Bwd * nm.Binvf;
        max_power = std::max({max_power, sigma_max(Fwd), sigma_max(Bwd)});
    }
    const double proj_sum = sigma_max(splitting.PiMinus) + sigma_max(splitting.PiPlus);
    nm.eta = 1.0 / (static_cast<double>(n) * max_power * proj_sum);
    return nm;
}

double norm_star_minus(const AdaptedNorm& nm, const Eigen::VectorXd& x) {
    Eigen::VectorXd v = nm.splitting.PiMinus * x;
    double s = 0.0;
    for (int k = 0; k < nm.n; ++k) {
        s += v.norm();
        if (k + 1 < nm.n) v = nm.Bf * v;
    }
    return s;
}

double norm_star_plus(const AdaptedNorm& nm, const Eigen::VectorXd& x) {
    Eigen::VectorXd v = nm.splitting.PiPlus * x;
    double s = 0.0;
    for (int k = 0; k < nm.n; ++k) {
        s += v.norm();
        if (k + 1 < nm.n) v = nm.Binvf * v;
    }
    return s;
}

double norm_star(const AdaptedNorm& nm, const Eigen::VectorXd& x) {
    return std::max(norm_star_minus(nm, x), norm_star_plus(nm, x));
}

double norm_star(const AdaptedNorm& nm, const LatticeVector& m) {
    return norm_star(nm, float_vector(m));
}

VectorClass classify(const AdaptedNorm& nm, const LatticeVector& m) {
    if (is_zero(m)) throw ZeroVectorError("classify: zero frequency has no type");
    Eigen::VectorXd x = float_vector(m);
    return norm_star_plus(nm, x) >= norm_star_minus(nm, x) ? VectorClass::Expanding
                                                           : VectorClass::Contracting;
}

std::pair<double, double> equivalence_constants(const AdaptedNorm& nm) {
    return {nm.eta, nm.mu};
}

}  // namespace toruscohom
