#include "toruscohom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace toruscohom {

namespace {

using Complex = std::complex<double>;

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Eigen::MatrixXd poly_eval_matrix(const std::vector<double>& coeffs, const Eigen::MatrixXd& M) {
    const auto p = M.rows();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(p, p);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        R = R * M;
        R.diagonal().array() += *it;
    }
    return R;
}

double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

double to_double(const Integer& x) {
    if (mpz_sizeinbase(x.get_mpz_t(), 2) > 1020)
        return x < 0 ? -HUGE_VAL : HUGE_VAL;
    return x.get_d();
}

Eigen::MatrixXd float_matrix(const IntMatrix& M) {
    const int p = M.dim();
    Eigen::MatrixXd F(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) F(i, j) = to_double(M.at(i, j));
    return F;
}

IntPolynomial::IntPolynomial(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.emplace_back(0);
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs)
    : IntPolynomial(std::vector<Integer>(coeffs.begin(), coeffs.end())) {}

Rational IntPolynomial::evaluate(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + Rational(*it);
        acc.canonicalize();
    }
    return acc;
}

std::complex<double> IntPolynomial::evaluate(std::complex<double> x) const {
    Complex acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& other) const {
    std::vector<Integer> r(coeffs_.size() + other.coeffs_.size() - 1, Integer(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < other.coeffs_.size(); ++j)
            r[i + j] += coeffs_[i] * other.coeffs_[j];
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator-() const {
    std::vector<Integer> r = coeffs_;
    for (auto& c : r) c = -c;
    return IntPolynomial(std::move(r));
}

int Spectrum::degree() const {
    int d = 0;
    for (const auto& r : roots) d += r.multiplicity;
    return d;
}

IntPolynomial char_poly(const IntMatrix& A) {
    // Faddeev-LeVerrier for det(XI - A): all divisions by k are exact.
    const int p = A.dim();
    std::vector<Integer> c(static_cast<size_t>(p) + 1, Integer(0));
    c[p] = 1;
    IntMatrix M(p);  // M_0 = 0
    for (int k = 1; k <= p; ++k) {
        // M_k = A M_{k-1} + c_{p-k+1} I
        M = A * M;
        for (int i = 0; i < p; ++i) M.at(i, i) += c[p - k + 1];
        IntMatrix AM = A * M;
        Integer tr(0);
        for (int i = 0; i < p; ++i) tr += AM.at(i, i);
        tr = -tr;
        mpz_divexact_ui(c[p - k].get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
    }
    // Convention: det(A - XI) = (-1)^p det(XI - A).
    if (p % 2 != 0)
        for (auto& ck : c) ck = -ck;
    return IntPolynomial(std::move(c));
}

Spectrum roots(const IntPolynomial& poly, double tol) {
    if (poly.degree() < 1)
        throw DimensionMismatchError("roots: polynomial degree must be >= 1");

    // Split off roots at zero exactly.
    std::vector<Integer> c = poly.coefficients();
    int zeros = 0;
    while (c.size() > 1 && c.front() == 0) {
        c.erase(c.begin());
        ++zeros;
    }
    const int n = static_cast<int>(c.size()) - 1;

    std::vector<Complex> z;
    if (n >= 1) {
        // Monic double coefficients m[0..n], m[n] = 1.
        const double lead = to_double(c.back());
        std::vector<double> m(c.size());
        for (size_t i = 0; i < c.size(); ++i) m[i] = to_double(c[i]) / lead;

        double radius = 1.0;
        for (int i = 0; i < n; ++i) radius = std::max(radius, 1.0 + std::abs(m[i]));

        z.resize(n);
        for (int j = 0; j < n; ++j) {
            double angle = 2.0 * M_PI * j / n + 0.4;
            z[j] = radius * Complex(std::cos(angle), std::sin(angle));
        }

        auto eval = [&](Complex x, Complex& value, Complex& deriv) {
            Complex v(0.0), d(0.0);
            for (int i = n; i >= 0; --i) {
                d = d * x + v;
                v = v * x + m[static_cast<size_t>(i)];
            }
            value = v;
            deriv = d;
        };
        auto scale_at = [&](Complex x) {
            double s = 0.0, ax = std::abs(x), pw = 1.0;
            for (int i = 0; i <= n; ++i, pw *= ax) s += std::abs(m[static_cast<size_t>(i)]) * pw;
            return s;
        };

        // Aberth-Ehrlich with in-place updates.
        const int max_iter = 500;
        const double floor_tol = 8.0 * std::numeric_limits<double>::epsilon();
        for (int iter = 0; iter < max_iter; ++iter) {
            double max_step = 0.0;
            bool all_at_floor = true;
            for (int i = 0; i < n; ++i) {
                Complex value, deriv;
                eval(z[i], value, deriv);
                if (std::abs(value) > floor_tol * scale_at(z[i])) all_at_floor = false;
                if (value == Complex(0.0)) continue;
                if (deriv == Complex(0.0)) {
                    z[i] += Complex(1e-6 * radius, 1e-6 * radius);
                    max_step = radius;
                    continue;
                }
                Complex newton = value / deriv;
                Complex repulsion(0.0);
                for (int j = 0; j < n; ++j)
                    if (j != i) repulsion += 1.0 / (z[i] - z[j]);
                Complex denom = 1.0 - newton * repulsion;
                Complex step = (denom == Complex(0.0)) ? newton : newton / denom;
                z[i] -= step;
                max_step = std::max(max_step, std::abs(step));
            }
            if (all_at_floor || max_step < 1e-15 * radius) break;
        }

        for (int i = 0; i < n; ++i) {
            Complex value, deriv;
            eval(z[i], value, deriv);
            if (std::abs(value) > tol * scale_at(z[i]))
                throw NoConvergenceError("roots: residual above tolerance after iteration cap");
        }
    }

    // Cluster nearby approximations into multiple roots.
    const double cluster_radius = std::sqrt(tol);
    std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<RootCluster> clusters;
    std::vector<bool> used(z.size(), false);
    for (size_t i = 0; i < z.size(); ++i) {
        if (used[i]) continue;
        Complex centroid = z[i];
        std::vector<size_t> members{i};
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t j = 0; j < z.size(); ++j) {
                if (used[j] || std::abs(z[j] - centroid) > cluster_radius) continue;
                members.push_back(j);
                used[j] = true;
                grew = true;
                centroid = Complex(0.0);
                for (size_t k : members) centroid += z[k];
                centroid /= static_cast<double>(members.size());
            }
        }
        clusters.push_back({centroid, static_cast<int>(members.size())});
    }
    // Polish each cluster: a root of multiplicity mu is a simple root of the
    // (mu-1)-th derivative, where plain Newton converges quadratically.  This
    // recovers full double precision for multiple roots, whose raw cluster
    // centroids are only sqrt(eps)-accurate.
    for (auto& cl : clusters) {
        std::vector<Integer> d = c;
        for (int t = 1; t < cl.multiplicity; ++t) {
            std::vector<Integer> dd(d.size() - 1);
            for (size_t i = 0; i + 1 < d.size(); ++i) dd[i] = d[i + 1] * Integer(i + 1);
            d = std::move(dd);
        }
        for (int step = 0; step < 6; ++step) {
            Complex v(0.0), dv(0.0);
            for (auto it = d.rbegin(); it != d.rend(); ++it) {
                dv = dv * cl.value + v;
                v = v * cl.value + to_double(*it);
            }
            if (dv == Complex(0.0)) break;
            Complex delta = v / dv;
            if (!(std::abs(delta) < 4.0 * cluster_radius)) break;
            cl.value -= delta;
            if (std::abs(delta) < 1e-16 * (1.0 + std::abs(cl.value))) break;
        }
    }
    if (zeros > 0) clusters.push_back({Complex(0.0), zeros});

    // Enforce conjugation symmetry: snap near-real values, pair the rest.
    for (auto& cl : clusters)
        if (std::abs(cl.value.imag()) <= cluster_radius) cl.value.imag(0.0);
    std::vector<bool> paired(clusters.size(), false);
    for (size_t i = 0; i < clusters.size(); ++i) {
        if (paired[i] || clusters[i].value.imag() <= 0.0) continue;
        size_t best = clusters.size();
        double best_dist = 2.0 * cluster_radius;
        for (size_t j = 0; j < clusters.size(); ++j) {
            if (paired[j] || clusters[j].value.imag() >= 0.0) continue;
            double dist = std::abs(std::conj(clusters[j].value) - clusters[i].value);
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best == clusters.size() || clusters[best].multiplicity != clusters[i].multiplicity)
            throw NoConvergenceError("roots: conjugate symmetry could not be restored");
        Complex v = 0.5 * (clusters[i].value + std::conj(clusters[best].value));
        clusters[i].value = v;
        clusters[best].value = std::conj(v);
        paired[i] = paired[best] = true;
    }

    std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });

    Spectrum s;
    s.roots = std::move(clusters);
    for (const auto& r : s.roots)
        if (std::abs(r.value) < 1.0) s.stableCount += r.multiplicity;
    return s;
}

bool is_hyperbolic(const Spectrum& s, double band) {
    for (const auto& r : s.roots)
        if (std::abs(std::abs(r.value) - 1.0) <= band) return false;
    return true;
}

IntMatrix companion_matrix(const IntPolynomial& poly) {
    const int p = poly.degree();
    if (p < 1) throw DimensionMismatchError("companion_matrix: degree must be >= 1");

    std::vector<Integer> c = poly.coefficients();
    if (c.back() == -1)
        for (auto& ck : c) ck = -ck;
    if (c.back() != 1)
        throw NotUnimodularPolynomialError("companion_matrix: leading coefficient must be +-1");
    if (c.front() != 1 && c.front() != -1)
        throw NotUnimodularPolynomialError("companion_matrix: constant term must be +-1");

    IntMatrix C(p);
    for (int i = 0; i + 1 < p; ++i) C.at(i + 1, i) = 1;
    for (int i = 0; i < p; ++i) C.at(i, p - 1) = -c[static_cast<size_t>(i)];
    return C;
}

HyperbolicSplitting splitting(const DualMap& B, const Spectrum& s) {
    const int p = B.dim();
    if (s.degree() != p)
        throw DimensionMismatchError("splitting: spectrum degree does not match matrix dimension");

    // Real stable/unstable factors of the characteristic polynomial.
    std::vector<double> ps{1.0}, pu{1.0};
    double rhoMinus = 0.0, rhoPlusInv = 0.0;
    for (const auto& r : s.roots) {
        const double mod = std::abs(r.value);
        if (r.value.imag() < 0.0) continue;  // conjugate handled with its partner
        std::vector<double> factor;
        if (r.value.imag() == 0.0)
            factor = {-r.value.real(), 1.0};
        else
            factor = {mod * mod, -2.0 * r.value.real(), 1.0};
        for (int k = 0; k < r.multiplicity; ++k) {
            if (mod < 1.0)
                ps = poly_mul(ps, factor);
            else
                pu = poly_mul(pu, factor);
        }
        if (mod < 1.0)
            rhoMinus = std::max(rhoMinus, mod);
        else
            rhoPlusInv = std::max(rhoPlusInv, 1.0 / mod);
    }
    const int q = static_cast<int>(ps.size()) - 1;
    const int u = static_cast<int>(pu.size()) - 1;

    Eigen::MatrixXd Bf = float_matrix(B.B());
    HyperbolicSplitting S;
    S.spectrum = s;
    S.rhoMinus = rhoMinus;
    S.rhoPlusInv = rhoPlusInv;

    if (q == 0 || u == 0) {
        S.PiPlus = (q == 0) ? Eigen::MatrixXd(Eigen::MatrixXd::Identity(p, p))
                            : Eigen::MatrixXd(Eigen::MatrixXd::Zero(p, p));
        S.PiMinus = Eigen::MatrixXd::Identity(p, p) - S.PiPlus;
        return S;
    }

    // Bezout: u(X) ps(X) + v(X) pu(X) = 1 with deg u < deg pu, deg v < deg ps.
    // Columns 0..u-1 hold shifts of ps, columns u..u+q-1 shifts of pu.
    Eigen::MatrixXd sylvester = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < u; ++i)
        for (int t = 0; t <= q; ++t) sylvester(t + i, i) = ps[static_cast<size_t>(t)];
    for (int j = 0; j < q; ++j)
        for (int t = 0; t <= u; ++t) sylvester(t + j, u + j) = pu[static_cast<size_t>(t)];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
    rhs(0) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sylvester);
    if (!lu.isInvertible())
        throw IllConditionedError("splitting: stable and unstable factors share a root");
    Eigen::VectorXd sol = lu.solve(rhs);

    std::vector<double> ucoef(sol.data(), sol.data() + u);
    std::vector<double> vcoef(sol.data() + u, sol.data() + p);

    S.PiPlus = poly_eval_matrix(ucoef, Bf) * poly_eval_matrix(ps, Bf);
    S.PiMinus = poly_eval_matrix(vcoef, Bf) * poly_eval_matrix(pu, Bf);

    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
    const double r_resolution = max_abs(S.PiMinus + S.PiPlus - I);
    const double r_idem_minus = max_abs(S.PiMinus * S.PiMinus - S.PiMinus);
    const double r_idem_plus = max_abs(S.PiPlus * S.PiPlus - S.PiPlus);
    const double r_cross = max_abs(S.PiMinus * S.PiPlus);
    const double r_comm_minus = max_abs(Bf * S.PiMinus - S.PiMinus * Bf);
    const double r_comm_plus = max_abs(Bf * S.PiPlus - S.PiPlus * Bf);
    const double worst = std::max({r_resolution, r_idem_minus, r_idem_plus, r_cross,
                                   r_comm_minus, r_comm_plus});
    if (worst > 1e-8)
        throw IllConditionedError("splitting: projector residual " + std::to_string(worst) +
                                  " exceeds 1e-8 (eigenvalues too close to the unit circle)");

    // A rank-r projector has r singular values >= 1; anything below 1e-6 is
    // residual noise (already bounded by 1e-8 above).
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_minus(S.PiMinus);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_plus(S.PiPlus);
    qr_minus.setThreshold(1e-6);
    qr_plus.setThreshold(1e-6);
    if (qr_minus.rank() != q || qr_plus.rank() != u)
        throw IllConditionedError("splitting: projector rank does not match stable count");

    return S;
}

InvariantCoordinates invariant_coordinates(const DualMap& B, const HyperbolicSplitting& S) {
    const int p = B.dim();
    const Eigen::MatrixXd Bf = float_matrix(B.B());
    const Eigen::MatrixXd Binvf = float_matrix(B.B_inverse());

    auto orthonormal_range = [p](const Eigen::MatrixXd& Pi) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Pi);
        qr.setThreshold(1e-6);
        const auto r = qr.rank();
        return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(p, r));
    };

    InvariantCoordinates C;
    C.Qminus = orthonormal_range(S.PiMinus);
    C.Qplus = orthonormal_range(S.PiPlus);
    C.Bstable = C.Qminus.transpose() * Bf * C.Qminus;
    C.BinvUnstable = C.Qplus.transpose() * Binvf * C.Qplus;

    const double drift_minus =
        C.Qminus.size() == 0 ? 0.0 : max_abs(Bf * C.Qminus - C.Qminus * C.Bstable);
    const double drift_plus =
        C.Qplus.size() == 0 ? 0.0 : max_abs(Binvf * C.Qplus - C.Qplus * C.BinvUnstable);
    if (std::max(drift_minus, drift_plus) > 1e-8)
        throw IllConditionedError("invariant_coordinates: invariance drift exceeds 1e-8");
    return C;
}

double power_operator_norm(const Eigen::MatrixXd& M, long k) {
    if (M.rows() == 0) return 0.0;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(M.rows(), M.cols());
    Eigen::MatrixXd base = M;
    long e = k;
    while (e > 0) {
        if (e & 1) P = P * base;
        base = base * base;
        e >>= 1;
    }
    if (P.rows() == 1 && P.cols() == 1) return std::abs(P(0, 0));
    return P.jacobiSvd().singularValues()(0);
}

double restricted_stable_norm(const InvariantCoordinates& C, long k) {
    return power_operator_norm(C.Bstable, k);
}

double restricted_unstable_norm(const InvariantCoordinates& C, long k) {
    return power_operator_norm(C.BinvUnstable, k);
}

}  // namespace toruscohom
