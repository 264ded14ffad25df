#include "toruscohom/lattice_core.hpp"

#include <string>

namespace toruscohom {

IntMatrix::IntMatrix(int p, std::initializer_list<long> entries) : IntMatrix(p) {
    if (entries.size() != static_cast<size_t>(p) * p)
        throw DimensionMismatchError("IntMatrix: entry count does not match dimension");
    size_t idx = 0;
    for (long e : entries) entries_[idx++] = Integer(e);
}

IntMatrix IntMatrix::identity(int p) {
    IntMatrix I(p);
    for (int i = 0; i < p; ++i) I.at(i, i) = 1;
    return I;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix T(p_);
    for (int i = 0; i < p_; ++i)
        for (int j = 0; j < p_; ++j) T.at(j, i) = at(i, j);
    return T;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
    if (p_ != other.p_) throw DimensionMismatchError("IntMatrix multiply: dimension mismatch");
    IntMatrix R(p_);
    for (int i = 0; i < p_; ++i)
        for (int k = 0; k < p_; ++k) {
            const Integer& aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < p_; ++j) R.at(i, j) += aik * other.at(k, j);
        }
    return R;
}

LatticeVector IntMatrix::operator*(const LatticeVector& v) const {
    if (static_cast<int>(v.size()) != p_)
        throw DimensionMismatchError("IntMatrix apply: vector length mismatch");
    LatticeVector r(p_, Integer(0));
    for (int i = 0; i < p_; ++i)
        for (int j = 0; j < p_; ++j) r[i] += at(i, j) * v[j];
    return r;
}

RationalVector IntMatrix::operator*(const RationalVector& v) const {
    if (static_cast<int>(v.size()) != p_)
        throw DimensionMismatchError("IntMatrix apply: vector length mismatch");
    RationalVector r(p_, Rational(0));
    for (int i = 0; i < p_; ++i) {
        for (int j = 0; j < p_; ++j) r[i] += Rational(at(i, j)) * v[j];
        r[i].canonicalize();
    }
    return r;
}

Integer IntMatrix::determinant() const {
    // Bareiss fraction-free elimination: every division below is exact.
    const int p = p_;
    std::vector<Integer> m(entries_);
    auto e = [&](int i, int j) -> Integer& { return m[static_cast<size_t>(i) * p + j]; };

    int sign = 1;
    Integer prev(1);
    for (int k = 0; k + 1 < p; ++k) {
        if (e(k, k) == 0) {
            int pivot = -1;
            for (int i = k + 1; i < p; ++i)
                if (e(i, k) != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return Integer(0);
            for (int j = 0; j < p; ++j) std::swap(e(k, j), e(pivot, j));
            sign = -sign;
        }
        for (int i = k + 1; i < p; ++i) {
            for (int j = k + 1; j < p; ++j) {
                Integer num = e(i, j) * e(k, k) - e(i, k) * e(k, j);
                mpz_divexact(e(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            e(i, k) = 0;
        }
        prev = e(k, k);
    }
    return sign > 0 ? e(p - 1, p - 1) : Integer(-e(p - 1, p - 1));
}

IntMatrix IntMatrix::adjugate() const {
    const int p = p_;
    IntMatrix adj(p);
    if (p == 1) {
        adj.at(0, 0) = 1;  // det of the empty minor
        return adj;
    }
    IntMatrix minor(p - 1);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            int mi = 0;
            for (int r = 0; r < p; ++r) {
                if (r == i) continue;
                int mj = 0;
                for (int c = 0; c < p; ++c) {
                    if (c == j) continue;
                    minor.at(mi, mj) = at(r, c);
                    ++mj;
                }
                ++mi;
            }
            Integer cof = minor.determinant();
            if ((i + j) % 2 != 0) cof = -cof;
            adj.at(j, i) = cof;  // adjugate = transposed cofactor matrix
        }
    }
    return adj;
}

IntMatrix IntMatrix::unimodular_inverse() const {
    Integer d = determinant();
    if (d != 1 && d != -1)
        throw NotUnimodularError("unimodular_inverse: |det| != 1 (det = " + d.get_str() + ")");
    IntMatrix inv = adjugate();
    if (d == -1)
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j) inv.at(i, j) = -inv.at(i, j);
    return inv;
}

AffineTorusMap::AffineTorusMap(IntMatrix A, RationalVector b)
    : A_(std::move(A)), Ainv_(A_.dim()), b_(std::move(b)) {
    if (A_.dim() < 2)
        throw DimensionMismatchError("AffineTorusMap: torus dimension must be >= 2");
    if (static_cast<int>(b_.size()) != A_.dim())
        throw DimensionMismatchError("AffineTorusMap: b length does not match A");
    Integer d = A_.determinant();
    if (d != 1 && d != -1)
        throw NotUnimodularError("AffineTorusMap: A is not in GL(p,Z), det = " + d.get_str());
    Ainv_ = A_.unimodular_inverse();
    for (auto& x : b_) x.canonicalize();
}

DualMap::DualMap(const AffineTorusMap& source)
    : B_(source.A_inverse().transpose()), Binv_(source.A().transpose()), source_(source) {}

DualMap DualMap::from_matrix(const IntMatrix& B) {
    Integer d = B.determinant();
    if (d != 1 && d != -1)
        throw NotUnimodularError("DualMap::from_matrix: |det| != 1");
    IntMatrix Binv = B.unimodular_inverse();
    // Source map with A = (B^{-1})^T and b = 0.
    AffineTorusMap source(Binv.transpose(), RationalVector(B.dim(), Rational(0)));
    return DualMap(B, std::move(Binv), std::move(source));
}

std::pair<Integer, bool> det_unimodular(const IntMatrix& M) {
    Integer d = M.determinant();
    bool uni = (d == 1 || d == -1);
    return {d, uni};
}

DualMap dual_matrix(const AffineTorusMap& map) { return DualMap(map); }

RationalVector translation_term(const AffineTorusMap& map, long k) {
    const int p = map.dim();
    RationalVector acc(p, Rational(0));
    if (k >= 0) {
        // b_{j+1} = A b_j + b
        for (long j = 0; j < k; ++j) {
            acc = map.A() * acc;
            for (int i = 0; i < p; ++i) {
                acc[i] += map.b()[i];
                acc[i].canonicalize();
            }
        }
    } else {
        // gamma^{-1}(x) = A^{-1}(x - b)
        for (long j = 0; j < -k; ++j) {
            for (int i = 0; i < p; ++i) {
                acc[i] -= map.b()[i];
                acc[i].canonicalize();
            }
            acc = map.A_inverse() * acc;
        }
    }
    return acc;
}

LatticeVector apply_power(const DualMap& dual, long k, const LatticeVector& m) {
    if (static_cast<int>(m.size()) != dual.dim())
        throw DimensionMismatchError("apply_power: vector length mismatch");
    LatticeVector r = m;
    const IntMatrix& M = (k >= 0) ? dual.B() : dual.B_inverse();
    for (long j = 0; j < (k >= 0 ? k : -k); ++j) r = M * r;
    return r;
}

LatticeVector lattice_vector(std::initializer_list<long> entries) {
    LatticeVector v;
    v.reserve(entries.size());
    for (long e : entries) v.emplace_back(e);
    return v;
}

bool is_zero(const LatticeVector& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

RationalVector rational_vector(std::initializer_list<Rational> entries) {
    RationalVector v;
    v.reserve(entries.size());
    for (const auto& e : entries) v.push_back(e);
    return v;
}

}  // namespace toruscohom
