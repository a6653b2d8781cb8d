#pragma once

// Real Clifford algebra R_n arithmetic on dense blade-coefficient vectors.
//
// Basis blades e_A are indexed by bitmasks A over the generators e_1..e_n
// (bit i-1 <-> e_i), so an element is a vector of 2^n real coefficients with
// index 0 holding the scalar part. Generators satisfy e_i e_j + e_j e_i =
// -2 delta_ij.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sliceth {

using BladeMask = std::uint32_t;

inline constexpr int kMaxGenerators = 8;

namespace detail {

inline void check_dim(int n) {
    if (n < 1 || n > kMaxGenerators)
        throw std::invalid_argument("clifford: generator count must be in [1, " +
                                    std::to_string(kMaxGenerators) + "], got " + std::to_string(n));
}

// Sign of the permutation that merges the juxtaposed product e_A e_B into
// canonical ascending order (metric not yet applied).
inline int reorder_sign(BladeMask a, BladeMask b) {
    a >>= 1;
    int swaps = 0;
    while (a != 0) {
        swaps += std::popcount(a & b);
        a >>= 1;
    }
    return (swaps & 1) ? -1 : +1;
}

} // namespace detail

struct BladeProduct {
    int sign;       // +1 or -1
    BladeMask mask; // resulting blade, A xor B
};

/// e_A e_B = sign * e_C with C = A xor B. Each generator shared by A and B
/// contributes e_i^2 = -1 on top of the reordering transpositions.
inline BladeProduct blade_mul(BladeMask a, BladeMask b) {
    int sign = detail::reorder_sign(a, b);
    if (std::popcount(a & b) & 1) sign = -sign;
    return {sign, a ^ b};
}

template <typename Scalar = double>
class Multivector {
public:
    using CoeffVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit Multivector(int dim) : dim_(dim) {
        detail::check_dim(dim);
        coeffs_ = CoeffVector::Zero(Eigen::Index(1) << dim);
    }

    Multivector(int dim, CoeffVector coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
        detail::check_dim(dim);
        if (coeffs_.size() != (Eigen::Index(1) << dim))
            throw std::invalid_argument("Multivector: coefficient vector must have 2^dim entries");
    }

    static Multivector scalar(int dim, Scalar value) {
        Multivector m(dim);
        m.coeffs_[0] = value;
        return m;
    }

    static Multivector basis_blade(int dim, BladeMask mask, Scalar value = Scalar(1)) {
        Multivector m(dim);
        m.at(mask) = value;
        return m;
    }

    int dim() const { return dim_; }
    Eigen::Index size() const { return coeffs_.size(); }
    const CoeffVector& coeffs() const { return coeffs_; }

    Scalar& at(BladeMask mask) { return coeffs_[static_cast<Eigen::Index>(mask)]; }
    Scalar at(BladeMask mask) const { return coeffs_[static_cast<Eigen::Index>(mask)]; }

    Scalar scalar_part() const { return coeffs_[0]; }

    Multivector& operator+=(const Multivector& rhs) {
        require_same_dim(rhs);
        coeffs_ += rhs.coeffs_;
        return *this;
    }
    Multivector& operator-=(const Multivector& rhs) {
        require_same_dim(rhs);
        coeffs_ -= rhs.coeffs_;
        return *this;
    }
    Multivector& operator*=(Scalar s) {
        coeffs_ *= s;
        return *this;
    }

    friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
    friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
    friend Multivector operator*(Multivector a, Scalar s) { return a *= s; }
    friend Multivector operator*(Scalar s, Multivector a) { return a *= s; }
    friend Multivector operator-(Multivector a) {
        a.coeffs_ = -a.coeffs_;
        return a;
    }

    void require_same_dim(const Multivector& rhs) const {
        if (dim_ != rhs.dim_)
            throw std::invalid_argument("Multivector: dimension mismatch (" + std::to_string(dim_) +
                                        " vs " + std::to_string(rhs.dim_) + ")");
    }

private:
    int dim_;
    CoeffVector coeffs_;
};

/// Geometric product, the bilinear extension of blade_mul.
template <typename Scalar>
Multivector<Scalar> mul(const Multivector<Scalar>& a, const Multivector<Scalar>& b) {
    a.require_same_dim(b);
    Multivector<Scalar> out(a.dim());
    const Eigen::Index n = a.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar ai = a.coeffs()[i];
        if (ai == Scalar(0)) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar bj = b.coeffs()[j];
            if (bj == Scalar(0)) continue;
            const BladeProduct p = blade_mul(BladeMask(i), BladeMask(j));
            out.at(p.mask) += Scalar(p.sign) * ai * bj;
        }
    }
    return out;
}

template <typename Scalar>
Multivector<Scalar> operator*(const Multivector<Scalar>& a, const Multivector<Scalar>& b) {
    return mul(a, b);
}

namespace detail {

template <typename Scalar>
Multivector<Scalar> grade_signed(const Multivector<Scalar>& a, auto grade_sign) {
    Multivector<Scalar> out(a.dim());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const int g = std::popcount(BladeMask(i));
        out.at(BladeMask(i)) = grade_sign(g) ? -a.coeffs()[i] : a.coeffs()[i];
    }
    return out;
}

} // namespace detail

/// Clifford conjugation: e_A bar = (-1)^{|A|(|A|+1)/2} e_A.
template <typename Scalar>
Multivector<Scalar> conjugate(const Multivector<Scalar>& a) {
    return detail::grade_signed(a, [](int g) { return (g * (g + 1) / 2) & 1; });
}

/// Reversion: e_A tilde = (-1)^{|A|(|A|-1)/2} e_A.
template <typename Scalar>
Multivector<Scalar> reverse(const Multivector<Scalar>& a) {
    return detail::grade_signed(a, [](int g) { return (g * (g - 1) / 2) & 1; });
}

/// Main involution: e_A' = (-1)^{|A|} e_A.
template <typename Scalar>
Multivector<Scalar> involute(const Multivector<Scalar>& a) {
    return detail::grade_signed(a, [](int g) { return g & 1; });
}

/// Coefficient 2-norm; on paravectors this is the Euclidean norm of R^{n+1}.
template <typename Scalar>
Scalar norm(const Multivector<Scalar>& a) {
    return a.coeffs().norm();
}

// ---------------------------------------------------------------------------
// Paravectors x0 + x1 e_1 + ... + xn e_n, identified with points of R^{n+1}.
// ---------------------------------------------------------------------------

template <typename Scalar = double>
class Paravector {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Paravector(Scalar x0, Vector xv) : x0_(x0), xv_(std::move(xv)) { detail::check_dim(int(xv_.size())); }

    explicit Paravector(int dim) : x0_(0), xv_(Vector::Zero(dim)) { detail::check_dim(dim); }

    int dim() const { return int(xv_.size()); }
    Scalar x0() const { return x0_; }
    const Vector& vec() const { return xv_; }

    Scalar norm_sq() const { return x0_ * x0_ + xv_.squaredNorm(); }
    Scalar norm() const { return std::sqrt(norm_sq()); }

    Paravector conj() const { return Paravector(x0_, -xv_); }

    Multivector<Scalar> as_multivector() const {
        Multivector<Scalar> m(dim());
        m.at(0) = x0_;
        for (int i = 0; i < dim(); ++i) m.at(BladeMask(1) << i) = xv_[i];
        return m;
    }

    friend Paravector operator-(const Paravector& p) { return Paravector(-p.x0_, -p.xv_); }

private:
    Scalar x0_;
    Vector xv_;
};

/// x^{-1} = conj(x) / ||x||^2. Throws on the zero paravector.
template <typename Scalar>
Paravector<Scalar> paravector_inverse(const Paravector<Scalar>& x) {
    const Scalar nsq = x.norm_sq();
    if (!(nsq > Scalar(0)))
        throw std::domain_error("paravector_inverse: zero paravector is not invertible");
    return Paravector<Scalar>(x.x0() / nsq, x.vec() * (Scalar(-1) / nsq));
}

// ---------------------------------------------------------------------------
// Unit 1-vectors omega in S^{n-1}; they square to -1 and span the slice
// planes C_omega = {u + omega v}.
// ---------------------------------------------------------------------------

template <typename Scalar = double>
class UnitVector {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    /// Normalizes the given components; throws on a (near-)zero vector.
    explicit UnitVector(Vector components) : a_(std::move(components)) {
        detail::check_dim(int(a_.size()));
        const Scalar n = a_.norm();
        if (!(n > Scalar(1e-300)))
            throw std::invalid_argument("UnitVector: zero direction");
        a_ /= n;
    }

    /// The i-th coordinate axis e_{axis+1} of R^n.
    static UnitVector axis(int dim, int axis = 0) {
        Vector v = Vector::Zero(dim);
        v[axis] = Scalar(1);
        return UnitVector(std::move(v));
    }

    int dim() const { return int(a_.size()); }
    const Vector& components() const { return a_; }

    Multivector<Scalar> as_multivector() const {
        Multivector<Scalar> m(dim());
        for (int i = 0; i < dim(); ++i) m.at(BladeMask(1) << i) = a_[i];
        return m;
    }

private:
    Vector a_;
};

using Multivectord = Multivector<double>;
using Paravectord = Paravector<double>;
using UnitVectord = UnitVector<double>;

} // namespace sliceth
