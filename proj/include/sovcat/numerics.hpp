#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sovcat {

using Scalar = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Raised when two morphisms/matrices cannot be combined (caller bug).
struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when loaded data violates a structural invariant.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a supplied permutation fails the duality hypothesis.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Entrywise-equality and rank thresholds. The one place where
/// "approximately equal" is defined for the whole library.
struct Tolerance {
    double eps_eq = 1e-8;
    double eps_rank = 1e-9;

    Tolerance() = default;
    Tolerance(double eq, double rank) : eps_eq(eq), eps_rank(rank) {
        if (!(eq > 0.0 && eq < 1.0) || !(rank > 0.0 && rank < 1.0))
            throw std::invalid_argument("Tolerance: thresholds must lie in (0,1)");
    }
};

inline Tolerance& default_tolerance() {
    static Tolerance tol{};
    return tol;
}

inline void require_finite(const Mat& a, const char* who) {
    if (!a.allFinite())
        throw std::domain_error(std::string(who) + ": non-finite matrix entry");
}

inline bool approx_equal(const Mat& a, const Mat& b, const Tolerance& tol = default_tolerance()) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw TypeError("approx_equal: shape mismatch " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
    if (a.size() == 0)
        return true;
    return (a - b).cwiseAbs().maxCoeff() <= tol.eps_eq;
}

struct RankNullspace {
    Eigen::Index rank = 0;
    std::vector<Vec> nullspace;  // orthonormal, A*v ~ 0
};

/// Rank and an orthonormal nullspace basis, decided by singular values
/// against eps_rank.
inline RankNullspace rank_and_nullspace(const Mat& a, const Tolerance& tol = default_tolerance()) {
    RankNullspace out;
    if (a.cols() == 0)
        return out;
    if (a.rows() == 0) {
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.nullspace.push_back(Vec::Unit(a.cols(), j));
        return out;
    }
    require_finite(a, "rank_and_nullspace");
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.eps_rank)
            ++out.rank;
    for (Eigen::Index j = out.rank; j < a.cols(); ++j)
        out.nullspace.push_back(svd.matrixV().col(j));
    return out;
}

/// Modified Gram-Schmidt; near-zero vectors are dropped.
inline std::vector<Vec> orthonormalize(const std::vector<Vec>& vs,
                                       const Tolerance& tol = default_tolerance()) {
    std::vector<Vec> basis;
    for (const Vec& v0 : vs) {
        Vec v = v0;
        for (const Vec& b : basis)
            v -= b * b.dot(v);
        // second pass stabilizes nearly dependent inputs
        for (const Vec& b : basis)
            v -= b * b.dot(v);
        double n = v.norm();
        if (n > tol.eps_rank)
            basis.push_back(v / n);
    }
    return basis;
}

/// Kronecker product with the leftmost factor slowest.
inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double operator_norm(const Mat& a) {
    if (a.size() == 0)
        return 0.0;
    return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
}

}  // namespace sovcat
