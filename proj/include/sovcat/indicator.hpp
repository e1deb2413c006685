#pragma once

#include <optional>
#include <vector>

#include "sovcat/repcat.hpp"

namespace sovcat {

/// A fixed isomorphism Phi : X -> X^ witnessing self-duality, normalized
/// to unit operator norm, together with its inverse.
struct SelfDualityWitness {
    SimpleLabel label;
    Morphism phi;
    Morphism phi_inv;
};

/// Solve Hom(X, X^) for a simple object. Returns a witness iff the space
/// is one-dimensional with invertible generator; absent iff X is not
/// self-dual. A higher-dimensional space contradicts absolute simplicity.
inline std::optional<SelfDualityWitness> find_self_duality(const RepCategory& cat,
                                                           const SimpleLabel& x) {
    ObjectWord wx{{x}};
    ObjectWord wxd{{dual(x)}};
    auto basis = cat.hom_basis(wx, wxd);
    if (basis.empty()) {
        if (cat.is_self_dual(x))
            throw DataError("find_self_duality: character says " + to_string(x) +
                            " is self-dual but Hom(X,X^) is zero");
        return std::nullopt;
    }
    if (basis.size() > 1)
        throw DataError("find_self_duality: dim Hom(X,X^) = " + std::to_string(basis.size()) +
                        " for " + to_string(x) + ", absolute simplicity violated");
    Morphism phi = basis.front();
    double norm = operator_norm(phi.mat);
    if (norm <= cat.tol().eps_rank)
        throw DataError("find_self_duality: degenerate generator for " + to_string(x));
    phi.mat /= norm;
    auto rn = rank_and_nullspace(phi.mat, cat.tol());
    if (rn.rank != phi.mat.cols())
        throw DataError("find_self_duality: non-invertible generator for " + to_string(x));
    Morphism phi_inv{phi.cod, phi.dom, phi.mat.inverse()};
    return SelfDualityWitness{x, std::move(phi), std::move(phi_inv)};
}

/// The indicator morphism V_X(Phi) = (d_X (x) id) o (id (x) Phi^{-1} (x) Phi)
/// o (id (x) b~_X) in Hom(X^, X^). It is Phi-independent and a multiple of
/// the identity; the scalar is the Frobenius-Schur indicator.
inline Morphism indicator_morphism(const RepCategory& cat, const SelfDualityWitness& w) {
    ObjectWord wx{{w.label}};
    ObjectWord wxd{{dual(w.label)}};
    Morphism idd = cat.identity(wxd);
    Morphism step1 = tensor(idd, cat.coevaluation_left(w.label));
    Morphism step2 = tensor(tensor(idd, w.phi_inv), w.phi);
    Morphism step3 = tensor(cat.evaluation(w.label), idd);
    return compose(step3, compose(step2, step1));
}

/// Extract nu in {-1,+1} from a witness, checking that V_X(Phi) really is
/// a scalar multiple of the identity.
inline int fs_indicator_from_witness(const RepCategory& cat, const SelfDualityWitness& w) {
    Morphism v = indicator_morphism(cat, w);
    Eigen::Index d = v.mat.rows();
    Scalar s = v.mat(0, 0);
    if (!approx_equal(v.mat, s * Mat::Identity(d, d), cat.tol()))
        throw DataError("fs_indicator: V_X(Phi) is not a multiple of the identity for " +
                        to_string(w.label));
    if (std::abs(s - Scalar(1.0)) <= cat.tol().eps_eq)
        return 1;
    if (std::abs(s - Scalar(-1.0)) <= cat.tol().eps_eq)
        return -1;
    throw DataError("fs_indicator: scalar " + std::to_string(s.real()) + "+" +
                    std::to_string(s.imag()) + "i is not close to +-1 for " + to_string(w.label));
}

/// Categorical Frobenius-Schur indicator: 0 for non-self-dual simples,
/// otherwise the +-1 scalar of the indicator morphism.
inline int fs_indicator(const RepCategory& cat, const SimpleLabel& x) {
    auto w = find_self_duality(cat, x);
    if (!w)
        return 0;
    return fs_indicator_from_witness(cat, *w);
}

/// Exact product of (1 + nu_i - nu_i^2) over the tuple; always +-1.
inline int nu_product(const std::vector<int>& nus) {
    int p = 1;
    for (int nu : nus) {
        if (nu < -1 || nu > 1)
            throw DataError("nu_product: indicator outside {-1,0,1}");
        p *= 1 + nu - nu * nu;
    }
    return p;
}

}  // namespace sovcat
