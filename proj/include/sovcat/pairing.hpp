#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sovcat/indicator.hpp"
#include "sovcat/repcat.hpp"

namespace sovcat {

/// sigma is the involutive refinement of pi: both satisfy
/// X_{sigma(i)} ~ X_i^, and sigma has order two. 0-based images.
struct DualPairingPermutation {
    std::vector<int> pi;
    std::vector<int> sigma;
    std::vector<int> fixed_points;
};

/// The family f_i in Hom(X_i, X_{sigma(i)}^) with its signs p_i
/// (p_i = nu_i on fixed points of sigma, +1 on 2-orbits).
struct IsoFamily {
    std::vector<Morphism> f;
    std::vector<int> p;
};

enum class SymmetryType { Symmetric, Antisymmetric, Mixed };

inline const char* to_string(SymmetryType s) {
    switch (s) {
        case SymmetryType::Symmetric: return "symmetric";
        case SymmetryType::Antisymmetric: return "antisymmetric";
        default: return "mixed";
    }
}

struct PairingReport {
    std::vector<SimpleLabel> tuple;
    std::vector<int> pi;     // empty when not recorded (trivial zero-dim reports)
    std::vector<int> sigma;
    int dim_H = 0;
    int nu = 1;
    Mat gram;
    bool nondegenerate = true;
    SymmetryType symmetry = SymmetryType::Symmetric;
    bool even_ok = true;
    std::vector<int> braid_word;  // 0-based adjacent transposition positions
    bool palindrome_mode = false;
    bool gram_matches_nu_transpose = true;
};

struct PairingOptions {
    std::optional<std::vector<int>> pi;
    std::optional<std::vector<int>> braid_word;
};

/// Search for a permutation pi with X_{pi(i)} ~ X_i^; returns the
/// lexicographically smallest one, or absent when none exists.
inline std::optional<std::vector<int>> find_pi(const RepCategory& cat,
                                               const std::vector<SimpleLabel>& tuple) {
    size_t l = tuple.size();
    std::vector<int> pi(l, -1);
    std::vector<char> used(l, 0);
    for (size_t i = 0; i < l; ++i) {
        SimpleLabel want = dual(tuple[i]);
        int found = -1;
        for (size_t j = 0; j < l; ++j) {
            if (!used[j] && cat.isomorphic(tuple[j], want)) {
                found = static_cast<int>(j);
                break;
            }
        }
        if (found < 0)
            return std::nullopt;
        used[found] = 1;
        pi[i] = found;
    }
    return pi;
}

/// Build the involution sigma from pi by the cycle rule: odd cycles
/// consist of self-dual objects and get the identity; on an even cycle
/// (i_1,...,i_n), sigma(i_k) = i_{k+1} for even k and i_{k-1} for odd k.
inline DualPairingPermutation build_sigma(const RepCategory& cat,
                                          const std::vector<SimpleLabel>& tuple,
                                          const std::vector<int>& pi) {
    size_t l = tuple.size();
    if (pi.size() != l)
        throw HypothesisError("build_sigma: pi has wrong length");
    std::vector<char> hit(l, 0);
    for (int v : pi) {
        if (v < 0 || static_cast<size_t>(v) >= l || hit[v])
            throw HypothesisError("build_sigma: pi is not a permutation");
        hit[v] = 1;
    }
    for (size_t i = 0; i < l; ++i)
        if (!cat.isomorphic(tuple[pi[i]], dual(tuple[i])))
            throw HypothesisError("build_sigma: X_pi(i) is not isomorphic to X_i^ at position " +
                                  std::to_string(i + 1));

    DualPairingPermutation out;
    out.pi = pi;
    out.sigma.assign(l, -1);
    std::vector<char> seen(l, 0);
    for (size_t start = 0; start < l; ++start) {
        if (seen[start])
            continue;
        std::vector<int> cycle;
        int at = static_cast<int>(start);
        while (!seen[at]) {
            seen[at] = 1;
            cycle.push_back(at);
            at = pi[at];
        }
        size_t n = cycle.size();
        if (n % 2 == 1) {
            for (int i : cycle) {
                if (!cat.is_self_dual(tuple[i]))
                    throw DataError(
                        "build_sigma: odd pi-cycle contains a non-self-dual object at position " +
                        std::to_string(i + 1) + " (inconsistent pi)");
                out.sigma[i] = i;
            }
        } else {
            for (size_t k0 = 0; k0 < n; ++k0) {
                // 1-based k = k0+1; even k pairs forward, odd k pairs backward
                if ((k0 + 1) % 2 == 0)
                    out.sigma[cycle[k0]] = cycle[(k0 + 1) % n];
                else
                    out.sigma[cycle[k0]] = cycle[(k0 + n - 1) % n];
            }
        }
    }
    for (size_t i = 0; i < l; ++i) {
        if (out.sigma[out.sigma[i]] != static_cast<int>(i))
            throw DataError("build_sigma: constructed sigma is not an involution");
        if (!cat.isomorphic(tuple[out.sigma[i]], dual(tuple[i])))
            throw DataError("build_sigma: constructed sigma violates the duality condition");
        if (out.sigma[i] == static_cast<int>(i))
            out.fixed_points.push_back(static_cast<int>(i));
    }
    return out;
}

namespace detail {

/// The defining composite for the partner isomorphism on a 2-orbit:
/// given f : X -> Y^, produce (id_{X^} (x) d_Y) o (id_{X^} (x) f (x) id_Y)
/// o (b~_X (x) id_Y) in Hom(Y, X^).
inline Morphism iso_partner(const RepCategory& cat, const SimpleLabel& x, const SimpleLabel& y,
                            const Morphism& f) {
    Morphism idxd = cat.identity(ObjectWord{{dual(x)}});
    Morphism idy = cat.identity(ObjectWord{{y}});
    Morphism step1 = tensor(cat.coevaluation_left(x), idy);
    Morphism step2 = tensor(tensor(idxd, f), idy);
    Morphism step3 = tensor(idxd, cat.evaluation(y));
    return compose(step3, compose(step2, step1));
}

}  // namespace detail

/// Fix the isomorphisms f_i: fixed points get a solved self-duality
/// witness, 2-orbits get one solved representative and the partner from
/// the defining composite. Both the partner equation and the sign
/// property d o (f_i (x) id) = p_i d~ o (id (x) f_{sigma(i)}) are verified.
inline IsoFamily build_iso_family(const RepCategory& cat, const std::vector<SimpleLabel>& tuple,
                                  const DualPairingPermutation& sp) {
    size_t l = tuple.size();
    IsoFamily fam;
    fam.f.resize(l);
    fam.p.assign(l, 1);
    for (size_t i = 0; i < l; ++i) {
        int j = sp.sigma[i];
        if (j == static_cast<int>(i)) {
            auto w = find_self_duality(cat, tuple[i]);
            if (!w)
                throw DataError("build_iso_family: fixed point is not self-dual");
            fam.p[i] = fs_indicator_from_witness(cat, *w);
            fam.f[i] = std::move(w->phi);
        } else if (static_cast<size_t>(j) > i) {
            auto basis = cat.hom_basis(ObjectWord{{tuple[i]}}, ObjectWord{{dual(tuple[j])}});
            if (basis.size() != 1)
                throw DataError("build_iso_family: dim Hom(X_i, X_sigma(i)^) = " +
                                std::to_string(basis.size()) + ", absolute simplicity violated");
            Morphism fi = basis.front();
            fi.mat /= operator_norm(fi.mat);
            Morphism fj = detail::iso_partner(cat, tuple[i], tuple[j], fi);
            // the defining composite applied from the other end returns f_i
            Morphism back = detail::iso_partner(cat, tuple[j], tuple[i], fj);
            if (!approx_equal(back.mat, fi.mat, cat.tol()))
                throw DataError("build_iso_family: partner equation not involutive");
            fam.f[i] = std::move(fi);
            fam.f[j] = std::move(fj);
            fam.p[i] = fam.p[j] = 1;
        }
    }
    for (size_t i = 0; i < l; ++i) {
        const SimpleLabel& xi = tuple[i];
        const SimpleLabel& xj = tuple[sp.sigma[i]];
        Morphism lhs = compose(cat.evaluation(xj), tensor(fam.f[i], cat.identity(ObjectWord{{xj}})));
        Morphism rhs = compose(cat.evaluation_left(xi),
                               tensor(cat.identity(ObjectWord{{xi}}), fam.f[sp.sigma[i]]));
        if (!approx_equal(lhs.mat, static_cast<double>(fam.p[i]) * rhs.mat, cat.tol()))
            throw DataError("build_iso_family: sign property violated at position " +
                            std::to_string(i + 1));
    }
    return fam;
}

/// Duality morphism of a tensor word built by the recursion
/// d_{Y1 (x) ... (x) Yl} = d_{Y1} o [id (x) d_{Y2 (x) ... (x) Yl} (x) id],
/// with domain Y1^ (x) ... (x) Yl^ (x) Yl (x) ... (x) Y1.
inline Morphism iterated_duality(const RepCategory& cat, const std::vector<SimpleLabel>& labels) {
    if (labels.empty())
        return {ObjectWord{}, ObjectWord{}, Mat::Identity(1, 1)};
    std::vector<SimpleLabel> rest(labels.begin() + 1, labels.end());
    Morphism inner = iterated_duality(cat, rest);
    Morphism mid = tensor(tensor(cat.identity(ObjectWord{{dual(labels.front())}}), inner),
                          cat.identity(ObjectWord{{labels.front()}}));
    return compose(cat.evaluation(labels.front()), mid);
}

/// Target word of the braiding combination: X_{sigma(l)}, ..., X_{sigma(1)}.
inline ObjectWord sigma_reversed_word(const std::vector<SimpleLabel>& tuple,
                                      const std::vector<int>& sigma) {
    ObjectWord out;
    for (size_t t = 0; t < tuple.size(); ++t)
        out.factors.push_back(tuple[sigma[tuple.size() - 1 - t]]);
    return out;
}

/// Realize the braiding combination as a composite of adjacent flips.
/// word_choice lists 0-based positions; the resulting object word must
/// match the sigma-reversed target exactly.
inline Morphism braid_realization(const RepCategory& cat, const std::vector<SimpleLabel>& tuple,
                                  const std::vector<int>& sigma,
                                  const std::vector<int>& word_choice) {
    ObjectWord cur{tuple};
    Morphism m = cat.identity(cur);
    for (int j : word_choice) {
        if (j < 0 || static_cast<size_t>(j) + 1 >= tuple.size())
            throw TypeError("braid_realization: flip position " + std::to_string(j + 1) +
                            " out of range");
        m = compose(cat.flip_at(cur, static_cast<size_t>(j)), m);
        std::swap(cur.factors[j], cur.factors[j + 1]);
    }
    ObjectWord target = sigma_reversed_word(tuple, sigma);
    if (!(cur == target))
        throw TypeError("braid_realization: word achieves " + to_string(cur) + " but " +
                        to_string(target) + " is required");
    return m;
}

/// Canonical braid word: bubble-sort the positions into sigma-reversed
/// order with adjacent transpositions.
inline std::vector<int> default_braid_word(const std::vector<int>& sigma) {
    size_t l = sigma.size();
    std::vector<int> key(l);
    for (size_t i = 0; i < l; ++i)
        key[i] = static_cast<int>(l) - 1 - sigma[i];  // target slot of source position i
    std::vector<int> word;
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t j = 0; j + 1 < l; ++j) {
            if (key[j] > key[j + 1]) {
                std::swap(key[j], key[j + 1]);
                word.push_back(static_cast<int>(j));
                moved = true;
            }
        }
    }
    return word;
}

/// A second realization of the same permutation (right-to-left bubble
/// passes); falls back to the canonical word padded with a trivial
/// double flip when both sorts coincide.
inline std::vector<int> alternate_braid_word(const std::vector<int>& sigma) {
    size_t l = sigma.size();
    std::vector<int> key(l);
    for (size_t i = 0; i < l; ++i)
        key[i] = static_cast<int>(l) - 1 - sigma[i];
    std::vector<int> word;
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t j = l; j-- > 1;) {
            if (key[j - 1] > key[j]) {
                std::swap(key[j - 1], key[j]);
                word.push_back(static_cast<int>(j - 1));
                moved = true;
            }
        }
    }
    if (word == default_braid_word(sigma) && l >= 2) {
        word.push_back(0);
        word.push_back(0);
    }
    return word;
}

namespace detail {

inline SymmetryType classify_symmetry(const Mat& gram, int nu, const Tolerance& tol) {
    bool sym = approx_equal(gram, gram.transpose().eval(), tol);
    bool asym = approx_equal(gram, Mat(-gram.transpose()), tol);
    if (sym && asym)
        return nu == -1 ? SymmetryType::Antisymmetric : SymmetryType::Symmetric;
    if (sym)
        return SymmetryType::Symmetric;
    if (asym)
        return SymmetryType::Antisymmetric;
    return SymmetryType::Mixed;
}

/// Assemble the report given sigma, the iso family and a braiding
/// realization. Gram entries are <phi_a, phi_b> = d_sigma-word o
/// [f_1 (x) ... (x) f_l (x) c] o [phi_a (x) phi_b], computed as
/// u^T D v with u = F phi_a, v = C phi_b and D the matrix reshape of d.
inline PairingReport assemble_report(const RepCategory& cat, const std::vector<SimpleLabel>& tuple,
                                     const DualPairingPermutation& sp, const IsoFamily& fam,
                                     const Morphism& braid, std::vector<int> braid_word,
                                     bool palindrome_mode) {
    PairingReport rep;
    rep.tuple = tuple;
    rep.pi = sp.pi;
    rep.sigma = sp.sigma;
    rep.braid_word = std::move(braid_word);
    rep.palindrome_mode = palindrome_mode;

    std::vector<int> nus;
    for (const auto& x : tuple)
        nus.push_back(fs_indicator(cat, x));
    rep.nu = nu_product(nus);

    ObjectWord w{tuple};
    auto basis = cat.invariant_basis(w);
    rep.dim_H = static_cast<int>(basis.size());

    std::vector<SimpleLabel> sigma_word;
    for (size_t k = 0; k < tuple.size(); ++k)
        sigma_word.push_back(tuple[sp.sigma[k]]);
    Morphism d_iter = iterated_duality(cat, sigma_word);

    Morphism ftot{ObjectWord{}, ObjectWord{}, Mat::Identity(1, 1)};
    for (const Morphism& fi : fam.f)
        ftot = tensor(ftot, fi);
    ObjectWord expected_dom = ftot.cod;
    expected_dom.factors.insert(expected_dom.factors.end(), braid.cod.factors.begin(),
                                braid.cod.factors.end());
    if (!(expected_dom == d_iter.dom))
        throw TypeError("pairing: duality domain " + to_string(d_iter.dom) +
                        " does not match assembled word " + to_string(expected_dom));

    Eigen::Index dw = cat.dim(w);
    Mat phi(dw, rep.dim_H);
    for (int a = 0; a < rep.dim_H; ++a)
        phi.col(a) = basis[a].mat;
    Mat u = ftot.mat * phi;
    Mat v = braid.mat * phi;
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> dmat(
        d_iter.mat.data(), dw, dw);
    rep.gram = u.transpose() * dmat * v;

    rep.nondegenerate = rank_and_nullspace(rep.gram, cat.tol()).rank == rep.dim_H;
    rep.symmetry = classify_symmetry(rep.gram, rep.nu, cat.tol());
    rep.gram_matches_nu_transpose =
        rep.gram.size() == 0 ||
        approx_equal(rep.gram, Mat(static_cast<double>(rep.nu) * rep.gram.transpose()), cat.tol());
    rep.even_ok = rep.nu == 1 || rep.dim_H % 2 == 0;
    return rep;
}

}  // namespace detail

/// Full pairing construction for a tuple. Returns absent when no pi
/// satisfies the duality hypothesis (the theorem does not apply).
inline std::optional<PairingReport> pairing_matrix(const RepCategory& cat,
                                                   const std::vector<SimpleLabel>& tuple,
                                                   const PairingOptions& options = {}) {
    std::vector<int> pi;
    if (options.pi) {
        pi = *options.pi;
    } else {
        auto found = find_pi(cat, tuple);
        if (!found)
            return std::nullopt;
        pi = *found;
    }
    DualPairingPermutation sp = build_sigma(cat, tuple, pi);
    IsoFamily fam = build_iso_family(cat, tuple, sp);
    std::vector<int> word = options.braid_word ? *options.braid_word : default_braid_word(sp.sigma);
    Morphism braid = braid_realization(cat, tuple, sp.sigma, word);
    return detail::assemble_report(cat, tuple, sp, fam, braid, word, false);
}

/// Braiding-free mode for duality-palindromic tuples (X_j^ ~ X_{l-j+1}):
/// sigma is the reversal and the braiding combination is the identity.
/// Non-palindromic tuples with zero-dimensional invariant space get a
/// trivial report; otherwise the mode is not applicable.
inline std::optional<PairingReport> pairing_palindrome(const RepCategory& cat,
                                                       const std::vector<SimpleLabel>& tuple) {
    size_t l = tuple.size();
    bool palindromic = true;
    for (size_t j = 0; j < l; ++j)
        palindromic = palindromic && cat.isomorphic(dual(tuple[j]), tuple[l - 1 - j]);
    if (!palindromic) {
        std::vector<std::string> labels;
        std::vector<bool> conj;
        for (const auto& x : tuple) {
            labels.push_back(x.irrep);
            conj.push_back(x.dualized);
        }
        int dim = invariant_dim_character_oracle(cat.zoo(), labels, conj, cat.tol());
        if (dim != 0)
            return std::nullopt;
        PairingReport rep;
        rep.tuple = tuple;
        std::vector<int> nus;
        for (const auto& x : tuple)
            nus.push_back(fs_indicator(cat, x));
        rep.nu = nu_product(nus);
        rep.dim_H = 0;
        rep.gram = Mat(0, 0);
        rep.nondegenerate = true;
        rep.symmetry = rep.nu == -1 ? SymmetryType::Antisymmetric : SymmetryType::Symmetric;
        rep.even_ok = true;
        rep.palindrome_mode = true;
        return rep;
    }
    std::vector<int> reversal(l);
    for (size_t j = 0; j < l; ++j)
        reversal[j] = static_cast<int>(l - 1 - j);
    DualPairingPermutation sp = build_sigma(cat, tuple, reversal);
    IsoFamily fam = build_iso_family(cat, tuple, sp);
    Morphism braid = braid_realization(cat, tuple, sp.sigma, {});
    return detail::assemble_report(cat, tuple, sp, fam, braid, {}, true);
}

// ---- report serialization ----------------------------------------------

/// JSON form of a report; permutation and braid indices are 1-based.
inline nlohmann::ordered_json report_to_json(const PairingReport& rep) {
    nlohmann::ordered_json j;
    std::vector<std::string> tuple;
    for (const auto& x : rep.tuple)
        tuple.push_back(to_string(x));
    j["tuple"] = tuple;
    auto one_based = [](const std::vector<int>& v) {
        std::vector<int> out;
        for (int x : v)
            out.push_back(x + 1);
        return out;
    };
    j["pi"] = one_based(rep.pi);
    j["sigma"] = one_based(rep.sigma);
    j["dim_H"] = rep.dim_H;
    j["nu"] = rep.nu;
    nlohmann::ordered_json gram = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < rep.gram.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < rep.gram.cols(); ++c)
            row.push_back({rep.gram(r, c).real(), rep.gram(r, c).imag()});
        gram.push_back(row);
    }
    j["gram"] = gram;
    j["nondegenerate"] = rep.nondegenerate;
    j["symmetry"] = to_string(rep.symmetry);
    j["even_ok"] = rep.even_ok;
    j["braid_word"] = one_based(rep.braid_word);
    j["palindrome_mode"] = rep.palindrome_mode;
    j["gram_matches_nu_transpose"] = rep.gram_matches_nu_transpose;
    return j;
}

/// Re-verify the symmetry verdict of a serialized report from its gram
/// matrix alone; true when the stored verdict is reproduced.
inline bool verify_report_json(const nlohmann::json& j, const Tolerance& tol = default_tolerance()) {
    const auto& gj = j.at("gram");
    Eigen::Index n = static_cast<Eigen::Index>(gj.size());
    Mat gram(n, n == 0 ? 0 : static_cast<Eigen::Index>(gj.at(0).size()));
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < gram.cols(); ++c)
            gram(r, c) = Scalar(gj.at(r).at(c).at(0).get<double>(),
                                gj.at(r).at(c).at(1).get<double>());
    int nu = j.at("nu").get<int>();
    SymmetryType sym = detail::classify_symmetry(gram, nu, tol);
    bool nondeg = rank_and_nullspace(gram, tol).rank == gram.rows();
    bool matches = gram.size() == 0 ||
                   approx_equal(gram, Mat(static_cast<double>(nu) * gram.transpose()), tol);
    return std::string(to_string(sym)) == j.at("symmetry").get<std::string>() &&
           nondeg == j.at("nondegenerate").get<bool>() &&
           matches == j.at("gram_matches_nu_transpose").get<bool>();
}

}  // namespace sovcat
