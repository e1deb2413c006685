#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sovcat/groupmodel.hpp"
#include "sovcat/numerics.hpp"

namespace sovcat {

/// A simple object of Rep(G): an irrep label, optionally dualized.
/// The dual is realized as the contragredient on the dual basis, so the
/// double dual is the original object on the nose.
struct SimpleLabel {
    std::string irrep;
    bool dualized = false;

    friend bool operator==(const SimpleLabel&, const SimpleLabel&) = default;
};

inline SimpleLabel dual(const SimpleLabel& x) { return {x.irrep, !x.dualized}; }

/// Tensor word X_1 (x) ... (x) X_l; the empty word is the tensor unit.
struct ObjectWord {
    std::vector<SimpleLabel> factors;

    friend bool operator==(const ObjectWord&, const ObjectWord&) = default;
    size_t length() const { return factors.size(); }
};

inline ObjectWord word_of(std::initializer_list<SimpleLabel> ls) { return {std::vector<SimpleLabel>(ls)}; }

inline ObjectWord dual(const ObjectWord& w) {
    ObjectWord out;
    out.factors.reserve(w.factors.size());
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it)
        out.factors.push_back(dual(*it));
    return out;
}

inline std::string to_string(const SimpleLabel& x) { return x.dualized ? x.irrep + "^" : x.irrep; }

inline std::string to_string(const ObjectWord& w) {
    std::string s = "[";
    for (size_t i = 0; i < w.factors.size(); ++i) {
        if (i)
            s += ",";
        s += to_string(w.factors[i]);
    }
    return s + "]";
}

/// Morphism of Rep(G): an intertwiner matrix with explicit domain and
/// codomain words. mat has shape dim(cod) x dim(dom).
struct Morphism {
    ObjectWord dom;
    ObjectWord cod;
    Mat mat;
};

inline Morphism compose(const Morphism& g, const Morphism& f) {
    if (!(g.dom == f.cod))
        throw TypeError("compose: word mismatch, upper expects " + to_string(g.dom) +
                        " but lower produces " + to_string(f.cod));
    return {f.dom, g.cod, g.mat * f.mat};
}

inline Morphism tensor(const Morphism& f, const Morphism& g) {
    Morphism out;
    out.dom.factors = f.dom.factors;
    out.dom.factors.insert(out.dom.factors.end(), g.dom.factors.begin(), g.dom.factors.end());
    out.cod.factors = f.cod.factors;
    out.cod.factors.insert(out.cod.factors.end(), g.cod.factors.begin(), g.cod.factors.end());
    out.mat = kron(f.mat, g.mat);
    return out;
}

/// The concrete sovereign tensor category Rep(G) over a loaded zoo entry.
/// All operations are pure; the category is safe for concurrent reads.
class RepCategory {
  public:
    explicit RepCategory(const GroupZooEntry& zoo, Tolerance tol = default_tolerance())
        : zoo_(&zoo), tol_(tol) {}

    const GroupZooEntry& zoo() const { return *zoo_; }
    const FiniteGroup& group() const { return zoo_->group; }
    const Tolerance& tol() const { return tol_; }

    int dim(const SimpleLabel& x) const { return zoo_->irrep(x.irrep).dim; }

    Eigen::Index dim(const ObjectWord& w) const {
        Eigen::Index d = 1;
        for (const auto& f : w.factors)
            d *= dim(f);
        return d;
    }

    /// Character of a (possibly dualized) simple object at element g.
    Scalar character(const SimpleLabel& x, int g) const {
        Scalar c = zoo_->irrep(x.irrep).character[g];
        return x.dualized ? std::conj(c) : c;
    }

    bool isomorphic(const SimpleLabel& a, const SimpleLabel& b) const {
        for (int g = 0; g < group().order; ++g)
            if (std::abs(character(a, g) - character(b, g)) > tol_.eps_eq)
                return false;
        return true;
    }

    bool is_self_dual(const SimpleLabel& x) const { return isomorphic(x, dual(x)); }

    /// Representation matrix of g on a simple object (contragredient
    /// rho(g^{-1})^T when the factor is dualized).
    Mat rep(const SimpleLabel& x, int g) const {
        const Irrep& r = zoo_->irrep(x.irrep);
        if (!x.dualized)
            return r.elem_matrices[g];
        return r.elem_matrices[group().inverse[g]].transpose();
    }

    Mat rep(const ObjectWord& w, int g) const {
        Mat m = Mat::Identity(1, 1);
        for (const auto& f : w.factors)
            m = kron(m, rep(f, g));
        return m;
    }

    Morphism identity(const ObjectWord& w) const {
        Eigen::Index d = dim(w);
        return {w, w, Mat::Identity(d, d)};
    }

    // ---- duality morphisms --------------------------------------------

    /// b_W : 1 -> W (x) W^; the canonical sum of basis (x) dual-basis pairs.
    Morphism coevaluation(const ObjectWord& w) const {
        Eigen::Index d = dim(w);
        Mat m = Mat::Zero(d * d, 1);
        for (Eigen::Index i = 0; i < d; ++i)
            m(i * d + rev_index(w, i), 0) = 1.0;
        Morphism out;
        out.dom = {};
        out.cod.factors = w.factors;
        auto dw = dual(w);
        out.cod.factors.insert(out.cod.factors.end(), dw.factors.begin(), dw.factors.end());
        out.mat = std::move(m);
        return out;
    }

    /// d_W : W^ (x) W -> 1.
    Morphism evaluation(const ObjectWord& w) const {
        Eigen::Index d = dim(w);
        Mat m = Mat::Zero(1, d * d);
        for (Eigen::Index i = 0; i < d; ++i)
            m(0, rev_index(w, i) * d + i) = 1.0;
        Morphism out;
        out.dom = dual(w);
        out.dom.factors.insert(out.dom.factors.end(), w.factors.begin(), w.factors.end());
        out.cod = {};
        out.mat = std::move(m);
        return out;
    }

    /// b~_W : 1 -> W^ (x) W.
    Morphism coevaluation_left(const ObjectWord& w) const {
        Eigen::Index d = dim(w);
        Mat m = Mat::Zero(d * d, 1);
        for (Eigen::Index i = 0; i < d; ++i)
            m(rev_index(w, i) * d + i, 0) = 1.0;
        Morphism out;
        out.dom = {};
        out.cod = dual(w);
        out.cod.factors.insert(out.cod.factors.end(), w.factors.begin(), w.factors.end());
        out.mat = std::move(m);
        return out;
    }

    /// d~_W : W (x) W^ -> 1.
    Morphism evaluation_left(const ObjectWord& w) const {
        Eigen::Index d = dim(w);
        Mat m = Mat::Zero(1, d * d);
        for (Eigen::Index i = 0; i < d; ++i)
            m(0, i * d + rev_index(w, i)) = 1.0;
        Morphism out;
        out.dom.factors = w.factors;
        auto dw = dual(w);
        out.dom.factors.insert(out.dom.factors.end(), dw.factors.begin(), dw.factors.end());
        out.cod = {};
        out.mat = std::move(m);
        return out;
    }

    Morphism coevaluation(const SimpleLabel& x) const { return coevaluation(ObjectWord{{x}}); }
    Morphism evaluation(const SimpleLabel& x) const { return evaluation(ObjectWord{{x}}); }
    Morphism coevaluation_left(const SimpleLabel& x) const { return coevaluation_left(ObjectWord{{x}}); }
    Morphism evaluation_left(const SimpleLabel& x) const { return evaluation_left(ObjectWord{{x}}); }

    /// Right-dual morphism f^ : Y^ -> X^ of f : X -> Y, via the duality
    /// composite (d_Y (x) id) o (id (x) f (x) id) o (id (x) b_X).
    Morphism dual_morphism(const Morphism& f) const {
        const ObjectWord& x = f.dom;
        const ObjectWord& y = f.cod;
        Morphism step1 = tensor(identity(dual(y)), coevaluation(x));
        Morphism step2 = tensor(tensor(identity(dual(y)), f), identity(dual(x)));
        Morphism step3 = tensor(evaluation(y), identity(dual(x)));
        return compose(step3, compose(step2, step1));
    }

    /// Left-dual morphism ~f : Y^ -> X^, built from the left duality.
    Morphism left_dual_morphism(const Morphism& f) const {
        const ObjectWord& x = f.dom;
        const ObjectWord& y = f.cod;
        Morphism step1 = tensor(coevaluation_left(x), identity(dual(y)));
        Morphism step2 = tensor(tensor(identity(dual(x)), f), identity(dual(y)));
        Morphism step3 = tensor(identity(dual(x)), evaluation_left(y));
        return compose(step3, compose(step2, step1));
    }

    /// Symmetric braiding: the flip X (x) Y -> Y (x) X.
    Morphism braiding_flip(const SimpleLabel& x, const SimpleLabel& y) const {
        Eigen::Index dx = dim(x), dy = dim(y);
        Mat m = Mat::Zero(dx * dy, dx * dy);
        for (Eigen::Index i = 0; i < dx; ++i)
            for (Eigen::Index j = 0; j < dy; ++j)
                m(j * dx + i, i * dy + j) = 1.0;
        return {ObjectWord{{x, y}}, ObjectWord{{y, x}}, std::move(m)};
    }

    /// Flip of adjacent factors pos, pos+1 inside a word (0-based).
    Morphism flip_at(const ObjectWord& w, size_t pos) const {
        if (pos + 1 >= w.factors.size())
            throw TypeError("flip_at: position out of range in " + to_string(w));
        ObjectWord left{{w.factors.begin(), w.factors.begin() + pos}};
        ObjectWord right{{w.factors.begin() + pos + 2, w.factors.end()}};
        return tensor(tensor(identity(left), braiding_flip(w.factors[pos], w.factors[pos + 1])),
                      identity(right));
    }

    // ---- traces and dimensions ----------------------------------------

    Scalar trace_left(const Morphism& f) const {
        if (!(f.dom == f.cod))
            throw TypeError("trace_left: not an endomorphism: " + to_string(f.dom) + " -> " +
                            to_string(f.cod));
        Morphism closed = compose(evaluation(f.dom),
                                  compose(tensor(identity(dual(f.dom)), f), coevaluation_left(f.dom)));
        return closed.mat(0, 0);
    }

    Scalar trace_right(const Morphism& f) const {
        if (!(f.dom == f.cod))
            throw TypeError("trace_right: not an endomorphism: " + to_string(f.dom) + " -> " +
                            to_string(f.cod));
        Morphism closed = compose(evaluation_left(f.dom),
                                  compose(tensor(f, identity(dual(f.dom))), coevaluation(f.dom)));
        return closed.mat(0, 0);
    }

    std::pair<Scalar, Scalar> dims(const ObjectWord& w) const {
        Morphism id = identity(w);
        return {trace_left(id), trace_right(id)};
    }

    // ---- invariants and Hom spaces -------------------------------------

    /// Group-averaging projector onto the invariant subspace of a word.
    Mat averaging_projector(const ObjectWord& w) const {
        Eigen::Index d = dim(w);
        Mat p = Mat::Zero(d, d);
        for (int g = 0; g < group().order; ++g)
            p += rep(w, g);
        return p / static_cast<double>(group().order);
    }

    /// Orthonormal basis of H = Hom(1, W) from the averaging projector.
    /// The projector is Hermitian with spectrum {0,1}, so eigenvectors at
    /// eigenvalue 1 give the basis.
    std::vector<Morphism> invariant_basis(const ObjectWord& w) const {
        Mat p = averaging_projector(w);
        Eigen::SelfAdjointEigenSolver<Mat> es(p);
        std::vector<Morphism> basis;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) > 0.5)
                basis.push_back({ObjectWord{}, w, es.eigenvectors().col(i)});
        return basis;
    }

    /// Orthonormal basis of Hom(X, Y), solved from the generator
    /// intertwiner equations by a nullspace computation.
    std::vector<Morphism> hom_basis(const ObjectWord& x, const ObjectWord& y) const {
        Eigen::Index dx = dim(x), dy = dim(y);
        size_t ngen = group().generators.size();
        Mat sys(static_cast<Eigen::Index>(ngen) * dx * dy, dx * dy);
        for (size_t k = 0; k < ngen; ++k) {
            int ge = group().gen_element[k];
            Mat block = kron(Mat::Identity(dx, dx), rep(y, ge)) -
                        kron(rep(x, ge).transpose(), Mat::Identity(dy, dy));
            sys.block(static_cast<Eigen::Index>(k) * dx * dy, 0, dx * dy, dx * dy) = block;
        }
        auto rn = rank_and_nullspace(sys, tol_);
        std::vector<Morphism> basis;
        for (const Vec& v : rn.nullspace) {
            Mat m = Eigen::Map<const Mat>(v.data(), dy, dx);  // column-major vec
            basis.push_back({x, y, m});
        }
        return basis;
    }

    /// The step-4 pairing B(phi1, phi2) = d_W o (phi1 (x) phi2) for
    /// phi1 in Hom(1, W^), phi2 in Hom(1, W).
    Scalar dual_hom_pairing(const ObjectWord& w, const Morphism& phi1, const Morphism& phi2) const {
        if (!(phi1.dom == ObjectWord{}) || !(phi1.cod == dual(w)))
            throw TypeError("dual_hom_pairing: phi1 must be in Hom(1, " + to_string(dual(w)) + ")");
        if (!(phi2.dom == ObjectWord{}) || !(phi2.cod == w))
            throw TypeError("dual_hom_pairing: phi2 must be in Hom(1, " + to_string(w) + ")");
        return compose(evaluation(w), tensor(phi1, phi2)).mat(0, 0);
    }

    /// Random intertwiner by group-averaging a Gaussian matrix; the
    /// intertwiner property holds by construction.
    Morphism random_intertwiner(const ObjectWord& x, const ObjectWord& y, std::mt19937_64& rng) const {
        Eigen::Index dx = dim(x), dy = dim(y);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Mat r(dy, dx);
        for (Eigen::Index i = 0; i < dy; ++i)
            for (Eigen::Index j = 0; j < dx; ++j)
                r(i, j) = Scalar(gauss(rng), gauss(rng));
        Mat avg = Mat::Zero(dy, dx);
        for (int g = 0; g < group().order; ++g)
            avg += rep(y, g) * r * rep(x, group().inverse[g]);
        return {x, y, avg / static_cast<double>(group().order)};
    }

    bool is_intertwiner(const Morphism& f, const Tolerance& t) const {
        for (int ge : group().gen_element)
            if (!approx_equal(rep(f.cod, ge) * f.mat, f.mat * rep(f.dom, ge), t))
                return false;
        return true;
    }
    bool is_intertwiner(const Morphism& f) const { return is_intertwiner(f, tol_); }

  private:
    /// Index of the reversed multi-index of i, in the strides of the
    /// reversed (dual) word. Identifies W with W^^ basis-by-basis.
    Eigen::Index rev_index(const ObjectWord& w, Eigen::Index i) const {
        Eigen::Index out = 0;
        Eigen::Index rem = i;
        // decompose i in the word's own strides (leftmost slowest)
        std::vector<Eigen::Index> digits(w.factors.size());
        for (size_t k = w.factors.size(); k-- > 0;) {
            Eigen::Index dk = dim(w.factors[k]);
            digits[k] = rem % dk;
            rem /= dk;
        }
        // accumulate in the reversed word's own mixed radix
        for (size_t k = w.factors.size(); k-- > 0;)
            out = out * dim(w.factors[k]) + digits[k];
        return out;
    }

    const GroupZooEntry* zoo_;
    Tolerance tol_;
};

}  // namespace sovcat
