#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sovcat/numerics.hpp"

namespace sovcat {

/// Finite group enumerated from permutation generators. Elements are
/// indexed by breadth-first closure order; index 0 is the identity.
/// words[e] is a generator word whose left-to-right product equals e.
struct FiniteGroup {
    std::string name;
    int degree = 0;
    int order = 0;
    std::vector<std::vector<int>> generators;
    std::vector<std::vector<int>> elements;
    std::vector<std::vector<int>> cayley;  // cayley[a][b] = index of a*b
    std::vector<std::vector<int>> words;
    std::vector<int> inverse;
    std::vector<int> gen_element;  // element index of each generator
    int identity = 0;

    int mul(int a, int b) const { return cayley[a][b]; }
    int square(int g) const { return cayley[g][g]; }
};

/// Unitary irreducible representation, realized by explicit generator
/// matrices; per-element matrices and the character are reconstructed by
/// word products at load time.
struct Irrep {
    std::string label;
    int dim = 0;
    std::vector<Mat> gen_matrices;
    std::vector<Mat> elem_matrices;
    std::vector<Scalar> character;
};

struct GroupZooEntry {
    FiniteGroup group;
    std::vector<Irrep> irreps;
    std::string provenance;
    std::string unit_label;  // label of the trivial irrep

    const Irrep* find_irrep(const std::string& label) const {
        for (const auto& r : irreps)
            if (r.label == label)
                return &r;
        return nullptr;
    }
    const Irrep& irrep(const std::string& label) const {
        const Irrep* r = find_irrep(label);
        if (!r)
            throw TypeError("unknown irrep label '" + label + "' in zoo entry " + group.name);
        return *r;
    }
};

namespace detail {

inline std::vector<int> perm_mul(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(a.size());
    for (size_t x = 0; x < a.size(); ++x)
        out[x] = a[b[x]];
    return out;
}

inline long round_checked(double v, double eps, const char* who) {
    double r = std::round(v);
    if (std::abs(v - r) > eps)
        throw DataError(std::string(who) + ": value " + std::to_string(v) +
                        " is not close to an integer");
    return static_cast<long>(r);
}

}  // namespace detail

/// Enumerate the group generated by permutation generators and build the
/// Cayley table, inverse table and generator words.
inline FiniteGroup enumerate_group(const std::string& name,
                                   const std::vector<std::vector<int>>& gens) {
    if (gens.empty())
        throw DataError("enumerate_group: no generators");
    FiniteGroup g;
    g.name = name;
    g.degree = static_cast<int>(gens[0].size());
    g.generators = gens;
    for (const auto& p : gens) {
        if (static_cast<int>(p.size()) != g.degree)
            throw DataError(name + ": generator degree mismatch");
        std::vector<char> seen(g.degree, 0);
        for (int x : p) {
            if (x < 0 || x >= g.degree || seen[x])
                throw DataError(name + ": generator is not a permutation");
            seen[x] = 1;
        }
    }

    std::vector<int> ident(g.degree);
    for (int i = 0; i < g.degree; ++i)
        ident[i] = i;
    std::map<std::vector<int>, int> index;
    index[ident] = 0;
    g.elements.push_back(ident);
    g.words.push_back({});
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int e = queue.front();
        queue.pop_front();
        for (size_t k = 0; k < gens.size(); ++k) {
            auto f = detail::perm_mul(g.elements[e], gens[k]);
            if (index.emplace(f, static_cast<int>(g.elements.size())).second) {
                g.words.push_back(g.words[e]);
                g.words.back().push_back(static_cast<int>(k));
                g.elements.push_back(std::move(f));
                queue.push_back(static_cast<int>(g.elements.size()) - 1);
            }
        }
    }
    g.order = static_cast<int>(g.elements.size());

    g.cayley.assign(g.order, std::vector<int>(g.order));
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b)
            g.cayley[a][b] = index.at(detail::perm_mul(g.elements[a], g.elements[b]));
    g.inverse.resize(g.order);
    for (int a = 0; a < g.order; ++a) {
        std::vector<int> inv(g.degree);
        for (int x = 0; x < g.degree; ++x)
            inv[g.elements[a][x]] = x;
        g.inverse[a] = index.at(inv);
    }
    for (const auto& p : gens)
        g.gen_element.push_back(index.at(p));

    // group-table sanity: identity row/column, inverses, associativity spot check
    for (int a = 0; a < g.order; ++a) {
        if (g.cayley[0][a] != a || g.cayley[a][0] != a)
            throw DataError(name + ": identity row/column broken");
        if (g.cayley[a][g.inverse[a]] != 0 || g.cayley[g.inverse[a]][a] != 0)
            throw DataError(name + ": inverse table broken");
    }
    unsigned state = 12345;
    auto next = [&state](int n) {
        state = state * 1664525u + 1013904223u;
        return static_cast<int>(state % static_cast<unsigned>(n));
    };
    for (int t = 0; t < 200; ++t) {
        int a = next(g.order), b = next(g.order), c = next(g.order);
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
            throw DataError(name + ": associativity violated");
    }
    // words reconstruct every element
    for (int e = 0; e < g.order; ++e) {
        int acc = 0;
        for (int k : g.words[e])
            acc = g.mul(acc, g.gen_element[k]);
        if (acc != e)
            throw DataError(name + ": generator word does not reconstruct element");
    }
    return g;
}

/// Representation matrix of a group element: the word product of the
/// generator matrices. Identity element yields the identity matrix.
inline const Mat& rep_of_element(const Irrep& r, int g) {
    if (g < 0 || g >= static_cast<int>(r.elem_matrices.size()))
        throw TypeError("rep_of_element: invalid element index");
    return r.elem_matrices[g];
}

/// Classical Frobenius-Schur character formula (1/|G|) sum_g chi(g^2),
/// used as the independent oracle for the categorical indicator.
inline int fs_indicator_character_oracle(const GroupZooEntry& entry, const Irrep& r,
                                         const Tolerance& tol = default_tolerance()) {
    const FiniteGroup& g = entry.group;
    Scalar sum = 0.0;
    for (int e = 0; e < g.order; ++e)
        sum += r.character[g.square(e)];
    sum /= static_cast<double>(g.order);
    if (std::abs(sum.imag()) > tol.eps_eq)
        throw DataError("fs oracle: non-real value for irrep " + r.label);
    long v = detail::round_checked(sum.real(), tol.eps_eq, "fs oracle");
    if (v < -1 || v > 1)
        throw DataError("fs oracle: value outside {-1,0,1} for irrep " + r.label);
    return static_cast<int>(v);
}

/// dim Hom(1, X_1 (x) ... (x) X_l) by characters: (1/|G|) sum_g prod chi_i(g).
/// `conj` marks factors to take with the conjugate (dualized) character.
inline int invariant_dim_character_oracle(const GroupZooEntry& entry,
                                          const std::vector<std::string>& labels,
                                          const std::vector<bool>& conj = {},
                                          const Tolerance& tol = default_tolerance()) {
    const FiniteGroup& g = entry.group;
    std::vector<const Irrep*> rs;
    for (const auto& l : labels)
        rs.push_back(&entry.irrep(l));
    Scalar sum = 0.0;
    for (int e = 0; e < g.order; ++e) {
        Scalar p = 1.0;
        for (size_t i = 0; i < rs.size(); ++i) {
            Scalar c = rs[i]->character[e];
            p *= (!conj.empty() && conj[i]) ? std::conj(c) : c;
        }
        sum += p;
    }
    sum /= static_cast<double>(g.order);
    if (std::abs(sum.imag()) > tol.eps_eq)
        throw DataError("invariant-dim oracle: non-real value");
    long v = detail::round_checked(sum.real(), tol.eps_eq, "invariant-dim oracle");
    if (v < 0)
        throw DataError("invariant-dim oracle: negative value");
    return static_cast<int>(v);
}

/// An irrep is self-dual iff its character is real-valued.
inline bool self_dual(const Irrep& r, const Tolerance& tol = default_tolerance()) {
    for (const Scalar& c : r.character)
        if (std::abs(c.imag()) > tol.eps_eq)
            return false;
    return true;
}

/// Load a zoo entry from its JSON file, recomputing order, Cayley table and
/// characters, and validating every structural invariant.
inline GroupZooEntry load_zoo_entry(const std::string& path,
                                    const Tolerance& tol = default_tolerance()) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open zoo file " + path);
    nlohmann::json doc = nlohmann::json::parse(in);

    GroupZooEntry entry;
    std::vector<std::vector<int>> gens;
    for (const auto& p : doc.at("generators"))
        gens.push_back(p.get<std::vector<int>>());
    entry.group = enumerate_group(doc.at("name").get<std::string>(), gens);
    if (doc.at("degree").get<int>() != entry.group.degree)
        throw DataError(entry.group.name + ": declared degree mismatch");
    entry.provenance = doc.value("provenance", "");

    const FiniteGroup& g = entry.group;
    long dim2 = 0;
    for (const auto& jr : doc.at("irreps")) {
        Irrep r;
        r.label = jr.at("label").get<std::string>();
        r.dim = jr.at("dim").get<int>();
        if (r.dim <= 0)
            throw DataError(g.name + "/" + r.label + ": nonpositive dimension");
        const auto& jm = jr.at("gen_matrices");
        if (jm.size() != gens.size())
            throw DataError(g.name + "/" + r.label + ": one matrix per generator required");
        for (const auto& m : jm) {
            Mat mat(r.dim, r.dim);
            for (int i = 0; i < r.dim; ++i)
                for (int j = 0; j < r.dim; ++j) {
                    const auto& cell = m.at(i).at(j);
                    mat(i, j) = Scalar(cell.at(0).get<double>(), cell.at(1).get<double>());
                }
            r.gen_matrices.push_back(std::move(mat));
        }
        for (const Mat& u : r.gen_matrices) {
            Mat delta = u.adjoint() * u - Mat::Identity(r.dim, r.dim);
            if (delta.cwiseAbs().maxCoeff() > tol.eps_eq)
                throw DataError(g.name + "/" + r.label + ": generator matrix not unitary");
        }
        r.elem_matrices.reserve(g.order);
        for (int e = 0; e < g.order; ++e) {
            Mat m = Mat::Identity(r.dim, r.dim);
            for (int k : g.words[e])
                m = m * r.gen_matrices[k];
            r.elem_matrices.push_back(std::move(m));
        }
        // homomorphism on the Cayley table
        for (int a = 0; a < g.order; ++a)
            for (int b = 0; b < g.order; ++b)
                if (!approx_equal(r.elem_matrices[a] * r.elem_matrices[b],
                                  r.elem_matrices[g.mul(a, b)], tol))
                    throw DataError(g.name + "/" + r.label + ": not a homomorphism");
        r.character.reserve(g.order);
        for (const Mat& m : r.elem_matrices)
            r.character.push_back(m.trace());
        double norm2 = 0.0;
        for (const Scalar& c : r.character)
            norm2 += std::norm(c);
        if (std::abs(norm2 - g.order) > tol.eps_eq * g.order)
            throw DataError(g.name + "/" + r.label + ": character norm says not irreducible");
        dim2 += static_cast<long>(r.dim) * r.dim;
        entry.irreps.push_back(std::move(r));
    }
    if (dim2 != g.order)
        throw DataError(g.name + ": irrep list incomplete (sum dim^2 != |G|)");
    for (const auto& r : entry.irreps) {
        bool trivial = true;
        for (const Scalar& c : r.character)
            trivial = trivial && std::abs(c - Scalar(1.0)) <= tol.eps_eq;
        if (trivial) {
            entry.unit_label = r.label;
            break;
        }
    }
    if (entry.unit_label.empty())
        throw DataError(g.name + ": no trivial irrep in zoo entry");
    return entry;
}

inline std::string default_zoo_dir() {
    if (const char* env = std::getenv("SOVCAT_ZOO_DIR"))
        return env;
#ifdef SOVCAT_DATA_DIR
    return std::string(SOVCAT_DATA_DIR) + "/zoo";
#else
    return "data/zoo";
#endif
}

inline std::vector<std::string> zoo_names(const std::string& dir = default_zoo_dir()) {
    std::vector<std::string> names;
    if (!std::filesystem::is_directory(dir))
        return names;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json")
            names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

inline GroupZooEntry load_zoo_by_name(const std::string& name,
                                      const std::string& dir = default_zoo_dir(),
                                      const Tolerance& tol = default_tolerance()) {
    std::string lower;
    for (char c : name)
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    auto path = std::filesystem::path(dir) / (lower + ".json");
    if (!std::filesystem::exists(path))
        throw DataError("unknown zoo entry '" + name + "' (no file " + path.string() + ")");
    return load_zoo_entry(path.string(), tol);
}

}  // namespace sovcat
