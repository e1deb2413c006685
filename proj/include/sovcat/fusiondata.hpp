#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sovcat/indicator.hpp"

namespace sovcat {

/// Abstract fusion ring: multiplicity tensor, duality involution and
/// Frobenius-Schur indicator list, with optional modular (S, theta) data
/// used only for the Verlinde consistency check.
struct FusionData {
    std::string name;
    std::vector<std::string> labels;
    int unit = 0;
    std::vector<int> mult;  // flat [a][b][c]
    std::vector<int> dual_of;
    std::vector<int> nu;
    std::optional<Mat> smatrix;
    std::optional<std::vector<Scalar>> theta;
    std::string provenance;

    int n() const { return static_cast<int>(labels.size()); }
    int N(int a, int b, int c) const { return mult[(static_cast<size_t>(a) * n() + b) * n() + c]; }
    int& N(int a, int b, int c) { return mult[(static_cast<size_t>(a) * n() + b) * n() + c]; }

    int label_index(const std::string& l) const {
        for (int i = 0; i < n(); ++i)
            if (labels[i] == l)
                return i;
        throw TypeError("unknown fusion label '" + l + "' in " + name);
    }
};

/// Check every structural invariant; violations report the offending
/// labels. Used both by the loader and on generated fusion data.
inline void validate_fusion(const FusionData& fd, const Tolerance& tol = default_tolerance()) {
    int n = fd.n();
    if (n <= 0)
        throw DataError(fd.name + ": empty label list");
    if (fd.unit < 0 || fd.unit >= n)
        throw DataError(fd.name + ": unit label missing");
    if (static_cast<int>(fd.dual_of.size()) != n || static_cast<int>(fd.nu.size()) != n ||
        fd.mult.size() != static_cast<size_t>(n) * n * n)
        throw DataError(fd.name + ": field sizes inconsistent");
    for (int a = 0; a < n; ++a) {
        int d = fd.dual_of[a];
        if (d < 0 || d >= n || fd.dual_of[d] != a)
            throw DataError(fd.name + ": dual map is not an involution at " + fd.labels[a]);
    }
    for (size_t i = 0; i < fd.mult.size(); ++i)
        if (fd.mult[i] < 0)
            throw DataError(fd.name + ": negative multiplicity");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (fd.N(fd.unit, a, b) != (a == b ? 1 : 0))
                throw DataError(fd.name + ": unit row violated at (" + fd.labels[a] + "," +
                                fd.labels[b] + ")");
            if (fd.N(a, fd.unit, b) != (a == b ? 1 : 0))
                throw DataError(fd.name + ": unit column violated at (" + fd.labels[a] + "," +
                                fd.labels[b] + ")");
            if (fd.N(a, b, fd.unit) != (b == fd.dual_of[a] ? 1 : 0))
                throw DataError(fd.name + ": rigidity violated at (" + fd.labels[a] + "," +
                                fd.labels[b] + ")");
        }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    long lhs = 0, rhs = 0;
                    for (int e = 0; e < n; ++e)
                        lhs += static_cast<long>(fd.N(a, b, e)) * fd.N(e, c, d);
                    for (int f = 0; f < n; ++f)
                        rhs += static_cast<long>(fd.N(b, c, f)) * fd.N(a, f, d);
                    if (lhs != rhs)
                        throw DataError(fd.name + ": associativity violated at (" + fd.labels[a] +
                                        "," + fd.labels[b] + "," + fd.labels[c] + ";" +
                                        fd.labels[d] + ")");
                }
    if (fd.nu[fd.unit] != 1)
        throw DataError(fd.name + ": nu(unit) must be +1");
    for (int a = 0; a < n; ++a) {
        if (fd.nu[a] < -1 || fd.nu[a] > 1)
            throw DataError(fd.name + ": nu outside {-1,0,1} at " + fd.labels[a]);
        if ((fd.nu[a] == 0) != (fd.dual_of[a] != a))
            throw DataError(fd.name + ": nu(a)=0 must hold exactly for non-self-dual " +
                            fd.labels[a]);
    }
    if (fd.smatrix) {
        const Mat& s = *fd.smatrix;
        if (s.rows() != n || s.cols() != n)
            throw DataError(fd.name + ": S-matrix shape mismatch");
        if (!approx_equal(Mat(s.adjoint() * s), Mat(Mat::Identity(n, n)), tol))
            throw DataError(fd.name + ": S-matrix not unitary");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    Scalar v = 0.0;
                    for (int x = 0; x < n; ++x)
                        v += s(a, x) * s(b, x) * std::conj(s(c, x)) / s(fd.unit, x);
                    if (std::abs(v - Scalar(fd.N(a, b, c))) > tol.eps_eq)
                        throw DataError(fd.name + ": Verlinde mismatch at (" + fd.labels[a] + "," +
                                        fd.labels[b] + ";" + fd.labels[c] + ")");
                }
    }
}

inline FusionData load_fusion(const std::string& path, const Tolerance& tol = default_tolerance()) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open fusion file " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    FusionData fd;
    fd.name = doc.value("name", path);
    fd.labels = doc.at("labels").get<std::vector<std::string>>();
    int n = fd.n();
    std::string unit = doc.at("unit").get<std::string>();
    fd.unit = -1;
    for (int i = 0; i < n; ++i)
        if (fd.labels[i] == unit)
            fd.unit = i;
    if (fd.unit < 0)
        throw DataError(fd.name + ": unit label '" + unit + "' not in label list");
    const auto& jn = doc.at("N");
    fd.mult.assign(static_cast<size_t>(n) * n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                fd.N(a, b, c) = jn.at(a).at(b).at(c).get<int>();
    fd.dual_of.assign(n, -1);
    for (const auto& [k, v] : doc.at("dual").items())
        fd.dual_of[fd.label_index(k)] = fd.label_index(v.get<std::string>());
    fd.nu.assign(n, 0);
    for (const auto& [k, v] : doc.at("nu").items())
        fd.nu[fd.label_index(k)] = v.get<int>();
    if (doc.contains("S")) {
        Mat s(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                s(a, b) = Scalar(doc["S"].at(a).at(b).at(0).get<double>(),
                                 doc["S"].at(a).at(b).at(1).get<double>());
        fd.smatrix = std::move(s);
    }
    if (doc.contains("theta")) {
        std::vector<Scalar> th(n, Scalar(1.0));
        for (const auto& [k, v] : doc["theta"].items())
            th[fd.label_index(k)] = Scalar(v.at(0).get<double>(), v.at(1).get<double>());
        fd.theta = std::move(th);
    }
    fd.provenance = doc.value("provenance", "");
    validate_fusion(fd, tol);
    return fd;
}

/// dim Hom(1, X_{t1} (x) ... (x) X_{tl}) as the unit component of the
/// product of fusion matrices; the empty tuple gives 1.
inline long multi_fusion_dim(const FusionData& fd, const std::vector<int>& tuple) {
    int n = fd.n();
    std::vector<long> v(n, 0);
    v[fd.unit] = 1;
    for (size_t i = tuple.size(); i-- > 0;) {
        int a = tuple[i];
        if (a < 0 || a >= n)
            throw TypeError("multi_fusion_dim: label index out of range");
        std::vector<long> next(n, 0);
        for (int c = 0; c < n; ++c)
            for (int b = 0; b < n; ++b)
                next[c] += static_cast<long>(fd.N(a, b, c)) * v[b];
        v = std::move(next);
    }
    return v[fd.unit];
}

inline long multi_fusion_dim(const FusionData& fd, const std::vector<std::string>& tuple) {
    std::vector<int> idx;
    for (const auto& l : tuple)
        idx.push_back(fd.label_index(l));
    return multi_fusion_dim(fd, idx);
}

struct FusionScanRow {
    std::vector<int> tuple;
    bool admits_pi = false;
    int nu = 1;
    long dim = 0;
    bool violation = false;
};

struct FusionScanReport {
    std::string source;
    int max_len = 0;
    long tuples_scanned = 0;
    long admitting_pi = 0;
    long skipped_no_pi = 0;
    long nu_minus_one = 0;
    std::vector<FusionScanRow> rows;
    std::vector<size_t> violations;  // indices into rows
};

/// Exhaustive evenness audit over label multisets of size 1..max_len.
/// A multiset admits pi exactly when it is closed under duality; for
/// those, a violation is nu = -1 together with an odd fusion dimension.
inline FusionScanReport evenness_scan(const FusionData& fd, int max_len) {
    FusionScanReport rep;
    rep.source = fd.name;
    rep.max_len = max_len;
    int n = fd.n();
    std::vector<int> tuple;
    auto emit = [&]() {
        FusionScanRow row;
        row.tuple = tuple;
        std::vector<int> counts(n, 0);
        for (int a : tuple)
            ++counts[a];
        row.admits_pi = true;
        for (int a = 0; a < n; ++a)
            row.admits_pi = row.admits_pi && counts[a] == counts[fd.dual_of[a]];
        ++rep.tuples_scanned;
        if (!row.admits_pi) {
            ++rep.skipped_no_pi;
            rep.rows.push_back(std::move(row));
            return;
        }
        ++rep.admitting_pi;
        std::vector<int> nus;
        for (int a : tuple)
            nus.push_back(fd.nu[a]);
        row.nu = nu_product(nus);
        row.dim = multi_fusion_dim(fd, tuple);
        if (row.nu == -1) {
            ++rep.nu_minus_one;
            row.violation = row.dim % 2 != 0;
        }
        if (row.violation)
            rep.violations.push_back(rep.rows.size());
        rep.rows.push_back(std::move(row));
    };
    auto rec = [&](auto&& self, int lo, int remaining) -> void {
        if (!tuple.empty())
            emit();
        if (remaining == 0)
            return;
        for (int a = lo; a < n; ++a) {
            tuple.push_back(a);
            self(self, a, remaining - 1);
            tuple.pop_back();
        }
    };
    rec(rec, 0, max_len);
    return rep;
}

/// Bridge from the concrete realization: multiplicities from character
/// inner products, duals from conjugate characters, indicators from the
/// categorical computation.
inline FusionData repg_to_fusion(const GroupZooEntry& entry,
                                 const Tolerance& tol = default_tolerance()) {
    RepCategory cat(entry, tol);
    const FiniteGroup& g = entry.group;
    FusionData fd;
    fd.name = "Rep(" + g.name + ")";
    int n = static_cast<int>(entry.irreps.size());
    for (const auto& r : entry.irreps)
        fd.labels.push_back(r.label);
    fd.unit = fd.label_index(entry.unit_label);
    fd.mult.assign(static_cast<size_t>(n) * n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Scalar sum = 0.0;
                for (int e = 0; e < g.order; ++e)
                    sum += entry.irreps[a].character[e] * entry.irreps[b].character[e] *
                           std::conj(entry.irreps[c].character[e]);
                sum /= static_cast<double>(g.order);
                if (std::abs(sum.imag()) > tol.eps_eq)
                    throw DataError("repg_to_fusion: non-real multiplicity");
                fd.N(a, b, c) = static_cast<int>(
                    detail::round_checked(sum.real(), tol.eps_eq, "repg_to_fusion"));
            }
    fd.dual_of.assign(n, -1);
    fd.nu.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (cat.isomorphic(dual(SimpleLabel{fd.labels[a]}), SimpleLabel{fd.labels[b]}))
                fd.dual_of[a] = b;
        fd.nu[a] = fs_indicator(cat, SimpleLabel{fd.labels[a]});
    }
    fd.provenance = "generated from the " + g.name + " zoo entry";
    validate_fusion(fd, tol);
    return fd;
}

inline nlohmann::ordered_json fusion_to_json(const FusionData& fd) {
    nlohmann::ordered_json j;
    j["name"] = fd.name;
    j["labels"] = fd.labels;
    j["unit"] = fd.labels[fd.unit];
    int n = fd.n();
    nlohmann::ordered_json jn = nlohmann::ordered_json::array();
    for (int a = 0; a < n; ++a) {
        nlohmann::ordered_json ja = nlohmann::ordered_json::array();
        for (int b = 0; b < n; ++b) {
            nlohmann::ordered_json jb = nlohmann::ordered_json::array();
            for (int c = 0; c < n; ++c)
                jb.push_back(fd.N(a, b, c));
            ja.push_back(jb);
        }
        jn.push_back(ja);
    }
    j["N"] = jn;
    nlohmann::ordered_json jd;
    nlohmann::ordered_json jnu;
    for (int a = 0; a < n; ++a) {
        jd[fd.labels[a]] = fd.labels[fd.dual_of[a]];
        jnu[fd.labels[a]] = fd.nu[a];
    }
    j["dual"] = jd;
    j["nu"] = jnu;
    if (fd.smatrix) {
        nlohmann::ordered_json js = nlohmann::ordered_json::array();
        for (int a = 0; a < n; ++a) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int b = 0; b < n; ++b)
                row.push_back({(*fd.smatrix)(a, b).real(), (*fd.smatrix)(a, b).imag()});
            js.push_back(row);
        }
        j["S"] = js;
    }
    if (fd.theta) {
        nlohmann::ordered_json jt;
        for (int a = 0; a < n; ++a)
            jt[fd.labels[a]] = {(*fd.theta)[a].real(), (*fd.theta)[a].imag()};
        j["theta"] = jt;
    }
    if (!fd.provenance.empty())
        j["provenance"] = fd.provenance;
    return j;
}

inline nlohmann::ordered_json fusion_scan_to_json(const FusionScanReport& rep,
                                                  const FusionData& fd, bool with_rows = true) {
    nlohmann::ordered_json j;
    j["source"] = rep.source;
    j["max_len"] = rep.max_len;
    j["tuples_scanned"] = rep.tuples_scanned;
    j["admitting_pi"] = rep.admitting_pi;
    j["skipped_no_pi"] = rep.skipped_no_pi;
    j["nu_minus_one"] = rep.nu_minus_one;
    j["violation_count"] = rep.violations.size();
    nlohmann::ordered_json viol = nlohmann::ordered_json::array();
    for (size_t vi : rep.violations) {
        const auto& row = rep.rows[vi];
        std::vector<std::string> tuple;
        for (int a : row.tuple)
            tuple.push_back(fd.labels[a]);
        viol.push_back({{"tuple", tuple}, {"nu", row.nu}, {"dim", row.dim}});
    }
    j["violations"] = viol;
    if (with_rows) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : rep.rows) {
            std::vector<std::string> tuple;
            for (int a : row.tuple)
                tuple.push_back(fd.labels[a]);
            nlohmann::ordered_json r;
            r["tuple"] = tuple;
            r["admits_pi"] = row.admits_pi;
            if (row.admits_pi) {
                r["nu"] = row.nu;
                r["dim"] = row.dim;
                r["violation"] = row.violation;
            }
            rows.push_back(r);
        }
        j["rows"] = rows;
    }
    return j;
}

}  // namespace sovcat
