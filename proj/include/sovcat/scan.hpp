#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "sovcat/fusiondata.hpp"
#include "sovcat/pairing.hpp"

namespace sovcat {

/// Run fn(i) for i in [0, n) on `jobs` threads. Work is split by index,
/// so results stored per index are deterministic regardless of jobs.
template <typename Fn>
void parallel_for(size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    size_t nthreads = std::min<size_t>(static_cast<size_t>(jobs), n);
    std::atomic<size_t> next{0};
    for (size_t t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

struct ZooScanRow {
    std::vector<SimpleLabel> tuple;
    bool admits_pi = false;
    std::optional<PairingReport> report;
    bool violation = false;
};

struct ZooScanReport {
    std::string source;
    int max_len = 0;
    long tuples_scanned = 0;
    long admitting_pi = 0;
    long skipped_no_pi = 0;
    long nu_minus_one = 0;
    std::vector<ZooScanRow> rows;
    std::vector<size_t> violations;
};

inline bool report_violates_theorem(const PairingReport& rep) {
    if (!rep.even_ok)
        return true;
    if (rep.dim_H > 0 && !rep.nondegenerate)
        return true;
    if (!rep.gram_matches_nu_transpose || rep.symmetry == SymmetryType::Mixed)
        return true;
    return false;
}

/// Morphism-level evenness audit: for every label multiset of size
/// 1..max_len admitting pi, build the full pairing and check the
/// theorem's verdicts.
inline ZooScanReport scan_pairings(const RepCategory& cat, int max_len, int jobs = 1) {
    ZooScanReport rep;
    rep.source = "Rep(" + cat.group().name + ")";
    rep.max_len = max_len;

    std::vector<std::vector<SimpleLabel>> tuples;
    std::vector<SimpleLabel> cur;
    size_t nlabels = cat.zoo().irreps.size();
    auto rec = [&](auto&& self, size_t lo, int remaining) -> void {
        if (!cur.empty())
            tuples.push_back(cur);
        if (remaining == 0)
            return;
        for (size_t a = lo; a < nlabels; ++a) {
            cur.push_back(SimpleLabel{cat.zoo().irreps[a].label});
            self(self, a, remaining - 1);
            cur.pop_back();
        }
    };
    rec(rec, 0, max_len);

    rep.rows.resize(tuples.size());
    parallel_for(tuples.size(), jobs, [&](size_t i) {
        ZooScanRow row;
        row.tuple = tuples[i];
        auto report = pairing_matrix(cat, row.tuple);
        row.admits_pi = report.has_value();
        if (report) {
            row.violation = report_violates_theorem(*report);
            row.report = std::move(report);
        }
        rep.rows[i] = std::move(row);
    });
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        ++rep.tuples_scanned;
        if (!rep.rows[i].admits_pi) {
            ++rep.skipped_no_pi;
            continue;
        }
        ++rep.admitting_pi;
        if (rep.rows[i].report->nu == -1)
            ++rep.nu_minus_one;
        if (rep.rows[i].violation)
            rep.violations.push_back(i);
    }
    return rep;
}

inline nlohmann::ordered_json zoo_scan_to_json(const ZooScanReport& rep, bool with_rows = true) {
    nlohmann::ordered_json j;
    j["source"] = rep.source;
    j["max_len"] = rep.max_len;
    j["tuples_scanned"] = rep.tuples_scanned;
    j["admitting_pi"] = rep.admitting_pi;
    j["skipped_no_pi"] = rep.skipped_no_pi;
    j["nu_minus_one"] = rep.nu_minus_one;
    j["violation_count"] = rep.violations.size();
    nlohmann::ordered_json viol = nlohmann::ordered_json::array();
    for (size_t vi : rep.violations)
        viol.push_back(report_to_json(*rep.rows[vi].report));
    j["violations"] = viol;
    if (with_rows) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : rep.rows) {
            nlohmann::ordered_json r;
            std::vector<std::string> tuple;
            for (const auto& x : row.tuple)
                tuple.push_back(to_string(x));
            r["tuple"] = tuple;
            r["admits_pi"] = row.admits_pi;
            if (row.report) {
                r["dim_H"] = row.report->dim_H;
                r["nu"] = row.report->nu;
                r["nondegenerate"] = row.report->nondegenerate;
                r["symmetry"] = to_string(row.report->symmetry);
                r["even_ok"] = row.report->even_ok;
                r["violation"] = row.violation;
            }
            rows.push_back(r);
        }
        j["rows"] = rows;
    }
    return j;
}

}  // namespace sovcat
