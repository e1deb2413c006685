// sovcat: sovereign-category verification engine.
//
// Batch, non-interactive front end: indicator tables, pairing reports,
// evenness scans, diagram evaluation and seeded self-tests over the
// bundled group/fusion zoo.
//
// Exit codes: 0 success, 1 theorem/oracle violation, 2 usage or load
// error, 3 hypothesis not applicable.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sovcat/diagram.hpp"
#include "sovcat/fusiondata.hpp"
#include "sovcat/groupmodel.hpp"
#include "sovcat/indicator.hpp"
#include "sovcat/pairing.hpp"
#include "sovcat/repcat.hpp"
#include "sovcat/scan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotApplicable = 3;

struct CommonOpts {
    std::string zoo;
    std::string fusion_file;
    std::string zoo_dir;
    double eps_eq = 1e-8;
    double eps_rank = 1e-9;
    bool json = false;
    std::string out;
};

sovcat::Tolerance tolerance(const CommonOpts& c) { return {c.eps_eq, c.eps_rank}; }

std::string zoo_dir(const CommonOpts& c) {
    return c.zoo_dir.empty() ? sovcat::default_zoo_dir() : c.zoo_dir;
}

void require_one_source(const CommonOpts& c, bool fusion_allowed = true) {
    int sources = (!c.zoo.empty() ? 1 : 0) + (!c.fusion_file.empty() ? 1 : 0);
    if (sources != 1 || (!fusion_allowed && !c.fusion_file.empty()))
        throw CLI::ValidationError("exactly one category source required (--zoo or --fusion)");
}

void write_output(const CommonOpts& c, const nlohmann::ordered_json& j) {
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f)
            throw sovcat::DataError("cannot write " + c.out);
        f << j.dump(1) << "\n";
    } else if (c.json) {
        std::cout << j.dump(1) << "\n";
    }
}

std::vector<sovcat::SimpleLabel> parse_objects(const std::string& spec) {
    std::vector<sovcat::SimpleLabel> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            throw CLI::ValidationError("--objects: empty label");
        sovcat::SimpleLabel l{item, false};
        if (item.back() == '^') {
            l.irrep = item.substr(0, item.size() - 1);
            l.dualized = true;
        }
        out.push_back(std::move(l));
    }
    if (out.empty())
        throw CLI::ValidationError("--objects: no labels given");
    return out;
}

std::vector<int> parse_one_based(const std::string& spec, const char* what) {
    std::vector<int> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int v = std::stoi(item);
        if (v < 1)
            throw CLI::ValidationError(std::string(what) + ": indices are 1-based");
        out.push_back(v - 1);
    }
    return out;
}

std::string fmt(sovcat::Scalar z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

void print_matrix(const sovcat::Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::string line = "  [";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c)
                line += ", ";
            line += fmt(m(r, c));
        }
        std::cout << line << "]\n";
    }
}

int cmd_indicators(const CommonOpts& c) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool all_agree = true;
    if (!c.zoo.empty()) {
        auto entry = sovcat::load_zoo_by_name(c.zoo, zoo_dir(c), tolerance(c));
        sovcat::RepCategory cat(entry, tolerance(c));
        std::printf("%-10s %4s %14s %10s %s\n", "label", "dim", "nu_categorical", "nu_oracle",
                    "agree");
        for (const auto& r : entry.irreps) {
            int nu_cat = sovcat::fs_indicator(cat, {r.label});
            int nu_orc = sovcat::fs_indicator_character_oracle(entry, r, tolerance(c));
            bool agree = nu_cat == nu_orc;
            all_agree = all_agree && agree;
            std::printf("%-10s %4d %14d %10d %s\n", r.label.c_str(), r.dim, nu_cat, nu_orc,
                        agree ? "yes" : "NO");
            rows.push_back({{"label", r.label},
                            {"dim", r.dim},
                            {"nu_categorical", nu_cat},
                            {"nu_oracle", nu_orc},
                            {"agree", agree}});
        }
    } else {
        auto fd = sovcat::load_fusion(c.fusion_file, tolerance(c));
        std::printf("%-10s %8s\n", "label", "nu_file");
        for (int a = 0; a < fd.n(); ++a) {
            std::printf("%-10s %8d\n", fd.labels[a].c_str(), fd.nu[a]);
            rows.push_back({{"label", fd.labels[a]}, {"nu_file", fd.nu[a]}});
        }
    }
    nlohmann::ordered_json j;
    j["indicators"] = rows;
    j["all_agree"] = all_agree;
    write_output(c, j);
    if (!all_agree) {
        std::cout << "indicator oracle disagreement detected\n";
        return kExitViolation;
    }
    return kExitOk;
}

std::string perm_str(const std::vector<int>& p) {
    std::string s = "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i)
            s += " ";
        s += std::to_string(p[i] + 1);
    }
    return s + ")";
}

int cmd_pairing(const CommonOpts& c, const std::string& objects, const std::string& pi_spec,
                const std::string& braid_spec, bool palindrome) {
    auto entry = sovcat::load_zoo_by_name(c.zoo, zoo_dir(c), tolerance(c));
    sovcat::RepCategory cat(entry, tolerance(c));
    auto tuple = parse_objects(objects);
    for (const auto& l : tuple)
        entry.irrep(l.irrep);  // reject unknown labels as a load error

    std::optional<sovcat::PairingReport> rep;
    if (palindrome) {
        rep = sovcat::pairing_palindrome(cat, tuple);
    } else {
        sovcat::PairingOptions opts;
        if (!pi_spec.empty())
            opts.pi = parse_one_based(pi_spec, "--pi");
        if (!braid_spec.empty())
            opts.braid_word = parse_one_based(braid_spec, "--braid-word");
        rep = sovcat::pairing_matrix(cat, tuple, opts);
    }
    if (!rep) {
        std::cout << (palindrome ? "not applicable: tuple is not duality-palindromic\n"
                                 : "not applicable: no permutation pi satisfies the duality "
                                   "hypothesis for this tuple\n");
        return kExitNotApplicable;
    }
    std::cout << "tuple:          ";
    for (size_t i = 0; i < rep->tuple.size(); ++i)
        std::cout << (i ? "," : "") << sovcat::to_string(rep->tuple[i]);
    std::cout << "\n";
    if (!rep->pi.empty()) {
        std::cout << "pi:             " << perm_str(rep->pi) << "\n";
        std::cout << "sigma:          " << perm_str(rep->sigma) << "\n";
    }
    std::cout << "dim_H:          " << rep->dim_H << "\n";
    std::cout << "nu:             " << (rep->nu > 0 ? "+1" : "-1") << "\n";
    std::cout << "symmetry:       " << sovcat::to_string(rep->symmetry) << "\n";
    std::cout << "nondegenerate:  " << (rep->nondegenerate ? "yes" : "NO") << "\n";
    std::cout << "even_ok:        " << (rep->even_ok ? "yes" : "NO") << "\n";
    std::cout << "braid word:     ";
    if (rep->braid_word.empty()) {
        std::cout << (rep->palindrome_mode ? "(identity, palindrome mode)" : "(identity)");
    } else {
        for (size_t i = 0; i < rep->braid_word.size(); ++i)
            std::cout << (i ? " " : "") << "s" << rep->braid_word[i] + 1;
    }
    std::cout << "\n";
    if (rep->dim_H > 0 && rep->dim_H <= 6) {
        std::cout << "gram:\n";
        print_matrix(rep->gram);
    }
    write_output(c, sovcat::report_to_json(*rep));
    return sovcat::report_violates_theorem(*rep) ? kExitViolation : kExitOk;
}

int cmd_scan(const CommonOpts& c, int max_len, int jobs, bool no_rows) {
    nlohmann::ordered_json j;
    size_t violations = 0;
    if (!c.zoo.empty()) {
        auto entry = sovcat::load_zoo_by_name(c.zoo, zoo_dir(c), tolerance(c));
        sovcat::RepCategory cat(entry, tolerance(c));
        auto rep = sovcat::scan_pairings(cat, max_len, jobs);
        violations = rep.violations.size();
        std::printf("%s: scanned %ld multisets (max len %d): %ld admit pi, %ld skipped, "
                    "%ld with nu=-1, %zu violations\n",
                    rep.source.c_str(), rep.tuples_scanned, max_len, rep.admitting_pi,
                    rep.skipped_no_pi, rep.nu_minus_one, violations);
        j = sovcat::zoo_scan_to_json(rep, !no_rows);
    } else {
        auto fd = sovcat::load_fusion(c.fusion_file, tolerance(c));
        auto rep = sovcat::evenness_scan(fd, max_len);
        violations = rep.violations.size();
        std::printf("%s: scanned %ld multisets (max len %d): %ld admit pi, %ld skipped, "
                    "%ld with nu=-1, %zu violations\n",
                    rep.source.c_str(), rep.tuples_scanned, max_len, rep.admitting_pi,
                    rep.skipped_no_pi, rep.nu_minus_one, violations);
        for (size_t vi : rep.violations) {
            const auto& row = rep.rows[vi];
            std::string t;
            for (int a : row.tuple)
                t += (t.empty() ? "" : ",") + fd.labels[a];
            std::printf("  VIOLATION (%s): nu=-1, dim=%ld\n", t.c_str(), row.dim);
        }
        j = sovcat::fusion_scan_to_json(rep, fd, !no_rows);
    }
    write_output(c, j);
    return violations == 0 ? kExitOk : kExitViolation;
}

int cmd_eval(const CommonOpts& c, const std::string& expr_src) {
    auto entry = sovcat::load_zoo_by_name(c.zoo, zoo_dir(c), tolerance(c));
    sovcat::RepCategory cat(entry, tolerance(c));
    sovcat::Environment env;
    try {
        auto ast = sovcat::parse(expr_src);
        auto [dom, cod] = sovcat::typecheck(ast, env, cat);
        auto m = sovcat::evaluate(ast, env, cat);
        std::cout << "dom: " << sovcat::to_string(dom) << "\n";
        std::cout << "cod: " << sovcat::to_string(cod) << "\n";
        std::cout << "matrix (" << m.mat.rows() << "x" << m.mat.cols() << "):\n";
        print_matrix(m.mat);
        if (c.json || !c.out.empty()) {
            nlohmann::ordered_json j;
            j["expr"] = sovcat::print(ast);
            j["dom"] = sovcat::to_string(dom);
            j["cod"] = sovcat::to_string(cod);
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (Eigen::Index r = 0; r < m.mat.rows(); ++r) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (Eigen::Index cc = 0; cc < m.mat.cols(); ++cc)
                    row.push_back({m.mat(r, cc).real(), m.mat(r, cc).imag()});
                rows.push_back(row);
            }
            j["mat"] = rows;
            write_output(c, j);
        }
        return kExitOk;
    } catch (const sovcat::DiagramError& err) {
        const char* kind = err.kind == sovcat::DiagramError::Kind::Syntax ? "syntax error"
                           : err.kind == sovcat::DiagramError::Kind::Type ? "type error"
                                                                          : "unbound name";
        std::cout << kind << ": " << err.what() << "\n";
        std::cout << expr_src << "\n";
        for (size_t i = 0; i < err.pos && i < expr_src.size(); ++i)
            std::cout << ' ';
        std::cout << "^\n";
        return kExitUsage;
    }
}

int cmd_selftest(const CommonOpts& c, uint64_t seed, int samples) {
    auto dir = zoo_dir(c);
    std::vector<std::string> names =
        c.zoo.empty() ? sovcat::zoo_names(dir) : std::vector<std::string>{c.zoo};
    bool ok = true;
    for (const auto& name : names) {
        auto entry = sovcat::load_zoo_by_name(name, dir, tolerance(c));
        sovcat::RepCategory cat(entry, tolerance(c));
        std::mt19937_64 rng(seed);
        int checked = 0, failed = 0;

        // zig-zag identities for every simple object and its dual
        for (const auto& r : entry.irreps)
            for (bool dd : {false, true}) {
                sovcat::SimpleLabel x{r.label, dd};
                sovcat::ObjectWord wx{{x}};
                auto id_x = cat.identity(wx);
                auto id_xd = cat.identity(sovcat::ObjectWord{{dual(x)}});
                auto z1 = compose(tensor(id_x, cat.evaluation(x)),
                                  tensor(cat.coevaluation(x), id_x));
                auto z2 = compose(tensor(cat.evaluation(x), id_xd),
                                  tensor(id_xd, cat.coevaluation(x)));
                auto z3 = compose(tensor(cat.evaluation_left(x), id_x),
                                  tensor(id_x, cat.coevaluation_left(x)));
                auto z4 = compose(tensor(id_xd, cat.evaluation_left(x)),
                                  tensor(cat.coevaluation_left(x), id_xd));
                ++checked;
                if (!approx_equal(z1.mat, id_x.mat, cat.tol()) ||
                    !approx_equal(z2.mat, id_xd.mat, cat.tol()) ||
                    !approx_equal(z3.mat, id_x.mat, cat.tol()) ||
                    !approx_equal(z4.mat, id_xd.mat, cat.tol()))
                    ++failed;
            }

        // sovereignty and flip naturality on seeded random intertwiners
        std::vector<sovcat::ObjectWord> words;
        for (const auto& r : entry.irreps)
            for (bool dd : {false, true})
                words.push_back(sovcat::ObjectWord{{{r.label, dd}}});
        std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
        for (int t = 0; t < samples; ++t) {
            sovcat::ObjectWord a = words[pick(rng)];
            sovcat::ObjectWord b = words[pick(rng)];
            sovcat::ObjectWord ab = a;
            ab.factors.push_back(b.factors[0]);
            auto f = cat.random_intertwiner(ab, ab, rng);
            ++checked;
            if (!approx_equal(cat.dual_morphism(f).mat, cat.left_dual_morphism(f).mat, cat.tol()))
                ++failed;
            auto fa = cat.random_intertwiner(a, a, rng);
            auto fb = cat.random_intertwiner(b, b, rng);
            auto flip = cat.braiding_flip(a.factors[0], b.factors[0]);
            auto lhs = compose(flip, tensor(fa, fb));
            auto rhs = compose(tensor(fb, fa), flip);
            ++checked;
            if (!approx_equal(lhs.mat, rhs.mat, cat.tol()))
                ++failed;
        }

        ok = ok && failed == 0;
        std::printf("%-6s %3d checks, %d failures\n", entry.group.name.c_str(), checked, failed);
    }
    return ok ? kExitOk : kExitViolation;
}

int cmd_export_fusion(const CommonOpts& c) {
    auto entry = sovcat::load_zoo_by_name(c.zoo, zoo_dir(c), tolerance(c));
    auto fd = sovcat::repg_to_fusion(entry, tolerance(c));
    auto j = sovcat::fusion_to_json(fd);
    if (c.out.empty())
        std::cout << j.dump(1) << "\n";
    else
        write_output(c, j);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sovcat: verification engine for sovereign tensor categories"};
    app.set_version_flag("--version", "sovcat 0.1.0");
    app.require_subcommand(1);

    CommonOpts common;
    auto add_common = [&](CLI::App* sub, bool with_fusion) {
        sub->add_option("--zoo", common.zoo, "group zoo entry name (e.g. Q8)");
        if (with_fusion)
            sub->add_option("--fusion", common.fusion_file, "fusion data file");
        sub->add_option("--zoo-dir", common.zoo_dir, "override the zoo directory");
        sub->add_option("--eps-eq", common.eps_eq, "entrywise equality threshold");
        sub->add_option("--eps-rank", common.eps_rank, "singular value threshold");
        sub->add_flag("--json", common.json, "print a JSON report to stdout");
        sub->add_option("--out", common.out, "write the JSON report to a file");
    };

    auto* ind = app.add_subcommand("indicators", "Frobenius-Schur indicator table");
    add_common(ind, true);

    auto* pair = app.add_subcommand("pairing", "bilinear pairing report for one tuple");
    add_common(pair, false);
    std::string objects, pi_spec, braid_spec;
    bool palindrome = false;
    pair->add_option("--objects", objects, "comma list of labels, '^' marks a dual")->required();
    pair->add_option("--pi", pi_spec, "override pi (1-based images)");
    pair->add_option("--braid-word", braid_spec, "override the braid word (1-based positions)");
    pair->add_flag("--palindrome", palindrome, "braiding-free palindrome mode");

    auto* scan = app.add_subcommand("scan", "exhaustive evenness audit");
    add_common(scan, true);
    int max_len = 4, jobs = 1;
    bool no_rows = false;
    scan->add_option("--max-len", max_len, "maximum tuple length")->check(CLI::PositiveNumber);
    scan->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    scan->add_flag("--no-rows", no_rows, "omit per-tuple rows from the JSON report");

    auto* ev = app.add_subcommand("eval", "evaluate a diagram expression");
    add_common(ev, false);
    std::string expr_src;
    ev->add_option("--expr", expr_src, "diagram expression")->required();

    auto* st = app.add_subcommand("selftest", "seeded random-intertwiner property checks");
    add_common(st, false);
    uint64_t seed = 2718281828;
    int samples = 20;
    st->add_option("--seed", seed, "RNG seed");
    st->add_option("--samples", samples, "random intertwiners per entry");

    auto* ex = app.add_subcommand("export-fusion", "emit fusion data generated from a zoo entry");
    add_common(ex, false);

    try {
        app.parse(argc, argv);
        if (ind->parsed()) {
            require_one_source(common);
            return cmd_indicators(common);
        }
        if (pair->parsed()) {
            require_one_source(common, false);
            return cmd_pairing(common, objects, pi_spec, braid_spec, palindrome);
        }
        if (scan->parsed()) {
            require_one_source(common);
            return cmd_scan(common, max_len, jobs, no_rows);
        }
        if (ev->parsed()) {
            require_one_source(common, false);
            return cmd_eval(common, expr_src);
        }
        if (st->parsed())
            return cmd_selftest(common, seed, samples);
        if (ex->parsed()) {
            require_one_source(common, false);
            return cmd_export_fusion(common);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const sovcat::HypothesisError& e) {
        std::cout << "not applicable: " << e.what() << "\n";
        return kExitNotApplicable;
    } catch (const std::exception& e) {
        std::cout << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
