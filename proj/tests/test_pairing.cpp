#include <catch.hpp>

#include <random>

#include "sovcat/pairing.hpp"
#include "test_helpers.hpp"

using namespace sovcat;
using sovtest::L;
using sovtest::W;

TEST_CASE("find_pi") {
    auto q8 = sovtest::cat("q8");
    auto c3 = sovtest::cat("c3");
    auto pi = find_pi(q8, {L("V"), L("V")});
    REQUIRE(pi.has_value());
    CHECK(*pi == std::vector<int>{0, 1});  // lexicographically smallest

    auto swap = find_pi(c3, {L("omega"), L("omegabar")});
    REQUIRE(swap.has_value());
    CHECK(*swap == std::vector<int>{1, 0});

    CHECK_FALSE(find_pi(c3, {L("omega"), L("omega")}).has_value());
}

TEST_CASE("build_sigma") {
    auto q8 = sovtest::cat("q8");
    auto c3 = sovtest::cat("c3");
    SECTION("identity pi on self-dual objects") {
        auto sp = build_sigma(q8, {L("V"), L("V"), L("V")}, {0, 1, 2});
        CHECK(sp.sigma == std::vector<int>{0, 1, 2});
        CHECK(sp.fixed_points.size() == 3);
    }
    SECTION("odd cycles collapse to the identity") {
        auto sp = build_sigma(q8, {L("V"), L("V"), L("V")}, {1, 2, 0});
        CHECK(sp.sigma == std::vector<int>{0, 1, 2});
    }
    SECTION("4-cycle follows the even rule") {
        std::vector<SimpleLabel> t{L("omega"), L("omegabar"), L("omega"), L("omegabar")};
        auto sp = build_sigma(c3, t, {1, 2, 3, 0});
        CHECK(sp.sigma == std::vector<int>{3, 2, 1, 0});
        for (size_t i = 0; i < 4; ++i) {
            CHECK(sp.sigma[sp.sigma[i]] == static_cast<int>(i));
            CHECK(c3.isomorphic(t[sp.sigma[i]], dual(t[i])));
        }
        CHECK(sp.fixed_points.empty());
    }
    SECTION("a 2-cycle pi is returned as sigma") {
        auto sp = build_sigma(c3, {L("omega"), L("omegabar")}, {1, 0});
        CHECK(sp.sigma == std::vector<int>{1, 0});
    }
    SECTION("hypothesis violations are rejected") {
        CHECK_THROWS_AS(build_sigma(c3, {L("omega"), L("omega")}, {0, 1}), HypothesisError);
        CHECK_THROWS_AS(build_sigma(c3, {L("omega"), L("omega")}, {1, 0}), HypothesisError);
        CHECK_THROWS_AS(build_sigma(q8, {L("V"), L("V")}, {0, 0}), HypothesisError);
    }
}

TEST_CASE("build_iso_family") {
    SECTION("trivial pair") {
        auto c2 = sovtest::cat("c2");
        std::vector<SimpleLabel> t{L("1"), L("1")};
        auto fam = build_iso_family(c2, t, build_sigma(c2, t, {0, 1}));
        CHECK(fam.p == std::vector<int>{1, 1});
        CHECK(approx_equal(fam.f[0].mat, Mat::Ones(1, 1)));
    }
    SECTION("quaternionic fixed points get p = -1") {
        auto q8 = sovtest::cat("q8");
        std::vector<SimpleLabel> t{L("V"), L("V")};
        auto fam = build_iso_family(q8, t, build_sigma(q8, t, {0, 1}));
        CHECK(fam.p == std::vector<int>{-1, -1});
    }
    SECTION("2-orbits get p = +1") {
        auto c3 = sovtest::cat("c3");
        std::vector<SimpleLabel> t{L("omega"), L("omegabar")};
        auto fam = build_iso_family(c3, t, build_sigma(c3, t, {1, 0}));
        CHECK(fam.p == std::vector<int>{1, 1});
        CHECK(fam.f[0].cod == W({L("omegabar", true)}));
        CHECK(fam.f[1].cod == W({L("omega", true)}));
    }
}

TEST_CASE("iterated duality") {
    auto s3 = sovtest::cat("s3");
    SECTION("empty word") {
        auto d = iterated_duality(s3, {});
        CHECK(d.dom == ObjectWord{});
        CHECK(approx_equal(d.mat, Mat::Ones(1, 1)));
    }
    SECTION("single label reduces to the evaluation") {
        auto d = iterated_duality(s3, {L("std")});
        CHECK(approx_equal(d.mat, s3.evaluation(L("std")).mat));
    }
    SECTION("two labels agree with the direct word-level evaluation") {
        auto d = iterated_duality(s3, {L("std"), L("sgn")});
        auto direct = s3.evaluation(W({L("sgn"), L("std")}));
        CHECK(d.dom == direct.dom);
        CHECK(approx_equal(d.mat, direct.mat));
    }
    SECTION("three labels, mixed dimensions") {
        auto d = iterated_duality(s3, {L("std"), L("sgn"), L("std")});
        auto direct = s3.evaluation(W({L("std"), L("sgn"), L("std")}));
        CHECK(d.dom == direct.dom);
        CHECK(approx_equal(d.mat, direct.mat));
    }
}

TEST_CASE("braid realization") {
    auto s3 = sovtest::cat("s3");
    std::vector<SimpleLabel> t3{L("std"), L("std"), L("std")};
    std::vector<int> sid{0, 1, 2};
    SECTION("single object needs no braiding") {
        auto m = braid_realization(s3, {L("std")}, {0}, {});
        CHECK(approx_equal(m.mat, Mat::Identity(2, 2)));
    }
    SECTION("two self-dual objects need one flip") {
        CHECK(default_braid_word({0, 1}) == std::vector<int>{0});
        auto m = braid_realization(s3, {L("std"), L("std")}, {0, 1}, {0});
        CHECK(approx_equal(m.mat, s3.braiding_flip(L("std"), L("std")).mat));
    }
    SECTION("both reduced words of the 3-reversal are accepted and agree") {
        CHECK(default_braid_word(sid) == std::vector<int>{0, 1, 0});
        CHECK(alternate_braid_word(sid) == std::vector<int>{1, 0, 1});
        auto a = braid_realization(s3, t3, sid, {0, 1, 0});
        auto b = braid_realization(s3, t3, sid, {1, 0, 1});
        CHECK(approx_equal(a.mat, b.mat));
    }
    SECTION("words that do not realize the target are rejected") {
        // sigma = id on (std, sgn) wants the reversed word (sgn, std)
        std::vector<SimpleLabel> t{L("std"), L("sgn")};
        CHECK_THROWS_AS(braid_realization(s3, t, {0, 1}, {}), TypeError);
        CHECK_THROWS_AS(braid_realization(s3, t3, sid, {5}), TypeError);
    }
}

TEST_CASE("pairing_matrix on the worked examples") {
    SECTION("S3 (std,std,std)") {
        auto s3 = sovtest::cat("s3");
        auto rep = pairing_matrix(s3, {L("std"), L("std"), L("std")});
        REQUIRE(rep.has_value());
        CHECK(rep->dim_H == 1);
        CHECK(rep->nu == 1);
        CHECK(std::abs(rep->gram(0, 0)) > 1e-6);
        CHECK(rep->symmetry == SymmetryType::Symmetric);
        CHECK(rep->nondegenerate);
        CHECK(rep->even_ok);
        CHECK(rep->gram_matches_nu_transpose);
    }
    SECTION("Q8 (V,V,V): zero-dimensional antisymmetric case") {
        auto q8 = sovtest::cat("q8");
        auto rep = pairing_matrix(q8, {L("V"), L("V"), L("V")});
        REQUIRE(rep.has_value());
        CHECK(rep->dim_H == 0);
        CHECK(rep->nu == -1);
        CHECK(rep->gram.size() == 0);
        CHECK(rep->nondegenerate);
        CHECK(rep->even_ok);
    }
    SECTION("C3 (omega, omegabar)") {
        auto c3 = sovtest::cat("c3");
        auto rep = pairing_matrix(c3, {L("omega"), L("omegabar")});
        REQUIRE(rep.has_value());
        CHECK(rep->dim_H == 1);
        CHECK(rep->nu == 1);
        CHECK(rep->symmetry == SymmetryType::Symmetric);
        CHECK(rep->nondegenerate);
    }
    SECTION("no pi means not applicable") {
        auto c3 = sovtest::cat("c3");
        CHECK_FALSE(pairing_matrix(c3, {L("omega"), L("omega")}).has_value());
    }
    SECTION("tuples may carry dual markers") {
        auto c4 = sovtest::cat("c4");
        auto rep = pairing_matrix(c4, {L("i"), L("i", true)});
        REQUIRE(rep.has_value());
        CHECK(rep->dim_H == 1);
        CHECK(rep->nondegenerate);
    }
}

TEST_CASE("gram shortcut agrees with the full composite") {
    auto q8 = sovtest::cat("q8");
    std::vector<SimpleLabel> t{L("V"), L("V")};
    auto rep = pairing_matrix(q8, t);
    REQUIRE(rep.has_value());
    REQUIRE(rep->dim_H == 1);

    auto sp = build_sigma(q8, t, rep->pi);
    auto fam = build_iso_family(q8, t, sp);
    auto braid = braid_realization(q8, t, sp.sigma, rep->braid_word);
    std::vector<SimpleLabel> sigma_word{t[sp.sigma[0]], t[sp.sigma[1]]};
    auto d_iter = iterated_duality(q8, sigma_word);
    auto basis = q8.invariant_basis(ObjectWord{t});
    Morphism big = compose(d_iter, tensor(tensor(fam.f[0], fam.f[1]),
                                          braid));
    Morphism full = compose(big, tensor(basis[0], basis[0]));
    CHECK(std::abs(full.mat(0, 0) - rep->gram(0, 0)) < 1e-9);
}

TEST_CASE("braid word independence of verdicts") {
    auto s3 = sovtest::cat("s3");
    std::vector<SimpleLabel> t{L("std"), L("std"), L("std")};
    auto base = pairing_matrix(s3, t);
    PairingOptions alt;
    alt.braid_word = alternate_braid_word(build_sigma(s3, t, *find_pi(s3, t)).sigma);
    auto other = pairing_matrix(s3, t, alt);
    REQUIRE(base.has_value());
    REQUIRE(other.has_value());
    CHECK(base->dim_H == other->dim_H);
    CHECK(base->nu == other->nu);
    CHECK(base->symmetry == other->symmetry);
    CHECK(base->nondegenerate == other->nondegenerate);
    CHECK(base->even_ok == other->even_ok);
}

TEST_CASE("palindrome mode") {
    SECTION("agrees with the braided report on (omega, omegabar)") {
        auto c3 = sovtest::cat("c3");
        std::vector<SimpleLabel> t{L("omega"), L("omegabar")};
        auto braided = pairing_matrix(c3, t);
        auto pal = pairing_palindrome(c3, t);
        REQUIRE(braided.has_value());
        REQUIRE(pal.has_value());
        CHECK(pal->palindrome_mode);
        CHECK(pal->braid_word.empty());
        CHECK(pal->dim_H == braided->dim_H);
        CHECK(pal->nu == braided->nu);
        CHECK(pal->symmetry == braided->symmetry);
        CHECK(pal->nondegenerate == braided->nondegenerate);
    }
    SECTION("(V,V) over Q8") {
        auto q8 = sovtest::cat("q8");
        auto pal = pairing_palindrome(q8, {L("V"), L("V")});
        REQUIRE(pal.has_value());
        CHECK(pal->dim_H == 1);
        CHECK(pal->symmetry == SymmetryType::Symmetric);
        CHECK(pal->nondegenerate);
    }
    SECTION("non-palindromic tuple with zero invariants is trivially consistent") {
        auto s3 = sovtest::cat("s3");
        auto pal = pairing_palindrome(s3, {L("std"), L("sgn")});
        REQUIRE(pal.has_value());
        CHECK(pal->dim_H == 0);
        CHECK(pal->even_ok);
        CHECK(pal->nondegenerate);
    }
    SECTION("non-palindromic tuple with invariants is not applicable") {
        auto s3 = sovtest::cat("s3");
        CHECK_FALSE(pairing_palindrome(s3, {L("std"), L("std"), L("sgn")}).has_value());
    }
}

TEST_CASE("sigma construction property test (small)") {
    std::mt19937_64 rng(99);
    std::vector<std::string> names = zoo_names();
    std::uniform_int_distribution<size_t> pick_name(0, names.size() - 1);
    std::uniform_int_distribution<int> len(1, 5);
    std::uniform_int_distribution<int> coin(0, 1);
    int built = 0;
    while (built < 50) {
        const auto& entry = sovtest::zoo(names[pick_name(rng)]);
        RepCategory cat(entry);
        std::uniform_int_distribution<size_t> pick(0, entry.irreps.size() - 1);
        std::vector<SimpleLabel> t;
        int l = len(rng);
        for (int i = 0; i < l; ++i)
            t.push_back({entry.irreps[pick(rng)].label, coin(rng) == 1});
        auto pi = find_pi(cat, t);
        if (!pi)
            continue;
        // random valid pi: shuffle targets inside each duality class
        std::vector<int> perm(t.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> rpi(t.size(), -1);
        std::vector<char> used(t.size(), 0);
        bool ok = true;
        for (size_t i = 0; i < t.size() && ok; ++i) {
            ok = false;
            for (size_t jj = 0; jj < t.size(); ++jj) {
                int j = perm[jj];
                if (!used[j] && cat.isomorphic(t[j], dual(t[i]))) {
                    rpi[i] = j;
                    used[j] = 1;
                    ok = true;
                    break;
                }
            }
        }
        REQUIRE(ok);  // closure guarantees a matching exists
        auto sp = build_sigma(cat, t, rpi);
        for (size_t i = 0; i < t.size(); ++i) {
            CHECK(sp.sigma[sp.sigma[i]] == static_cast<int>(i));
            CHECK(cat.isomorphic(t[sp.sigma[i]], dual(t[i])));
        }
        ++built;
    }
}

TEST_CASE("report JSON round-trip") {
    auto s3 = sovtest::cat("s3");
    auto rep = pairing_matrix(s3, {L("std"), L("std")});
    REQUIRE(rep.has_value());
    auto j = report_to_json(*rep);
    CHECK(j.at("dim_H").get<int>() == rep->dim_H);
    CHECK(verify_report_json(j));
    nlohmann::json tampered = j;
    tampered["symmetry"] = "antisymmetric";
    CHECK_FALSE(verify_report_json(tampered));
}
