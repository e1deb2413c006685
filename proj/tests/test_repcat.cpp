#include <catch.hpp>

#include <random>

#include "sovcat/repcat.hpp"
#include "sovcat/scan.hpp"
#include "test_helpers.hpp"

using namespace sovcat;
using sovtest::L;
using sovtest::W;

namespace {

Morphism right_zigzag_1(const RepCategory& c, const SimpleLabel& x) {
    // (id_X (x) d_X) o (b_X (x) id_X)
    auto id_x = c.identity(W({x}));
    return compose(tensor(id_x, c.evaluation(x)), tensor(c.coevaluation(x), id_x));
}

Morphism right_zigzag_2(const RepCategory& c, const SimpleLabel& x) {
    // (d_X (x) id_{X^}) o (id_{X^} (x) b_X)
    auto id_xd = c.identity(W({dual(x)}));
    return compose(tensor(c.evaluation(x), id_xd), tensor(id_xd, c.coevaluation(x)));
}

Morphism left_zigzag_1(const RepCategory& c, const SimpleLabel& x) {
    // (d~_X (x) id_X) o (id_X (x) b~_X)
    auto id_x = c.identity(W({x}));
    return compose(tensor(c.evaluation_left(x), id_x), tensor(id_x, c.coevaluation_left(x)));
}

Morphism left_zigzag_2(const RepCategory& c, const SimpleLabel& x) {
    // (id_{X^} (x) d~_X) o (b~_X (x) id_{X^})
    auto id_xd = c.identity(W({dual(x)}));
    return compose(tensor(id_xd, c.evaluation_left(x)), tensor(c.coevaluation_left(x), id_xd));
}

}  // namespace

TEST_CASE("tensor basics") {
    auto c = sovtest::cat("q8");
    auto unit = c.identity(ObjectWord{});
    CHECK(tensor(unit, unit).mat.isApprox(Mat::Identity(1, 1)));
    auto idv = c.identity(W({L("V")}));
    auto vv = tensor(idv, idv);
    CHECK(vv.dom == W({L("V"), L("V")}));
    CHECK(approx_equal(vv.mat, Mat::Identity(4, 4)));
}

TEST_CASE("compose checks words") {
    auto c = sovtest::cat("s3");
    std::mt19937_64 rng(3);
    auto f = c.random_intertwiner(W({L("std")}), W({L("std")}), rng);
    auto id = c.identity(W({L("std")}));
    CHECK(approx_equal(compose(id, f).mat, f.mat));
    CHECK(approx_equal(compose(f, id).mat, f.mat));
    CHECK_THROWS_AS(compose(f, c.identity(W({L("sgn")}))), TypeError);
}

TEST_CASE("coevaluation examples") {
    auto cs3 = sovtest::cat("s3");
    CHECK(approx_equal(cs3.coevaluation(L("1")).mat, Mat::Ones(1, 1)));
    auto cq8 = sovtest::cat("q8");
    Mat bv = cq8.coevaluation(L("V")).mat;
    Mat expect(4, 1);
    expect << 1, 0, 0, 1;
    CHECK(approx_equal(bv, expect));
    CHECK(approx_equal(right_zigzag_1(cs3, L("std")).mat, Mat::Identity(2, 2)));
}

TEST_CASE("evaluation examples") {
    auto cs3 = sovtest::cat("s3");
    CHECK(approx_equal(cs3.evaluation(L("1")).mat, Mat::Ones(1, 1)));
    auto cq8 = sovtest::cat("q8");
    CHECK_THROWS_AS(compose(cq8.evaluation(L("V")), cq8.coevaluation(L("V"))), TypeError);
    CHECK(approx_equal(right_zigzag_2(cq8, L("V")).mat, Mat::Identity(2, 2)));
}

TEST_CASE("all four zig-zags hold for every label of every zoo entry") {
    for (const auto& name : zoo_names()) {
        auto c = sovtest::cat(name);
        for (const auto& r : sovtest::zoo(name).irreps)
            for (bool dd : {false, true}) {
                SimpleLabel x{r.label, dd};
                Eigen::Index d = c.dim(x);
                CHECK(approx_equal(right_zigzag_1(c, x).mat, Mat::Identity(d, d)));
                CHECK(approx_equal(right_zigzag_2(c, x).mat, Mat::Identity(d, d)));
                CHECK(approx_equal(left_zigzag_1(c, x).mat, Mat::Identity(d, d)));
                CHECK(approx_equal(left_zigzag_2(c, x).mat, Mat::Identity(d, d)));
            }
    }
}

TEST_CASE("word-level duality handles mixed dimensions") {
    auto c = sovtest::cat("s3");
    ObjectWord w = W({L("std"), L("sgn"), L("1", true)});
    Eigen::Index d = c.dim(w);
    auto id_w = c.identity(w);
    auto id_wd = c.identity(dual(w));
    auto z1 = compose(tensor(id_w, c.evaluation(w)), tensor(c.coevaluation(w), id_w));
    auto z2 = compose(tensor(c.evaluation(w), id_wd), tensor(id_wd, c.coevaluation(w)));
    CHECK(approx_equal(z1.mat, Mat::Identity(d, d)));
    CHECK(approx_equal(z2.mat, Mat::Identity(d, d)));
    CHECK(c.is_intertwiner(c.coevaluation(w)));
    CHECK(c.is_intertwiner(c.evaluation_left(w)));
}

TEST_CASE("eso identity on invariant vectors") {
    auto c = sovtest::cat("q8");
    ObjectWord y = W({L("V"), L("V")});
    auto basis = c.invariant_basis(y);
    REQUIRE(basis.size() == 1);
    for (const auto& g : basis) {
        auto lhs = compose(c.evaluation_left(y), tensor(g, c.identity(dual(y))));
        auto rhs = compose(c.evaluation(y), tensor(c.identity(dual(y)), g));
        CHECK(approx_equal(lhs.mat, rhs.mat));
    }
}

TEST_CASE("dual morphism") {
    auto c = sovtest::cat("s3");
    SECTION("dual of identity is the identity") {
        auto idw = c.identity(W({L("std"), L("sgn")}));
        auto d = c.dual_morphism(idw);
        CHECK(d.dom == dual(idw.dom));
        CHECK(approx_equal(d.mat, Mat::Identity(2, 2)));
    }
    SECTION("contravariance on random intertwiners") {
        std::mt19937_64 rng(17);
        ObjectWord w = W({L("std"), L("std")});
        for (int t = 0; t < 10; ++t) {
            auto f = c.random_intertwiner(w, w, rng);
            auto g = c.random_intertwiner(w, w, rng);
            auto lhs = c.dual_morphism(compose(g, f));
            auto rhs = compose(c.dual_morphism(f), c.dual_morphism(g));
            CHECK(approx_equal(lhs.mat, rhs.mat));
        }
    }
    SECTION("sovereignty: left and right duals coincide") {
        std::mt19937_64 rng(23);
        ObjectWord a = W({L("std")});
        ObjectWord b = W({L("std"), L("sgn")});
        for (int t = 0; t < 10; ++t) {
            auto f = c.random_intertwiner(a, b, rng);
            CHECK(approx_equal(c.dual_morphism(f).mat, c.left_dual_morphism(f).mat));
        }
    }
}

TEST_CASE("braiding flip") {
    auto c = sovtest::cat("q8");
    SECTION("trivial on the unit-dimensional case") {
        auto cs3 = sovtest::cat("s3");
        CHECK(approx_equal(cs3.braiding_flip(L("1"), L("1")).mat, Mat::Ones(1, 1)));
    }
    SECTION("flip squared is the identity") {
        auto flip = c.braiding_flip(L("V"), L("V"));
        CHECK(approx_equal(compose(flip, flip).mat, Mat::Identity(4, 4)));
    }
    SECTION("naturality on random intertwiners") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 10; ++t) {
            auto f = c.random_intertwiner(W({L("V")}), W({L("V")}), rng);
            auto g = c.random_intertwiner(W({L("V", true)}), W({L("V", true)}), rng);
            auto flip = c.braiding_flip(L("V"), L("V", true));
            auto lhs = compose(flip, tensor(f, g));
            auto rhs = compose(tensor(g, f), flip);
            CHECK(approx_equal(lhs.mat, rhs.mat));
        }
    }
}

TEST_CASE("traces and dimensions") {
    auto c = sovtest::cat("q8");
    auto [dl, dr] = c.dims(ObjectWord{});
    CHECK(std::abs(dl - Scalar(1.0)) < 1e-12);
    CHECK(std::abs(dr - Scalar(1.0)) < 1e-12);
    auto [vl, vr] = c.dims(W({L("V")}));
    CHECK(std::abs(vl - Scalar(2.0)) < 1e-9);
    CHECK(std::abs(vr - Scalar(2.0)) < 1e-9);
    SECTION("left and right traces agree (Rep(G) is spherical)") {
        auto cs3 = sovtest::cat("s3");
        std::mt19937_64 rng(29);
        ObjectWord w = W({L("std"), L("std")});
        for (int t = 0; t < 10; ++t) {
            auto f = cs3.random_intertwiner(w, w, rng);
            CHECK(std::abs(cs3.trace_left(f) - cs3.trace_right(f)) < 1e-9);
            CHECK(std::abs(cs3.trace_left(f) - f.mat.trace()) < 1e-9);
        }
    }
    SECTION("non-endomorphism is rejected") {
        CHECK_THROWS_AS(c.trace_left(c.coevaluation(L("V"))), TypeError);
    }
}

TEST_CASE("invariant basis") {
    auto c = sovtest::cat("q8");
    auto unit = c.invariant_basis(ObjectWord{});
    REQUIRE(unit.size() == 1);
    CHECK(approx_equal(unit[0].mat, Mat::Ones(1, 1)));
    CHECK(c.invariant_basis(W({L("V"), L("V")})).size() == 1);
    CHECK(c.invariant_basis(W({L("V"), L("V"), L("V")})).empty());
    SECTION("count equals the character oracle on sample words") {
        for (const auto& name : {"s3", "a4", "sl23"}) {
            auto cc = sovtest::cat(name);
            const auto& entry = sovtest::zoo(name);
            std::mt19937_64 rng(101);
            std::uniform_int_distribution<size_t> pick(0, entry.irreps.size() - 1);
            std::uniform_int_distribution<int> len(1, 3);
            std::uniform_int_distribution<int> coin(0, 1);
            for (int t = 0; t < 15; ++t) {
                ObjectWord w;
                std::vector<std::string> labels;
                std::vector<bool> conj;
                int l = len(rng);
                for (int i = 0; i < l; ++i) {
                    const auto& r = entry.irreps[pick(rng)];
                    bool dd = coin(rng) == 1;
                    w.factors.push_back({r.label, dd});
                    labels.push_back(r.label);
                    conj.push_back(dd);
                }
                CHECK(static_cast<int>(cc.invariant_basis(w).size()) ==
                      invariant_dim_character_oracle(entry, labels, conj));
            }
        }
    }
    SECTION("basis vectors are orthonormal invariants") {
        // chi_V^4 summed over Q8 gives (16+16)/8 = 4
        auto basis = c.invariant_basis(W({L("V"), L("V"), L("V"), L("V")}));
        REQUIRE(basis.size() == 4);
        for (const auto& m : basis)
            CHECK(c.is_intertwiner(m));
        for (size_t a = 0; a < basis.size(); ++a)
            for (size_t b = 0; b < a; ++b)
                CHECK(std::abs(basis[a].mat.col(0).dot(basis[b].mat.col(0))) < 1e-9);
    }
}

TEST_CASE("dual hom pairing") {
    auto c = sovtest::cat("q8");
    SECTION("unit case") {
        Morphism one{ObjectWord{}, ObjectWord{}, Mat::Ones(1, 1)};
        CHECK(std::abs(c.dual_hom_pairing(ObjectWord{}, one, one) - Scalar(1.0)) < 1e-12);
    }
    SECTION("canonical invariants of V (x) V pair nontrivially") {
        ObjectWord w = W({L("V"), L("V")});
        auto phi2 = c.invariant_basis(w);
        auto phi1 = c.invariant_basis(dual(w));
        REQUIRE(phi1.size() == 1);
        REQUIRE(phi2.size() == 1);
        CHECK(std::abs(c.dual_hom_pairing(w, phi1[0], phi2[0])) > 1e-6);
        CHECK_THROWS_AS(c.dual_hom_pairing(w, phi2[0], phi2[0]), TypeError);
    }
    SECTION("pairing gram has full rank on std (x) std over S3") {
        auto cs3 = sovtest::cat("s3");
        ObjectWord w = W({L("std"), L("std")});
        auto phi1 = cs3.invariant_basis(dual(w));
        auto phi2 = cs3.invariant_basis(w);
        REQUIRE(!phi2.empty());
        REQUIRE(phi1.size() == phi2.size());
        Mat gram(phi1.size(), phi2.size());
        for (size_t a = 0; a < phi1.size(); ++a)
            for (size_t b = 0; b < phi2.size(); ++b)
                gram(a, b) = cs3.dual_hom_pairing(w, phi1[a], phi2[b]);
        CHECK(rank_and_nullspace(gram).rank == gram.rows());
    }
}

TEST_CASE("invariant dimension agrees with the oracle on all short words") {
    // length <= 5 over the small groups, <= 4 over the 3-dim-bearing ones
    for (const auto& name : zoo_names()) {
        const auto& entry = sovtest::zoo(name);
        RepCategory c(entry);
        int max_len = (name == "a4" || name == "s4" || name == "sl23") ? 4 : 5;
        std::vector<std::vector<std::string>> words;
        std::vector<std::string> cur;
        auto rec = [&](auto&& self, int remaining) -> void {
            if (!cur.empty())
                words.push_back(cur);
            if (remaining == 0)
                return;
            for (const auto& r : entry.irreps) {
                cur.push_back(r.label);
                self(self, remaining - 1);
                cur.pop_back();
            }
        };
        rec(rec, max_len);
        std::atomic<long> bad{0};
        parallel_for(words.size(), 4, [&](size_t i) {
            ObjectWord w;
            for (const auto& l : words[i])
                w.factors.push_back({l, false});
            if (static_cast<int>(c.invariant_basis(w).size()) !=
                invariant_dim_character_oracle(entry, words[i]))
                ++bad;
        });
        INFO(name);
        CHECK(bad.load() == 0);
    }
}

TEST_CASE("step-4 pairing gram is full-rank whenever invariants exist") {
    for (const auto& name : zoo_names()) {
        const auto& entry = sovtest::zoo(name);
        RepCategory c(entry);
        int max_len = (name == "s4" || name == "sl23") ? 3 : 4;
        std::vector<std::vector<std::string>> words;
        std::vector<std::string> cur;
        auto rec = [&](auto&& self, int remaining) -> void {
            if (!cur.empty())
                words.push_back(cur);
            if (remaining == 0)
                return;
            for (const auto& r : entry.irreps) {
                cur.push_back(r.label);
                self(self, remaining - 1);
                cur.pop_back();
            }
        };
        rec(rec, max_len);
        std::atomic<long> bad{0};
        parallel_for(words.size(), 4, [&](size_t i) {
            ObjectWord w;
            for (const auto& l : words[i])
                w.factors.push_back({l, false});
            auto phi2 = c.invariant_basis(w);
            if (phi2.empty())
                return;
            auto phi1 = c.invariant_basis(dual(w));
            if (phi1.size() != phi2.size()) {
                ++bad;
                return;
            }
            Mat gram(phi1.size(), phi2.size());
            for (size_t a = 0; a < phi1.size(); ++a)
                for (size_t b = 0; b < phi2.size(); ++b)
                    gram(a, b) = c.dual_hom_pairing(w, phi1[a], phi2[b]);
            if (rank_and_nullspace(gram).rank != gram.rows())
                ++bad;
        });
        INFO(name);
        CHECK(bad.load() == 0);
    }
}

TEST_CASE("random intertwiners satisfy the intertwiner property") {
    std::mt19937_64 rng(31);
    for (const auto& name : {"q8", "s4"}) {
        auto c = sovtest::cat(name);
        const auto& entry = sovtest::zoo(name);
        for (int t = 0; t < 5; ++t) {
            std::uniform_int_distribution<size_t> pick(0, entry.irreps.size() - 1);
            ObjectWord a = W({L(entry.irreps[pick(rng)].label), L(entry.irreps[pick(rng)].label)});
            auto f = c.random_intertwiner(a, a, rng);
            CHECK(c.is_intertwiner(f));
        }
    }
}
