#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "egospectral/graph.hpp"
#include "egospectral/linalg.hpp"
#include "egospectral/rng.hpp"
#include "egospectral/sym_matrix.hpp"
#include "support.hpp"

using namespace egospectral;
using namespace egospectral::testing;

TEST_CASE("SymMatrix stores symmetric entries and rejects bad dims") {
    SymMatrix m(3);
    m.set(0, 2, -4.5);
    CHECK(m(0, 2) == -4.5);
    CHECK(m(2, 0) == -4.5);
    CHECK(m(1, 1) == 0.0);
    CHECK(m.max_abs() == 4.5);
    CHECK_THROWS_AS(SymMatrix(0), std::invalid_argument);
    CHECK_THROWS_AS(m.set(3, 0, 1.0), std::out_of_range);
}

TEST_CASE("lin_comb combines entrywise") {
    SymMatrix a(2), b(2);
    a.set(0, 0, 1.0);
    a.set(0, 1, 2.0);
    b.set(0, 1, -1.0);
    b.set(1, 1, 4.0);
    const SymMatrix c = lin_comb(2.0, a, 3.0, b);
    CHECK(c(0, 0) == 2.0);
    CHECK(c(0, 1) == 1.0);
    CHECK(c(1, 1) == 12.0);
    CHECK_THROWS_AS(lin_comb(1.0, a, 1.0, SymMatrix(3)), std::invalid_argument);
}

TEST_CASE("eigenvalues of known matrices") {
    SUBCASE("diagonal") {
        SymMatrix m(3);
        m.set(0, 0, 3.0);
        m.set(1, 1, -1.0);
        m.set(2, 2, 0.5);
        const auto e = sym_eigenvalues(m);
        CHECK(e[0] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(e[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e[2] == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("2x2 all-ones has eigenvalues 2 and 0") {
        SymMatrix m(2);
        m.set(0, 0, 1.0);
        m.set(0, 1, 1.0);
        m.set(1, 1, 1.0);
        const auto e = sym_eigenvalues(m);
        CHECK(close(e[0], 2.0, 1e-12));
        CHECK(close(e[1], 0.0, 1e-12));
    }
    SUBCASE("triangle adjacency: {2, -1, -1}") {
        const auto e = sym_eigenvalues(dense_adjacency(triangle()));
        CHECK(close(e[0], 2.0, 1e-12));
        CHECK(close(e[1], -1.0, 1e-12));
        CHECK(close(e[2], -1.0, 1e-12));
    }
    SUBCASE("zero matrix") {
        const auto e = sym_eigenvalues(SymMatrix(4));
        for (double v : e) CHECK(v == 0.0);
    }
    SUBCASE("dimension cap enforced") {
        CHECK_THROWS_AS(sym_eigenvalues(SymMatrix(4), 3), std::invalid_argument);
    }
}

TEST_CASE("eigenvalue sums match trace and Frobenius norm on random matrices") {
    std::mt19937_64 eng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng_below(eng, 7));
        SymMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m.set(i, j, 2.0 * rng_unit(eng) - 1.0);
        const auto e = sym_eigenvalues(m);
        double trace = 0.0, fro = 0.0, esum = 0.0, esq = 0.0;
        for (int i = 0; i < n; ++i) {
            trace += m(i, i);
            for (int j = 0; j < n; ++j) fro += m(i, j) * m(i, j);
        }
        for (double v : e) {
            esum += v;
            esq += v * v;
        }
        CHECK(close(esum, trace, 1e-10));
        CHECK(close(esq, fro, 1e-10));
        for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k - 1] >= e[k]);
    }
}

TEST_CASE("psd_check on pinned examples") {
    SymMatrix id2(2);
    id2.set(0, 0, 1.0);
    id2.set(1, 1, 1.0);
    CHECK(psd_check(id2));

    SymMatrix hopo(2);  // [[1,2],[2,1]] has eigenvalue -1
    hopo.set(0, 0, 1.0);
    hopo.set(0, 1, 2.0);
    hopo.set(1, 1, 1.0);
    CHECK_FALSE(psd_check(hopo));

    SymMatrix sing(2);  // [[1,-1],[-1,1]] is singular PSD
    sing.set(0, 0, 1.0);
    sing.set(0, 1, -1.0);
    sing.set(1, 1, 1.0);
    CHECK(psd_check(sing));

    CHECK(psd_check(SymMatrix(3)));  // zero matrix

    SymMatrix negdiag(2);
    negdiag.set(0, 0, -1.0);
    CHECK_FALSE(psd_check(negdiag));

    CHECK_THROWS_AS(psd_check(id2, -1.0), std::invalid_argument);
}

TEST_CASE("psd_check slack scales with the matrix, ties break feasible") {
    // min eigenvalue -1e-12 relative to scale 1e6: inside the slack band
    SymMatrix m(2);
    m.set(0, 0, 1e6);
    m.set(1, 1, -1e-6);
    CHECK(psd_check(m, 1e-9));
    // far outside the band
    SymMatrix bad(2);
    bad.set(0, 0, 1e6);
    bad.set(1, 1, -10.0);
    CHECK_FALSE(psd_check(bad, 1e-9));
}

TEST_CASE("psd_check agrees with the eigenvalue definition on random matrices") {
    std::mt19937_64 eng(1234);
    int positives = 0, negatives = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng_below(eng, 8));
        SymMatrix m(n);
        if (trial % 2 == 0) {
            // Gram matrix of random vectors: PSD by construction
            const int k = 1 + static_cast<int>(rng_below(eng, 8));
            std::vector<std::vector<double>> v(n, std::vector<double>(k));
            for (auto& row : v)
                for (auto& x : row) x = 2.0 * rng_unit(eng) - 1.0;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double dot = 0.0;
                    for (int t = 0; t < k; ++t) dot += v[i][t] * v[j][t];
                    m.set(i, j, dot);
                }
        } else {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) m.set(i, j, 2.0 * rng_unit(eng) - 1.0);
        }
        const double mineig = sym_eigenvalues(m).back();
        const double slack = 1e-9 * std::max(1.0, m.max_abs());
        if (mineig > slack) {
            CHECK(psd_check(m));
            ++positives;
        } else if (mineig < -slack) {
            CHECK_FALSE(psd_check(m));
            ++negatives;
        }  // inside the band either verdict is acceptable
    }
    CHECK(positives > 100);
    CHECK(negatives > 100);
}

TEST_CASE("min_eigenvalue_rel matches psd_check's threshold convention") {
    SymMatrix m(2);
    m.set(0, 0, 4.0);
    m.set(1, 1, -2.0);
    CHECK(min_eigenvalue_rel(m) == doctest::Approx(-0.5));
    SymMatrix small(1);
    small.set(0, 0, -1e-3);
    CHECK(min_eigenvalue_rel(small) == doctest::Approx(-1e-3));  // scale floor is 1
}

TEST_CASE("lambda1_exact on closed forms") {
    CHECK(close(lambda1_exact(triangle()), 2.0, 1e-9));
    CHECK(close(lambda1_exact(path3()), std::sqrt(2.0), 1e-9));
    CHECK(close(lambda1_exact(star(3)), std::sqrt(3.0), 1e-9));
    CHECK(close(lambda1_exact(complete(6)), 5.0, 1e-9));
    CHECK(close(lambda1_exact(cycle(8)), 2.0, 1e-8));

    // single weighted edge: lambda1 = w
    CHECK(close(lambda1_exact(parse_edge_list(std::string("a b 3.5"))), 3.5, 1e-9));
}

TEST_CASE("lambda1_exact matches the dense eigensolver on random graphs") {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 4 + static_cast<int>(rng_below(eng, 20));
        const Graph g = random_graph(eng, n, 0.3, 0.2, 2.0);
        const double lam = lambda1_exact(g);
        const double ref = sym_eigenvalues(dense_adjacency(g)).front();
        CHECK(close(lam, ref, 1e-8 * std::max(1.0, std::abs(ref))));
    }
}

TEST_CASE("lambda1_exact handles negative weights via the dense route") {
    std::mt19937_64 eng(99);
    const Graph g = random_graph(eng, 12, 0.4, 0.5, 1.5, true);
    REQUIRE(g.has_negative_weights());
    const double lam = lambda1_exact(g);
    const double ref = sym_eigenvalues(dense_adjacency(g)).front();
    CHECK(close(lam, ref, 1e-9));
}

TEST_CASE("lambda1_exact input validation") {
    CHECK_THROWS_AS(lambda1_exact(triangle(), 0.0), std::invalid_argument);
    // negative weights + n over the dense cap
    std::mt19937_64 eng(5);
    const Graph g = random_graph(eng, 20, 0.3, 1.0, 2.0, true);
    CHECK_THROWS_AS(lambda1_exact(g, 1e-10, 100000, 10), std::runtime_error);
}
