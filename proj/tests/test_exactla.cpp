#include <gtest/gtest.h>

#include <random>
#include <set>

#include "strangeci/exactla.hpp"

using namespace strangeci;

namespace {

Matrix random_matrix(std::mt19937_64& rng, const FieldRef& F, std::size_t r, std::size_t c, unsigned zero_bias = 0) {
    Matrix m(F, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng() % (zero_bias + 1) == 0 ? static_cast<Coeff>(rng() % F->order()) : 0;
    return m;
}

// Rank over GF(2) as log2 of the size of the row space, by enumeration.
std::size_t brute_rank_gf2(const Matrix& m) {
    std::set<std::vector<Coeff>> span;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.rows()); ++mask) {
        std::vector<Coeff> v(m.cols(), 0);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (mask >> i & 1)
                for (std::size_t j = 0; j < m.cols(); ++j) v[j] ^= m(i, j);
        span.insert(v);
    }
    std::size_t r = 0;
    while ((std::size_t{1} << r) < span.size()) ++r;
    return r;
}

}  // namespace

TEST(ExactLa, RankMatchesEnumerationOverGf2) {
    std::mt19937_64 rng(1);
    const auto F = make_field(2, 1);
    for (int t = 0; t < 300; ++t) {
        const auto m = random_matrix(rng, F, 1 + rng() % 7, 1 + rng() % 7, t % 3);
        EXPECT_EQ(rank(m), brute_rank_gf2(m));
    }
}

TEST(ExactLa, RankOfTransposeAndKernel) {
    std::mt19937_64 rng(2);
    for (auto [p, k] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {5, 1}, {3, 2}, {2, 3}}) {
        const auto F = make_field(p, k);
        for (int t = 0; t < 100; ++t) {
            const auto m = random_matrix(rng, F, 1 + rng() % 6, 1 + rng() % 6, t % 4);
            const auto rk = rank_and_kernel(m);
            EXPECT_EQ(rk.rank, rank(m.transpose()));
            EXPECT_EQ(rk.rank + rk.kernel.size(), m.cols());
            for (const auto& v : rk.kernel) {
                const auto mv = m.apply(v);
                EXPECT_TRUE(std::all_of(mv.begin(), mv.end(), [](Coeff c) { return c == 0; }));
            }
            // kernel basis is independent
            if (!rk.kernel.empty()) EXPECT_EQ(rank(Matrix::from_rows(F, rk.kernel, m.cols())), rk.kernel.size());
        }
    }
}

TEST(ExactLa, RowReduceProducesRref) {
    std::mt19937_64 rng(3);
    const auto F = make_field(7, 1);
    for (int t = 0; t < 100; ++t) {
        const auto m = random_matrix(rng, F, 5, 6, t % 3);
        const auto e = row_reduce(m);
        for (std::size_t i = 0; i < e.pivots.size(); ++i) {
            const auto c = e.pivots[i];
            if (i > 0) EXPECT_LT(e.pivots[i - 1], c);
            for (std::size_t r = 0; r < e.reduced.rows(); ++r) EXPECT_EQ(e.reduced(r, c), r == i ? 1U : 0U);
            for (std::size_t j = 0; j < c; ++j) EXPECT_EQ(e.reduced(i, j), 0U);
        }
        for (std::size_t r = e.pivots.size(); r < e.reduced.rows(); ++r)
            for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(e.reduced(r, j), 0U);
    }
}

TEST(ExactLa, InverseAndSingular) {
    std::mt19937_64 rng(4);
    for (auto [p, k] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 2}, {5, 1}}) {
        const auto F = make_field(p, k);
        int seen = 0;
        for (int t = 0; t < 200 && seen < 40; ++t) {
            const auto m = random_matrix(rng, F, 4, 4);
            if (!is_invertible(m)) {
                EXPECT_THROW(inverse(m), InvalidInput);
                continue;
            }
            ++seen;
            EXPECT_EQ(inverse(m) * m, Matrix::identity(F, 4));
            EXPECT_EQ(m * inverse(m), Matrix::identity(F, 4));
        }
        EXPECT_GT(seen, 0);
    }
    EXPECT_THROW(inverse(Matrix(make_field(2, 1), 2, 3)), InvalidInput);
}

TEST(ExactLa, SolveInSpanWitness) {
    std::mt19937_64 rng(5);
    const auto F = make_field(3, 2);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng() % 5, g = rng() % 5;
        std::vector<Vector> gens(g, Vector(n));
        for (auto& v : gens)
            for (auto& c : v) c = static_cast<Coeff>(rng() % F->order());
        Vector target(n);
        if (t % 2 == 0) {
            for (auto& c : target) c = static_cast<Coeff>(rng() % F->order());
        } else {
            for (const auto& v : gens) {
                const Coeff s = static_cast<Coeff>(rng() % F->order());
                for (std::size_t i = 0; i < n; ++i) target[i] = F->add(target[i], F->mul(s, v[i]));
            }
        }
        const auto sol = solve_in_span(F, target, gens);
        std::vector<Vector> with = gens;
        with.push_back(target);
        const bool expect = g == 0 ? std::all_of(target.begin(), target.end(), [](Coeff c) { return c == 0; })
                                   : rank(Matrix::from_rows(F, with, n)) == rank(Matrix::from_rows(F, gens, n));
        EXPECT_EQ(sol.has_value(), expect);
        if (t % 2 == 1) EXPECT_TRUE(sol.has_value());
        if (sol) {
            Vector acc(n, 0);
            for (std::size_t j = 0; j < g; ++j)
                for (std::size_t i = 0; i < n; ++i) acc[i] = F->add(acc[i], F->mul((*sol)[j], gens[j][i]));
            EXPECT_EQ(acc, target);
        }
    }
}

TEST(ExactLa, WithoutColumnsAndProduct) {
    const auto F = make_field(5, 1);
    const auto m = Matrix::from_rows(F, {{1, 2, 3}, {4, 0, 1}}, 3);
    const std::size_t drop[] = {1};
    EXPECT_EQ(m.without_columns(drop), Matrix::from_rows(F, {{1, 3}, {4, 1}}, 2));
    EXPECT_EQ(m * Matrix::identity(F, 3), m);
    EXPECT_EQ(m.apply(Vector{1, 1, 1}), (Vector{1, 0}));
    EXPECT_THROW(Matrix::from_rows(F, {{1, 2}, {3}}, 2), InvalidInput);
}
