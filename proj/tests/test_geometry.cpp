#include <gtest/gtest.h>

#include <random>
#include <set>

#include "strangeci/geometry.hpp"

using namespace strangeci;

namespace {

PolynomialSystem random_system(std::mt19937_64& rng, unsigned p, std::size_t N, std::size_t r, unsigned max_deg) {
    const auto F = make_field(p, 1);
    for (;;) {
        std::vector<HomogeneousPolynomial> gens;
        for (std::size_t k = 0; k < r; ++k) {
            const unsigned d = static_cast<unsigned>(2 + rng() % (max_deg - 1));
            const auto basis = monomials_of_degree(N + 1, d);
            HomogeneousPolynomial f(F, N + 1, d);
            for (int t = 0; t < 4; ++t) f.add_term(basis[rng() % basis.size()], static_cast<Coeff>(1 + rng() % (p - 1)));
            if (f.is_zero()) break;
            gens.push_back(std::move(f));
        }
        if (gens.size() == r) return PolynomialSystem(std::move(gens));
    }
}

// Singular points with minimal field exactly GF(p^m), one per Frobenius orbit
// (lexicographically least conjugate), by enumerating every vector of GF(q)^{N+1}.
std::set<std::vector<Coeff>> brute_singular(const PolynomialSystem& S, unsigned m) {
    const auto F = make_field(S.characteristic(), m);
    const std::size_t n = S.n_vars();
    std::set<std::vector<Coeff>> out;
    std::vector<Coeff> v(n, 0);
    for (;;) {
        std::size_t i = 0;
        while (i < n && ++v[i] == F->order()) v[i++] = 0;
        if (i == n) break;
        const ProjectivePoint a(F, v);
        if (a.min_field_degree() != m || !is_singular_at(S, a)) continue;
        auto best = a.coord_vector(), c = best;
        for (unsigned k = 1; k < m; ++k) {
            for (auto& x : c) x = F->frobenius(x);
            best = std::min(best, c);
        }
        out.insert(best);
    }
    return out;
}

}  // namespace

TEST(Geometry, PointNormalizationAndEquality) {
    const auto F5 = make_field(5, 1);
    const ProjectivePoint a(F5, {0, 2, 4});
    EXPECT_EQ(a.to_string(), "(0:1:2)");
    EXPECT_EQ(a.pivot(), 1U);
    EXPECT_THROW(ProjectivePoint(F5, {0, 0, 0}), InvalidInput);
    const auto F25 = make_field(5, 2);
    EXPECT_EQ(a, a.embedded(F25));
    EXPECT_TRUE(a.embedded(F25).is_prime_rational());
    EXPECT_EQ(a.embedded(F25).min_field_degree(), 1U);
    const ProjectivePoint b(F25, {1, F25->parse("t"), 0});
    EXPECT_EQ(b.min_field_degree(), 2U);
    EXPECT_EQ(b.to_string(), "@GF(5^2)(1:t:0)");
}

TEST(Geometry, ParsePoint) {
    const auto F2 = make_field(2, 1);
    EXPECT_EQ(parse_point("(0:1:1)", F2, 3).to_string(), "(0:1:1)");
    EXPECT_EQ(parse_point("@GF(2^2)(1:t:t+1)", F2, 3).to_string(), "@GF(2^2)(1:t:t+1)");
    EXPECT_THROW(parse_point("(0:1)", F2, 3), InvalidInput);
    EXPECT_THROW(parse_point("0:1:1", F2, 3), SyntaxError);
    EXPECT_THROW(parse_point("@GF(3)(1:0:0)", F2, 3), InvalidInput);
    const auto pt = parse_point("(1:0:0)", F2, 3);
    EXPECT_EQ(parse_point(pt.to_string(), F2, 3), pt);
}

TEST(Geometry, SystemValidation) {
    const auto F = make_field(3, 1);
    EXPECT_THROW(PolynomialSystem({}), InvalidInput);
    EXPECT_THROW(parse_system({"z0*z1", "z1^2", "z0^2"}, F, 3), InvalidInput);  // r > N
    EXPECT_THROW(parse_system({"z0-z0"}, F, 2), InvalidInput);                   // zero generator
    EXPECT_THROW(PolynomialSystem({parse_polynomial("z0", F, 2), parse_polynomial("z0", F, 3)}), InvalidInput);
    const auto F9 = make_field(3, 2);
    EXPECT_THROW(parse_system({"(t)*z0^2+z1^2"}, F9, 2), InvalidInput);
    const auto S = parse_system({"(2)*z0^2+z1^2"}, F9, 2);
    EXPECT_TRUE(S.field()->is_prime_field());
    EXPECT_EQ(S.to_strings(), (std::vector<std::string>{"2*z0^2+z1^2"}));
}

TEST(Geometry, SingularSearchMatchesBruteForce) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 40; ++t) {
        const unsigned p = t % 2 == 0 ? 2 : 3;
        const std::size_t N = 2 + rng() % 2;
        const std::size_t r = 1 + rng() % (N - 1);
        const auto S = random_system(rng, p, N, r, 4);
        const unsigned mmax = p == 2 ? (N == 2 ? 4 : 3) : 2;
        const auto res = singular_search(S, {1, mmax, 100'000'000, 1});
        EXPECT_EQ(res.searched_through, mmax);
        for (unsigned m = 1; m <= mmax; ++m) {
            std::set<std::vector<Coeff>> got;
            for (const auto& sp : res.points)
                if (sp.m == m) got.insert(sp.point.coord_vector());
            EXPECT_EQ(got, brute_singular(S, m)) << S.to_strings()[0] << " m=" << m;
        }
        for (std::size_t i = 1; i < res.points.size(); ++i) {
            const auto &a = res.points[i - 1], &b = res.points[i];
            EXPECT_TRUE(a.m < b.m || (a.m == b.m && a.point.precedes(b.point)));
        }
    }
}

TEST(Geometry, SingularSearchJobsAgree) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 10; ++t) {
        const auto S = random_system(rng, 2, 3, 1, 4);
        const auto one = singular_search(S, {1, 3, 100'000'000, 1});
        const auto four = singular_search(S, {1, 3, 100'000'000, 4});
        EXPECT_EQ(one.points, four.points);
    }
}

TEST(Geometry, SingularSearchBudget) {
    const auto S = parse_system({"z0^2*z1+z2^3+z3^3"}, make_field(2, 1), 4);
    // P^3 over GF(2), GF(4), GF(8): 15 + 85 + 585 points
    EXPECT_NO_THROW(singular_search(S, {1, 3, 685, 1}));
    try {
        singular_search(S, {1, 3, 684, 1});
        FAIL() << "expected BudgetExceeded";
    } catch (const BudgetExceeded& ex) {
        EXPECT_EQ(ex.partial().searched_through, 2U);
        ASSERT_EQ(ex.partial().points.size(), 1U);
        EXPECT_EQ(ex.partial().points[0].point.to_string(), "(0:1:0:0)");
    }
    EXPECT_THROW(singular_search(S, {2, 1, 10, 1}), InvalidInput);
}

TEST(Geometry, SkipsPointsBelowMinimumDegree) {
    const auto S = parse_system({"z0^2*z1+z2^3+z3^3"}, make_field(2, 1), 4);
    const auto res = singular_search(S, {2, 3, 100'000'000, 1});
    EXPECT_TRUE(res.points.empty());
}

TEST(Geometry, JacobianAndTangentSpace) {
    const auto F = make_field(3, 1);
    const auto S = parse_system({"z0^2+z1^2-z2^2"}, F, 3);
    const auto x = parse_point("(0:1:1)", F, 3);
    EXPECT_TRUE(on_zero_set(S, x));
    EXPECT_FALSE(is_singular_at(S, x));
    const auto J = jacobian_full(S, x);
    EXPECT_EQ(J.row(0)[0], 0U);
    EXPECT_EQ(J.row(0)[1], 2U);
    EXPECT_EQ(J.row(0)[2], 1U);  // -2 = 1 mod 3
    const auto T = tangent_space(S, x);
    EXPECT_EQ(T.dimension(), 2U);
    EXPECT_TRUE(T.contains(x));  // Euler: x lies on its tangent space when p does not divide e
    EXPECT_EQ(jacobian_D(S, x).cols(), 2U);
    EXPECT_EQ(jacobian_Dprime(S, x).cols(), 1U);
    EXPECT_THROW(tangent_space(S, parse_point("(1:0:0)", F, 3)), InvalidInput);
    const auto C = parse_system({"z0*z1"}, F, 3);
    EXPECT_THROW(tangent_space(C, parse_point("(0:0:1)", F, 3)), SingularPointError);
}

TEST(Geometry, TangentSpaceOverExtension) {
    const auto F2 = make_field(2, 1), F4 = make_field(2, 2);
    const auto S = parse_system({"z0^2+z1*z2"}, F2, 3);
    const auto x = parse_point("@GF(2^2)(1:t:t+1)", F2, 3);
    ASSERT_TRUE(on_zero_set(S, x));
    const auto T = tangent_space(S, x);
    EXPECT_TRUE(T.contains(ProjectivePoint::unit(F2, 3, 0)));  // strange point of the conic
    EXPECT_TRUE(same_field(*T.field(), *F4));
}

TEST(Geometry, GaussMap) {
    const auto F = make_field(2, 1);
    const auto f = parse_polynomial("z0^2+z1*z2", F, 3);
    EXPECT_EQ(gauss_map(f, parse_point("(1:1:1)", F, 3)).to_string(), "(0:1:1)");
    EXPECT_THROW(gauss_map(f, parse_point("(1:0:0)", F, 3)), InvalidInput);
    const auto g = parse_polynomial("z0^2+z1^2", F, 3);
    EXPECT_THROW(gauss_map(g, parse_point("(1:1:0)", F, 3)), SingularPointError);
}

TEST(Geometry, ProjectivePointCount) {
    EXPECT_EQ(projective_point_count(2, 3), 15U);
    EXPECT_EQ(projective_point_count(4, 2), 21U);
    EXPECT_EQ(projective_point_count(1ULL << 20, 10), UINT64_MAX);
}
