#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "strangeci/census.hpp"
#include "strangeci/families.hpp"
#include "strangeci/suites.hpp"

using namespace strangeci;

TEST(Census, HvBasisIsKernelOfZ0Derivative) {
    for (unsigned p : {2U, 3U, 5U}) {
        const auto F = make_field(p, 1);
        for (std::size_t N = 2; N <= 4; ++N) {
            for (unsigned e = 2; e <= 6; ++e) {
                const auto basis = hv_monomial_basis(p, N, e);
                std::set<Monomial> in_basis(basis.begin(), basis.end());
                // distinct monomials have distinct nonzero derivatives, so the kernel
                // is spanned by the monomials that differentiate to zero
                for (const auto& m : monomials_of_degree(N + 1, e)) {
                    const bool killed = partial_derivative(HomogeneousPolynomial::from_monomial(F, m), 0).is_zero();
                    EXPECT_EQ(killed, in_basis.count(m) == 1) << m.to_string();
                }
            }
        }
    }
}

TEST(Census, SampleStreamIsDeterministic) {
    CensusSpec spec;
    spec.p = 3;
    spec.N = 3;
    spec.degrees = {2, 3};
    spec.samples = 30;
    spec.seed = 99;
    const auto a = sample_hv(spec), b = sample_hv(spec);
    EXPECT_EQ(a, b);
    for (const auto& S : a) EXPECT_TRUE(in_hv(S));
    spec.seed = 100;
    EXPECT_NE(sample_hv(spec), a);
    // member i does not depend on how many members are drawn
    spec.seed = 99;
    EXPECT_EQ(hv_member(spec, 17), a[17]);
}

TEST(Census, ExhaustiveEnumeration) {
    CensusSpec spec;
    spec.p = 2;
    spec.N = 2;
    spec.degrees = {2};
    spec.mode = CensusMode::exhaustive;
    const auto all = sample_hv(spec);
    ASSERT_EQ(all.size(), 15U);
    std::set<std::vector<std::string>> distinct;
    for (const auto& S : all) {
        EXPECT_TRUE(in_hv(S));
        distinct.insert(S.to_strings());
    }
    EXPECT_EQ(distinct.size(), 15U);
    spec.degrees = {6};
    spec.N = 4;
    EXPECT_THROW(sample_hv(spec), ResourceError);
}

TEST(Census, SpecValidation) {
    CensusSpec spec;
    spec.degrees = {1};
    EXPECT_THROW(spec.validate(), InvalidInput);
    spec.degrees = {2, 2, 2};
    EXPECT_THROW(spec.validate(), InvalidInput);
    spec.degrees = {2};
    spec.p = 4;
    EXPECT_THROW(spec.validate(), InvalidInput);
    CensusSpec ex;
    ex.p = 2;
    ex.N = 4;
    ex.degrees = {2};
    EXPECT_TRUE(ex.excluded_case());
    ex.N = 3;
    EXPECT_FALSE(ex.excluded_case());
}

TEST(Census, SmallRunRecordsAndOrder) {
    CensusSpec spec;
    spec.p = 2;
    spec.N = 3;
    spec.degrees = {2, 2};
    spec.samples = 12;
    spec.seed = 5;
    spec.m_max = 2;
    spec.record_timing = false;
    const auto one = verify_singularity_theorem(spec);
    spec.jobs = 3;
    const auto three = verify_singularity_theorem(spec);
    ASSERT_EQ(one.records.size(), 12U);
    EXPECT_EQ(one.records, three.records);
    EXPECT_EQ(one.found + one.unresolved, 12U);
    EXPECT_EQ(one.smooth_certified, 0U);
    for (std::size_t i = 0; i < one.records.size(); ++i) {
        const auto& r = one.records[i];
        EXPECT_EQ(r.index, i);
        EXPECT_GE(r.strange_locus_dim, 1U);
        EXPECT_EQ(r.resolution == Resolution::found, !r.singular_points.empty());
        for (const auto& sp : r.singular_points) EXPECT_TRUE(is_singular_at(r.system, sp.point));
    }
}

TEST(Census, ExcludedQuadricHasNoSingularPoint) {
    const auto S = quadric_normal_form(4, 2);
    EXPECT_TRUE(in_hv(S));
    CensusSpec spec;
    spec.p = 2;
    spec.N = 4;
    spec.degrees = {2};
    spec.m_max = 2;
    spec.record_timing = false;
    const auto rec = census_record(spec, 0, S);
    EXPECT_EQ(rec.resolution, Resolution::unresolved);
    EXPECT_TRUE(rec.singular_points.empty());
}

TEST(Census, BudgetLeavesUnresolved) {
    CensusSpec spec;
    spec.p = 2;
    spec.N = 4;
    spec.degrees = {2};
    spec.m_max = 3;
    spec.budget = 100;
    spec.record_timing = false;
    const auto rec = census_record(spec, 0, quadric_normal_form(4, 2));
    EXPECT_EQ(rec.resolution, Resolution::unresolved);
}

TEST(Census, PersistAndReload) {
    CensusSpec spec;
    spec.p = 3;
    spec.N = 3;
    spec.degrees = {3};
    spec.samples = 4;
    spec.seed = 8;
    spec.m_max = 2;
    spec.record_timing = false;
    const auto sum = verify_singularity_theorem(spec);
    const auto path = (std::filesystem::temp_directory_path() / "strangeci_census_test.jsonl").string();
    std::filesystem::remove(path);
    persist(sum.records, path, spec);
    persist(sum.records, path, spec);  // appends a second run
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    const auto header = nlohmann::json::parse(first);
    EXPECT_EQ(header.at("run").at("seed"), 8);
    EXPECT_EQ(header.at("run").at("version"), kVersion);
    EXPECT_EQ(header.at("run").at("spec").at("degrees"), nlohmann::json::array({3}));
    const auto back = load_records(path);
    ASSERT_EQ(back.size(), 8U);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(back[i], sum.records[i]);
        EXPECT_EQ(back[i + 4], sum.records[i]);
    }
    std::filesystem::remove(path);
}

TEST(Census, RecordSchema) {
    CensusSpec spec;
    spec.p = 2;
    spec.N = 3;
    spec.degrees = {3};
    spec.m_max = 2;
    spec.record_timing = false;
    const auto rec = census_record(spec, 3, strange_hypersurface_p_not_divides(3, 3, 2));
    const auto j = record_to_json(rec);
    for (const char* key : {"index", "generators", "degrees", "p", "N", "strange_locus_dim", "singular_points", "resolution", "elapsed_ms"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.size(), 9U);
    EXPECT_EQ(j.at("resolution"), "found");
    EXPECT_EQ(j.at("singular_points")[0].at("point"), "(0:1:0:0)");
    EXPECT_EQ(record_from_json(j), rec);
    auto bad = j;
    bad["resolution"] = "maybe";
    EXPECT_THROW(record_from_json(bad), InvalidInput);
    bad = j;
    bad.erase("p");
    EXPECT_THROW(record_from_json(bad), InvalidInput);
}

TEST(Census, EulerRankLemma) {
    const auto F = make_field(2, 1);
    const auto S = parse_system({"z0^2*z1+z1*z2*z3+z3^3"}, F, 4);
    ASSERT_TRUE(in_hv(S));
    const auto a = parse_point("(1:0:1:0)", F, 4);
    EXPECT_THROW(euler_rank_lemma_check(S, a), InvalidInput);  // a_N = 0
    EXPECT_TRUE(euler_rank_lemma_check(S, parse_point("(0:1:1:1)", F, 4)));
    EXPECT_THROW(euler_rank_lemma_check(parse_system({"z0*z1+z2*z3"}, F, 4), parse_point("(0:0:0:1)", F, 4)), InvalidInput);
    EXPECT_THROW(euler_rank_lemma_check(S, parse_point("(0:0:1:1)", F, 4)), InvalidInput);  // not a zero
    const auto r = suite_lemma_rank(3, 200);
    EXPECT_EQ(r.instances, 200U);
    EXPECT_EQ(r.failures, 0U);
}

TEST(Census, PhiPreimage) {
    const auto F = make_field(3, 2);
    const ProjectivePoint a(F, {F->parse("t"), 1, 2, F->parse("t+1")});
    const std::vector<Coeff> b{F->parse("2*t"), 0};
    const auto f = phi_preimage(a, 4, b);
    EXPECT_TRUE(partial_derivative(f, 0).is_zero());
    EXPECT_EQ(evaluate_raw(partial_derivative(f, 1), a.coords(), *F), b[0]);
    EXPECT_EQ(evaluate_raw(partial_derivative(f, 2), a.coords(), *F), b[1]);
    EXPECT_TRUE(phi_surjectivity_check(a, 4, b));
    EXPECT_THROW(phi_preimage(ProjectivePoint(F, {1, 0, 0, 0}), 3, b), InvalidInput);
    EXPECT_THROW(phi_preimage(a, 3, std::vector<Coeff>{1}), InvalidInput);
}

TEST(Census, Suites) {
    EXPECT_TRUE(suite_euler(1, 100).passed());
    EXPECT_TRUE(suite_phi_surjectivity(1, 100).passed());
    EXPECT_TRUE(suite_quadric_table().passed());
    EXPECT_EQ(suite_quadric_table().instances, 15U);
    EXPECT_TRUE(suite_cone_corollary(1, 10).passed());
    EXPECT_THROW(run_suite("nope", 0, 1), InvalidInput);
}
