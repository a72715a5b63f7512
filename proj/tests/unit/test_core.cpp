#include "contam/core/hash.hpp"
#include "contam/core/parallel.hpp"
#include "contam/core/rng.hpp"

#include <gtest/gtest.h>

#include <array>
#include <atomic>
#include <set>
#include <stdexcept>

using namespace contam;

TEST(Rng, SameSeedAndStreamRepeat) {
    Rng a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, StreamsDiffer) {
    Rng a(42, 0), b(42, 1);
    int equal = 0;
    for (int i = 0; i < 100; ++i) equal += a() == b();
    EXPECT_EQ(equal, 0);
}

TEST(Rng, SubstreamIsIndependentOfParentPosition) {
    Rng a(9);
    const Rng s1 = a.substream(3);
    for (int i = 0; i < 10; ++i) a();
    Rng s2 = a.substream(3);
    Rng s1c = s1;
    for (int i = 0; i < 10; ++i) EXPECT_EQ(s1c(), s2());
}

TEST(Rng, UniformInUnitInterval) {
    Rng r(1);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, BelowCoversRangeEvenly) {
    Rng r(5);
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = r.below(7);
        ASSERT_LT(v, 7u);
        ++counts[v];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    EXPECT_LT(chi2, 22.5);  // 6 dof, p ≈ 0.001
}

TEST(Rng, DeriveSeedDependsOnOrder) {
    EXPECT_NE(derive_seed({1, 2}), derive_seed({2, 1}));
    EXPECT_EQ(derive_seed({1, 2, 3}), derive_seed({1, 2, 3}));
    EXPECT_NE(seed_from_string("c1"), seed_from_string("c2"));
}

TEST(Fnv64, KnownVectors) {
    EXPECT_EQ(Fnv64().value(), 0xCBF29CE484222325ULL);
    EXPECT_EQ(Fnv64().text("a").value(), 0xAF63DC4C8601EC8CULL);
    EXPECT_EQ(Fnv64().text("foobar").value(), 0x85944171F73967E8ULL);
    EXPECT_EQ(Fnv64().text("a").hex(), "af63dc4c8601ec8c");
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    for (std::size_t workers : {1u, 2u, 4u, 16u}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i].fetch_add(1); });
        for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
    }
}

TEST(ParallelFor, RethrowsWorkerException) {
    EXPECT_THROW(parallel_for(50, 4,
                              [](std::size_t i) {
                                  if (i == 17) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(ParallelFor, ZeroCountIsNoop) {
    int calls = 0;
    parallel_for(0, 4, [&](std::size_t) { ++calls; });
    EXPECT_EQ(calls, 0);
}
