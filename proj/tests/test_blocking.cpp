#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "common.hpp"

#include "spid/blocking.hpp"
#include "spid/datagen.hpp"

using namespace spid;
using testutil::check_id;
using testutil::rel_err;
using testutil::seeded_matrix;

namespace {

// C0' materialized from the stage-1 blocks in union-column order, the
// reference for the composed coefficient product.
DenseMatrix materialize_c0(const TwoStageFactors& two) {
    DenseMatrix c0(two.union_indices.size(), two.source_cols);
    for (std::size_t u = 0; u < two.union_sources.size(); ++u) {
        const auto [chunk, local] = two.union_sources[u];
        const IdFactors& f = two.stage1[chunk];
        for (std::size_t t = 0; t < f.source_cols; ++t)
            c0(u, two.chunk_starts[chunk] + t) = f.coeffs(local, t);
    }
    return c0;
}

std::vector<IdFactors> chunked_stage1(const DenseMatrix& a, const SubsampleSpec& spec,
                                      std::size_t chunk_cols, std::size_t k) {
    std::vector<IdFactors> out;
    for (std::size_t c0 = 0; c0 < a.cols(); c0 += chunk_cols) {
        const std::size_t cols = std::min(chunk_cols, a.cols() - c0);
        std::vector<std::size_t> idx(cols);
        for (std::size_t j = 0; j < cols; ++j) idx[j] = c0 + j;
        out.push_back(stage1_compress(select_columns(a, idx), spec, k));
    }
    return out;
}

} // namespace

TEST_CASE("partition basics") {
    SUBCASE("single block holds every row") {
        const auto sets = partition(GridGeom::structured({12}), {1});
        REQUIRE(sets.size() == 1);
        CHECK(sets[0].size() == 12);
    }
    SUBCASE("1d split in two") {
        const auto sets = partition(GridGeom::structured({20}), {2});
        REQUIRE(sets.size() == 2);
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(sets[0][i] == i);
            CHECK(sets[1][i] == 10 + i);
        }
    }
    SUBCASE("2d 20x20 into 10x10 blocks of 4 points") {
        const auto sets = partition(GridGeom::structured({20, 20}), {10, 10});
        REQUIRE(sets.size() == 100);
        std::vector<bool> seen(400, false);
        for (const auto& rows : sets) {
            CHECK(rows.size() == 4);
            for (std::size_t r : rows) {
                CHECK(!seen[r]);
                seen[r] = true;
            }
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
    }
    SUBCASE("remainder goes to the last block") {
        const auto sets = partition(GridGeom::structured({11}), {3});
        CHECK(sets[0].size() == 3);
        CHECK(sets[1].size() == 3);
        CHECK(sets[2].size() == 5);
    }
    SUBCASE("too many blocks") {
        CHECK(testutil::error_name([] { partition(GridGeom::structured({4}), {5}); }) ==
              "BlockTooSmall");
    }
    SUBCASE("unstructured grids block along the row axis") {
        const auto sets = partition(GridGeom::unstructured_counted(10), {4});
        REQUIRE(sets.size() == 4);
        CHECK(sets[3].size() == 4); // 2+2+2+4
    }
}

TEST_CASE("block domains keep periodicity only on fully covered axes") {
    const auto geom = GridGeom::structured({8, 8}, {true, true});
    const auto full = make_block_domains(geom, {1, 1});
    CHECK(full[0].local.periodic == std::vector<bool>{true, true});
    const auto split = make_block_domains(geom, {2, 1});
    CHECK(split[0].local.periodic == std::vector<bool>{false, true});
}

TEST_CASE("stage 1 on identical columns") {
    DenseMatrix chunk(6, 4);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 6; ++i) chunk(i, j) = static_cast<double>(i + 1);

    const auto spec = SubsampleSpec::strided(GridGeom::structured({6}), {1});
    const auto f = stage1_compress(chunk, spec, 1);
    check_id(f, chunk);
    CHECK(f.achieved_rank == 1);
    CHECK(f.skeleton_indices == std::vector<std::size_t>{0});
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(f.coeffs(0, j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stage-1 skeletons of one rank-1 process are parallel") {
    const auto u = testutil::seeded_vector(10, 81);
    const auto a = testutil::outer(u, testutil::seeded_vector(12, 82));
    const auto spec = SubsampleSpec::strided(GridGeom::structured({10}), {1});
    const auto stage1 = chunked_stage1(a, spec, 6, 1);
    REQUIRE(stage1.size() == 2);

    const auto s0 = stage1[0].skeleton.col_span(0);
    const auto s1 = stage1[1].skeleton.col_span(0);
    const double cosine = dot(s0, s1) / (norm2(s0) * norm2(s1));
    CHECK(std::abs(std::abs(cosine) - 1.0) <= 1e-12);
}

TEST_CASE("stage-1 rank clamps to the chunk width and to the data rank") {
    const auto spec = SubsampleSpec::strided(GridGeom::structured({8}), {1});
    const auto narrow = seeded_matrix(8, 2, 5);
    CHECK(stage1_compress(narrow, spec, 5).achieved_rank == 2);

    const auto rank1 = testutil::outer(testutil::seeded_vector(8, 6),
                                       testutil::seeded_vector(6, 7));
    CHECK(stage1_compress(rank1, spec, 3).achieved_rank == 1);
}

TEST_CASE("stage 2 with a single chunk reduces to one more id") {
    const auto a = gen_exact_rank(10, 8, 2, 33);
    const auto spec = SubsampleSpec::strided(GridGeom::structured({10}), {1});
    auto stage1 = chunked_stage1(a, spec, 8, 3);
    REQUIRE(stage1.size() == 1);
    const auto two = stage2_compress(std::move(stage1), 1e-10);
    CHECK(two.achieved_rank == 2);
    CHECK(rel_err(a, reconstruct(two)) <= 1e-9);
}

TEST_CASE("duplicate stage-1 skeletons are eliminated in stage 2") {
    // two chunks drawn from the same rank-1 process
    const auto u = testutil::seeded_vector(9, 41);
    const auto a = testutil::outer(u, testutil::seeded_vector(10, 42));
    const auto spec = SubsampleSpec::strided(GridGeom::structured({9}), {1});
    const auto two = stage2_compress(chunked_stage1(a, spec, 5, 1), 1e-10);

    CHECK(two.achieved_rank == 1);
    CHECK(two.final_coeffs.rows() == 1);
    CHECK(two.final_coeffs.cols() == 10);
    CHECK(rel_err(a, reconstruct(two)) <= 1e-9);
}

TEST_CASE("rank-1 stream split into four chunks composes exactly") {
    const auto a = testutil::outer(testutil::seeded_vector(12, 51),
                                   testutil::seeded_vector(16, 52));
    const auto spec = SubsampleSpec::strided(GridGeom::structured({12}), {1});
    const auto two = stage2_compress(chunked_stage1(a, spec, 4, 2), 1e-10);
    CHECK(two.achieved_rank == 1);
    CHECK(rel_err(a, reconstruct(two)) <= 1e-9);
}

TEST_CASE("composed coefficients match the materialized block product") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        const auto a = gen_exact_rank(14, 20, 3, seed);
        const auto spec = SubsampleSpec::strided(GridGeom::structured({14}), {1});
        const auto two = stage2_compress(chunked_stage1(a, spec, 5, 4), 1e-10);

        const DenseMatrix product = matmul(two.stage2_coeffs, materialize_c0(two));
        CHECK(frobenius_norm(subtract(product, two.final_coeffs)) <=
              1e-12 * std::max(1.0, frobenius_norm(two.final_coeffs)));
    }
}

TEST_CASE("union indices are sorted, in range, and round-trip") {
    const auto a = gen_exact_rank(10, 24, 4, 71);
    const auto spec = SubsampleSpec::strided(GridGeom::structured({10}), {1});
    const auto two = stage2_compress(chunked_stage1(a, spec, 6, 5), 1e-10);

    for (std::size_t u = 0; u < two.union_indices.size(); ++u) {
        CHECK(two.union_indices[u] < 24);
        if (u > 0) CHECK(two.union_indices[u] > two.union_indices[u - 1]);
        const auto [chunk, local] = two.union_sources[u];
        CHECK(two.chunk_starts[chunk] + two.stage1[chunk].skeleton_indices[local] ==
              two.union_indices[u]);
    }
}

TEST_CASE("partitioning does not raise per-block rank on block-exact data") {
    const auto a = gen_locally_low_rank({{10, 2}, {10, 2}, {10, 2}}, 18, 81);
    const auto whole = column_id(a, RankRule::tolerance(1e-10));
    for (const auto& rows : partition(GridGeom::structured({30}), {3})) {
        const auto block = select_rows(a, rows);
        const auto f = column_id(block, RankRule::tolerance(1e-10));
        check_id(f, block);
        CHECK(f.achieved_rank <= whole.achieved_rank);
        CHECK(f.achieved_rank == 2);
    }
}

TEST_CASE("assemble inverts partition-then-restrict") {
    const auto a = seeded_matrix(20, 6, 91);
    SUBCASE("single block") {
        const auto sets = partition(GridGeom::structured({20}), {1});
        CHECK(bitwise_equal(assemble({{sets[0], a}}), a));
    }
    SUBCASE("two blocks") {
        const auto sets = partition(GridGeom::structured({20}), {2});
        std::vector<std::pair<std::vector<std::size_t>, DenseMatrix>> parts;
        for (const auto& rows : sets) parts.emplace_back(rows, select_rows(a, rows));
        CHECK(bitwise_equal(assemble(parts), a));
    }
    SUBCASE("100 blocks of the 20x20 grid") {
        const auto b = seeded_matrix(400, 5, 92);
        std::vector<std::pair<std::vector<std::size_t>, DenseMatrix>> parts;
        for (const auto& rows : partition(GridGeom::structured({20, 20}), {10, 10}))
            parts.emplace_back(rows, select_rows(b, rows));
        CHECK(bitwise_equal(assemble(parts), b));
    }
    SUBCASE("coverage gaps are rejected") {
        const auto sets = partition(GridGeom::structured({20}), {2});
        CHECK(testutil::error_name([&] {
                  assemble({{sets[0], select_rows(a, sets[0])},
                            {sets[0], select_rows(a, sets[0])}});
              }) == "CoverageGap");
    }
}
