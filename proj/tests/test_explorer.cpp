#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bineg/binegativity.hpp"
#include "bineg/certificates.hpp"
#include "bineg/eig.hpp"
#include "bineg/errors.hpp"
#include "bineg/explorer.hpp"
#include "bineg/rng.hpp"
#include "bineg/states.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

using namespace bineg;

namespace {

bool reports_equal(const VerificationReport& a, const VerificationReport& b) {
    return a.total == b.total && a.entangled == b.entangled && a.t1_pass == b.t1_pass &&
           a.c1_pass == b.c1_pass && a.t2_pass == b.t2_pass &&
           a.certificate_pass == b.certificate_pass && a.violations == b.violations &&
           a.worst_t1.value == b.worst_t1.value && a.worst_t1.index == b.worst_t1.index &&
           a.worst_t2.value == b.worst_t2.value && a.worst_t2.index == b.worst_t2.index &&
           a.worst_x.value == b.worst_x.value && a.worst_x.index == b.worst_x.index &&
           a.worst_lambda_gap.value == b.worst_lambda_gap.value &&
           a.worst_trcc.value == b.worst_trcc.value &&
           a.worst_overlap.value == b.worst_overlap.value &&
           a.worst_recomb.value == b.worst_recomb.value &&
           a.violation_payloads == b.violation_payloads;
}

} // namespace

TEST_CASE("empty ensemble gives an empty report") {
    EnsembleSpec spec;
    spec.seed = 42;
    spec.count = 0;
    const auto r = verify_ensemble(spec);
    CHECK(r.total == 0);
    CHECK(r.entangled == 0);
    CHECK(r.violations == 0);
}

TEST_CASE("two-qubit verification finds no violations") {
    EnsembleSpec spec;
    spec.seed = 42;
    spec.count = 2000;
    const auto r = verify_ensemble(spec);
    CHECK(r.total == 2000);
    CHECK(r.violations == 0);
    CHECK(r.t2_pass == r.total);
    CHECK(r.entangled > 0);
    CHECK(r.t1_pass == r.total);
    CHECK(r.c1_pass == r.total);
    CHECK(r.certificate_pass == r.entangled);
    CHECK(r.worst_t1.value > 0.0);
    CHECK(r.worst_t2.value >= -1e-10);
    CHECK(r.worst_trcc.value >= -1e-10);
    CHECK(r.violation_payloads.empty());
}

TEST_CASE("rank-2 boundary ensemble also passes") {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::RankK;
    spec.rank_k = 2;
    spec.seed = 43;
    spec.count = 500;
    const auto r = verify_ensemble(spec);
    CHECK(r.violations == 0);
    CHECK(r.t2_pass == r.total);
    CHECK(r.certificate_pass == r.entangled);
}

TEST_CASE("verification report is thread-count invariant") {
    EnsembleSpec spec;
    spec.seed = 44;
    spec.count = 600;
    const auto r1 = verify_ensemble(spec, default_tolerances(), 1);
    const auto r2 = verify_ensemble(spec, default_tolerances(), 2);
    const auto r5 = verify_ensemble(spec, default_tolerances(), 5);
    CHECK(reports_equal(r1, r2));
    CHECK(reports_equal(r1, r5));
}

TEST_CASE("thread resolution respects the environment cap") {
    setenv("BINEG_THREADS", "3", 1);
    CHECK(resolve_threads(0) == 3);
    CHECK(resolve_threads(2) == 2);
    unsetenv("BINEG_THREADS");
    CHECK(resolve_threads(7) == 7);
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("two-qubit search never finds binegative states") {
    EnsembleSpec spec;
    spec.seed = 45;
    spec.count = 500;
    const auto r = search_binegative(spec);
    CHECK(r.samples == 500);
    CHECK(r.binegative_count == 0);
    CHECK(r.exemplars.empty());
}

TEST_CASE("two-qutrit search finds binegative exemplars that round trip") {
    EnsembleSpec spec;
    spec.dim_a = 3;
    spec.dim_b = 3;
    spec.seed = 7;
    spec.count = 4000;
    const auto r = search_binegative(spec);
    CHECK(r.binegative_count >= 1);
    CHECK(r.midpoint_nonpositive_count <= r.binegative_count);
    REQUIRE_FALSE(r.exemplars.empty());
    CHECK(r.exemplars.size() <= 10);
    for (const auto& ex : r.exemplars) {
        const DensityMatrix dm = validate(read_state_json(ex.state_json));
        const auto es = hermitian_eig(binegativity(dm).mat);
        CHECK(std::abs(es.values[0] - ex.bineg_min_eig) < 1e-12);
        CHECK(ex.bineg_min_eig < -1e-10);
    }
    // most violating exemplar first
    for (std::size_t i = 1; i < r.exemplars.size(); ++i)
        CHECK(r.exemplars[i - 1].bineg_min_eig <= r.exemplars[i].bineg_min_eig);
}

TEST_CASE("search is thread-count invariant") {
    EnsembleSpec spec;
    spec.dim_a = 3;
    spec.dim_b = 3;
    spec.seed = 7;
    spec.count = 1500;
    const auto a = search_binegative(spec, default_tolerances(), 1);
    const auto b = search_binegative(spec, default_tolerances(), 4);
    CHECK(a.binegative_count == b.binegative_count);
    CHECK(a.midpoint_nonpositive_count == b.midpoint_nonpositive_count);
    REQUIRE(a.exemplars.size() == b.exemplars.size());
    for (std::size_t i = 0; i < a.exemplars.size(); ++i) {
        CHECK(a.exemplars[i].index == b.exemplars[i].index);
        CHECK(a.exemplars[i].bineg_min_eig == b.exemplars[i].bineg_min_eig);
        CHECK(a.exemplars[i].state_json == b.exemplars[i].state_json);
    }
}

TEST_CASE("cross section classifies the maximally mixed center as deep interior") {
    const BipartiteOperator center{2, 2, cplx(0.25) * ComplexMatrix::identity(4)};
    ComplexMatrix d1(4, 4), d2(4, 4);
    d1(0, 0) = 1.0;
    d1(1, 1) = -1.0;
    d2(2, 2) = 1.0;
    d2(3, 3) = -1.0;
    const auto grid = cross_section(center, BipartiteOperator{2, 2, d1},
                                    BipartiteOperator{2, 2, d2}, 1.0, 11);
    const int c = 5 * 11 + 5;
    CHECK(grid.positive[c] == 1);
    CHECK(grid.ppt[c] == 1);
    // directions were orthonormalized in the HS inner product
    CHECK(std::abs(hs_inner(grid.dir1, grid.dir2)) < 1e-12);
    CHECK(std::abs(hs_inner(grid.dir1, grid.dir1) - 1.0) < 1e-12);
}

TEST_CASE("cross section rejects a degenerate plane") {
    const BipartiteOperator center{2, 2, cplx(0.25) * ComplexMatrix::identity(4)};
    ComplexMatrix d1(4, 4);
    d1(0, 0) = 1.0;
    d1(1, 1) = -1.0;
    CHECK_THROWS_AS((void)cross_section(center, BipartiteOperator{2, 2, d1},
                                        BipartiteOperator{2, 2, cplx(2.0) * d1}, 1.0, 5),
                    DegeneratePlane);
}

TEST_CASE("cross section cells agree with direct checks") {
    // analysis plane of an entangled state: center P^{T_B}, dir1 toward
    // sigma. X - P^{T_B} is a multiple of (psi psi)^{T_B} = sigma - P^{T_B}
    // scaled, so dir2 has to come from outside that line.
    EnsembleSpec espec;
    espec.seed = 71;
    espec.count = 64;
    DensityMatrix sigma = random_state(espec, 0);
    for (long i = 1; summary(sigma).is_ppt && i < espec.count; ++i)
        sigma = random_state(espec, i);
    REQUIRE(!summary(sigma).is_ppt);
    const BipartiteOperator center =
        partial_transpose(negative_decomposition(sigma).positive_part);
    const BipartiteOperator dir1 = sigma.op - center;
    ComplexMatrix d2(4, 4);
    d2(0, 3) = 1.0;
    d2(3, 0) = 1.0;
    const BipartiteOperator dir2{2, 2, d2};
    const auto grid = cross_section(center, dir1, dir2, 0.8, 9);
    CounterRng rng(301, 0, 0);
    for (int check = 0; check < 20; ++check) {
        const int ix = static_cast<int>(rng.next_u64() % 9);
        const int iy = static_cast<int>(rng.next_u64() % 9);
        ComplexMatrix m = center.mat;
        m += cplx(grid.coord(ix)) * grid.dir1.mat;
        m += cplx(grid.coord(iy)) * grid.dir2.mat;
        const BipartiteOperator op{2, 2, m};
        const double floor = -1e-10 * std::max(1.0, std::abs(m.trace().real()));
        const bool positive = hermitian_eig(m).min_value() >= floor;
        const bool ppt = hermitian_eig(partial_transpose(op).mat).min_value() >= floor;
        CHECK(grid.positive[iy * 9 + ix] == (positive ? 1 : 0));
        CHECK(grid.ppt[iy * 9 + ix] == (ppt ? 1 : 0));
    }
    // center is P^{T_B}: strictly inside both bodies for an entangled source
    CHECK(grid.positive[4 * 9 + 4] == 1);
    CHECK(grid.ppt[4 * 9 + 4] == 1);
}

TEST_CASE("positive PPT cells along the dir1 axis form an interval") {
    const DensityMatrix sigma = werner(0.9);
    const BipartiteOperator center =
        partial_transpose(negative_decomposition(sigma).positive_part);
    const BipartiteOperator dir1 = sigma.op - center;
    ComplexMatrix d2(4, 4);
    d2(0, 0) = 1.0;
    d2(3, 3) = -1.0;
    const auto grid = cross_section(center, dir1, BipartiteOperator{2, 2, d2}, 1.0, 41);
    int first = -1, last = -1;
    for (int ix = 0; ix < 41; ++ix) {
        if (grid.positive[20 * 41 + ix] && grid.ppt[20 * 41 + ix]) {
            if (first < 0) first = ix;
            last = ix;
        }
    }
    REQUIRE(first >= 0);
    for (int ix = first; ix <= last; ++ix)
        CHECK((grid.positive[20 * 41 + ix] && grid.ppt[20 * 41 + ix]));
}

TEST_CASE("section CSV and SVG emission") {
    const BipartiteOperator center{2, 2, cplx(0.25) * ComplexMatrix::identity(4)};
    ComplexMatrix d1(4, 4), d2(4, 4);
    d1(0, 0) = 1.0;
    d1(1, 1) = -1.0;
    d2(2, 2) = 1.0;
    d2(3, 3) = -1.0;
    const auto grid = cross_section(center, BipartiteOperator{2, 2, d1},
                                    BipartiteOperator{2, 2, d2}, 1.0, 5);
    const std::string csv = section_csv(grid);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,positive,ppt");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 25);
    const std::string svg = section_svg(grid);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
