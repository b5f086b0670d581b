#pragma once

#include "bineg/binegativity.hpp"
#include "bineg/certificates.hpp"
#include "bineg/states.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace bineg {

// Worker count: explicit argument wins, then BINEG_THREADS, then hardware.
// Results never depend on it; samples are keyed by (seed, index) and all
// reductions are order-insensitive.
int resolve_threads(int requested = 0);

struct WorstMargin {
    double value = std::numeric_limits<double>::infinity();
    long index = -1;  // offending sample, -1 when never observed

    void observe_min(double v, long i) {
        if (v < value || (v == value && (index < 0 || i < index))) {
            value = v;
            index = i;
        }
    }
};

struct VerificationReport {
    EnsembleSpec spec;
    long total = 0;
    long entangled = 0;
    long t1_pass = 0;
    long c1_pass = 0;
    long t2_pass = 0;
    long certificate_pass = 0;
    long violations = 0;
    WorstMargin worst_t1;          // min eigenvalue of P^{T_B}, entangled samples
    WorstMargin worst_t2;          // min eigenvalue of the binegativity
    WorstMargin worst_x;           // min eigenvalue of X
    WorstMargin worst_lambda_gap;  // lambda0 - lambda
    WorstMargin worst_trcc;        // TrCC* - 2
    WorstMargin worst_overlap;     // hyperplane overlap
    WorstMargin worst_recomb;      // negated recombination error (min = worst)
    Tolerances tolerances;
    double wall_seconds = 0.0;
    std::vector<std::string> violation_payloads;  // state JSON of violators, capped
};

// Two-qubit theorem suite: per sample runs summary, check_theorems and, for
// entangled samples, certify.
VerificationReport verify_ensemble(const EnsembleSpec& spec,
                                   const Tolerances& tol = default_tolerances(),
                                   int threads = 0);

struct SearchExemplar {
    long index = -1;
    double bineg_min_eig = 0.0;
    double midpoint_min_eig = 0.0;
    std::string state_json;
};

struct SearchRecord {
    EnsembleSpec spec;
    long samples = 0;
    long binegative_count = 0;
    long midpoint_nonpositive_count = 0;
    std::vector<SearchExemplar> exemplars;  // up to 10, most violating kept
    Tolerances tolerances;
    double wall_seconds = 0.0;
};

SearchRecord search_binegative(const EnsembleSpec& spec,
                               const Tolerances& tol = default_tolerances(),
                               int threads = 0);

struct SectionGrid {
    BipartiteOperator center;
    BipartiteOperator dir1, dir2;  // trace-orthonormalized in the HS inner product
    double radius = 1.0;
    int resolution = 0;
    std::vector<std::uint8_t> positive;  // row-major over (iy, ix)
    std::vector<std::uint8_t> ppt;

    double coord(int i) const {
        return resolution > 1 ? -radius + 2.0 * radius * i / (resolution - 1) : 0.0;
    }
};

// Classify center + x*dir1 + y*dir2 over a square grid. Directions are
// Gram-Schmidt orthonormalized; linear dependence raises DegeneratePlane.
SectionGrid cross_section(const BipartiteOperator& center, const BipartiteOperator& dir1,
                          const BipartiteOperator& dir2, double radius, int resolution,
                          const Tolerances& tol = default_tolerances(), int threads = 0);

std::string section_csv(const SectionGrid& grid);
std::string section_svg(const SectionGrid& grid);

} // namespace bineg
