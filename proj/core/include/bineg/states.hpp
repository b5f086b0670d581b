#pragma once

#include "bineg/bipartite.hpp"
#include "bineg/matrix.hpp"
#include "bineg/tolerances.hpp"

#include <cstdint>
#include <string>

namespace bineg {

// Frozen Bell order: e0=|psi->, e1=|psi+>, e2=|phi->, e3=|phi+>.
enum BellIndex { kPsiMinus = 0, kPsiPlus = 1, kPhiMinus = 2, kPhiPlus = 3 };
const CVec& bell_state(int i);

struct DensityMatrix {
    BipartiteOperator op;
    bool rescaled = false;  // set when the input trace deviated beyond tolerance
};

// Checks Hermiticity, positivity (slack tol.psd_slack) and normalizability,
// and returns the trace-1 state.
DensityMatrix validate(const BipartiteOperator& m,
                       const Tolerances& tol = default_tolerances());

// p |psi-><psi-| + (1-p) I/4, p in [-1/3, 1].
DensityMatrix werner(double p);
DensityMatrix bell_diagonal(double p0, double p1, double p2, double p3);

// Eq.-(1)-patterned family, returned unnormalized and not guaranteed PSD.
BipartiteOperator sigma_c(double a, double b, double c, double d);

enum class EnsembleKind { HilbertSchmidt, HaarPure, RankK };

struct EnsembleSpec {
    int dim_a = 2;
    int dim_b = 2;
    EnsembleKind kind = EnsembleKind::HilbertSchmidt;
    int rank_k = 1;  // used for RankK only
    std::uint64_t seed = 0;
    long count = 1;
};

// Deterministic in (seed, index), independent of call order.
DensityMatrix random_state(const EnsembleSpec& spec, long index);

// State file: {"dims":[dA,dB],"re":[[..]],"im":[[..]]}, row-major, Alice-major
// index. Writer emits 17-significant-digit decimals; the parser rejects
// non-Hermitian input beyond tolerance and names the offending entry pair.
std::string write_state_json(const BipartiteOperator& op);
void write_state_file(const BipartiteOperator& op, const std::string& path);
BipartiteOperator read_state_json(const std::string& text,
                                  const Tolerances& tol = default_tolerances());
BipartiteOperator read_state_file(const std::string& path,
                                  const Tolerances& tol = default_tolerances());

} // namespace bineg
