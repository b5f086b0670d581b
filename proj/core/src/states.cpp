#include "bineg/states.hpp"

#include "bineg/errors.hpp"
#include "bineg/rng.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bineg {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

const std::array<CVec, 4> kBell = {{
    {0.0, kInvSqrt2, -kInvSqrt2, 0.0},  // |psi->
    {0.0, kInvSqrt2, kInvSqrt2, 0.0},   // |psi+>
    {kInvSqrt2, 0.0, 0.0, -kInvSqrt2},  // |phi->
    {kInvSqrt2, 0.0, 0.0, kInvSqrt2},   // |phi+>
}};
} // namespace

const CVec& bell_state(int i) { return kBell.at(static_cast<std::size_t>(i)); }

DensityMatrix validate(const BipartiteOperator& m, const Tolerances& tol) {
    require_hermitian(m, tol);
    if (!m.mat.all_finite()) throw NonHermitianInput("validate: non-finite entries");
    const double tr = m.mat.trace().real();
    if (tr <= 0.0) throw NotNormalizable("validate: trace <= 0");

    DensityMatrix dm;
    dm.op = {m.dim_a, m.dim_b, cplx(1.0 / tr) * m.mat};
    dm.rescaled = std::abs(tr - 1.0) > tol.hermiticity;

    const EigenSystem es = hermitian_eig(dm.op.mat, tol);
    if (es.min_value() < -tol.psd_slack) {
        std::ostringstream os;
        os << "validate: minimum eigenvalue " << es.min_value() << " below PSD slack";
        throw NotPSD(os.str());
    }
    return dm;
}

DensityMatrix werner(double p) {
    if (p < -1.0 / 3.0 - 1e-15 || p > 1.0 + 1e-15)
        throw InvalidProbabilityVector("werner: p outside [-1/3, 1]");
    BipartiteOperator op(2, 2);
    op.mat = cplx(p) * outer(bell_state(kPsiMinus), bell_state(kPsiMinus)) +
             cplx((1.0 - p) / 4.0) * ComplexMatrix::identity(4);
    return validate(op);
}

DensityMatrix bell_diagonal(double p0, double p1, double p2, double p3) {
    const std::array<double, 4> p = {p0, p1, p2, p3};
    double sum = 0.0;
    for (double x : p) {
        if (x < -1e-12) throw InvalidProbabilityVector("bell_diagonal: negative probability");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidProbabilityVector("bell_diagonal: probabilities do not sum to 1");
    BipartiteOperator op(2, 2);
    for (int i = 0; i < 4; ++i)
        op.mat += cplx(p[i]) * outer(bell_state(i), bell_state(i));
    return validate(op);
}

BipartiteOperator sigma_c(double a, double b, double c, double d) {
    BipartiteOperator op(2, 2);
    op.mat(0, 0) = 0.5 * (a + c);
    op.mat(0, 3) = 0.5 * d;
    op.mat(2, 2) = 0.5 * (b - c);
    op.mat(3, 0) = 0.5 * d;
    op.mat(3, 3) = 0.5 * (a - b);
    return op;
}

namespace {
// Stream tags for the per-sample counter RNG.
constexpr std::uint64_t kTagGinibre = 1;
constexpr std::uint64_t kTagPure = 2;

ComplexMatrix ginibre(CounterRng& rng, int rows, int cols) {
    ComplexMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double re, im;
            rng.next_gaussian_pair(re, im);
            g(i, j) = cplx(re, im);
        }
    return g;
}
} // namespace

DensityMatrix random_state(const EnsembleSpec& spec, long index) {
    if (index < 0 || index >= spec.count)
        throw Error("random_state: index outside ensemble count");
    const int d = spec.dim_a * spec.dim_b;

    BipartiteOperator op(spec.dim_a, spec.dim_b);
    if (spec.kind == EnsembleKind::HaarPure) {
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(index), kTagPure);
        CVec v(d);
        for (int i = 0; i < d; ++i) {
            double re, im;
            rng.next_gaussian_pair(re, im);
            v[i] = cplx(re, im);
        }
        op.mat = outer(normalized(v), normalized(v));
    } else {
        const int k = (spec.kind == EnsembleKind::RankK) ? spec.rank_k : d;
        if (k < 1 || k > d) throw Error("random_state: rank k outside [1, dA*dB]");
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(index), kTagGinibre);
        const ComplexMatrix g = ginibre(rng, d, k);
        op.mat = g * g.adjoint();
    }
    return validate(op);
}

std::string write_state_json(const BipartiteOperator& op) {
    const std::size_t n = op.mat.rows();
    char buf[40];
    std::ostringstream os;
    os << "{\"dims\":[" << op.dim_a << "," << op.dim_b << "],";
    for (int part = 0; part < 2; ++part) {
        os << (part == 0 ? "\"re\":[" : "\"im\":[");
        for (std::size_t i = 0; i < n; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < n; ++j) {
                const double v = part == 0 ? op.mat(i, j).real() : op.mat(i, j).imag();
                std::snprintf(buf, sizeof buf, "%.17g", v);
                os << (j ? "," : "") << buf;
            }
            os << "]";
        }
        os << (part == 0 ? "]," : "]}");
    }
    return os.str();
}

void write_state_file(const BipartiteOperator& op, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("write_state_file: cannot open " + path);
    f << write_state_json(op) << "\n";
}

BipartiteOperator read_state_json(const std::string& text, const Tolerances& tol) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("state file: malformed JSON: ") + e.what());
    }
    if (!j.contains("dims") || !j.contains("re") || !j.contains("im"))
        throw Error("state file: missing dims/re/im");
    const auto dims = j["dims"];
    if (!dims.is_array() || dims.size() != 2)
        throw Error("state file: dims must be [dA, dB]");
    const int da = dims[0].get<int>(), db = dims[1].get<int>();
    if (da < 2 || db < 2 || da > 4 || db > 4)
        throw Error("state file: dims must be within 2..4 per party");
    const std::size_t n = static_cast<std::size_t>(da * db);

    BipartiteOperator op(da, db);
    for (int part = 0; part < 2; ++part) {
        const auto& block = j[part == 0 ? "re" : "im"];
        if (!block.is_array() || block.size() != n)
            throw Error("state file: re/im must be (dA*dB) x (dA*dB)");
        for (std::size_t i = 0; i < n; ++i) {
            const auto& row = block[i];
            if (!row.is_array() || row.size() != n)
                throw Error("state file: re/im must be (dA*dB) x (dA*dB)");
            for (std::size_t j2 = 0; j2 < n; ++j2) {
                if (!row[j2].is_number()) throw Error("state file: non-numeric entry");
                const double v = row[j2].get<double>();
                if (part == 0)
                    op.mat(i, j2) += v;
                else
                    op.mat(i, j2) += cplx(0.0, v);
            }
        }
    }
    if (!op.mat.all_finite()) throw Error("state file: non-finite entry");

    const double scale = std::max(1.0, op.mat.max_norm());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j2 = i; j2 < n; ++j2)
            if (std::abs(op.mat(i, j2) - std::conj(op.mat(j2, i))) > tol.hermiticity * scale) {
                std::ostringstream os;
                os << "state file: entries (" << i << "," << j2 << ") and (" << j2 << "," << i
                   << ") violate Hermiticity beyond tolerance";
                throw NonHermitianInput(os.str());
            }
    return op;
}

BipartiteOperator read_state_file(const std::string& path, const Tolerances& tol) {
    std::ifstream f(path);
    if (!f) throw Error("read_state_file: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return read_state_json(ss.str(), tol);
}

} // namespace bineg
