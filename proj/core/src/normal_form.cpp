#include "bineg/normal_form.hpp"

#include "bineg/errors.hpp"
#include "bineg/states.hpp"

#include <algorithm>
#include <cmath>

namespace bineg {

namespace {

// f(rho) = sum lambda_k^{-1/2} v_k v_k^dagger for a 2x2 Hermitian PSD marginal.
// Returns false when the marginal is numerically singular.
bool inv_sqrt_2x2(const ComplexMatrix& rho, const Tolerances& tol, ComplexMatrix& out) {
    const EigenSystem es = hermitian_eig(rho, tol);
    if (es.values[0] < 1e-14 * std::max(1.0, es.values[1])) return false;
    out = ComplexMatrix(2, 2);
    for (int k = 0; k < 2; ++k) {
        const double w = 1.0 / std::sqrt(es.values[k]);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out(i, j) += w * es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    return true;
}

// T-vector of each Bell projector: diag of Tr[|e_i><e_i| sigma_j (x) sigma_j].
constexpr double kBellTau[4][3] = {
    {-1.0, -1.0, -1.0},  // psi-
    {1.0, 1.0, -1.0},    // psi+
    {-1.0, 1.0, 1.0},    // phi-
    {1.0, -1.0, 1.0},    // phi+
};

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

double purity2(const ComplexMatrix& rho) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += std::norm(rho(i, j));
    return s;
}

double marginal_deviation(const ComplexMatrix& rho) {
    double d = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const cplx target = (i == j) ? cplx(0.5) : cplx(0.0);
            d = std::max(d, std::abs(rho(i, j) - target));
        }
    return d;
}

NormalForm fit_sigma_c(const BipartiteOperator& w, const ComplexMatrix& ga,
                       const ComplexMatrix& gb, const BipartiteOperator& rho_cur) {
    // Read the Eq.-(1) pattern off the stalled iterate; exact solve of the
    // diagonal constraints, least-squares symmetrization of the corner.
    const ComplexMatrix& m = rho_cur.mat;
    const double a = m(0, 0).real() + m(2, 2).real() + m(3, 3).real();
    const double c = 2.0 * m(0, 0).real() - a;
    const double b = a - 2.0 * m(3, 3).real();
    const double d = (m(0, 3) + m(3, 0)).real();

    NormalForm nf;
    nf.cls = NormalFormClass::SigmaC;
    nf.sigma_c_params = {a, b, c, d};

    ComplexMatrix a_raw = inverse2(ga);
    ComplexMatrix b_raw = inverse2(gb);
    nf.a_filter = a_raw * (cplx(1.0) / std::sqrt(det2(a_raw)));
    nf.b_filter = b_raw * (cplx(1.0) / std::sqrt(det2(b_raw)));

    const BipartiteOperator sc = sigma_c(a, b, c, d);
    const ComplexMatrix ab = kron(nf.a_filter, nf.b_filter);
    const ComplexMatrix rec = ab * sc.mat * ab.adjoint();
    const double tr_rec = rec.trace().real();
    const double tr_w = w.mat.trace().real();
    nf.normalization = (tr_w != 0.0) ? tr_rec / tr_w : 1.0;
    nf.residual = (w.mat - (cplx(1.0 / nf.normalization)) * rec).max_norm();
    return nf;
}

} // namespace

Mat3 pauli_correlation(const BipartiteOperator& rho) {
    static const ComplexMatrix* paulis[3] = {&kPauliX, &kPauliY, &kPauliZ};
    Mat3 t{};
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            const ComplexMatrix m = kron(*paulis[j], *paulis[k]);
            cplx tr = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int l = 0; l < 4; ++l) tr += rho.mat(i, l) * m(l, i);
            t[j][k] = tr.real();
        }
    return t;
}

SignedSvd3 signed_svd3(const Mat3& t) {
    // One-sided Jacobi on the columns, accumulating V.
    Mat3 m = t;
    Mat3 v = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < 3; ++i) {
                    app += m[i][p] * m[i][p];
                    aqq += m[i][q] * m[i][q];
                    apq += m[i][p] * m[i][q];
                }
                off = std::max(off, std::abs(apq));
                if (std::abs(apq) <= 1e-30 || apq * apq <= 1e-34 * app * aqq) continue;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double tt = (zeta >= 0.0 ? 1.0 : -1.0) /
                                  (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + tt * tt);
                const double sn = cs * tt;
                for (int i = 0; i < 3; ++i) {
                    const double mp = m[i][p], mq = m[i][q];
                    m[i][p] = cs * mp - sn * mq;
                    m[i][q] = sn * mp + cs * mq;
                    const double vp = v[i][p], vq = v[i][q];
                    v[i][p] = cs * vp - sn * vq;
                    v[i][q] = sn * vp + cs * vq;
                }
            }
        if (off < 1e-15) break;
    }

    std::array<double, 3> s{};
    for (int j = 0; j < 3; ++j)
        s[j] = std::sqrt(m[0][j] * m[0][j] + m[1][j] * m[1][j] + m[2][j] * m[2][j]);

    // Sort singular values descending, permuting columns of m and v.
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return s[x] > s[y]; });
    Mat3 ms{}, vs{};
    std::array<double, 3> ss{};
    for (int j = 0; j < 3; ++j) {
        ss[j] = s[order[j]];
        for (int i = 0; i < 3; ++i) {
            ms[i][j] = m[i][order[j]];
            vs[i][j] = v[i][order[j]];
        }
    }

    const double smax = std::max(ss[0], 1e-300);
    Mat3 u{};
    int full = 0;
    for (int j = 0; j < 3; ++j) {
        if (ss[j] > 1e-14 * smax && ss[j] > 0.0) {
            for (int i = 0; i < 3; ++i) u[i][j] = ms[i][j] / ss[j];
            ++full;
        } else {
            ss[j] = 0.0;
        }
    }
    auto cross_into = [&](int a, int b, int dst) {
        u[0][dst] = u[1][a] * u[2][b] - u[2][a] * u[1][b];
        u[1][dst] = u[2][a] * u[0][b] - u[0][a] * u[2][b];
        u[2][dst] = u[0][a] * u[1][b] - u[1][a] * u[0][b];
    };
    if (full == 0) {
        u = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    } else if (full == 1) {
        // Deterministic completion: cross with the axis least aligned with u0.
        int k = 0;
        double best = std::abs(u[0][0]);
        for (int i = 1; i < 3; ++i)
            if (std::abs(u[i][0]) < best) {
                best = std::abs(u[i][0]);
                k = i;
            }
        std::array<double, 3> e{};
        e[k] = 1.0;
        u[0][1] = u[1][0] * e[2] - u[2][0] * e[1];
        u[1][1] = u[2][0] * e[0] - u[0][0] * e[2];
        u[2][1] = u[0][0] * e[1] - u[1][0] * e[0];
        double n1 = std::sqrt(u[0][1] * u[0][1] + u[1][1] * u[1][1] + u[2][1] * u[2][1]);
        for (int i = 0; i < 3; ++i) u[i][1] /= n1;
        cross_into(0, 1, 2);
    } else if (full == 2) {
        cross_into(0, 1, 2);
    }

    auto det3 = [](const Mat3& a) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    if (det3(u) < 0.0) {
        for (int i = 0; i < 3; ++i) u[i][2] = -u[i][2];
        ss[2] = -ss[2];
    }
    if (det3(vs) < 0.0) {
        for (int i = 0; i < 3; ++i) vs[i][2] = -vs[i][2];
        ss[2] = -ss[2];
    }
    return {u, vs, ss};
}

ComplexMatrix su2_from_so3(const Mat3& r) {
    // Quaternion extraction (Shepperd), then U = wI - i(x sx + y sy + z sz).
    double w, x, y, z;
    const double tr = r[0][0] + r[1][1] + r[2][2];
    if (tr > 0.0) {
        const double s = 2.0 * std::sqrt(tr + 1.0);
        w = 0.25 * s;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if (r[0][0] >= r[1][1] && r[0][0] >= r[2][2]) {
        const double s = 2.0 * std::sqrt(1.0 + r[0][0] - r[1][1] - r[2][2]);
        x = 0.25 * s;
        w = (r[2][1] - r[1][2]) / s;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if (r[1][1] >= r[2][2]) {
        const double s = 2.0 * std::sqrt(1.0 + r[1][1] - r[0][0] - r[2][2]);
        y = 0.25 * s;
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        const double s = 2.0 * std::sqrt(1.0 + r[2][2] - r[0][0] - r[1][1]);
        z = 0.25 * s;
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
    }
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n;
    x /= n;
    y /= n;
    z /= n;
    ComplexMatrix u(2, 2);
    u(0, 0) = cplx(w, -z);
    u(0, 1) = cplx(-y, -x);
    u(1, 0) = cplx(y, -x);
    u(1, 1) = cplx(w, z);
    return u;
}

NormalForm filter_normal_form(const BipartiteOperator& w, const Tolerances& tol) {
    if (w.dim_a != 2 || w.dim_b != 2)
        throw Error("filter_normal_form: two-qubit input required");
    require_hermitian(w, tol);
    const double tr_w = w.mat.trace().real();
    if (tr_w <= 0.0) throw NotNormalizable("filter_normal_form: trace <= 0");
    {
        const EigenSystem es = hermitian_eig(w.mat, tol);
        if (es.min_value() < -tol.psd_slack * std::max(1.0, es.max_value()))
            throw NotPSD("filter_normal_form: input not positive within slack");
    }

    BipartiteOperator rho{2, 2, cplx(1.0 / tr_w) * w.mat};
    ComplexMatrix ga = ComplexMatrix::identity(2);
    ComplexMatrix gb = ComplexMatrix::identity(2);

    // Class discrimination by decay shape, sampled at doubling checkpoints
    // (iteration 50, 100, 200, ...). Bell-diagonal inputs contract
    // geometrically, so the checkpoint-to-checkpoint deviation ratio squares
    // each time and can sit inside any fixed band for at most ~3 checkpoints.
    // The sigma_c family decays algebraically (deviation ~ c/iter), pinning
    // the ratio near 1/2 indefinitely; four consecutive ratios in
    // [0.3, 0.75] with a still-large deviation is therefore sigma_c. A ratio
    // near 1 at small deviation is the double-precision fixed point, which
    // can plateau just above the convergence threshold.
    long checkpoint = 50;
    double dev_checkpoint = 2.0;
    int algebraic_runs = 0;
    bool converged = false;
    long iter = 0;
    for (; iter < tol.max_filter_iterations; ++iter) {
        const ComplexMatrix rho_a = partial_trace_b(rho);
        const ComplexMatrix rho_b = partial_trace_a(rho);
        const double dev = marginal_deviation(rho_a) + marginal_deviation(rho_b);
        if (dev < tol.filter_convergence) {
            converged = true;
            break;
        }
        if (iter == checkpoint) {
            const double ratio = dev / dev_checkpoint;
            if (ratio > 0.9 && dev < 1e-6) {
                converged = true;
                break;
            }
            algebraic_runs = (ratio >= 0.3 && ratio <= 0.75) ? algebraic_runs + 1 : 0;
            if (algebraic_runs >= 4 && dev > 1e-6) return fit_sigma_c(w, ga, gb, rho);
            dev_checkpoint = dev;
            checkpoint *= 2;
        }
        ComplexMatrix fa, fb;
        if (!inv_sqrt_2x2(rho_a, tol, fa) || !inv_sqrt_2x2(rho_b, tol, fb))
            return fit_sigma_c(w, ga, gb, rho);  // singular marginal: filter blows up
        // Unit-determinant gauge per step: each raw factor has det >= 2, so
        // the accumulated product would overflow on slow (near-boundary)
        // inputs. The dropped scalar is restored by the trace renormalization
        // below and by the final scalar gauge.
        fa *= cplx(1.0 / std::sqrt(std::abs(det2(fa))));
        fb *= cplx(1.0 / std::sqrt(std::abs(det2(fb))));
        const ComplexMatrix k = kron(fa, fb);
        rho.mat = k * rho.mat * k.adjoint();
        const double tr = rho.mat.trace().real();
        rho.mat *= cplx(1.0 / tr);
        // Re-symmetrize: rounding drift of ~1e-16 per step would otherwise
        // break the Hermiticity gate after tens of thousands of iterations.
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                const cplx s = 0.5 * (rho.mat(i, j) + std::conj(rho.mat(j, i)));
                rho.mat(i, j) = s;
                rho.mat(j, i) = std::conj(s);
            }
        ga = fa * ga;
        gb = fb * gb;
    }
    if (!converged)
        throw NonConvergent("filter_normal_form: iteration limit reached");

    // Bell diagonalization: signed SVD of the correlation block with
    // determinant-+1 rotations, lifted to local unitaries.
    const Mat3 t = pauli_correlation(rho);
    const SignedSvd3 svd = signed_svd3(t);
    Mat3 oa{}, ob{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            oa[i][j] = svd.u[j][i];  // U^T
            ob[i][j] = svd.v[j][i];  // V^T
        }

    // Choose the signed Bell-index permutation giving the largest (hence
    // non-increasing) probability vector; ties keep the earliest candidate.
    static const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                     {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    static const int kPermSign[6] = {1, -1, -1, 1, 1, -1};
    static const double kSigns[4][3] = {
        {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

    std::array<double, 4> best_p = {-2, -2, -2, -2};
    int best_perm = 0, best_sign = 0;
    for (int pi = 0; pi < 6; ++pi) {
        for (int si = 0; si < 4; ++si) {
            double tp[3];
            for (int i = 0; i < 3; ++i) tp[i] = kSigns[si][i] * svd.s[kPerms[pi][i]];
            std::array<double, 4> cand{};
            bool sorted = true;
            for (int b = 0; b < 4; ++b) {
                cand[b] = 0.25 * (1.0 + kBellTau[b][0] * tp[0] + kBellTau[b][1] * tp[1] +
                                  kBellTau[b][2] * tp[2]);
                if (b > 0 && cand[b] > cand[b - 1] + 1e-14) sorted = false;
            }
            if (!sorted) continue;
            bool better = false;
            for (int b = 0; b < 4; ++b) {
                if (cand[b] > best_p[b]) {
                    better = true;
                    break;
                }
                if (cand[b] < best_p[b]) break;
            }
            if (better) {
                best_p = cand;
                best_perm = pi;
                best_sign = si;
            }
        }
    }

    // Fold the chosen signed permutation into the rotations, keeping both in
    // SO(3): det(S_A P) = det(S_B P) = +1.
    Mat3 pm{}, sa{}, sb{};
    for (int i = 0; i < 3; ++i) pm[i][kPerms[best_perm][i]] = 1.0;
    const double sa_diag[3] = {1.0, 1.0, static_cast<double>(kPermSign[best_perm])};
    for (int i = 0; i < 3; ++i) {
        sa[i][i] = sa_diag[i];
        sb[i][i] = kSigns[best_sign][i] * sa_diag[i];
    }
    const Mat3 oa_tot = mat3_mul(sa, mat3_mul(pm, oa));
    const Mat3 ob_tot = mat3_mul(sb, mat3_mul(pm, ob));

    const ComplexMatrix ua = su2_from_so3(oa_tot);
    const ComplexMatrix ub = su2_from_so3(ob_tot);
    const ComplexMatrix kl = kron(ua, ub);
    const ComplexMatrix rho_bell = kl * rho.mat * kl.adjoint();

    NormalForm nf;
    nf.cls = NormalFormClass::BellDiagonal;
    for (int i = 0; i < 4; ++i) {
        const CVec& e = bell_state(i);
        cplx v = 0.0;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) v += std::conj(e[r]) * rho_bell(r, c) * e[c];
        nf.p[i] = std::max(0.0, v.real());
    }
    {
        double sum = nf.p[0] + nf.p[1] + nf.p[2] + nf.p[3];
        for (double& x : nf.p) x /= sum;
    }

    ComplexMatrix a_raw = inverse2(ga) * ua.adjoint();
    ComplexMatrix b_raw = inverse2(gb) * ub.adjoint();
    nf.a_filter = a_raw * (cplx(1.0) / std::sqrt(det2(a_raw)));
    nf.b_filter = b_raw * (cplx(1.0) / std::sqrt(det2(b_raw)));

    // Scalar gauge: push all moduli into N.
    const BipartiteOperator rec = reconstruct({nf.a_filter, nf.b_filter, nf.p, 1.0,
                                               NormalFormClass::BellDiagonal,
                                               {}, 0.0});
    const double tr_rec = rec.mat.trace().real();
    nf.normalization = tr_rec / tr_w;
    nf.residual = (w.mat - cplx(1.0 / nf.normalization) * rec.mat).max_norm();
    return nf;
}

BipartiteOperator reconstruct(const NormalForm& nf) {
    const ComplexMatrix ab = kron(nf.a_filter, nf.b_filter);
    ComplexMatrix inner(4, 4);
    if (nf.cls == NormalFormClass::BellDiagonal) {
        for (int i = 0; i < 4; ++i)
            inner += cplx(nf.p[i]) * outer(bell_state(i), bell_state(i));
    } else {
        inner = sigma_c(nf.sigma_c_params[0], nf.sigma_c_params[1], nf.sigma_c_params[2],
                        nf.sigma_c_params[3])
                    .mat;
    }
    return {2, 2, cplx(1.0 / nf.normalization) * (ab * inner * ab.adjoint())};
}

KernelState kernel_state(const NormalForm& nf, const Tolerances& tol) {
    if (nf.cls != NormalFormClass::BellDiagonal)
        throw Error("kernel_state: BellDiagonal class required");
    if (nf.p[3] > tol.p3_zero)
        throw FullRankInput("kernel_state: p3 exceeds rank-3 budget");
    const ComplexMatrix t = kron(tilde_local(nf.a_filter), tilde_local(nf.b_filter));
    const CVec raw = t.apply(bell_state(kPhiPlus));
    KernelState ks;
    const double norm = vec_norm(raw);
    ks.m = norm * norm;
    ks.psi = normalized(raw);
    return ks;
}

BipartiteOperator rank3_regularize(const BipartiteOperator& p, const CVec& psi,
                                   const Tolerances& tol) {
    const double tr = p.mat.trace().real();
    if (tr <= 0.0) throw NotNormalizable("rank3_regularize: trace <= 0");
    const EigenSystem es = hermitian_eig(p.mat, tol);
    if (es.min_value() < -tol.psd_slack * std::max(1.0, es.max_value()))
        throw NotPSD("rank3_regularize: input not positive within slack");
    const int rank = numerical_rank(es, tol.rank_threshold);
    if (rank >= 3) throw RankAlready3("rank3_regularize: rank already >= 3");

    const std::size_t n = p.mat.rows();
    const double eps = 1e-8 * tr;
    BipartiteOperator out = p;
    // Kernel eigenvectors, with psi projected out and re-orthonormalized.
    std::vector<CVec> added;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(es.values[k]) > tol.rank_threshold * std::abs(es.max_value())) continue;
        CVec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = es.vectors(i, k);
        const cplx overlap = dot(psi, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= overlap * psi[i];
        for (const CVec& u : added) {
            const cplx o = dot(u, v);
            for (std::size_t i = 0; i < n; ++i) v[i] -= o * u[i];
        }
        if (vec_norm(v) < 1e-8) continue;
        const CVec u = normalized(v);
        out.mat += cplx(eps) * outer(u, u);
        added.push_back(u);
        if (rank + static_cast<int>(added.size()) >= 3) break;
    }
    return out;
}

BipartiteOperator pt_in_normal_form(const NormalForm& nf) {
    if (nf.cls != NormalFormClass::BellDiagonal)
        throw Error("pt_in_normal_form: BellDiagonal class required");
    const ComplexMatrix ab = kron(nf.a_filter, nf.b_filter.conjugate());
    ComplexMatrix inner(4, 4);
    for (int i = 0; i < 4; ++i)
        inner += cplx(1.0 - 2.0 * nf.p[3 - i]) * outer(bell_state(i), bell_state(i));
    return {2, 2, cplx(1.0 / (2.0 * nf.normalization)) * (ab * inner * ab.adjoint())};
}

} // namespace bineg
