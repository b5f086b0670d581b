#include "bineg/explorer.hpp"

#include "bineg/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace bineg {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BINEG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Chunked parallel loop; fn(i) must only touch state owned by index i or the
// per-thread accumulator passed through by the caller.
template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
    threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, n == 0 ? 1 : n)));
    if (threads == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const long lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

void merge_margin(WorstMargin& into, const WorstMargin& from) {
    if (from.index >= 0) into.observe_min(from.value, from.index);
}

} // namespace

VerificationReport verify_ensemble(const EnsembleSpec& spec, const Tolerances& tol,
                                   int threads) {
    if (spec.dim_a != 2 || spec.dim_b != 2)
        throw Error("verify_ensemble: dims (2,2) required");
    const auto t0 = std::chrono::steady_clock::now();
    const int nthreads = resolve_threads(threads);

    struct Partial {
        VerificationReport r;
        std::vector<long> violating;
    };
    std::vector<Partial> parts(nthreads);

    parallel_for(spec.count, nthreads, [&](long i) {
        Partial& p = parts[static_cast<std::size_t>(
            i / ((spec.count + nthreads - 1) / nthreads))];
        VerificationReport& r = p.r;
        const DensityMatrix dm = random_state(spec, i);
        const TheoremFlags f = check_theorems(dm, tol);
        ++r.total;
        bool violated = false;
        r.worst_t2.observe_min(f.t2_margin, i);
        if (!f.t2_pass) violated = true;
        else ++r.t2_pass;
        if (f.entangled) {
            ++r.entangled;
            r.worst_t1.observe_min(f.t1_margin, i);
            if (f.t1_pass) ++r.t1_pass; else violated = true;
            if (f.c1_pass) ++r.c1_pass; else violated = true;
            try {
                const BinegativityCertificate cert = certify(dm, tol);
                ++r.certificate_pass;
                r.worst_x.observe_min(cert.margin_x, i);
                r.worst_lambda_gap.observe_min(cert.lambda0 - cert.lambda, i);
                r.worst_trcc.observe_min(cert.tr_cc_star - 2.0, i);
                r.worst_overlap.observe_min(cert.hyperplane, i);
                r.worst_recomb.observe_min(-cert.recombination_error, i);
            } catch (const CertificateFailure&) {
                violated = true;
            }
        } else {
            // PPT samples trivially satisfy T1/C1.
            ++r.t1_pass;
            ++r.c1_pass;
        }
        if (violated) {
            ++r.violations;
            p.violating.push_back(i);
        }
    });

    VerificationReport out;
    out.spec = spec;
    out.tolerances = tol;
    std::vector<long> violating;
    for (const Partial& p : parts) {
        out.total += p.r.total;
        out.entangled += p.r.entangled;
        out.t1_pass += p.r.t1_pass;
        out.c1_pass += p.r.c1_pass;
        out.t2_pass += p.r.t2_pass;
        out.certificate_pass += p.r.certificate_pass;
        out.violations += p.r.violations;
        merge_margin(out.worst_t1, p.r.worst_t1);
        merge_margin(out.worst_t2, p.r.worst_t2);
        merge_margin(out.worst_x, p.r.worst_x);
        merge_margin(out.worst_lambda_gap, p.r.worst_lambda_gap);
        merge_margin(out.worst_trcc, p.r.worst_trcc);
        merge_margin(out.worst_overlap, p.r.worst_overlap);
        merge_margin(out.worst_recomb, p.r.worst_recomb);
        violating.insert(violating.end(), p.violating.begin(), p.violating.end());
    }
    std::sort(violating.begin(), violating.end());
    for (std::size_t k = 0; k < violating.size() && k < 10; ++k)
        out.violation_payloads.push_back(
            write_state_json(random_state(spec, violating[k]).op));

    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SearchRecord search_binegative(const EnsembleSpec& spec, const Tolerances& tol,
                               int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const int nthreads = resolve_threads(threads);

    struct Hit {
        long index;
        double bineg_min;
        double midpoint_min;
    };
    struct Partial {
        long binegative = 0;
        long midpoint_nonpositive = 0;
        std::vector<Hit> hits;  // top 10 most violating per thread
    };
    std::vector<Partial> parts(nthreads);

    auto hit_less = [](const Hit& a, const Hit& b) {
        if (a.bineg_min != b.bineg_min) return a.bineg_min < b.bineg_min;
        return a.index < b.index;
    };

    parallel_for(spec.count, nthreads, [&](long i) {
        Partial& p = parts[static_cast<std::size_t>(
            i / ((spec.count + nthreads - 1) / nthreads))];
        const DensityMatrix dm = random_state(spec, i);
        const BipartiteOperator bn = binegativity(dm, tol);
        const double be = hermitian_eig(bn.mat, tol).min_value();
        if (be >= -tol.binegative_threshold) return;
        ++p.binegative;
        const BipartiteOperator mid = 0.5 * dm.op + 0.5 * bn;
        const double me = hermitian_eig(mid.mat, tol).min_value();
        if (me < -tol.binegative_threshold) ++p.midpoint_nonpositive;
        p.hits.push_back({i, be, me});
        std::sort(p.hits.begin(), p.hits.end(), hit_less);
        if (p.hits.size() > 10) p.hits.resize(10);
    });

    SearchRecord out;
    out.spec = spec;
    out.tolerances = tol;
    out.samples = spec.count;
    std::vector<Hit> hits;
    for (const Partial& p : parts) {
        out.binegative_count += p.binegative;
        out.midpoint_nonpositive_count += p.midpoint_nonpositive;
        hits.insert(hits.end(), p.hits.begin(), p.hits.end());
    }
    std::sort(hits.begin(), hits.end(), hit_less);
    if (hits.size() > 10) hits.resize(10);
    for (const Hit& h : hits) {
        SearchExemplar ex;
        ex.index = h.index;
        ex.bineg_min_eig = h.bineg_min;
        ex.midpoint_min_eig = h.midpoint_min;
        ex.state_json = write_state_json(random_state(spec, h.index).op);
        out.exemplars.push_back(std::move(ex));
    }

    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SectionGrid cross_section(const BipartiteOperator& center, const BipartiteOperator& dir1,
                          const BipartiteOperator& dir2, double radius, int resolution,
                          const Tolerances& tol, int threads) {
    require_hermitian(center, tol);
    require_hermitian(dir1, tol);
    require_hermitian(dir2, tol);
    if (resolution < 1) throw Error("cross_section: resolution must be >= 1");

    SectionGrid g;
    g.center = center;
    g.radius = radius;
    g.resolution = resolution;

    // Gram-Schmidt in the Hilbert-Schmidt inner product.
    const double n1 = std::sqrt(hs_inner(dir1, dir1));
    if (n1 < 1e-12) throw DegeneratePlane("cross_section: dir1 is null");
    g.dir1 = (1.0 / n1) * dir1;
    BipartiteOperator d2 = dir2 - hs_inner(g.dir1, dir2) * g.dir1;
    const double n2 = std::sqrt(hs_inner(d2, d2));
    if (n2 < 1e-12 * std::max(1.0, std::sqrt(hs_inner(dir2, dir2))))
        throw DegeneratePlane("cross_section: directions linearly dependent");
    g.dir2 = (1.0 / n2) * d2;

    const long cells = static_cast<long>(resolution) * resolution;
    g.positive.assign(cells, 0);
    g.ppt.assign(cells, 0);

    parallel_for(cells, resolve_threads(threads), [&](long cell) {
        const int ix = static_cast<int>(cell % resolution);
        const int iy = static_cast<int>(cell / resolution);
        const BipartiteOperator op = g.center + g.coord(ix) * g.dir1 + g.coord(iy) * g.dir2;
        const double scale = std::max(1.0, std::abs(op.mat.trace().real()));
        const double me = hermitian_eig(op.mat, tol).min_value();
        const double pe = hermitian_eig(partial_transpose(op, Side::B).mat, tol).min_value();
        g.positive[cell] = me >= -tol.binegative_threshold * scale ? 1 : 0;
        g.ppt[cell] = pe >= -tol.binegative_threshold * scale ? 1 : 0;
    });
    return g;
}

std::string section_csv(const SectionGrid& grid) {
    std::ostringstream os;
    os << "x,y,positive,ppt\n";
    char buf[64];
    for (int iy = 0; iy < grid.resolution; ++iy)
        for (int ix = 0; ix < grid.resolution; ++ix) {
            const long cell = static_cast<long>(iy) * grid.resolution + ix;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", grid.coord(ix), grid.coord(iy));
            os << buf << "," << int(grid.positive[cell]) << "," << int(grid.ppt[cell])
               << "\n";
        }
    return os.str();
}

std::string section_svg(const SectionGrid& grid) {
    // Four-color raster: both sets, positive only, PPT only, neither.
    static const char* kColors[4] = {"#d0d0d0", "#e4572e", "#4f9da6", "#f2e863"};
    const int res = grid.resolution;
    const int cell_px = std::max(1, 600 / std::max(1, res));
    const int size = cell_px * res;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
       << size + 24 << "\">\n";
    for (int iy = 0; iy < res; ++iy)
        for (int ix = 0; ix < res; ++ix) {
            const long cell = static_cast<long>(iy) * res + ix;
            const int cls = grid.positive[cell] && grid.ppt[cell] ? 1
                            : grid.positive[cell]                 ? 2
                            : grid.ppt[cell]                      ? 3
                                                                  : 0;
            os << "<rect x=\"" << ix * cell_px << "\" y=\"" << (res - 1 - iy) * cell_px
               << "\" width=\"" << cell_px << "\" height=\"" << cell_px << "\" fill=\""
               << kColors[cls] << "\"/>\n";
        }
    os << "<text x=\"2\" y=\"" << size + 16
       << "\" font-size=\"12\">gray: neither; red: positive&amp;PPT; teal: positive only; "
          "yellow: PPT only</text>\n</svg>\n";
    return os.str();
}

} // namespace bineg
