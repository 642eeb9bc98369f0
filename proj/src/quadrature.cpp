#include "udw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace udw {

namespace {

// Gauss(7)/Kronrod(15) abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEval {
    double value = 0.0;   // Kronrod 15-point estimate
    double error = 0.0;   // scaled |K15 - G7| estimate
    double resabs = 0.0;  // K15 of |f|
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv1[7], fv2[7];
    const double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const double fsum = fv1[j] + fv2[j];
        k15 += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) g7 += kWg[j / 2] * fsum;
    }
    if (!std::isfinite(k15))
        throw QuadratureError("integrate: non-finite integrand value", a, b,
                              std::numeric_limits<double>::infinity());
    const double mean = 0.5 * k15;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    resasc *= std::abs(h);
    resabs *= std::abs(h);

    PanelEval pe;
    pe.value = k15 * h;
    pe.resabs = resabs;
    double err = std::abs((k15 - g7) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    pe.error = std::max(err, eps50);
    return pe;
}

struct RefineCtx {
    const std::function<double(double)>* f = nullptr;
    double tol_per_len = 0.0;  // max(abs_tol, rel_tol * |rough|) / total_len
    int max_depth = 30;
    double sum = 0.0;
    double comp = 0.0;  // Kahan compensation
    double err_sum = 0.0;
    long panels = 0;
    bool failed = false;
    double worst_a = 0.0, worst_b = 0.0, worst_err = 0.0;

    void accumulate(const PanelEval& pe) {
        const double y = pe.value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err_sum += pe.error;
        ++panels;
    }
};

void refine(RefineCtx& ctx, double a, double b, const PanelEval& pe, int depth) {
    const double tol = ctx.tol_per_len * (b - a);
    // Accept once the estimate is at round-off scale relative to the panel's
    // |f| mass: the aggregate floor sum_i 50*eps*resabs_i is invariant under
    // subdivision, so refining past it only burns depth without gaining
    // accuracy. err_sum still reports the honest (floored) estimate.
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * pe.resabs;
    if (pe.error <= tol || pe.error <= floor) {
        ctx.accumulate(pe);
        return;
    }
    if (depth >= ctx.max_depth) {
        if (pe.error > ctx.worst_err) {
            ctx.worst_err = pe.error;
            ctx.worst_a = a;
            ctx.worst_b = b;
        }
        ctx.failed = true;
        ctx.accumulate(pe);
        return;
    }
    const double m = 0.5 * (a + b);
    if (!(a < m && m < b)) {  // interval at roundoff resolution
        ctx.accumulate(pe);
        return;
    }
    refine(ctx, a, m, gk15(*ctx.f, a, m), depth + 1);
    refine(ctx, m, b, gk15(*ctx.f, m, b), depth + 1);
}

}  // namespace

IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec) {
    if (spec.max_depth < 4) throw std::invalid_argument("integrate: max_depth must be >= 4");
    if (!(spec.abs_tol >= 0.0) || !(spec.rel_tol >= 0.0))
        throw std::invalid_argument("integrate: tolerances must be nonnegative");
    if (spec.abs_tol == 0.0 && spec.rel_tol == 0.0)
        throw std::invalid_argument("integrate: at least one tolerance must be positive");
    if (spec.oscillation_period_hint && !(*spec.oscillation_period_hint > 0.0))
        throw std::invalid_argument("integrate: oscillation_period_hint must be positive");

    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    if (a == b) return {0.0, 0.0, 0};

    // Top-level panel edges: endpoints, interior forced breakpoints, then an
    // even pre-split of each piece to at most half the oscillation period.
    std::vector<double> edges;
    edges.push_back(a);
    std::vector<double> bps = spec.forced_breakpoints;
    std::sort(bps.begin(), bps.end());
    const double total_len = b - a;
    for (double x : bps) {
        if (x <= a || x >= b) continue;
        if (x - edges.back() > 1e-14 * total_len) edges.push_back(x);
    }
    edges.push_back(b);

    std::vector<double> panels;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        long nsplit = 1;
        if (spec.oscillation_period_hint) {
            const double target = 0.5 * *spec.oscillation_period_hint;
            nsplit = std::max(1L, std::lround(std::ceil((hi - lo) / target)));
            nsplit = std::min(nsplit, 2000000L);
        }
        for (long k = 0; k < nsplit; ++k)
            panels.push_back(lo + (hi - lo) * double(k) / double(nsplit));
    }
    panels.push_back(b);

    // First pass estimates the scale so rel_tol has a reference magnitude.
    std::vector<PanelEval> first(panels.size() - 1);
    double rough = 0.0;
    for (size_t i = 0; i + 1 < panels.size(); ++i) {
        first[i] = gk15(f, panels[i], panels[i + 1]);
        rough += first[i].value;
    }

    RefineCtx ctx;
    ctx.f = &f;
    ctx.max_depth = spec.max_depth;
    ctx.tol_per_len = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough)) / total_len;
    for (size_t i = 0; i + 1 < panels.size(); ++i)
        refine(ctx, panels[i], panels[i + 1], first[i], 0);

    if (ctx.failed)
        throw QuadratureError("integrate: max_depth exhausted before reaching tolerance",
                              ctx.worst_a, ctx.worst_b, ctx.worst_err);
    return {sign * ctx.sum, ctx.err_sum, ctx.panels};
}

}  // namespace udw
