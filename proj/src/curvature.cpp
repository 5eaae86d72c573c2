#include "geoweb/curvature.hpp"

#include "geoweb/error.hpp"
#include "geoweb/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace geoweb {

namespace {

Tensor<double> values(const Tensor<Jet>& t)
{
    if (t.empty()) return {};
    Tensor<double> out(t.dim(), t.rank());
    for (std::size_t p = 0; p < t.size(); ++p) out.data()[p] = t.data()[p].value();
    return out;
}

double max_abs(const Tensor<double>& t)
{
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

Tensor<Jet> riemann(const ConnectionField& conn)
{
    const int n = conn.dim();
    const int m = conn.order();
    if (m < 1) throw OrderExhausted("curvature needs Christoffel jets of order >= 1");
    const auto& g = conn.coord_gamma;

    Tensor<Jet> lower(n, 3);
    for (std::size_t p = 0; p < g.size(); ++p) lower.data()[p] = g.data()[p].truncated(m - 1);

    Tensor<Jet> r(n, 4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    if (l < k) {
                        r(i, j, k, l) = -r(i, j, l, k);
                        continue;
                    }
                    Jet v = g(i, l, j).partial(k) - g(i, k, j).partial(l);
                    for (int q = 0; q < n; ++q) v += lower(i, k, q) * lower(q, l, j) - lower(i, l, q) * lower(q, k, j);
                    r(i, j, k, l) = std::move(v);
                }
    return r;
}

CurvatureJets projective_pack(const ConnectionField& conn, const Tensor<Jet>& riem)
{
    const int n = conn.dim();
    const int m = riem(0, 0, 0, 0).order();
    const Jet zero(n, m);

    CurvatureJets out;
    out.riemann = riem;
    out.ricci = Tensor<Jet>(n, 2, zero);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i) out.ricci(j, l) += riem(i, j, i, l);

    const double denom = static_cast<double>(n * n - 1);
    out.schouten = Tensor<Jet>(n, 2, zero);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) out.schouten(j, l) = (static_cast<double>(n) * out.ricci(j, l) + out.ricci(l, j)) / denom;
    const auto& p = out.schouten;

    if (n >= 3) {
        out.weyl = Tensor<Jet>(n, 4, zero);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        Jet w = riem(i, j, k, l);
                        if (i == k) w -= p(j, l);
                        if (i == l) w += p(j, k);
                        if (i == j) w -= p(k, l) - p(l, k);
                        out.weyl(i, j, k, l) = std::move(w);
                    }
        return out;
    }

    // n = 2: Y_jkl = nabla_k P_jl - nabla_l P_jk
    if (m < 1) throw OrderExhausted("the Cotton tensor needs Christoffel jets of order >= 2");
    const int q = m - 1;
    Tensor<Jet> gamma(n, 3);
    for (std::size_t s = 0; s < gamma.size(); ++s) gamma.data()[s] = conn.coord_gamma.data()[s].truncated(q);
    Tensor<Jet> p0(n, 2);
    for (std::size_t s = 0; s < p0.size(); ++s) p0.data()[s] = p.data()[s].truncated(q);

    auto nabla = [&](int k, int j, int l) {
        Jet v = p(j, l).partial(k);
        for (int s = 0; s < n; ++s) v -= gamma(s, k, j) * p0(s, l) + gamma(s, k, l) * p0(j, s);
        return v;
    };
    out.cotton = Tensor<Jet>(n, 3, Jet(n, q));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) out.cotton(j, k, l) = nabla(k, j, l) - nabla(l, j, k);
    return out;
}

CurvaturePack curvature_pack(const ConnectionField& conn)
{
    const CurvatureJets jets = projective_pack(conn, riemann(conn));
    CurvaturePack pack;
    pack.dim = conn.dim();
    pack.riemann = values(jets.riemann);
    pack.ricci = values(jets.ricci);
    pack.schouten = values(jets.schouten);
    pack.weyl = values(jets.weyl);
    pack.cotton = values(jets.cotton);

    double gmax = 1.0;
    for (const auto& g : conn.coord_gamma.data()) gmax = std::max(gmax, g.max_abs());
    if (pack.dim >= 3) {
        pack.obstruction = max_abs(pack.weyl);
        pack.scale = gmax * gmax;
    } else {
        pack.obstruction = max_abs(pack.cotton);
        pack.scale = gmax * gmax * gmax;
    }
    return pack;
}

int obstruction_order(int dim) { return dim == 2 ? 4 : 3; }

LinearizabilityReport linearizability_verdict(const WebChart& web, std::span<const std::vector<double>> points)
{
    LinearizabilityReport report;
    report.geodesicity = geodesicity_test(web, points);
    report.rows.resize(points.size());
    const int order = obstruction_order(web.dim());

    parallel_for(points.size(), [&](std::size_t i) {
        const auto& g = report.geodesicity.rows[i];
        LinearizabilityRow row;
        row.index = i;
        row.point = g.point;
        row.excluded = g.excluded;
        row.diagnostic = g.diagnostic;
        row.discrepancy = g.discrepancy;
        if (!row.excluded) {
            try {
                const CurvaturePack pack = curvature_pack(canonical_connection(web, points[i], order));
                row.obstruction = pack.obstruction;
                row.scale = pack.scale;
            } catch (const DegenerateWebPoint& e) {
                row.excluded = true;
                row.diagnostic = e.what();
            }
        }
        report.rows[i] = std::move(row);
    });

    Verdict verdict = report.geodesicity.verdict;
    for (const auto& row : report.rows) {
        if (row.excluded) {
            ++report.excluded;
            continue;
        }
        report.max_obstruction = std::max(report.max_obstruction, row.obstruction);
        verdict = combine(verdict, threshold_verdict(row.obstruction, row.scale, kObstructionPassThreshold, kFailThreshold));
    }
    if (report.rows.empty() ||
        static_cast<double>(report.excluded) > kMaxExcludedFraction * static_cast<double>(report.rows.size()))
        verdict = Verdict::inconclusive;
    report.verdict = verdict;
    return report;
}

} // namespace geoweb
