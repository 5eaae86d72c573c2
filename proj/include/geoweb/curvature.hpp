#pragma once

#include "geoweb/connection.hpp"
#include "geoweb/invariants.hpp"
#include "geoweb/tensor.hpp"
#include "geoweb/web.hpp"

#include <span>
#include <string>
#include <vector>

namespace geoweb {

/// Obstruction pass threshold (times scale) for the linearizability verdict.
inline constexpr double kObstructionPassThreshold = 1e-7;

/// Jet-valued curvature. Index order follows the math: riemann(i, j, k, l) = R^i_jkl,
/// weyl(i, j, k, l) = W^i_jkl, cotton(j, k, l) = Y_jkl.
struct CurvatureJets {
    Tensor<Jet> riemann;
    Tensor<Jet> ricci;
    Tensor<Jet> schouten;
    Tensor<Jet> weyl;   ///< n >= 3 only
    Tensor<Jet> cotton; ///< n = 2 only
};

/// Value parts at the base point.
struct CurvaturePack {
    int dim = 0;
    Tensor<double> riemann;
    Tensor<double> ricci;
    Tensor<double> schouten;
    Tensor<double> weyl;
    Tensor<double> cotton;
    double obstruction = 0.0; ///< max |W| (n >= 3) or max |Y| (n = 2)
    double scale = 1.0;       ///< threshold scale for the obstruction
};

/// R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj, one order below the Christoffels.
Tensor<Jet> riemann(const ConnectionField& conn);

/// Ricci, projective Schouten, and Weyl (n >= 3) or Cotton (n = 2). The Cotton
/// tensor needs Christoffels of order >= 2.
CurvatureJets projective_pack(const ConnectionField& conn, const Tensor<Jet>& riemann);

CurvaturePack curvature_pack(const ConnectionField& conn);

/// Jet order of the web functions that the obstruction of an n-dimensional web needs.
int obstruction_order(int dim);

struct LinearizabilityRow {
    std::size_t index = 0;
    std::vector<double> point;
    bool excluded = false;
    std::string diagnostic;
    double discrepancy = 0.0;
    double obstruction = 0.0;
    double scale = 1.0;
};

struct LinearizabilityReport {
    GeodesicityReport geodesicity;
    std::vector<LinearizabilityRow> rows;
    double max_obstruction = 0.0;
    std::size_t excluded = 0;
    Verdict verdict = Verdict::inconclusive;
};

LinearizabilityReport linearizability_verdict(const WebChart& web, std::span<const std::vector<double>> points);

} // namespace geoweb
