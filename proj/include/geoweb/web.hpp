#pragma once

#include "geoweb/expr.hpp"
#include "geoweb/jet.hpp"
#include "geoweb/tensor.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geoweb {

/// Ball in which the web is expected to be in general position.
struct Domain {
    std::vector<double> center;
    double radius = 1.0;
};

/// A d-web of hypersurfaces on an n-dimensional chart, given by d web functions.
class WebChart {
public:
    WebChart(int dim, std::vector<Expression> functions, std::optional<int> pointed = std::nullopt, Domain domain = {},
             std::vector<std::string> labels = {});

    int dim() const noexcept { return dim_; }
    /// Number of foliations d.
    int size() const noexcept { return static_cast<int>(functions_.size()); }
    /// 0-based access.
    const Expression& function(int i) const { return functions_.at(static_cast<std::size_t>(i)); }
    const std::vector<Expression>& functions() const noexcept { return functions_; }
    /// 1-based index of the distinguished foliation, if any.
    std::optional<int> pointed() const noexcept { return pointed_; }
    const Domain& domain() const noexcept { return domain_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Copy with the pointed foliation swapped into slot n+1. Requires pointed().
    WebChart pointed_in_normal_slot() const;
    /// Copy whose functions are the given 1-based foliations, in that order.
    WebChart subweb(std::span<const int> foliations) const;

private:
    int dim_;
    std::vector<Expression> functions_;
    std::optional<int> pointed_;
    Domain domain_;
    std::vector<std::string> labels_;
};

/// Gauge-fixed coframe of the first n+1 foliations at a point.
///
/// omega_i = lambda_i df_i with lambda_{n+1} = 1 and sum_{i<=n+1} omega_i = 0.
/// With K the input order: lambda, omega and frame are order K-1 jets,
/// structure functions order K-2.
struct NormalizedCoframe {
    std::vector<double> point;
    int order = 0;
    std::vector<Jet> lambda; ///< n+1 entries, last is 1
    JetMatrix omega;         ///< (n+1) x n, omega(i, c) = c-th coordinate component of omega_i
    JetMatrix frame;         ///< n x n, frame(c, j) = c-th coordinate component of the dual vector d_j
    Tensor<Jet> structure;   ///< structure(k, i, j) = c^k_ij, [d_i, d_j] = c^k_ij d_k

    int dim() const noexcept { return frame.rows(); }
    /// Frame vector d_j as a coordinate vector of jets.
    std::vector<Jet> frame_vector(int j) const { return frame.col(j); }
};

/// Coefficients of foliation k in the normalized basis: sum_i a_i omega_i = -df_k.
struct BasisInvariant {
    int foliation = 0; ///< 1-based
    std::vector<Jet> a;

    /// [a_1 : ... : a_n] scaled so the first entry is 1.
    std::vector<double> projective_class() const;
};

/// Gradient jets (order K-1) of a web function evaluated at order K.
std::vector<Jet> differential(const Expression& f, std::span<const double> point, int order);

NormalizedCoframe normalize_coframe(const WebChart& web, std::span<const double> point, int order = kMaxJetOrder);

/// k is 1-based, n+2 <= k <= d.
BasisInvariant basis_invariants(const NormalizedCoframe& cof, const WebChart& web, int k);

} // namespace geoweb
