#include "geoweb/web.hpp"

#include "geoweb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geoweb {

WebChart::WebChart(int dim, std::vector<Expression> functions, std::optional<int> pointed, Domain domain,
                   std::vector<std::string> labels)
    : dim_(dim), functions_(std::move(functions)), pointed_(pointed), domain_(std::move(domain)), labels_(std::move(labels))
{
    if (dim_ < 2) throw SchemaError("dimension must be at least 2");
    if (size() < dim_ + 2)
        throw SchemaError("a web needs d >= n+2 functions: got " + std::to_string(size()) + " for n = " + std::to_string(dim_));
    for (int i = 0; i < size(); ++i)
        if (functions_[static_cast<std::size_t>(i)].dim() != dim_)
            throw SchemaError("function " + std::to_string(i + 1) + " is not over " + std::to_string(dim_) + " variables");
    if (pointed_ && (*pointed_ < 1 || *pointed_ > size()))
        throw SchemaError("pointed foliation " + std::to_string(*pointed_) + " outside 1.." + std::to_string(size()));
    if (domain_.center.empty()) domain_.center.assign(static_cast<std::size_t>(dim_), 0.0);
    if (static_cast<int>(domain_.center.size()) != dim_) throw SchemaError("domain center has wrong dimension");
    if (!(domain_.radius > 0.0)) throw SchemaError("domain radius must be positive");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != size())
        throw SchemaError("labels must name every foliation");
}

WebChart WebChart::pointed_in_normal_slot() const
{
    if (!pointed_) throw SchemaError("web has no pointed foliation");
    const int slot = dim_;       // 0-based slot n+1
    const int p = *pointed_ - 1; // 0-based
    auto functions = functions_;
    auto labels = labels_;
    std::swap(functions[static_cast<std::size_t>(p)], functions[static_cast<std::size_t>(slot)]);
    if (!labels.empty()) std::swap(labels[static_cast<std::size_t>(p)], labels[static_cast<std::size_t>(slot)]);
    return WebChart(dim_, std::move(functions), slot + 1, domain_, std::move(labels));
}

WebChart WebChart::subweb(std::span<const int> foliations) const
{
    std::vector<Expression> functions;
    std::vector<std::string> labels;
    for (int k : foliations) {
        functions.push_back(function(k - 1));
        if (!labels_.empty()) labels.push_back(labels_.at(static_cast<std::size_t>(k - 1)));
    }
    return WebChart(dim_, std::move(functions), std::nullopt, domain_, std::move(labels));
}

std::vector<double> BasisInvariant::projective_class() const
{
    std::vector<double> out;
    const double lead = a.front().value();
    for (const auto& ai : a) out.push_back(ai.value() / lead);
    return out;
}

std::vector<Jet> differential(const Expression& f, std::span<const double> point, int order)
{
    if (order < 1) throw OrderExhausted("differential needs jet order >= 1");
    const Jet value = eval_field(f, point, order);
    std::vector<Jet> df;
    df.reserve(point.size());
    for (int c = 0; c < static_cast<int>(point.size()); ++c) df.push_back(value.partial(c));
    return df;
}

NormalizedCoframe normalize_coframe(const WebChart& web, std::span<const double> point, int order)
{
    const int n = web.dim();
    if (static_cast<int>(point.size()) != n) throw MixedContext("point dimension does not match the web");
    if (order < 2) throw OrderExhausted("coframe normalization needs jet order >= 2");
    const int k1 = order - 1;

    std::vector<std::vector<Jet>> df;
    for (int i = 0; i <= n; ++i) df.push_back(differential(web.function(i), point, order));

    // sum_{i<n} lambda_i grad f_i = -grad f_{n+1}
    const Jet zero(n, k1);
    JetMatrix grads(n, n, zero);
    std::vector<Jet> rhs;
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) grads(c, i) = df[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        rhs.push_back(-df[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)]);
    }

    NormalizedCoframe cof;
    cof.point.assign(point.begin(), point.end());
    cof.order = order;
    try {
        cof.lambda = jet_linear_solve(grads, rhs);
    } catch (const SingularSystem& e) {
        throw DegenerateWebPoint(std::string("gradients of the first n+1 functions are rank deficient: ") + e.what());
    }
    cof.lambda.push_back(Jet::constant(n, k1, 1.0));

    double largest = 0.0;
    for (const auto& l : cof.lambda) largest = std::max(largest, std::abs(l.value()));
    for (int i = 0; i < n; ++i) {
        if (!(std::abs(cof.lambda[static_cast<std::size_t>(i)].value()) > kPivotFloor * largest))
            throw DegenerateWebPoint("normalizing factor lambda_" + std::to_string(i + 1) + " vanishes");
    }

    cof.omega = JetMatrix(n + 1, n, zero);
    for (int i = 0; i <= n; ++i)
        for (int c = 0; c < n; ++c)
            cof.omega(i, c) = cof.lambda[static_cast<std::size_t>(i)] * df[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];

    JetMatrix basis(n, n, zero);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) basis(i, c) = cof.omega(i, c);
    try {
        cof.frame = inverse(basis);
    } catch (const SingularSystem& e) {
        throw DegenerateWebPoint(std::string("basis coframe is singular: ") + e.what());
    }

    // c^k_ij = <omega_k, [d_i, d_j]>, [X, Y]^c = X(Y^c) - Y(X^c)
    const int k2 = order - 2;
    cof.structure = Tensor<Jet>(n, 3, Jet(n, k2));
    std::vector<std::vector<Jet>> vectors;
    for (int j = 0; j < n; ++j) vectors.push_back(cof.frame.col(j));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::vector<Jet> bracket;
            for (int c = 0; c < n; ++c)
                bracket.push_back(directional_derivative(cof.frame(c, j), vectors[static_cast<std::size_t>(i)]) -
                                  directional_derivative(cof.frame(c, i), vectors[static_cast<std::size_t>(j)]));
            for (int k = 0; k < n; ++k) {
                Jet ckij(n, k2);
                for (int c = 0; c < n; ++c) ckij += cof.omega(k, c).truncated(k2) * bracket[static_cast<std::size_t>(c)];
                cof.structure(k, j, i) = -ckij;
                cof.structure(k, i, j) = std::move(ckij);
            }
        }
    }
    return cof;
}

BasisInvariant basis_invariants(const NormalizedCoframe& cof, const WebChart& web, int k)
{
    const int n = web.dim();
    if (k < n + 2 || k > web.size())
        throw SchemaError("basis invariants exist for foliations " + std::to_string(n + 2) + ".." + std::to_string(web.size()));
    const auto df = differential(web.function(k - 1), cof.point, cof.order);

    JetMatrix system(n, n, Jet(n, cof.order - 1));
    std::vector<Jet> rhs;
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) system(c, i) = cof.omega(i, c);
        rhs.push_back(-df[static_cast<std::size_t>(c)]);
    }

    BasisInvariant inv;
    inv.foliation = k;
    try {
        inv.a = jet_linear_solve(system, rhs);
    } catch (const SingularSystem& e) {
        throw DegenerateWebPoint(std::string("basis coframe is singular: ") + e.what());
    }
    double largest = 0.0;
    for (const auto& ai : inv.a) largest = std::max(largest, std::abs(ai.value()));
    for (int i = 0; i < n; ++i) {
        if (!(std::abs(inv.a[static_cast<std::size_t>(i)].value()) > kPivotFloor * largest))
            throw DegenerateWebPoint("basis invariant a_" + std::to_string(i + 1) + " of foliation " + std::to_string(k) +
                                     " vanishes: web not in general position");
    }
    return inv;
}

} // namespace geoweb
