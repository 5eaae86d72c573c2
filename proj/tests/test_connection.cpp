#include "geoweb/connection.hpp"
#include "geoweb/error.hpp"
#include "geoweb/invariants.hpp"

#include "support/corpus.hpp"
#include "support/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace geoweb;

namespace {

double max_abs_diff(const Tensor<Jet>& a, const Tensor<Jet>& b)
{
    double m = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        const int order = std::min(a.data()[p].order(), b.data()[p].order());
        m = std::max(m, (a.data()[p].truncated(order) - b.data()[p].truncated(order)).max_abs());
    }
    return m;
}

std::vector<Expression> random_polynomials(std::mt19937_64& rng, int n)
{
    std::vector<Expression> out;
    for (int i = 0; i < n; ++i) {
        std::string src = std::to_string(corpus::uniform(rng, -1, 1));
        for (int c = 1; c <= n; ++c) {
            src += " + " + std::to_string(corpus::uniform(rng, -1, 1)) + "*x" + std::to_string(c);
            src += " + " + std::to_string(corpus::uniform(rng, -0.5, 0.5)) + "*x" + std::to_string(c) + "*x" +
                   std::to_string(1 + (c % n));
        }
        out.push_back(parse_expression(src, n));
    }
    return out;
}

} // namespace

TEST_SUITE("connection") {

TEST_CASE("skew invariants")
{
    SUBCASE("constant a gives s = 0")
    {
        const WebChart web = corpus::load("five_linear");
        for (const auto& p : corpus::points(web, 5, 1)) {
            const NormalizedCoframe cof = normalize_coframe(web, p, 3);
            for (int k : {4, 5}) CHECK(skew_invariants(basis_invariants(cof, web, k).a, cof.frame).max_abs_value() == 0.0);
        }
    }
    SUBCASE("antisymmetry")
    {
        const WebChart web = corpus::load("curved3");
        for (const auto& p : corpus::points(web, 5, 2)) {
            const NormalizedCoframe cof = normalize_coframe(web, p, 3);
            const auto a = basis_invariants(cof, web, 5).a;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    if (i == j) continue;
                    const Jet sij = skew_invariant(a, cof.frame, i, j);
                    const Jet sji = skew_invariant(a, cof.frame, j, i);
                    for (std::size_t q = 0; q < sij.size(); ++q) CHECK(sij[q] == -sji[q]);
                }
        }
    }
    SUBCASE("invariant under rescaling of a")
    {
        const WebChart web = corpus::load("curved2");
        for (const auto& p : corpus::points(web, 5, 4)) {
            const NormalizedCoframe cof = normalize_coframe(web, p, 3);
            auto a = basis_invariants(cof, web, 4).a;
            const Jet s = skew_invariant(a, cof.frame, 0, 1);
            const Jet factor = exp(Jet::variable(2, 2, 0, p[0]) * Jet::variable(2, 2, 1, p[1])) + 1.0;
            for (auto& ai : a) ai = ai * factor;
            CHECK((skew_invariant(a, cof.frame, 0, 1) - s).max_abs() <= 1e-12);
        }
    }
    SUBCASE("bilinear web: s_12 at the origin and against finite differences")
    {
        // The first three foliations are parallel, so the frame is the coordinate frame and
        // a = -(1 + x2, 2 + x1); s_12 = (a_1 d_2 - a_2 d_1) log(a_2/a_1) / (a_1 - a_2).
        const WebChart web = corpus::load("xy4");
        const Expression l = parse_expression("log((2+x1)/(1+x2))", 2);
        for (const auto& p : corpus::points(web, 30, 8)) {
            const NormalizedCoframe cof = normalize_coframe(web, p, 3);
            const Jet s = skew_invariant(basis_invariants(cof, web, 4).a, cof.frame, 0, 1);
            const double a1 = -(1 + p[1]);
            const double a2 = -(2 + p[0]);
            const double ref = (a1 * oracle::derivative(l, p, std::vector<int>{0, 1}) -
                                a2 * oracle::derivative(l, p, std::vector<int>{1, 0})) /
                               (a1 - a2);
            CHECK(s.value() == doctest::Approx(ref).epsilon(1e-9));
        }
        const std::vector<double> origin{0.0, 0.0};
        const NormalizedCoframe cof = normalize_coframe(web, origin, 3);
        CHECK(std::abs(skew_invariant(basis_invariants(cof, web, 4).a, cof.frame, 0, 1).value() - 2.0) <= 1e-9);
    }
    SUBCASE("coincident invariants")
    {
        // a = -(1 + x2, 2 + x1) coincide on x2 = x1 + 1
        const WebChart web = corpus::load("xy4");
        const std::vector<double> p{-0.25, 0.75};
        const NormalizedCoframe cof = normalize_coframe(web, p, 3);
        CHECK_THROWS_AS((void)skew_invariants(basis_invariants(cof, web, 4).a, cof.frame), CoincidentInvariants);
    }
}

TEST_CASE("theta system")
{
    SUBCASE("t = 0 and s = 0 give theta = 0")
    {
        const WebChart web = corpus::load("parallel3");
        const std::vector<double> origin{0.1, 0.2, 0.3};
        const NormalizedCoframe cof = normalize_coframe(web, origin, 3);
        const ThetaSystem th = theta_system(cof, basis_invariants(cof, web, 5));
        CHECK(th.theta.max_abs_value() == 0.0);
        for (const auto& v : th.theta_next) CHECK(v.max_abs() == 0.0);
    }
    SUBCASE("bilinear web at the origin")
    {
        const WebChart web = corpus::load("xy4");
        const std::vector<double> origin{0.0, 0.0};
        const NormalizedCoframe cof = normalize_coframe(web, origin, 3);
        const ThetaSystem th = theta_system(cof, basis_invariants(cof, web, 4));
        CHECK(th.theta(0, 1).value() == doctest::Approx(2.0));
        CHECK(th.theta(1, 0).value() == doctest::Approx(-2.0));
        CHECK(th.theta(0, 0).value() == doctest::Approx(0.0));
        CHECK(th.theta(1, 1).value() == doctest::Approx(0.0));
    }
    SUBCASE("symmetric and antisymmetric parts")
    {
        std::mt19937_64 rng(5);
        const WebChart web = corpus::load("curved3");
        for (const auto& p : corpus::points(web, 5, 6)) {
            const NormalizedCoframe cof = normalize_coframe(web, p, 3);
            std::vector<Jet> t;
            for (int i = 0; i < 3; ++i) t.push_back(Jet::constant(3, 1, corpus::uniform(rng, -1, 1)) + Jet::variable(3, 1, i, p[i]));
            const ThetaSystem th = theta_system(cof, basis_invariants(cof, web, 5), t);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    CHECK(((th.theta(i, j) + th.theta(j, i)) * 0.5 - (t[i] + t[j]) * 0.5).max_abs() <= 1e-14);
                    CHECK(((th.theta(i, j) - th.theta(j, i)) * 0.5 - ((t[j] - t[i]) * 0.5 + th.s(i, j))).max_abs() <= 1e-14);
                }
        }
    }
}

TEST_CASE("canonical Christoffels")
{
    SUBCASE("parallel webs are flat")
    {
        for (const char* name : {"parallel2", "parallel3", "five_linear"}) {
            const WebChart web = corpus::load(name);
            for (const auto& p : corpus::points(web, 10, 12)) {
                const ConnectionField conn = canonical_connection(web, p, 3);
                for (const auto& g : conn.coord_gamma.data()) CHECK(g.max_abs() == 0.0);
                for (const auto& g : conn.frame_gamma.data()) CHECK(g.max_abs() == 0.0);
            }
        }
    }
    SUBCASE("bilinear web at the origin")
    {
        const WebChart web = corpus::load("xy4");
        const std::vector<double> origin{0.0, 0.0};
        const ConnectionField conn = canonical_connection(web, origin, 3);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double expect = 0.0;
                    if (i != j) expect = k == 0 ? -1.0 : 1.0;
                    CHECK(std::abs(conn.frame_gamma(k, i, j).value() - expect) <= 1e-9);
                    CHECK(std::abs(conn.coord_gamma(k, i, j).value() - expect) <= 1e-9);
                }
    }
    SUBCASE("torsion relation and symmetry over the corpus")
    {
        for (const auto& name : corpus::all()) {
            const WebChart web = corpus::load(name);
            const int n = web.dim();
            for (const auto& p : corpus::points(web, 20, 13)) {
                INFO(name);
                const NormalizedCoframe cof = normalize_coframe(web, p, 3);
                const ConnectionField conn = canonical_christoffels(cof, theta_system(cof, basis_invariants(cof, web, n + 2)));
                for (int k = 0; k < n; ++k)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            const Jet rel = conn.frame_gamma(k, j, i) - conn.frame_gamma(k, i, j) - cof.structure(k, i, j);
                            CHECK(rel.max_abs() <= 1e-12);
                            const Jet sym = conn.coord_gamma(k, i, j) - conn.coord_gamma(k, j, i);
                            CHECK(sym.max_abs() <= 1e-12);
                        }
            }
        }
    }
    SUBCASE("coordinate Christoffels agree with finite differences of lower-order ones")
    {
        // The order-1 part of Gamma at order 3 must match central differences of the value parts.
        const WebChart web = corpus::load("curved2");
        const std::vector<double> p{0.05, -0.02};
        const ConnectionField conn = canonical_connection(web, p, 3);
        const double h = 1e-4;
        for (int c = 0; c < 2; ++c) {
            auto plus = p, minus = p;
            plus[c] += h;
            minus[c] -= h;
            const Tensor<double> gp = canonical_connection(web, plus, 2).coord_values();
            const Tensor<double> gm = canonical_connection(web, minus, 2).coord_values();
            for (int q = 0; q < 2; ++q)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        const double fd = (gp(q, a, b) - gm(q, a, b)) / (2 * h);
                        CHECK(conn.coord_gamma(q, a, b).gradient()[c] == doctest::Approx(fd).epsilon(1e-6));
                    }
        }
    }
}

TEST_CASE("gauge t is a projective change")
{
    std::mt19937_64 rng(21);
    for (const auto& name : corpus::four_webs()) {
        const WebChart web = corpus::load(name);
        const int n = web.dim();
        const auto t = random_polynomials(rng, n);
        for (const auto& p : corpus::points(web, 10, 22)) {
            INFO(name);
            const ConnectionField base = canonical_connection(web, p, 3);
            const ConnectionField gauged = canonical_connection(web, p, 3, t);
            const ProjectiveEquivalence eq = projective_equivalence_check(base, gauged);
            CHECK(eq.equivalent);
            CHECK(eq.residual <= 1e-9);
            // rho = -theta_{n+1}/2 in coordinates
            const NormalizedCoframe cof = normalize_coframe(web, p, 3);
            const auto tj = eval_gauge(t, p, 1);
            for (int c = 0; c < n; ++c) {
                double expect = 0.0;
                for (int i = 0; i < n; ++i) expect -= 0.5 * tj[i].value() * cof.omega(i, c).value();
                CHECK(eq.rho.rho[c].value() == doctest::Approx(expect).epsilon(1e-10));
            }
            const ConnectionField back = projective_gauge_change(base, eq.rho);
            for (std::size_t q = 0; q < back.coord_gamma.size(); ++q)
                CHECK(std::abs(back.coord_gamma.data()[q].value() - gauged.coord_gamma.data()[q].value()) <= 1e-12);
        }
    }
}

TEST_CASE("projective gauge changes")
{
    const std::vector<double> p{0.1, -0.2};
    const ConnectionField flat = flat_connection(2, p, 2);
    SUBCASE("rho = 0 is the identity")
    {
        const std::vector<double> zero{0.0, 0.0};
        CHECK(max_abs_diff(projective_gauge_change(flat, GaugeForm::constant(zero, 2)).coord_gamma, flat.coord_gamma) == 0.0);
    }
    SUBCASE("constant rho on the flat connection")
    {
        const std::vector<double> r{0.7, -1.3};
        const ConnectionField g = projective_gauge_change(flat, GaugeForm::constant(r, 2));
        for (int c = 0; c < 2; ++c)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double expect = (c == a ? r[b] : 0.0) + (c == b ? r[a] : 0.0);
                    CHECK(g.coord_gamma(c, a, b).value() == doctest::Approx(expect));
                    CHECK(g.coord_gamma(c, a, b).value() == g.coord_gamma(c, b, a).value());
                }
    }
    SUBCASE("rho then -rho")
    {
        const WebChart web = corpus::load("curved2");
        const ConnectionField conn = canonical_connection(web, p, 3);
        GaugeForm rho;
        rho.rho = {sin(Jet::variable(2, 1, 0, p[0])), Jet::variable(2, 1, 1, p[1]) * 3.0};
        GaugeForm neg;
        for (const auto& r : rho.rho) neg.rho.push_back(-r);
        const ConnectionField twice = projective_gauge_change(projective_gauge_change(conn, rho), neg);
        CHECK(max_abs_diff(twice.coord_gamma, conn.coord_gamma) <= 1e-14);
        CHECK(max_abs_diff(twice.frame_gamma, conn.frame_gamma) <= 1e-14);
    }
    SUBCASE("equivalence check")
    {
        const WebChart web = corpus::load("curved3");
        const std::vector<double> q{0.05, 0.1, -0.1};
        const ConnectionField conn = canonical_connection(web, q, 3);
        const std::vector<double> r{0.3, -0.2, 1.1};
        const auto eq = projective_equivalence_check(conn, projective_gauge_change(conn, GaugeForm::constant(r, 1)));
        CHECK(eq.equivalent);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(eq.rho.rho[c].value() - r[c]) <= 1e-12);
        const auto self = projective_equivalence_check(conn, conn);
        CHECK(self.equivalent);
        for (const auto& v : self.rho.rho) CHECK(v.value() == 0.0);
    }
    SUBCASE("a symmetric perturbation that is not of gauge form")
    {
        ConnectionField bent = flat;
        bent.coord_gamma(0, 1, 1) += 1.0;
        const auto eq = projective_equivalence_check(flat, bent);
        CHECK(!eq.equivalent);
        CHECK(eq.residual >= 0.1);
    }
}

TEST_CASE("pointed affine connection")
{
    SUBCASE("parallel web pointed at foliation 3 is flat")
    {
        const WebChart web = parse_webfile(R"J({"dimension":2,"functions":["x1","x2","-(x1+x2)","x1+2*x2"],"pointed":3})J");
        for (const auto& p : corpus::points(web, 5, 1)) {
            const ConnectionField conn = pointed_affine_connection(web, p, 3);
            for (const auto& g : conn.coord_gamma.data()) CHECK(g.max_abs() == 0.0);
            CHECK(affine_function_residual(conn, web.function(2)) == 0.0);
        }
    }
    SUBCASE("bilinear web pointed at foliation 3")
    {
        const WebChart web = parse_webfile(
            R"J({"dimension":2,"functions":["x1","x2","-(x1+x2)","x1+2*x2+x1*x2"],"pointed":3,"domain":{"center":[0,0],"radius":0.5}})J");
        for (const auto& p : corpus::points(web, 50, 2)) {
            const ConnectionField pointed = pointed_affine_connection(web, p, 3);
            const ConnectionField canonical = canonical_connection(web, p, 3);
            CHECK(max_abs_diff(pointed.coord_gamma, canonical.coord_gamma) == 0.0);
            CHECK(affine_function_residual(pointed, web.function(2)) <= 1e-9);
        }
    }
    SUBCASE("pointed function is affine and the connection ignores f -> a f + b")
    {
        const WebChart web = corpus::load("pointed2");
        const WebChart affine = parse_webfile(
            R"J({"dimension":2,"functions":["x1+0.2*x2^2","-3.5*(x2+0.1*sin(x1))+7","-(x1*exp(0.3*x2)+x2)","x1-2*x2+0.25*x1*x2"],)J"
            R"J("pointed":2,"domain":{"center":[0.1,-0.1],"radius":0.4}})J");
        for (const auto& p : corpus::points(web, 50, 3)) {
            const ConnectionField conn = pointed_affine_connection(web, p, 3);
            CHECK(affine_function_residual(conn, web.function(1)) <= 1e-9);
            const ConnectionField other = pointed_affine_connection(affine, p, 3);
            CHECK(max_abs_diff(conn.coord_gamma, other.coord_gamma) <= 1e-12);
            // the web foliations stay totally geodesic
            for (int i = 0; i < web.size(); ++i)
                CHECK(totally_geodesic_residual(conn, differential(web.function(i), p, 2)).residual <= 1e-8);
        }
    }
}

} // TEST_SUITE
