#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fgs/adi_solver.hpp"
#include "fgs/error.hpp"
#include "support/oracles.hpp"

using namespace fgs;

namespace {

Field gaussian_bump(const Domain2D& dom, double cx, double cy, double sigma, double amp,
                    double base = 0.0) {
    Field f(dom.interior_x(), dom.interior_y());
    for (std::size_t i = 0; i < f.rows; ++i)
        for (std::size_t j = 0; j < f.cols; ++j) {
            const double dx = dom.x(i + 1) - cx;
            const double dy = dom.y(j + 1) - cy;
            f(i, j) = base + amp * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
    return f;
}

double max_field_diff(const Field& a, const Field& b) {
    return max_abs_diff(a.data, b.data);
}

} // namespace

TEST_CASE("precompute") {
    SUBCASE("alpha = 2 implicit operator has the classical C-N structure") {
        const ModelParams params(FractionalOrder(2.0), 2e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 16, 16);
        const double tau = 0.1;
        const auto ws = precompute(params, dom, tau);
        const double h = dom.hx();
        const double r = tau * params.mu_u() / (2.0 * h * h);
        const auto& m = ws.ux.implicit_mat;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                double expect = 0.0;
                if (i == j) expect = 1.0 + 2.0 * r;
                else if (i + 1 == j || j + 1 == i) expect = -r;
                CHECK(m(i, j) == doctest::Approx(expect).epsilon(1e-15));
            }
        CHECK(params.k_u() == -params.mu_u() / 4.0);
    }
    SUBCASE("tau = 0 gives identity operators") {
        const ModelParams params(FractionalOrder(1.5), 2e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 8, 8);
        const auto ws = precompute(params, dom, 0.0);
        const DenseMatrix eye = DenseMatrix::identity(7);
        CHECK(ws.ux.implicit_mat == eye);
        CHECK(ws.ux.explicit_mat == eye);
        CHECK(ws.vy.implicit_mat == eye);
    }
    SUBCASE("factorization round-trip") {
        const ModelParams params(FractionalOrder(1.5), 0.05, 0.02, 0.03, 0.063);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 16, 16);
        const auto ws = precompute(params, dom, 0.3);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> x(15), rhs(15);
        for (auto& v : x) v = dist(rng);
        matvec(ws.ux.implicit_mat, x, rhs);
        ws.ux.implicit_lu.solve(std::span<double>(rhs));
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
}

TEST_CASE("step_first") {
    SUBCASE("trivial steady state stays put away from the boundary") {
        const ModelParams params(FractionalOrder(1.7), 2e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(-1.0, 2.0, -1.0, 2.0, 48, 48);
        const auto ws = precompute(params, dom, 0.1);
        FieldPair s0{Field(47, 47, 1.0), Field(47, 47, 0.0)};
        const FieldPair s1 = step_first(s0, ws);
        // centre of the domain, far from the Dirichlet ring
        const std::size_t c = 23;
        CHECK(std::abs(s1.u(c, c) - 1.0) < 1e-6);
        CHECK(std::abs(s1.v(c, c)) < 1e-12);
        // dense direct solve of the same equations agrees everywhere
        const FieldPair dense = test::unfactored_step(s0, s0, ws, true);
        CHECK(max_field_diff(s1.u, dense.u) < 1e-10);
        CHECK(max_field_diff(s1.v, dense.v) < 1e-10);
    }
    SUBCASE("pure diffusion first step is dissipative") {
        const ModelParams params(FractionalOrder(1.5), 0.05, 0.02, 0.0, 0.0);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 32, 32);
        const auto ws = precompute(params, dom, 0.2);
        FieldPair s0{gaussian_bump(dom, 0.5, 0.5, 0.1, 1.0), Field(31, 31, 0.0)};
        const FieldPair s1 = step_first(s0, ws);
        CHECK(norm_sq(s1.u, dom) <= norm_sq(s0.u, dom));
        CHECK(max_field_diff(s1.v, s0.v) == 0.0);
    }
    SUBCASE("mu = 0 reduces to the scalar implicit-explicit update") {
        const double tau = 0.1, feed = 0.03, decay = 0.063;
        const ModelParams params(FractionalOrder(1.5), 0.0, 0.0, feed, decay);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 8, 8);
        const auto ws = precompute(params, dom, tau);
        const double u0 = 0.8, v0 = 0.2;
        FieldPair s0{Field(7, 7, u0), Field(7, 7, v0)};
        const FieldPair s1 = step_first(s0, ws);
        // scalar closed forms of the coupled half-point updates
        const double c = v0 * v0;
        const double u1 = (u0 * (1.0 - tau * c / 2.0 - feed * tau / 2.0) + feed * tau) /
                          (1.0 + tau * c / 2.0 + feed * tau / 2.0);
        const double uhalf = 0.5 * (u0 + u1);
        const double v1 = (v0 * (1.0 - tau * (feed + decay) / 2.0) + tau * uhalf * c) /
                          (1.0 + tau * (feed + decay) / 2.0);
        CHECK(s1.u(3, 3) == doctest::Approx(u1).epsilon(1e-10));
        CHECK(s1.v(3, 3) == doctest::Approx(v1).epsilon(1e-10));
    }
}

TEST_CASE("step") {
    SUBCASE("quadratic source term evaluates to the hand value") {
        // With mu = 0 the update is pointwise: choosing U^n so that the
        // half-point value is 1/2 forces H = -(tau/4) 0.5 (0.5)^2 + F tau 0.5.
        const double tau = 0.1, feed = 0.03;
        const ModelParams params(FractionalOrder(1.5), 0.0, 0.0, feed, 0.02);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 8, 8);
        const auto ws = precompute(params, dom, tau);
        const double h_expect = -0.001625;
        const double un = (1.0 - h_expect) / 2.0;
        FieldPair prev{Field(7, 7, un), Field(7, 7, 0.25)};
        FieldPair curr{Field(7, 7, un), Field(7, 7, 0.25)};
        const FieldPair next = step(prev, curr, ws);
        CHECK(next.u(2, 5) == doctest::Approx(un + h_expect).epsilon(1e-12));
    }
    SUBCASE("trivial steady state is preserved by the generic step") {
        const ModelParams params(FractionalOrder(1.7), 2e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(-1.0, 2.0, -1.0, 2.0, 48, 48);
        const auto ws = precompute(params, dom, 0.1);
        FieldPair s{Field(47, 47, 1.0), Field(47, 47, 0.0)};
        const FieldPair next = step(s, s, ws);
        const std::size_t c = 23;
        CHECK(std::abs(next.u(c, c) - 1.0) < 1e-6);
        CHECK(std::abs(next.v(c, c)) < 1e-12);
    }
    SUBCASE("alpha = 2 trajectory matches the classical-Laplacian oracle") {
        const double mu_u = 0.01, mu_v = 0.005, feed = 0.03, decay = 0.063, tau = 0.4;
        const ModelParams params(FractionalOrder(2.0), mu_u, mu_v, feed, decay);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 9, 9);   // 8x8 interior
        const auto ws = precompute(params, dom, tau);
        const test::ClassicalGsSolver oracle(mu_u, mu_v, feed, decay, dom, tau);

        FieldPair mine{gaussian_bump(dom, 0.5, 0.5, 0.15, -0.5, 1.0),
                       gaussian_bump(dom, 0.5, 0.5, 0.1, 0.25)};
        FieldPair theirs = mine;
        FieldPair mine_prev, theirs_prev;
        for (int n = 0; n < 20; ++n) {
            FieldPair mine_next = n == 0 ? step_first(mine, ws) : step(mine_prev, mine, ws);
            FieldPair theirs_next =
                n == 0 ? oracle.step_first(theirs) : oracle.step(theirs_prev, theirs);
            CHECK(max_field_diff(mine_next.u, theirs_next.u) < 1e-10);
            CHECK(max_field_diff(mine_next.v, theirs_next.v) < 1e-10);
            mine_prev = std::move(mine);
            mine = std::move(mine_next);
            theirs_prev = std::move(theirs);
            theirs = std::move(theirs_next);
        }
    }
    SUBCASE("splitting error decays at third order in tau") {
        const ModelParams params(FractionalOrder(1.5), 0.05, 0.025, 0.03, 0.063);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 17, 17);   // 16x16 interior
        FieldPair prev{gaussian_bump(dom, 0.45, 0.5, 0.2, -0.4, 1.0),
                       gaussian_bump(dom, 0.55, 0.5, 0.15, 0.3)};
        // a nearby later state so the extrapolant is nontrivial
        FieldPair curr = prev;
        for (std::size_t m = 0; m < curr.v.data.size(); ++m) {
            curr.v.data[m] *= 1.05;
            curr.u.data[m] = 1.0 - (1.0 - curr.u.data[m]) * 1.03;
        }
        std::vector<double> diffs;
        for (double tau : {0.025, 0.0125, 0.00625}) {
            auto ws = precompute(params, dom, tau);
            ws.picard_tol = 1e-14;
            ws.picard_cap = 60;
            const FieldPair adi = step(prev, curr, ws);
            const FieldPair dense = test::unfactored_step(prev, curr, ws, false);
            diffs.push_back(std::max(max_field_diff(adi.u, dense.u),
                                     max_field_diff(adi.v, dense.v)));
        }
        const double r1 = diffs[0] / diffs[1];
        const double r2 = diffs[1] / diffs[2];
        CHECK(r1 > 6.4);
        CHECK(r1 < 9.6);
        CHECK(r2 > 6.4);
        CHECK(r2 < 9.6);
    }
    SUBCASE("zero V stays exactly zero and U relaxes toward the feed state") {
        const ModelParams params(FractionalOrder(1.3), 2e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 24, 24);
        const auto ws = precompute(params, dom, 0.5);
        FieldPair prev{gaussian_bump(dom, 0.5, 0.5, 0.2, -0.6, 1.0), Field(23, 23, 0.0)};
        FieldPair curr = step_first(prev, ws);
        double dist0 = 0.0, dist1 = 0.0;
        for (double v : prev.u.data) dist0 = std::max(dist0, std::abs(1.0 - v));
        for (int n = 0; n < 300; ++n) {
            FieldPair next = step(prev, curr, ws);
            prev = std::move(curr);
            curr = std::move(next);
            for (double v : curr.v.data) CHECK(v == 0.0);
        }
        // interior far from the boundary has relaxed toward u = 1
        const std::size_t c = 11;
        dist1 = std::abs(1.0 - curr.u(c, c));
        CHECK(dist1 < 0.05 * std::max(dist0, 1e-30));
    }
    SUBCASE("identical inputs give bitwise identical steps") {
        const ModelParams params(FractionalOrder(1.6), 2e-5, 1e-5, 0.03, 0.055);
        const Domain2D dom(-1.0, 2.0, -1.0, 2.0, 32, 32);
        const auto ws1 = precompute(params, dom, 0.2);
        const auto ws2 = precompute(params, dom, 0.2);
        FieldPair s0{gaussian_bump(dom, 0.5, 0.5, 0.2, -0.5, 1.0),
                     gaussian_bump(dom, 0.5, 0.5, 0.2, 0.25)};
        FieldPair a_prev = s0, b_prev = s0;
        FieldPair a = step_first(s0, ws1), b = step_first(s0, ws2);
        for (int n = 0; n < 5; ++n) {
            FieldPair an = step(a_prev, a, ws1);
            FieldPair bn = step(b_prev, b, ws2);
            REQUIRE(an.u.data == bn.u.data);
            REQUIRE(an.v.data == bn.v.data);
            a_prev = std::move(a);
            a = std::move(an);
            b_prev = std::move(b);
            b = std::move(bn);
        }
    }
    SUBCASE("non-convergent coupling reports the iteration residual") {
        const ModelParams params(FractionalOrder(1.5), 0.0, 0.0, 0.2, 0.1);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 8, 8);
        const auto ws = precompute(params, dom, 200.0);
        FieldPair s{Field(7, 7, 1.0), Field(7, 7, 0.5)};
        CHECK_THROWS_AS(step(s, s, ws), IterationError);
    }
    SUBCASE("non-finite input is rejected") {
        const ModelParams params(FractionalOrder(1.5), 1e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 8, 8);
        const auto ws = precompute(params, dom, 0.1);
        FieldPair s{Field(7, 7, 1.0), Field(7, 7, 0.0)};
        s.u(3, 3) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(step(s, s, ws), Error);
    }
}

TEST_CASE("norm diagnostics") {
    const ModelParams params(FractionalOrder(1.7), 2e-5, 1e-5, 0.03, 0.063);

    SUBCASE("zero field has zero norm") {
        const Domain2D dom(0.0, 1.0, 0.0, 1.0, 16, 16);
        FieldPair s{Field(15, 15, 0.0), Field(15, 15, 0.0)};
        const NormBounds ctx(s, dom, 1.0);
        const auto rec = norm_diagnostics(s, params, dom, ctx, 0.5);
        CHECK(rec.norm_u_sq == 0.0);
        CHECK(rec.norm_w_sq == 0.0);
    }
    SUBCASE("uniform field approximates the domain area") {
        for (std::size_t n : {16u, 64u, 256u}) {
            const Domain2D dom(0.0, 1.0, 0.0, 1.0, n, n);
            FieldPair s{Field(n - 1, n - 1, 1.0), Field(n - 1, n - 1, 0.0)};
            const double expect = std::pow(static_cast<double>(n - 1) / n, 2);
            CHECK(norm_sq(s.u, dom) == doctest::Approx(expect).epsilon(1e-12));
        }
        const Domain2D fine(0.0, 1.0, 0.0, 1.0, 512, 512);
        FieldPair s{Field(511, 511, 1.0), Field(511, 511, 0.0)};
        CHECK(norm_sq(s.u, fine) == doctest::Approx(1.0).epsilon(5e-3));
    }
    SUBCASE("stability bound right-hand side matches the hand evaluation") {
        const ModelParams p(FractionalOrder(1.7), 1e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(-1.0, 2.0, -1.0, 2.0, 3000, 3000);
        FieldPair s{Field(2999, 2999, 1.0), Field(2999, 2999, 0.0)};
        const NormBounds ctx(s, dom, 100.0);
        const auto rec = norm_diagnostics(s, p, dom, ctx, 100.0);
        CHECK(rec.bound_u == doctest::Approx(36.0).epsilon(1e-3));
        // equal diffusivities: no cosine amplification term in the W bound
        const double kt = 0.063 * 100.0;
        const double expect_w =
            ctx.norm_w0_sq + kt * ctx.norm_u0_sq + (1.0 + kt) * 0.03 * 100.0 * 9.0;
        CHECK(rec.bound_w == doctest::Approx(expect_w).epsilon(1e-12));
    }
    SUBCASE("bounds hold along a short trajectory") {
        const ModelParams p(FractionalOrder(1.6), 2e-5, 1e-5, 0.03, 0.063);
        const Domain2D dom(-1.0, 2.0, -1.0, 2.0, 32, 32);
        const auto ws = precompute(p, dom, 0.5);
        FieldPair prev{Field(31, 31, 1.0), Field(31, 31, 0.0)};
        // disk-like seed
        prev.u(15, 15) = 0.5;
        prev.v(15, 15) = 0.25;
        const NormBounds ctx(prev, dom, 100.0);
        FieldPair curr = step_first(prev, ws);
        for (int n = 1; n <= 200; ++n) {
            const double t = 0.5 * (n);
            const auto rec = norm_diagnostics(curr, p, dom, ctx, t);
            REQUIRE(rec.norm_u_sq <= rec.bound_u + 1e-9);
            REQUIRE(rec.norm_w_sq <= rec.bound_w + 1e-9);
            FieldPair next = step(prev, curr, ws);
            prev = std::move(curr);
            curr = std::move(next);
        }
    }
}
