// Acceptance run: one line per criterion, exit status 0 iff all pass.
// Every comparison is exact.

#include "fixtures.hpp"

#include "kpf/laurent.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace kpf;
using namespace kpf::fixtures;

namespace {

const RingTag F = RingTag::fourier();

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string &what)
    {
        if (!ok && pass)
            note << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

// The desk-scale solve shared by criteria 1, 3, 4, 5, 6 and 10.
struct DeskSolve {
    LaxOp l0 = lax(three_mode());
    SolveResult r = kp_solve(l0, 3, 4, -6);
};

const DeskSolve &desk()
{
    static const DeskSolve d;
    return d;
}

void series_zero(Outcome &o, const TPsiSeries &res, int depth, const std::string &what)
{
    o.require(res.is_zero(), what + " vanishes");
    o.require(res.depth() <= depth, what + " reliable to depth " + std::to_string(depth));
}

void c1_lax(Outcome &o)
{
    const SolveResult &r = desk().r;
    for (int k = 1; k <= 3; ++k)
        series_zero(o, lax_residual(r.l, k), r.depth, "lax residual k=" + std::to_string(k));
    o.note << "u0 modes {-1, 1, 2}, kMax 3, vMax 4, depth -6";
}

void c2_factorization(Outcome &o)
{
    testgen::Gen g(2024);
    for (int i = 0; i < 20; ++i) {
        TPsiSeries u = random_member(g, 3, 3);
        FactorPair f = factorize(u, -5);
        o.require(factorization_residual(f.s, u).is_zero(), "(SU)_- = 0");
        o.require(f.s.depth() <= -5, "S reliable to -5");
        o.require(recompose(f) == u, "recompose(factorize(U)) = U");

        FactorPair h = random_factors(g, 3, 3);
        FactorPair back = factorize(recompose(h, -14), -5);
        o.require(back.s == h.s && back.y == h.y, "factorize(recompose(F)) = F");
    }
    o.note << "20 random members and 20 random exact factor pairs, vMax 3, depth -5";
}

void c3_conjugation(Outcome &o)
{
    const SolveResult &r = desk().r;
    const PsiOp &l0 = desk().l0.op();
    TPsiSeries l0s = TPsiSeries::constant(l0, r.v_max);
    const int floor = r.l_depth - r.v_max;
    TPsiSeries via_y = t_mul(r.f.y, t_mul(l0s, t_inverse(r.f.y), floor), floor);
    TPsiSeries via_s = t_mul(t_mul(r.f.s, l0s), t_inverse(r.f.s));
    o.require(via_y == via_s, "Y L0 Y^{-1} = S L0 S^{-1}");
    o.require(std::max(via_y.depth(), via_s.depth()) <= r.depth, "compared down to the requested depth");
    for (const auto &[m, p] : r.l.terms()) {
        PsiOp tail = m.is_one() ? p - PsiOp::d(F, 1, kExactDepth) : p;
        o.require(tail.is_zero() || tail.order() <= -1, "L - d has orders <= -1 in slot " + m.str());
    }
    o.note << "compared down to depth " << std::max(via_y.depth(), via_s.depth());
}

void c4_zero_curvature(Outcome &o)
{
    const SolveResult &r = desk().r;
    for (int i = 1; i <= 3; ++i)
        for (int j = i + 1; j <= 3; ++j)
            series_zero(o, zs_residual(r.l, i, j), r.depth,
                        "zs residual (" + std::to_string(i) + "," + std::to_string(j) + ")");
    o.note << "pairs (1,2), (1,3), (2,3)";
}

void c5_log_derivative(Outcome &o)
{
    const SolveResult &r = desk().r;
    for (int k = 1; k <= 3; ++k) {
        auto [y, s] = log_deriv_residual(r.f, r.l, k);
        series_zero(o, y, r.depth, "Y log-derivative k=" + std::to_string(k));
        series_zero(o, s, r.depth, "S log-derivative k=" + std::to_string(k));
    }
    o.note << "dY Y^{-1} = (L^k)_+ and dS S^{-1} = -(L^k)_- for k <= 3";
}

void conservation_on(Outcome &o, const TPsiSeries &l, const std::string &ring)
{
    for (int k = 1; k <= 3; ++k)
        for (const auto &[m, h] : hamiltonian(l, k))
            if (!m.is_one())
                o.require(h.is_zero(), ring + " H_" + std::to_string(k) + " at " + m.str());
}

void c6_conservation(Outcome &o)
{
    conservation_on(o, desk().r.l, "Fourier");

    RingTag z = RingTag::fourier_z(2);
    RingElem u = ZSeries<FourierElem>(
        2, {std::get<FourierElem>(three_mode().storage()), FourierElem({{1, 1}, {-2, 2}}), FourierElem()});
    LaxOp l0 = lax(u, z);
    SolveResult r = kp_solve(l0, 3, 4, -6);
    conservation_on(o, r.l, "z-series");
    Scalar h2 = hamiltonian(l0.op(), 2);
    o.require(!h2.coeff(1).is_zero(), "H_2 has a z-dependent value");
    o.note << "Fourier and z_max = 2 rings; z-series H_2 = " << h2.str();
}

void c7_algebra(Outcome &o)
{
    testgen::Gen g(7);
    int deepest = kExactDepth;
    for (int i = 0; i < 100; ++i) {
        PsiOp p = g.op(F, -4, 3, -10), q = g.op(F, -4, 3, -10), r = g.op(F, -4, 3, -10);
        PsiOp left = compose(compose(p, q), r), right = compose(p, compose(q, r));
        o.require(left == right, "associativity");
        deepest = std::max({deepest, left.depth(), right.depth()});
    }
    o.require(deepest <= -1, "associativity compared at negative orders");

    const int floor = -14;
    for (int i = 0; i < 100; ++i) {
        PsiOp p = g.op(F, -4, 3, kExactDepth), q = g.op(F, -4, 3, kExactDepth), s = g.op(F, -4, 3, kExactDepth);
        if (p.is_zero() || q.is_zero())
            continue;
        o.require(compose(p, q, floor).order() == p.order() + q.order(), "order additivity");
        PsiOp b = bracket(p, q, floor);
        o.require(b.is_zero() || b.order() <= p.order() + q.order() - 1, "bracket drops the order");
        o.require(trace(b).is_zero(), "Trace([P, Q]) = 0");
        o.require(pairing(b, s) == pairing(bracket(s, p, floor), q), "<[P,Q],S> = <[S,P],Q>");
    }
    o.note << "100 triples each, orders in [-4, 3]; associativity reliable down to depth " << deepest;
}

void c8_functional_derivative(Outcome &o)
{
    testgen::Gen g(8);
    const int floor = -14;
    for (int k = 2; k <= 3; ++k) {
        std::vector<Rational> a(k);
        a[k - 1] = 1;
        for (int i = 0; i < 20; ++i) {
            PsiOp p = g.op(F, -4, 3, kExactDepth), q = g.op(F, -4, 3, kExactDepth);
            Scalar lhs = directional_derivative(a, p, q, floor);
            PsiOp grad = power(p, k - 1, floor) * Rational(k);
            o.require(lhs == pairing(grad, q), "d/de Trace((P+eQ)^" + std::to_string(k) + ")");
            o.require(functional_derivative(a, p, floor) == grad, "functional derivative = k P^{k-1}");
        }
    }
    o.note << "k = 2, 3 with 20 random (P, Q) each";
}

void c9_euler(Outcome &o)
{
    const std::vector<int> ns{10, 100, 1000};
    DivergenceReport rep = divergence_witness(ns, 5);
    for (const auto &row : rep.rows) {
        o.require(row.lowest_degree == -row.n, "lowest degree -n");
        for (const auto &c : row.coeffs)
            o.require(c.sandwich_ok, "sandwich at m=" + std::to_string(c.m) + ", n=" + std::to_string(row.n));
        o.require(row.coeffs.size() == 6, "m = 0..5 reported");
    }
    o.require(rep.verdict == kDivergenceVerdict, "verdict");
    o.note << "n in {10, 100, 1000}, m <= 5; verdict: " << rep.verdict;
}

void c10_kp1(Outcome &o)
{
    testgen::Gen g(10);
    for (int i = 0; i < 3; ++i) {
        Elimination e = kp1_elimination(random_lax_series(g, 6, 3, -7));
        o.require(e.from_zs == e.kp1, "zs(2,3) elimination reproduces the KP-I constants");
        o.require(!e.kp1.is_zero(), "elimination oracle is non-trivial");
    }
    const SolveResult &r = desk().r;
    RingTSeries res = kp1_residual(r.l, r.k_max);
    o.require(res.empty(), "kp1 residual vanishes");
    o.note << "through valuation " << r.v_max - 3 << "; convention: " << kp1_convention;
}

void c11_picard(Outcome &o)
{
    LaxOp l0 = lax(three_mode());
    SolveResult r = kp_solve(l0, 3, 3, -5);
    TPsiSeries p = picard(l0.op(), 3, 3, -16);
    o.require(p.depth() <= -5 && r.l.depth() <= -5, "both reliable to depth -5");
    o.require(p == r.l, "Picard integration = kp_solve");
    o.note << "vMax 3, kMax 3, compared down to depth " << std::max(p.depth(), r.l.depth());
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> criteria{
        {"KP well-posedness: Lax residuals vanish", c1_lax},
        {"factorization uniqueness and roundtrip", c2_factorization},
        {"conjugation identity and Lax shape", c3_conjugation},
        {"zero-curvature residuals vanish", c4_zero_curvature},
        {"log-derivative identities", c5_log_derivative},
        {"conservation laws", c6_conservation},
        {"algebra law suite", c7_algebra},
        {"functional-derivative contract", c8_functional_derivative},
        {"Euler divergence demo", c9_euler},
        {"KP-I scalar residual", c10_kp1},
        {"Picard oracle equivalence", c11_picard},
    };

    int failed = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const Error &e) {
            o.require(false, std::string(to_string(e.code())) + ": " + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += o.pass ? 0 : 1;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
                  << " (" << o.note.str() << ") [" << std::fixed << std::setprecision(2) << secs << " s]"
                  << std::endl;
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass in " << std::fixed
              << std::setprecision(2) << total << " s" << std::endl;
    return failed == 0 ? 0 : 1;
}
