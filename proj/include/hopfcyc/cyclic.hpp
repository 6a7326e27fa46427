#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace hopfcyc {

// Generic containers for para-cyclic and para-cocyclic k-modules (operator
// matrices up to a degree cap), the exact relation checker, associated cyclic
// objects, the cyclic-dual functor, and mixed complexes.

/// Simplicial module with cyclic operators t_n, not necessarily of order n+1.
/// face[n][i]: C_n → C_{n−1} (n ≥ 1), degen[n][i]: C_n → C_{n+1} (n < cap),
/// cyc[n]: C_n → C_n.
template<exact_field K>
struct ParaCyclicModule {
    int cap = 0;
    std::vector<VectorSpace> spaces;
    std::vector<std::vector<LinearMap<K>>> face;
    std::vector<std::vector<LinearMap<K>>> degen;
    std::vector<LinearMap<K>> cyc;

    LinearMap<K> cyc_power(int n) const { // t_n^{n+1}
        return LinearMap<K>(spaces[static_cast<std::size_t>(n)], spaces[static_cast<std::size_t>(n)],
                            cyc[static_cast<std::size_t>(n)].mat().pow(n + 1));
    }
    bool honestly_cyclic() const {
        for (int n = 0; n <= cap; ++n)
            if (!cyc_power(n).mat().is_identity()) return false;
        return true;
    }
};

/// Cosimplicial mirror.  coface[n][i]: C^{n−1} → C^n (n ≥ 1, 0 ≤ i ≤ n),
/// codegen[n][i]: C^{n+1} → C^n (n < cap, 0 ≤ i ≤ n), cyc[n] = τ_n.
template<exact_field K>
struct ParaCocyclicModule {
    int cap = 0;
    std::vector<VectorSpace> spaces;
    std::vector<std::vector<LinearMap<K>>> coface;
    std::vector<std::vector<LinearMap<K>>> codegen;
    std::vector<LinearMap<K>> cyc;

    LinearMap<K> cyc_power(int n) const {
        return LinearMap<K>(spaces[static_cast<std::size_t>(n)], spaces[static_cast<std::size_t>(n)],
                            cyc[static_cast<std::size_t>(n)].mat().pow(n + 1));
    }
    bool honestly_cocyclic() const {
        for (int n = 0; n <= cap; ++n)
            if (!cyc_power(n).mat().is_identity()) return false;
        return true;
    }
};

struct RelationFailure {
    std::string identity;
    int n = 0;
    int i = -1;
    std::string witness;
};

struct RelationReport {
    std::vector<RelationFailure> failures;
    bool ok() const { return failures.empty(); }
};

namespace detail {

template<exact_field K>
void expect_equal(RelationReport& rep, const std::string& id, int n, int i,
                  const LinearMap<K>& lhs, const LinearMap<K>& rhs) {
    if (lhs.mat() == rhs.mat()) return;
    for (int c = 0; c < lhs.mat().cols(); ++c) {
        auto l = lhs.mat().column(c);
        auto r = rhs.mat().column(c);
        if (l != r) {
            std::vector<K> diff = l;
            for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= r[k];
            rep.failures.push_back(RelationFailure{
                id, n, i,
                lhs.domain().label(c) + " (difference " + format_vector(lhs.codomain(), diff) + ")"});
            return;
        }
    }
}

} // namespace detail

/// Every simplicial and para-cyclic identity instance up to the cap, checked
/// exactly; τ^{n+1}-naturality is included as its own family.
template<exact_field K>
RelationReport verify_para_relations(const ParaCyclicModule<K>& m) {
    RelationReport rep;
    using detail::expect_equal;
    const int N = m.cap;
    for (int n = 2; n <= N; ++n)
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                expect_equal(rep, "d_i d_j = d_{j-1} d_i", n, i,
                             m.face[n - 1][i] * m.face[n][j], m.face[n - 1][j - 1] * m.face[n][i]);
    for (int n = 0; n + 2 <= N; ++n)
        for (int i = 0; i <= n; ++i)
            for (int j = i; j <= n; ++j)
                expect_equal(rep, "s_i s_j = s_{j+1} s_i", n, i,
                             m.degen[n + 1][i] * m.degen[n][j], m.degen[n + 1][j + 1] * m.degen[n][i]);
    for (int n = 0; n + 1 <= N; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i) {
                LinearMap<K> lhs = m.face[n + 1][i] * m.degen[n][j];
                if (i == j || i == j + 1)
                    expect_equal(rep, "d_i s_j = id", n, i, lhs,
                                 LinearMap<K>::identity(m.spaces[static_cast<std::size_t>(n)]));
                else if (i < j)
                    expect_equal(rep, "d_i s_j = s_{j-1} d_i", n, i, lhs, m.degen[n - 1][j - 1] * m.face[n][i]);
                else
                    expect_equal(rep, "d_i s_j = s_j d_{i-1}", n, i, lhs, m.degen[n - 1][j] * m.face[n][i - 1]);
            }
    for (int n = 1; n <= N; ++n)
        for (int i = 0; i <= n; ++i) {
            LinearMap<K> lhs = m.face[n][i] * m.cyc[n];
            if (i == 0) expect_equal(rep, "d_0 t_n = d_n", n, i, lhs, m.face[n][n]);
            else expect_equal(rep, "d_i t_n = t d_{i-1}", n, i, lhs, m.cyc[n - 1] * m.face[n][i - 1]);
        }
    for (int n = 0; n + 1 <= N; ++n)
        for (int i = 0; i <= n; ++i) {
            LinearMap<K> lhs = m.degen[n][i] * m.cyc[n];
            if (i == 0)
                expect_equal(rep, "s_0 t_n = t^2 s_n", n, i, lhs,
                             m.cyc[n + 1] * m.cyc[n + 1] * m.degen[n][n]);
            else expect_equal(rep, "s_i t_n = t s_{i-1}", n, i, lhs, m.cyc[n + 1] * m.degen[n][i - 1]);
        }
    for (int n = 1; n <= N; ++n) {
        LinearMap<K> tw = m.cyc_power(n);
        LinearMap<K> tv = m.cyc_power(n - 1);
        for (int i = 0; i <= n; ++i)
            expect_equal(rep, "t^{n+1} commutes with d_i", n, i, m.face[n][i] * tw, tv * m.face[n][i]);
    }
    for (int n = 0; n + 1 <= N; ++n) {
        LinearMap<K> tw = m.cyc_power(n);
        LinearMap<K> tv = m.cyc_power(n + 1);
        for (int i = 0; i <= n; ++i)
            expect_equal(rep, "t^{n+1} commutes with s_i", n, i, m.degen[n][i] * tw, tv * m.degen[n][i]);
    }
    return rep;
}

template<exact_field K>
RelationReport verify_para_relations(const ParaCocyclicModule<K>& m) {
    RelationReport rep;
    using detail::expect_equal;
    const int N = m.cap;
    for (int n = 2; n <= N; ++n)
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                expect_equal(rep, "δ_j δ_i = δ_i δ_{j-1}", n, i,
                             m.coface[n][j] * m.coface[n - 1][i], m.coface[n][i] * m.coface[n - 1][j - 1]);
    for (int n = 0; n + 2 <= N; ++n)
        for (int i = 0; i <= n; ++i)
            for (int j = i; j <= n; ++j)
                expect_equal(rep, "σ_j σ_i = σ_i σ_{j+1}", n, i,
                             m.codegen[n][j] * m.codegen[n + 1][i], m.codegen[n][i] * m.codegen[n + 1][j + 1]);
    for (int n = 0; n + 1 <= N; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i) {
                LinearMap<K> lhs = m.codegen[n][j] * m.coface[n + 1][i];
                if (i == j || i == j + 1)
                    expect_equal(rep, "σ_j δ_i = id", n, i, lhs,
                                 LinearMap<K>::identity(m.spaces[static_cast<std::size_t>(n)]));
                else if (i < j)
                    expect_equal(rep, "σ_j δ_i = δ_i σ_{j-1}", n, i, lhs, m.coface[n][i] * m.codegen[n - 1][j - 1]);
                else
                    expect_equal(rep, "σ_j δ_i = δ_{i-1} σ_j", n, i, lhs, m.coface[n][i - 1] * m.codegen[n - 1][j]);
            }
    for (int n = 1; n <= N; ++n)
        for (int i = 0; i <= n; ++i) {
            LinearMap<K> lhs = m.cyc[n] * m.coface[n][i];
            if (i == 0) expect_equal(rep, "τ_n δ_0 = δ_n", n, i, lhs, m.coface[n][n]);
            else expect_equal(rep, "τ_n δ_i = δ_{i-1} τ", n, i, lhs, m.coface[n][i - 1] * m.cyc[n - 1]);
        }
    for (int n = 0; n + 1 <= N; ++n)
        for (int i = 0; i <= n; ++i) {
            LinearMap<K> lhs = m.cyc[n] * m.codegen[n][i];
            if (i == 0)
                expect_equal(rep, "τ_n σ_0 = σ_n τ^2", n, i, lhs,
                             m.codegen[n][n] * m.cyc[n + 1] * m.cyc[n + 1]);
            else expect_equal(rep, "τ_n σ_i = σ_{i-1} τ", n, i, lhs, m.codegen[n][i - 1] * m.cyc[n + 1]);
        }
    for (int n = 1; n <= N; ++n) {
        LinearMap<K> tw = m.cyc_power(n);
        LinearMap<K> tv = m.cyc_power(n - 1);
        for (int i = 0; i <= n; ++i)
            expect_equal(rep, "τ^{n+1} commutes with δ_i", n, i, tw * m.coface[n][i], m.coface[n][i] * tv);
    }
    for (int n = 0; n + 1 <= N; ++n) {
        LinearMap<K> tw = m.cyc_power(n);
        LinearMap<K> tv = m.cyc_power(n + 1);
        for (int i = 0; i <= n; ++i)
            expect_equal(rep, "τ^{n+1} commutes with σ_i", n, i, tw * m.codegen[n][i], m.codegen[n][i] * tv);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Cyclic dual: d_i := σ_{n−(i+1)}, d_n := σ_{n−1} ∘ τ_n, s_i := δ_{n−(i+1)},
// t_n := τ_n.  The top coface δ_n is never read.

template<exact_field K>
ParaCyclicModule<K> cyclic_dual(const ParaCocyclicModule<K>& c) {
    ParaCyclicModule<K> m;
    m.cap = c.cap;
    m.spaces = c.spaces;
    m.face.resize(static_cast<std::size_t>(c.cap) + 1);
    m.degen.resize(static_cast<std::size_t>(c.cap) + 1);
    m.cyc = c.cyc;
    for (int n = 1; n <= c.cap; ++n) {
        auto& fn = m.face[static_cast<std::size_t>(n)];
        for (int i = 0; i < n; ++i) fn.push_back(c.codegen[n - 1][n - (i + 1)]);
        fn.push_back(c.codegen[n - 1][n - 1] * c.cyc[n]);
    }
    for (int n = 1; n <= c.cap; ++n) {
        auto& sn = m.degen[static_cast<std::size_t>(n - 1)];
        for (int i = 0; i < n; ++i) sn.push_back(c.coface[n][n - (i + 1)]);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Associated (co)cyclic objects.

/// Solve incl · X = f for X (incl of full column rank); nullopt if f does not
/// factor through the inclusion.
template<exact_field K>
std::optional<Matrix<K>> solve_factor(const Matrix<K>& incl, const Matrix<K>& f) {
    Matrix<K> aug(incl.rows(), incl.cols() + f.cols());
    for (int i = 0; i < incl.rows(); ++i) {
        for (int j = 0; j < incl.cols(); ++j) aug(i, j) = incl(i, j);
        for (int j = 0; j < f.cols(); ++j) aug(i, incl.cols() + j) = f(i, j);
    }
    RrefResult<K> rr = rref(std::move(aug));
    Matrix<K> x(incl.cols(), f.cols());
    for (int r = 0; r < rr.rank(); ++r) {
        int p = rr.pivot_cols[static_cast<std::size_t>(r)];
        if (p >= incl.cols()) return std::nullopt; // inconsistent column
        for (int j = 0; j < f.cols(); ++j) x(p, j) = rr.r(r, incl.cols() + j);
    }
    if (incl * x != f) return std::nullopt;
    return x;
}

template<exact_field K>
struct AssociatedCyclic {
    ParaCyclicModule<K> module;              // honestly cyclic
    std::vector<QuotientSpace<K>> quotients; // C_n → coker(id − t^{n+1})
};

/// Cokernels of id − t_n^{n+1}; all operators descend (checked) and the
/// result satisfies t^{n+1} = id.
template<exact_field K>
AssociatedCyclic<K> associated_cyclic(const ParaCyclicModule<K>& m) {
    AssociatedCyclic<K> out;
    out.module.cap = m.cap;
    for (int n = 0; n <= m.cap; ++n) {
        Matrix<K> diff = Matrix<K>::identity(m.spaces[static_cast<std::size_t>(n)].dim()) - m.cyc_power(n).mat();
        std::vector<SparseVec<K>> rels;
        for (int c = 0; c < diff.cols(); ++c) {
            SparseVec<K> col = diff.column_sparse(c);
            if (!col.empty()) rels.push_back(std::move(col));
        }
        out.quotients.push_back(quotient_by_sparse(m.spaces[static_cast<std::size_t>(n)], std::move(rels)));
        out.module.spaces.push_back(out.quotients.back().space);
    }
    auto descend = [&](const LinearMap<K>& f, int src, int dst, const std::string& name) {
        const QuotientSpace<K>& qs = out.quotients[static_cast<std::size_t>(src)];
        const QuotientSpace<K>& qd = out.quotients[static_cast<std::size_t>(dst)];
        for (const auto& rel : qs.relations) {
            std::vector<K> img = qd.projection.mat().apply(f.mat().apply_sparse(rel));
            if (!std::all_of(img.begin(), img.end(), [](const K& x) { return x.is_zero(); }))
                throw DescentFailure(name, format_vector(f.domain(), sv_to_dense(rel, f.domain().dim())));
        }
        return LinearMap<K>(qs.space, qd.space, qd.projection.mat() * f.mat() * qs.section.mat());
    };
    out.module.face.resize(static_cast<std::size_t>(m.cap) + 1);
    out.module.degen.resize(static_cast<std::size_t>(m.cap) + 1);
    for (int n = 1; n <= m.cap; ++n)
        for (int i = 0; i <= n; ++i)
            out.module.face[static_cast<std::size_t>(n)].push_back(
                descend(m.face[n][i], n, n - 1, "d_" + std::to_string(i)));
    for (int n = 0; n + 1 <= m.cap; ++n)
        for (int i = 0; i <= n; ++i)
            out.module.degen[static_cast<std::size_t>(n)].push_back(
                descend(m.degen[n][i], n, n + 1, "s_" + std::to_string(i)));
    for (int n = 0; n <= m.cap; ++n)
        out.module.cyc.push_back(descend(m.cyc[n], n, n, "t_" + std::to_string(n)));
    return out;
}

template<exact_field K>
struct AssociatedCocyclic {
    ParaCocyclicModule<K> module;           // honestly cocyclic
    std::vector<LinearMap<K>> inclusions;   // ker(id − τ^{n+1}) → C^n
};

/// Kernels of id − τ_n^{n+1}; operators restrict (checked).
template<exact_field K>
AssociatedCocyclic<K> associated_cocyclic(const ParaCocyclicModule<K>& m) {
    AssociatedCocyclic<K> out;
    out.module.cap = m.cap;
    for (int n = 0; n <= m.cap; ++n) {
        Matrix<K> diff = Matrix<K>::identity(m.spaces[static_cast<std::size_t>(n)].dim()) - m.cyc_power(n).mat();
        auto ker = kernel_basis(diff);
        Matrix<K> inc(m.spaces[static_cast<std::size_t>(n)].dim(), static_cast<int>(ker.size()));
        for (std::size_t c = 0; c < ker.size(); ++c) inc.set_column(static_cast<int>(c), ker[c]);
        VectorSpace sub = VectorSpace::indexed(static_cast<int>(ker.size()), "k" + std::to_string(n) + "_");
        out.module.spaces.push_back(sub);
        out.inclusions.emplace_back(sub, m.spaces[static_cast<std::size_t>(n)], std::move(inc));
    }
    auto restrict_to = [&](const LinearMap<K>& f, int src, int dst, const std::string& name) {
        Matrix<K> fi = f.mat() * out.inclusions[static_cast<std::size_t>(src)].mat();
        auto x = solve_factor(out.inclusions[static_cast<std::size_t>(dst)].mat(), fi);
        if (!x) throw DescentFailure(name, "image leaves ker(id − τ^{n+1})");
        return LinearMap<K>(out.module.spaces[static_cast<std::size_t>(src)],
                            out.module.spaces[static_cast<std::size_t>(dst)], std::move(*x));
    };
    out.module.coface.resize(static_cast<std::size_t>(m.cap) + 1);
    out.module.codegen.resize(static_cast<std::size_t>(m.cap) + 1);
    for (int n = 1; n <= m.cap; ++n)
        for (int i = 0; i <= n; ++i)
            out.module.coface[static_cast<std::size_t>(n)].push_back(
                restrict_to(m.coface[n][i], n - 1, n, "δ_" + std::to_string(i)));
    for (int n = 0; n + 1 <= m.cap; ++n)
        for (int i = 0; i <= n; ++i)
            out.module.codegen[static_cast<std::size_t>(n)].push_back(
                restrict_to(m.codegen[n][i], n + 1, n, "σ_" + std::to_string(i)));
    for (int n = 0; n <= m.cap; ++n)
        out.module.cyc.push_back(restrict_to(m.cyc[n], n, n, "τ_" + std::to_string(n)));
    return out;
}

// ---------------------------------------------------------------------------
// Mixed complexes.  b is the alternating face sum on the normalized complex;
// B mirrors N σ_{−1} (1 − λ) with λ = (−1)^n t_n, here in homological form
// B = (1 − λ) ∘ s_{−1} ∘ N with extra degeneracy s_{−1} = t_{n+1} ∘ s_n.

template<exact_field K>
struct MixedComplex {
    int cap = 0;
    std::vector<QuotientSpace<K>> normal; // C_n modulo degeneracy images
    std::vector<LinearMap<K>> b;          // b[n]: N_n → N_{n−1}, n ≥ 1
    std::vector<LinearMap<K>> B;          // B[n]: N_n → N_{n+1}, n < cap
    VectorSpace space(int n) const { return normal[static_cast<std::size_t>(n)].space; }
};

template<exact_field K>
LinearMap<K> alternating_face_sum(const ParaCyclicModule<K>& m, int n) {
    LinearMap<K> b = m.face[n][0];
    for (int i = 1; i <= n; ++i)
        b = (i % 2 == 0) ? b + m.face[n][i] : b - m.face[n][i];
    return b;
}

template<exact_field K>
MixedComplex<K> to_mixed(const ParaCyclicModule<K>& m, bool signed_lambda = true) {
    for (int n = 0; n <= m.cap; ++n)
        if (!m.cyc_power(n).mat().is_identity())
            throw NotCyclic("t_" + std::to_string(n) + "^" + std::to_string(n + 1) +
                            " ≠ id; apply associated_cyclic first");
    MixedComplex<K> mx;
    mx.cap = m.cap;
    for (int n = 0; n <= m.cap; ++n) {
        std::vector<SparseVec<K>> rels;
        if (n >= 1)
            for (int i = 0; i <= n - 1; ++i) {
                const Matrix<K>& s = m.degen[n - 1][i].mat();
                for (int c = 0; c < s.cols(); ++c) {
                    SparseVec<K> col = s.column_sparse(c);
                    if (!col.empty()) rels.push_back(std::move(col));
                }
            }
        mx.normal.push_back(quotient_by_sparse(m.spaces[static_cast<std::size_t>(n)], std::move(rels)));
    }
    auto conj = [&](const LinearMap<K>& f, int src, int dst, const std::string& name) {
        const QuotientSpace<K>& qs = mx.normal[static_cast<std::size_t>(src)];
        const QuotientSpace<K>& qd = mx.normal[static_cast<std::size_t>(dst)];
        for (const auto& rel : qs.relations) {
            std::vector<K> img = qd.projection.mat().apply(f.mat().apply_sparse(rel));
            if (!std::all_of(img.begin(), img.end(), [](const K& x) { return x.is_zero(); }))
                throw DescentFailure(name, "degenerate chain maps outside the degenerate span");
        }
        return LinearMap<K>(qs.space, qd.space, qd.projection.mat() * f.mat() * qs.section.mat());
    };
    for (int n = 1; n <= m.cap; ++n)
        mx.b.push_back(conj(alternating_face_sum(m, n), n, n - 1, "b"));
    auto lambda = [&](int n) {
        K sign = (signed_lambda && n % 2 == 1) ? K(-1) : K(1);
        return m.cyc[n].scaled(sign);
    };
    for (int n = 0; n + 1 <= m.cap; ++n) {
        LinearMap<K> norm = LinearMap<K>::identity(m.spaces[static_cast<std::size_t>(n)]);
        LinearMap<K> lam = lambda(n);
        LinearMap<K> pw = lam;
        for (int i = 1; i <= n; ++i) {
            norm = norm + pw;
            pw = pw * lam;
        }
        LinearMap<K> extra = m.cyc[n + 1] * m.degen[n][n];
        LinearMap<K> one_minus = LinearMap<K>::identity(m.spaces[static_cast<std::size_t>(n + 1)]) - lambda(n + 1);
        mx.B.push_back(conj(one_minus * extra * norm, n, n + 1, "B"));
    }
    return mx;
}

/// b² = 0, B² = 0, bB + Bb = 0, all exact.
template<exact_field K>
RelationReport verify_mixed(const MixedComplex<K>& mx) {
    RelationReport rep;
    using detail::expect_equal;
    for (int n = 2; n <= mx.cap; ++n)
        expect_equal(rep, "b b = 0", n, -1, mx.b[static_cast<std::size_t>(n - 2)] * mx.b[static_cast<std::size_t>(n - 1)],
                     LinearMap<K>::zero(mx.space(n), mx.space(n - 2)));
    for (int n = 0; n + 2 <= mx.cap; ++n)
        expect_equal(rep, "B B = 0", n, -1, mx.B[static_cast<std::size_t>(n + 1)] * mx.B[static_cast<std::size_t>(n)],
                     LinearMap<K>::zero(mx.space(n), mx.space(n + 2)));
    for (int n = 0; n + 1 <= mx.cap; ++n) {
        LinearMap<K> acc = mx.b[static_cast<std::size_t>(n)] * mx.B[static_cast<std::size_t>(n)];
        if (n >= 1) acc = acc + mx.B[static_cast<std::size_t>(n - 1)] * mx.b[static_cast<std::size_t>(n - 1)];
        expect_equal(rep, "bB + Bb = 0", n, -1, acc, LinearMap<K>::zero(mx.space(n), mx.space(n)));
    }
    return rep;
}

/// Cohomological mixed complex: b raises degree, B = N σ_{−1} (1 − λ) lowers
/// it; built on the conormalized subspaces ∩ ker σ_i.
template<exact_field K>
struct CoMixedComplex {
    int cap = 0;
    std::vector<VectorSpace> spaces;
    std::vector<LinearMap<K>> inclusions; // conormalized → C^n
    std::vector<LinearMap<K>> b;          // b[n]: N^n → N^{n+1}, n < cap
    std::vector<LinearMap<K>> B;          // B[n]: N^n → N^{n−1}, n ≥ 1
    VectorSpace space(int n) const { return spaces[static_cast<std::size_t>(n)]; }
};

template<exact_field K>
LinearMap<K> alternating_coface_sum(const ParaCocyclicModule<K>& m, int n) {
    LinearMap<K> b = m.coface[n][0];
    for (int i = 1; i <= n; ++i)
        b = (i % 2 == 0) ? b + m.coface[n][i] : b - m.coface[n][i];
    return b;
}

template<exact_field K>
CoMixedComplex<K> to_mixed_cocyclic(const ParaCocyclicModule<K>& m, bool signed_lambda = true) {
    for (int n = 0; n <= m.cap; ++n)
        if (!m.cyc_power(n).mat().is_identity())
            throw NotCyclic("τ_" + std::to_string(n) + "^" + std::to_string(n + 1) +
                            " ≠ id; apply associated_cocyclic first");
    CoMixedComplex<K> mx;
    mx.cap = m.cap;
    for (int n = 0; n <= m.cap; ++n) {
        const int dim = m.spaces[static_cast<std::size_t>(n)].dim();
        int rows = 0;
        for (int i = 0; i < n; ++i) rows += m.spaces[static_cast<std::size_t>(n - 1)].dim();
        Matrix<K> stacked(rows == 0 ? 0 : rows, dim);
        int off = 0;
        for (int i = 0; i < n; ++i) {
            const Matrix<K>& s = m.codegen[n - 1][i].mat();
            for (int r = 0; r < s.rows(); ++r)
                for (int c = 0; c < dim; ++c) stacked(off + r, c) = s(r, c);
            off += s.rows();
        }
        auto ker = kernel_basis(stacked);
        Matrix<K> inc(dim, static_cast<int>(ker.size()));
        for (std::size_t c = 0; c < ker.size(); ++c) inc.set_column(static_cast<int>(c), ker[c]);
        VectorSpace sub = VectorSpace::indexed(static_cast<int>(ker.size()), "n" + std::to_string(n) + "_");
        mx.spaces.push_back(sub);
        mx.inclusions.emplace_back(sub, m.spaces[static_cast<std::size_t>(n)], std::move(inc));
    }
    auto restrict_to = [&](const LinearMap<K>& f, int src, int dst, const std::string& name) {
        Matrix<K> fi = f.mat() * mx.inclusions[static_cast<std::size_t>(src)].mat();
        auto x = solve_factor(mx.inclusions[static_cast<std::size_t>(dst)].mat(), fi);
        if (!x) throw DescentFailure(name, "image leaves the conormalized subspace");
        return LinearMap<K>(mx.spaces[static_cast<std::size_t>(src)], mx.spaces[static_cast<std::size_t>(dst)],
                            std::move(*x));
    };
    for (int n = 0; n + 1 <= m.cap; ++n)
        mx.b.push_back(restrict_to(alternating_coface_sum(m, n + 1), n, n + 1, "b"));
    auto lambda = [&](int n) {
        K sign = (signed_lambda && n % 2 == 1) ? K(-1) : K(1);
        return m.cyc[n].scaled(sign);
    };
    mx.B.emplace_back(); // unused slot; B starts in degree 1
    for (int n = 1; n <= m.cap; ++n) {
        LinearMap<K> sigma_minus1 = m.codegen[n - 1][n - 1] * m.cyc[n];
        LinearMap<K> one_minus =
            LinearMap<K>::identity(m.spaces[static_cast<std::size_t>(n)]) - lambda(n);
        LinearMap<K> lam = lambda(n - 1);
        LinearMap<K> norm = LinearMap<K>::identity(m.spaces[static_cast<std::size_t>(n - 1)]);
        LinearMap<K> pw = lam;
        for (int i = 1; i <= n - 1; ++i) {
            norm = norm + pw;
            pw = pw * lam;
        }
        mx.B.push_back(restrict_to(norm * sigma_minus1 * one_minus, n, n - 1, "B"));
    }
    return mx;
}

template<exact_field K>
RelationReport verify_mixed(const CoMixedComplex<K>& mx) {
    RelationReport rep;
    using detail::expect_equal;
    for (int n = 0; n + 2 <= mx.cap; ++n)
        expect_equal(rep, "b b = 0", n, -1, mx.b[static_cast<std::size_t>(n + 1)] * mx.b[static_cast<std::size_t>(n)],
                     LinearMap<K>::zero(mx.space(n), mx.space(n + 2)));
    for (int n = 2; n <= mx.cap; ++n)
        expect_equal(rep, "B B = 0", n, -1, mx.B[static_cast<std::size_t>(n - 1)] * mx.B[static_cast<std::size_t>(n)],
                     LinearMap<K>::zero(mx.space(n), mx.space(n - 2)));
    if (mx.cap >= 1)
        expect_equal(rep, "bB + Bb = 0", 0, -1, mx.B[1] * mx.b[0],
                     LinearMap<K>::zero(mx.space(0), mx.space(0)));
    for (int n = 1; n + 1 <= mx.cap; ++n) {
        LinearMap<K> acc = mx.b[static_cast<std::size_t>(n - 1)] * mx.B[static_cast<std::size_t>(n)] +
                           mx.B[static_cast<std::size_t>(n + 1)] * mx.b[static_cast<std::size_t>(n)];
        expect_equal(rep, "bB + Bb = 0", n, -1, acc, LinearMap<K>::zero(mx.space(n), mx.space(n)));
    }
    return rep;
}

} // namespace hopfcyc
