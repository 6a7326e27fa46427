#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "cyclic.hpp"

namespace hopfcyc {

// The three graded objects of the theory as operator matrices:
//   B^•(U,M) = U^{⊗_A •+1} ⊗_{A^e} M        (needs only a bialgebroid)
//   C^•(U,M) = U^{⊗_A •} ⊗_A M              (para-cocyclic)
//   C_•(U,M) = M ⊗_{A^op} (▶U◁)^{⊗_{A^op} •} (para-cyclic)
// together with the maps linking them, homology engines, and independent
// oracles.

enum class WdPolicy { Throw, Collect, Skip };

struct WdFailure {
    std::string op;
    std::string witness;
};

template<exact_field K>
struct ChainSpace {
    TensorShape shape;
    QuotientSpace<K> q;
    int dim() const { return q.dim(); }
};

/// Expand per-slot sparse values into the flat tensor index space.
template<exact_field K>
void accumulate_product(const TensorShape& sh, const std::vector<SparseVec<K>>& slots,
                        const K& coeff, SparseVec<K>& out) {
    for (const auto& s : slots)
        if (s.empty()) return;
    std::vector<std::size_t> pos(slots.size(), 0);
    std::vector<int> tuple(slots.size());
    while (true) {
        K c = coeff;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            tuple[i] = slots[i][pos[i]].first;
            c = c * slots[i][pos[i]].second;
        }
        out.emplace_back(sh.flatten(tuple), c);
        std::size_t k = slots.size();
        while (k > 0) {
            if (++pos[k - 1] < slots[k - 1].size()) break;
            pos[k - 1] = 0;
            --k;
        }
        if (k == 0) return;
    }
}

/// Realize an operator given by an ambient formula on basis tuples.  The
/// matrix is assembled through the deterministic section; every relation
/// generator of the source is pushed through the formula and must project to
/// zero in the target (the machine form of well-definedness over the Sweedler
/// presentation).
template<exact_field K>
LinearMap<K> realize_op(const ChainSpace<K>& src, const ChainSpace<K>& dst, const std::string& name,
                        const std::function<SparseVec<K>(const std::vector<int>&)>& fn,
                        WdPolicy policy = WdPolicy::Throw, std::vector<WdFailure>* sink = nullptr) {
    const int amb = src.shape.size();
    std::vector<std::optional<SparseVec<K>>> cache(static_cast<std::size_t>(amb));
    auto eval = [&](int idx) -> const SparseVec<K>& {
        auto& slot = cache[static_cast<std::size_t>(idx)];
        if (!slot) slot = fn(src.shape.unflatten(idx));
        return *slot;
    };
    Matrix<K> m(dst.q.dim(), src.q.dim());
    for (int c = 0; c < src.q.dim(); ++c)
        m.set_column(c, dst.q.project_sparse(eval(src.q.kept[static_cast<std::size_t>(c)])));
    if (policy != WdPolicy::Skip) {
        for (const auto& rel : src.q.relations) {
            SparseVec<K> img;
            for (const auto& [idx, coeff] : rel)
                for (const auto& [j, x] : eval(idx)) img.emplace_back(j, coeff * x);
            sv_canonicalize(img);
            std::vector<K> qv = dst.q.project_sparse(img);
            if (!std::all_of(qv.begin(), qv.end(), [](const K& x) { return x.is_zero(); })) {
                std::string wit = format_vector(src.q.ambient, sv_to_dense(rel, amb));
                if (policy == WdPolicy::Throw) throw WellDefinednessFailure(name, wit);
                if (sink) sink->push_back(WdFailure{name, wit});
            }
        }
    }
    return LinearMap<K>(src.q.space, dst.q.space, std::move(m));
}

template<exact_field K>
struct CocyclicModel {
    std::string provenance;
    int cap = 0;
    std::vector<ChainSpace<K>> chain;
    ParaCocyclicModule<K> ops;
};

template<exact_field K>
struct CyclicModel {
    std::string provenance;
    int cap = 0;
    std::vector<ChainSpace<K>> chain;
    ParaCyclicModule<K> ops;
};

// ---------------------------------------------------------------------------
// Chain spaces.

/// C^n = U ⊗_A ⋯ ⊗_A U ⊗_A M with the (◁ | ▷) cut between U factors and the
/// (◁ | left A-action) cut in front of M.
template<exact_field K>
ChainSpace<K> cochain_space(const LeftBialgebroid<K>& bi, const LeftUComodule<K>& com, int n) {
    const AeRing<K>& ring = bi.ring();
    if (n == 0) {
        TensorShape sh{{com.M().dim()}};
        return ChainSpace<K>{sh, quotient_by_sparse<K>(com.M(), {})};
    }
    std::vector<VectorSpace> factors;
    std::vector<CutSpec<K>> cuts;
    for (int i = 0; i < n; ++i) factors.push_back(ring.U().space());
    factors.push_back(com.M());
    for (int i = 0; i + 1 < n; ++i) cuts.push_back(CutSpec<K>{ring.A(), ring.ract(), ring.lact()});
    cuts.push_back(CutSpec<K>{ring.A(), ring.ract(), com.leftA()});
    BalancedTensorSpace<K> bt = BalancedTensorSpace<K>::make(std::move(factors), std::move(cuts));
    return ChainSpace<K>{bt.shape(), bt.q()};
}

/// C_n = M ⊗_{A^op} ▶U◁ ⊗_{A^op} ⋯, all cuts over A^op.
template<exact_field K>
ChainSpace<K> chain_space(const LeftHopfAlgebroid<K>& H, const RightUModule<K>& mod, int n) {
    const AeRing<K>& ring = H.ring();
    if (n == 0) {
        TensorShape sh{{mod.M().dim()}};
        return ChainSpace<K>{sh, quotient_by_sparse<K>(mod.M(), {})};
    }
    ActionSpec<K> m_rop = ActionSpec<K>::make(
        ring.Aop(), mod.M(), Side::Right,
        [&](int a, int m) {
            SparseVec<K> out;
            for (const auto& [u, c] : ring.t_of(a))
                for (const auto& [y, v] : mod.act_basis(m, u)) out.emplace_back(y, c * v);
            sv_canonicalize(out);
            return out;
        },
        false);
    std::vector<VectorSpace> factors{mod.M()};
    std::vector<CutSpec<K>> cuts;
    for (int i = 0; i < n; ++i) factors.push_back(ring.U().space());
    cuts.push_back(CutSpec<K>{ring.Aop(), m_rop, ring.op_left_ract()});
    for (int i = 1; i < n; ++i)
        cuts.push_back(CutSpec<K>{ring.Aop(), ring.op_right_blact(), ring.op_left_ract()});
    BalancedTensorSpace<K> bt = BalancedTensorSpace<K>::make(std::move(factors), std::move(cuts));
    return ChainSpace<K>{bt.shape(), bt.q()};
}

/// B^n = U^{⊗_A n+1} ⊗_{A^e} M: the ⊗_A cuts between the U factors plus the
/// outer relations  u⁰ ⊗ ⋯ ⊗ uⁿ ⊗ amb − b▷u⁰ ⊗ ⋯ ⊗ uⁿ◁a ⊗ m.
template<exact_field K>
ChainSpace<K> b_space(const LeftBialgebroid<K>& bi, const LeftUComodule<K>& com, int n) {
    const AeRing<K>& ring = bi.ring();
    const Algebra<K>& U = ring.U();
    const Algebra<K>& A = ring.A();
    const int nu = U.dim(), nm = com.M().dim(), na = A.dim();

    std::vector<VectorSpace> factors;
    for (int i = 0; i <= n; ++i) factors.push_back(U.space());
    factors.push_back(com.M());
    VectorSpace ambient = tensor_space(factors);
    TensorShape sh;
    for (const auto& f : factors) sh.dims.push_back(f.dim());

    std::vector<SparseVec<K>> rels;
    for (int c = 0; c < n; ++c) { // cuts between U factors, (◁ | ▷)
        for (int a = 0; a < na; ++a) {
            const Matrix<K>& ra = ring.ract().of(a);
            const Matrix<K>& la = ring.lact().of(a);
            for (int idx = 0; idx < sh.size(); ++idx) {
                std::vector<int> t = sh.unflatten(idx);
                SparseVec<K> gen;
                for (int y = 0; y < nu; ++y) {
                    if (!ra(y, t[static_cast<std::size_t>(c)]).is_zero()) {
                        std::vector<int> t2 = t;
                        t2[static_cast<std::size_t>(c)] = y;
                        gen.emplace_back(sh.flatten(t2), ra(y, t[static_cast<std::size_t>(c)]));
                    }
                    if (!la(y, t[static_cast<std::size_t>(c + 1)]).is_zero()) {
                        std::vector<int> t2 = t;
                        t2[static_cast<std::size_t>(c + 1)] = y;
                        gen.emplace_back(sh.flatten(t2), -la(y, t[static_cast<std::size_t>(c + 1)]));
                    }
                }
                sv_canonicalize(gen);
                if (!gen.empty()) rels.push_back(std::move(gen));
            }
        }
    }
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b)
            for (int idx = 0; idx < sh.size(); ++idx) {
                std::vector<int> t = sh.unflatten(idx);
                SparseVec<K> gen;
                // w ⊗ a(m·b) with the comodule's left action and induced right action
                SparseVec<K> amb_m;
                for (const auto& [y, v] : com.rightA().act_basis(b, t.back()))
                    for (const auto& [z, w] : com.leftA().act_basis(a, y)) amb_m.emplace_back(z, v * w);
                sv_canonicalize(amb_m);
                for (const auto& [mm, c] : amb_m) {
                    std::vector<int> t2 = t;
                    t2.back() = mm;
                    gen.emplace_back(sh.flatten(t2), c);
                }
                // − s(b)u⁰ ⊗ ⋯ ⊗ t(a)uⁿ ⊗ m
                SparseVec<K> first = U.mul_sparse(ring.s_of(b), SparseVec<K>{{t[0], K(1)}});
                SparseVec<K> last = U.mul_sparse(ring.t_of(a), SparseVec<K>{{t[static_cast<std::size_t>(n)], K(1)}});
                for (const auto& [f, cf] : first)
                    for (const auto& [l, cl] : last) {
                        std::vector<int> t2 = t;
                        t2[0] = f;
                        t2[static_cast<std::size_t>(n)] = l;
                        gen.emplace_back(sh.flatten(t2), -(cf * cl));
                    }
                sv_canonicalize(gen);
                if (!gen.empty()) rels.push_back(std::move(gen));
            }
    (void)nm;
    return ChainSpace<K>{sh, quotient_by_sparse(ambient, std::move(rels))};
}

// ---------------------------------------------------------------------------
// The para-cocyclic module C^•(U,M).

template<exact_field K>
CocyclicModel<K> build_C_cocyclic(const LeftHopfAlgebroid<K>& H, const ModComodPair<K>& pair, int cap,
                                  WdPolicy policy = WdPolicy::Throw, std::vector<WdFailure>* sink = nullptr) {
    if (!pair.left_compatible())
        throw CompatibilityError("C^•(U,M) needs compatible left A-actions (witness: " +
                                 pair.left_compatible().witness + ")");
    const AeRing<K>& ring = H.ring();
    const Algebra<K>& U = ring.U();
    const LeftUComodule<K>& com = pair.comodule();
    const RightUModule<K>& mod = pair.module();
    const int nu = U.dim(), nm = com.M().dim();
    auto e = [](int i) { return SparseVec<K>{{i, K(1)}}; };

    CocyclicModel<K> model;
    model.provenance = "C^•(" + U.name() + ", M)";
    model.cap = cap;
    for (int n = 0; n <= cap; ++n) model.chain.push_back(cochain_space(H.bi(), com, n));
    model.ops.cap = cap;
    for (int n = 0; n <= cap; ++n) model.ops.spaces.push_back(model.chain[static_cast<std::size_t>(n)].q.space);
    model.ops.coface.resize(static_cast<std::size_t>(cap) + 1);
    model.ops.codegen.resize(static_cast<std::size_t>(cap) + 1);

    for (int n = 1; n <= cap; ++n) {
        const ChainSpace<K>& src = model.chain[static_cast<std::size_t>(n - 1)];
        const ChainSpace<K>& dst = model.chain[static_cast<std::size_t>(n)];
        for (int i = 0; i <= n; ++i) {
            auto fn = [&, n, i](const std::vector<int>& t) {
                // t = (u¹..u^{n−1}, m)
                SparseVec<K> out;
                std::vector<SparseVec<K>> slots(static_cast<std::size_t>(n) + 1);
                if (i == 0) {
                    slots[0] = sv_from_dense(U.unit());
                    for (int k = 1; k < n; ++k) slots[static_cast<std::size_t>(k)] = e(t[static_cast<std::size_t>(k - 1)]);
                    slots[static_cast<std::size_t>(n)] = e(t.back());
                    accumulate_product(dst.shape, slots, K(1), out);
                } else if (i < n) {
                    for (const auto& [cd, c] : H.bi().delta_terms(t[static_cast<std::size_t>(i - 1)])) {
                        for (int k = 0; k < i - 1; ++k) slots[static_cast<std::size_t>(k)] = e(t[static_cast<std::size_t>(k)]);
                        slots[static_cast<std::size_t>(i - 1)] = e(cd / nu);
                        slots[static_cast<std::size_t>(i)] = e(cd % nu);
                        for (int k = i; k < n - 1; ++k) slots[static_cast<std::size_t>(k + 1)] = e(t[static_cast<std::size_t>(k)]);
                        slots[static_cast<std::size_t>(n)] = e(t.back());
                        accumulate_product(dst.shape, slots, c, out);
                    }
                } else {
                    for (const auto& [cm, c] : com.coact_terms(t.back())) {
                        for (int k = 0; k < n - 1; ++k) slots[static_cast<std::size_t>(k)] = e(t[static_cast<std::size_t>(k)]);
                        slots[static_cast<std::size_t>(n - 1)] = e(cm / nm);
                        slots[static_cast<std::size_t>(n)] = e(cm % nm);
                        accumulate_product(dst.shape, slots, c, out);
                    }
                }
                sv_canonicalize(out);
                return out;
            };
            model.ops.coface[static_cast<std::size_t>(n)].push_back(
                realize_op(src, dst, "δ_" + std::to_string(i) + "^(" + std::to_string(n) + ")", fn, policy, sink));
        }
    }
    for (int n = 0; n + 1 <= cap; ++n) {
        const ChainSpace<K>& src = model.chain[static_cast<std::size_t>(n + 1)];
        const ChainSpace<K>& dst = model.chain[static_cast<std::size_t>(n)];
        for (int i = 0; i <= n; ++i) {
            auto fn = [&, n, i](const std::vector<int>& t) {
                // t = (u¹..u^{n+1}, m), drop u^{i+1} through ε
                SparseVec<K> out;
                std::vector<SparseVec<K>> slots(static_cast<std::size_t>(n) + 1);
                std::vector<K> eps = H.bi().eps_sparse(e(t[static_cast<std::size_t>(i)]));
                if (i < n) {
                    SparseVec<K> merged = U.mul_sparse(ring.s_of_vec(eps), e(t[static_cast<std::size_t>(i + 1)]));
                    for (int k = 0; k < i; ++k) slots[static_cast<std::size_t>(k)] = e(t[static_cast<std::size_t>(k)]);
                    slots[static_cast<std::size_t>(i)] = merged;
                    for (int k = i + 2; k <= n; ++k) slots[static_cast<std::size_t>(k - 1)] = e(t[static_cast<std::size_t>(k)]);
                    slots[static_cast<std::size_t>(n)] = e(t.back());
                } else {
                    // ε(u^{n+1}) acts on m through the comodule's left A-action
                    SparseVec<K> acted;
                    for (int a = 0; a < static_cast<int>(eps.size()); ++a) {
                        if (eps[static_cast<std::size_t>(a)].is_zero()) continue;
                        for (const auto& [y, v] : com.leftA().act_basis(a, t.back()))
                            acted.emplace_back(y, eps[static_cast<std::size_t>(a)] * v);
                    }
                    sv_canonicalize(acted);
                    for (int k = 0; k < n; ++k) slots[static_cast<std::size_t>(k)] = e(t[static_cast<std::size_t>(k)]);
                    slots[static_cast<std::size_t>(n)] = acted;
                }
                accumulate_product(dst.shape, slots, K(1), out);
                sv_canonicalize(out);
                return out;
            };
            model.ops.codegen[static_cast<std::size_t>(n)].push_back(
                realize_op(src, dst, "σ_" + std::to_string(i) + "^(" + std::to_string(n) + ")", fn, policy, sink));
        }
    }
    for (int n = 0; n <= cap; ++n) {
        const ChainSpace<K>& cs = model.chain[static_cast<std::size_t>(n)];
        if (n == 0) {
            auto fn = [&](const std::vector<int>& t) {
                return pair.stability_op().column_sparse(t[0]); // τ_0(m) = m_(0)m_(−1)
            };
            model.ops.cyc.push_back(realize_op(cs, cs, "τ_0", fn, policy, sink));
            continue;
        }
        auto fn = [&, n](const std::vector<int>& t) {
            // τ_n: u¹_{-(1)}u² ⊗ ⋯ ⊗ u¹_{-(n−1)}uⁿ ⊗ u¹_{-(n)}m_(−1) ⊗ m_(0)u¹_+
            SparseVec<K> out;
            for (const auto& [pq, c1] : H.trans_terms(t[0])) {
                int p = pq / nu, q = pq % nu;
                for (const auto& [qs, c2] : H.bi().iterated_delta(q, n)) {
                    for (const auto& [cm, c3] : com.coact_terms(t.back())) {
                        std::vector<SparseVec<K>> slots(static_cast<std::size_t>(n) + 1);
                        for (int j = 0; j + 1 < n; ++j)
                            slots[static_cast<std::size_t>(j)] =
                                U.mul_sparse(e(qs[static_cast<std::size_t>(j)]), e(t[static_cast<std::size_t>(j + 1)]));
                        slots[static_cast<std::size_t>(n - 1)] =
                            U.mul_sparse(e(qs[static_cast<std::size_t>(n - 1)]), e(cm / nm));
                        slots[static_cast<std::size_t>(n)] = mod.act_basis(cm % nm, p);
                        accumulate_product(cs.shape, slots, c1 * c2 * c3, out);
                    }
                }
            }
            sv_canonicalize(out);
            return out;
        };
        model.ops.cyc.push_back(realize_op(cs, cs, "τ_" + std::to_string(n), fn, policy, sink));
    }
    return model;
}

// ---------------------------------------------------------------------------
// The para-cyclic module C_•(U,M).

template<exact_field K>
CyclicModel<K> build_C_cyclic(const LeftHopfAlgebroid<K>& H, const ModComodPair<K>& pair, int cap,
                              WdPolicy policy = WdPolicy::Throw, std::vector<WdFailure>* sink = nullptr) {
    if (!pair.left_compatible())
        throw CompatibilityError("C_•(U,M) needs compatible left A-actions (witness: " +
                                 pair.left_compatible().witness + ")");
    const AeRing<K>& ring = H.ring();
    const Algebra<K>& U = ring.U();
    const LeftUComodule<K>& com = pair.comodule();
    const RightUModule<K>& mod = pair.module();
    const int nu = U.dim(), nm = com.M().dim();
    auto e = [](int i) { return SparseVec<K>{{i, K(1)}}; };

    CyclicModel<K> model;
    model.provenance = "C_•(" + U.name() + ", M)";
    model.cap = cap;
    for (int n = 0; n <= cap; ++n) model.chain.push_back(chain_space(H, mod, n));
    model.ops.cap = cap;
    for (int n = 0; n <= cap; ++n) model.ops.spaces.push_back(model.chain[static_cast<std::size_t>(n)].q.space);
    model.ops.face.resize(static_cast<std::size_t>(cap) + 1);
    model.ops.degen.resize(static_cast<std::size_t>(cap) + 1);

    for (int n = 1; n <= cap; ++n) {
        const ChainSpace<K>& src = model.chain[static_cast<std::size_t>(n)];
        const ChainSpace<K>& dst = model.chain[static_cast<std::size_t>(n - 1)];
        for (int i = 0; i <= n; ++i) {
            auto fn = [&, n, i](const std::vector<int>& t) {
                // t = (m, u¹..uⁿ)
                SparseVec<K> out;
                std::vector<SparseVec<K>> slots(static_cast<std::size_t>(n));
                if (i == 0) {
                    std::vector<K> eps = H.bi().eps_sparse(e(t[static_cast<std::size_t>(n)]));
                    SparseVec<K> teps = ring.t_of_vec(eps);
                    if (n == 1) {
                        slots[0] = mod.act_sparse(e(t[0]), teps); // ε(u¹) ▶ m
                    } else {
                        slots[0] = e(t[0]);
                        for (int k = 1; k < n - 1; ++k) slots[static_cast<std::size_t>(k)] = e(t[static_cast<std::size_t>(k)]);
                        slots[static_cast<std::size_t>(n - 1)] =
                            U.mul_sparse(e(t[static_cast<std::size_t>(n - 1)]), teps); // ε(uⁿ) ▶ u^{n−1}
                    }
                } else if (i < n) {
                    slots[0] = e(t[0]);
                    int merge_at = n - i; // merge u^{n−i} u^{n−i+1}
                    int w = 1;
                    for (int k = 1; k <= n; ++k) {
                        if (k == merge_at) {
                            slots[static_cast<std::size_t>(w)] =
                                U.mul_sparse(e(t[static_cast<std::size_t>(k)]), e(t[static_cast<std::size_t>(k + 1)]));
                            ++k;
                        } else {
                            slots[static_cast<std::size_t>(w)] = e(t[static_cast<std::size_t>(k)]);
                        }
                        ++w;
                    }
                } else {
                    slots[0] = mod.act_basis(t[0], t[1]); // m u¹
                    for (int k = 2; k <= n; ++k) slots[static_cast<std::size_t>(k - 1)] = e(t[static_cast<std::size_t>(k)]);
                }
                accumulate_product(dst.shape, slots, K(1), out);
                sv_canonicalize(out);
                return out;
            };
            model.ops.face[static_cast<std::size_t>(n)].push_back(
                realize_op(src, dst, "d_" + std::to_string(i) + "^(" + std::to_string(n) + ")", fn, policy, sink));
        }
    }
    for (int n = 0; n + 1 <= cap; ++n) {
        const ChainSpace<K>& src = model.chain[static_cast<std::size_t>(n)];
        const ChainSpace<K>& dst = model.chain[static_cast<std::size_t>(n + 1)];
        for (int i = 0; i <= n; ++i) {
            auto fn = [&, n, i](const std::vector<int>& t) {
                SparseVec<K> out;
                std::vector<SparseVec<K>> slots;
                slots.reserve(static_cast<std::size_t>(n) + 2);
                slots.push_back(e(t[0]));
                int insert_after = n - i; // 1 lands after u^{n−i}; i = n puts it right after m
                if (insert_after == 0) slots.push_back(sv_from_dense(U.unit()));
                for (int k = 1; k <= n; ++k) {
                    slots.push_back(e(t[static_cast<std::size_t>(k)]));
                    if (k == insert_after) slots.push_back(sv_from_dense(U.unit()));
                }
                accumulate_product(dst.shape, slots, K(1), out);
                sv_canonicalize(out);
                return out;
            };
            model.ops.degen[static_cast<std::size_t>(n)].push_back(
                realize_op(src, dst, "s_" + std::to_string(i) + "^(" + std::to_string(n) + ")", fn, policy, sink));
        }
    }
    for (int n = 0; n <= cap; ++n) {
        const ChainSpace<K>& cs = model.chain[static_cast<std::size_t>(n)];
        if (n == 0) {
            auto fn = [&](const std::vector<int>& t) { return pair.stability_op().column_sparse(t[0]); };
            model.ops.cyc.push_back(realize_op(cs, cs, "t_0", fn, policy, sink));
            continue;
        }
        auto fn = [&, n](const std::vector<int>& t) {
            // t_n: m_(0)u¹_+ ⊗ u²_+ ⊗ ⋯ ⊗ uⁿ_+ ⊗ uⁿ_−⋯u¹_− m_(−1)
            SparseVec<K> out;
            std::vector<int> ps(static_cast<std::size_t>(n));
            std::function<void(int, const K&, const SparseVec<K>&, int)> rec =
                [&](int j, const K& coeff, const SparseVec<K>& tail, int m0) {
                    if (j == n) {
                        std::vector<SparseVec<K>> slots(static_cast<std::size_t>(n) + 1);
                        slots[0] = mod.act_basis(m0, ps[0]);
                        for (int k = 1; k < n; ++k)
                            slots[static_cast<std::size_t>(k)] = SparseVec<K>{{ps[static_cast<std::size_t>(k)], K(1)}};
                        slots[static_cast<std::size_t>(n)] = tail;
                        accumulate_product(cs.shape, slots, coeff, out);
                        return;
                    }
                    for (const auto& [pq, c] : H.trans_terms(t[static_cast<std::size_t>(j + 1)])) {
                        ps[static_cast<std::size_t>(j)] = pq / nu;
                        SparseVec<K> tail2 = U.mul_sparse(SparseVec<K>{{pq % nu, K(1)}}, tail);
                        rec(j + 1, coeff * c, tail2, m0);
                    }
                };
            for (const auto& [cm, c3] : com.coact_terms(t[0]))
                rec(0, c3, e(cm / nm), cm % nm);
            sv_canonicalize(out);
            return out;
        };
        model.ops.cyc.push_back(realize_op(cs, cs, "t_" + std::to_string(n), fn, policy, sink));
    }
    return model;
}

} // namespace hopfcyc
