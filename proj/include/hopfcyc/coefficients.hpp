#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hopf.hpp"

namespace hopfcyc {

// Coefficients: right U-modules, left U-comodules with their induced right
// A-action, and the compatibility ladder left-compatible → aYD → SaYD.

/// Right U-module with the derived A-actions a▶m◀b = m s(b) t(a).
template<exact_field K>
class RightUModule {
    struct Data {
        AeRing<K> ring;
        VectorSpace M;
        std::vector<Matrix<K>> act_by; // act_by[u]: m ↦ m·e_u
        LinearMap<K> action;           // M ⊗_k U → M
        ActionSpec<K> blact, bract;    // ▶, ◀ of A on M
    };
    std::shared_ptr<const Data> d_;

public:
    RightUModule() = default;

    static RightUModule make(AeRing<K> ring, VectorSpace M, const Matrix<K>& action,
                             bool verify = true) {
        auto d = std::make_shared<Data>();
        const int nm = M.dim(), nu = ring.U().dim();
        if (action.rows() != nm || action.cols() != nm * nu)
            throw Error("module action must map M ⊗ U to M");
        d->M = M;
        for (int u = 0; u < nu; ++u) {
            Matrix<K> m(nm, nm);
            for (int x = 0; x < nm; ++x)
                for (int y = 0; y < nm; ++y) m(y, x) = action(y, x * nu + u);
            d->act_by.push_back(std::move(m));
        }
        d->action = LinearMap<K>(tensor_space({M, ring.U().space()}), M, action);
        d->blact = ActionSpec<K>::make(ring.A(), M, Side::Left,
                                       [&](int a, int x) {
                                           SparseVec<K> out;
                                           for (const auto& [u, c] : ring.t_of(a))
                                               for (const auto& [y, v] : d->act_by[static_cast<std::size_t>(u)].column_sparse(x))
                                                   out.emplace_back(y, c * v);
                                           sv_canonicalize(out);
                                           return out;
                                       },
                                       verify);
        d->bract = ActionSpec<K>::make(ring.A(), M, Side::Right,
                                       [&](int a, int x) {
                                           SparseVec<K> out;
                                           for (const auto& [u, c] : ring.s_of(a))
                                               for (const auto& [y, v] : d->act_by[static_cast<std::size_t>(u)].column_sparse(x))
                                                   out.emplace_back(y, c * v);
                                           sv_canonicalize(out);
                                           return out;
                                       },
                                       verify);
        d->ring = std::move(ring);
        RightUModule r;
        r.d_ = std::move(d);
        if (verify) r.verify_axioms();
        return r;
    }

    const AeRing<K>& ring() const { return d_->ring; }
    const VectorSpace& M() const { return d_->M; }
    const Matrix<K>& act_of(int u) const { return d_->act_by[static_cast<std::size_t>(u)]; }
    const LinearMap<K>& action() const { return d_->action; }
    const ActionSpec<K>& blact() const { return d_->blact; }
    const ActionSpec<K>& bract() const { return d_->bract; }

    SparseVec<K> act_basis(int m, int u) const { return act_of(u).column_sparse(m); }
    SparseVec<K> act_sparse(const SparseVec<K>& m, const SparseVec<K>& u) const {
        SparseVec<K> out;
        for (const auto& [ui, uc] : u)
            for (const auto& [mi, mc] : m)
                for (const auto& [y, v] : act_of(ui).column_sparse(mi)) out.emplace_back(y, uc * mc * v);
        sv_canonicalize(out);
        return out;
    }
    Matrix<K> act_of_elem(const std::vector<K>& u) const {
        Matrix<K> m(M().dim(), M().dim());
        for (int i = 0; i < ring().U().dim(); ++i)
            if (!u[static_cast<std::size_t>(i)].is_zero()) m = m + act_of(i).scaled(u[static_cast<std::size_t>(i)]);
        return m;
    }

    void verify_axioms() const {
        const Algebra<K>& U = d_->ring.U();
        if (!act_of_elem(U.unit()).is_identity())
            throw AxiomViolation("module unitality", "1");
        for (int u = 0; u < U.dim(); ++u)
            for (int v = 0; v < U.dim(); ++v) {
                Matrix<K> lhs = act_of(v) * act_of(u); // m·u then ·v
                Matrix<K> rhs(M().dim(), M().dim());
                for (const auto& [k, c] : U.mul_basis(u, v)) rhs = rhs + act_of(k).scaled(c);
                if (lhs != rhs)
                    throw AxiomViolation("module associativity",
                                         U.space().label(u) + "," + U.space().label(v));
            }
    }
};

/// Left U-comodule: left A-module M with coaction Δ_M: M → U_◁ ⊗_A M.
/// The right A-action ma := ε(m_(−1)s(a)) m_(0) is derived at construction.
template<exact_field K>
class LeftUComodule {
    struct Data {
        LeftBialgebroid<K> bi;
        VectorSpace M;
        ActionSpec<K> leftA;            // A-action underlying the coaction
        BalancedTensorSpace<K> UAM;     // U_◁ ⊗_A M
        LinearMap<K> coaction;          // M → UAM.space
        std::vector<SparseVec<K>> coact_amb; // canonical reps in U ⊗_k M
        ActionSpec<K> rightA;           // induced by Eq. ma = ε(m_(−1)s(a))m_(0)
    };
    std::shared_ptr<const Data> d_;

public:
    LeftUComodule() = default;

    static LeftUComodule make(LeftBialgebroid<K> bi, ActionSpec<K> leftA,
                              const LinearMap<K>& coaction_in, bool verify = true) {
        auto d = std::make_shared<Data>();
        d->bi = std::move(bi);
        d->M = leftA.space();
        d->leftA = std::move(leftA);
        const AeRing<K>& ring = d->bi.ring();
        const int nm = d->M.dim(), nu = ring.U().dim();

        d->UAM = balanced_tensor<K>({BtFactor<K>{ring.U().space(), {}, ring.ract()},
                                     BtFactor<K>{d->M, d->leftA, {}}},
                                    ring.A());
        if (coaction_in.mat().cols() != nm) throw Error("coaction must be defined on M");
        if (coaction_in.mat().rows() == nu * nm) {
            d->coaction = LinearMap<K>(d->M, d->UAM.space(),
                                       d->UAM.q().projection.mat() * coaction_in.mat());
        } else if (coaction_in.mat().rows() == d->UAM.dim()) {
            d->coaction = LinearMap<K>(d->M, d->UAM.space(), coaction_in.mat());
        } else {
            throw Error("coaction must be given in ambient U⊗M or quotient coordinates");
        }
        Matrix<K> amb = d->UAM.q().section.mat() * d->coaction.mat();
        for (int m = 0; m < nm; ++m) d->coact_amb.push_back(amb.column_sparse(m));

        // induced right A-action (computed before verification; several axioms
        // are stated through it)
        auto bi2 = d->bi;
        auto coact = d->coact_amb;
        auto la = d->leftA;
        d->rightA = ActionSpec<K>::make(
            ring.A(), d->M, Side::Right,
            [bi2, coact, la, nm, &ring](int a, int m) {
                SparseVec<K> out;
                for (const auto& [cm, coeff] : coact[static_cast<std::size_t>(m)]) {
                    int c = cm / nm, m0 = cm % nm;
                    SparseVec<K> cs = ring.U().mul_sparse(SparseVec<K>{{c, K(1)}}, ring.s_of(a));
                    std::vector<K> eps = bi2.eps_sparse(cs);
                    for (int ai = 0; ai < static_cast<int>(eps.size()); ++ai) {
                        if (eps[static_cast<std::size_t>(ai)].is_zero()) continue;
                        for (const auto& [y, v] : la.act_basis(ai, m0))
                            out.emplace_back(y, coeff * eps[static_cast<std::size_t>(ai)] * v);
                    }
                }
                sv_canonicalize(out);
                return out;
            },
            verify);

        LeftUComodule c;
        c.d_ = std::move(d);
        if (verify) c.verify_axioms();
        return c;
    }

    const LeftBialgebroid<K>& bi() const { return d_->bi; }
    const VectorSpace& M() const { return d_->M; }
    const ActionSpec<K>& leftA() const { return d_->leftA; }
    const ActionSpec<K>& rightA() const { return d_->rightA; }
    const BalancedTensorSpace<K>& UAM() const { return d_->UAM; }
    const LinearMap<K>& coaction() const { return d_->coaction; }
    const SparseVec<K>& coact_terms(int m) const { return d_->coact_amb[static_cast<std::size_t>(m)]; }

    /// The stability candidate m ↦ m_(0)m_(−1) needs the module action and
    /// lives in ModComodPair; here only comodule-internal structure.

    void verify_axioms() const {
        const AeRing<K>& ring = d_->bi.ring();
        const Algebra<K>& U = ring.U();
        const Algebra<K>& A = ring.A();
        const int nm = d_->M.dim(), nu = U.dim(), na = A.dim();
        auto e = [](int i) { return SparseVec<K>{{i, K(1)}}; };

        // counitality: ε(m_(−1)) m_(0) = m
        for (int m = 0; m < nm; ++m) {
            std::vector<K> acc(static_cast<std::size_t>(nm), K(0));
            for (const auto& [cm, coeff] : coact_terms(m)) {
                std::vector<K> eps = d_->bi.eps_sparse(e(cm / nm));
                for (int a = 0; a < na; ++a) {
                    if (eps[static_cast<std::size_t>(a)].is_zero()) continue;
                    for (const auto& [y, v] : d_->leftA.act_basis(a, cm % nm))
                        acc[static_cast<std::size_t>(y)] += coeff * eps[static_cast<std::size_t>(a)] * v;
                }
            }
            if (acc != sv_to_dense(e(m), nm))
                throw AxiomViolation("comodule counitality", d_->M.label(m));
        }

        // coassociativity in U ⊗_A U ⊗_A M
        {
            BalancedTensorSpace<K> triple = BalancedTensorSpace<K>::make(
                {U.space(), U.space(), d_->M},
                {CutSpec<K>{A, ring.ract(), ring.lact()},
                 CutSpec<K>{A, ring.ract(), d_->leftA}});
            for (int m = 0; m < nm; ++m) {
                SparseVec<K> lhs, rhs;
                for (const auto& [cm, coeff] : coact_terms(m)) {
                    int c = cm / nm, m0 = cm % nm;
                    for (const auto& [cd, c2] : d_->bi.delta_terms(c))
                        lhs.emplace_back(cd * nm + m0, coeff * c2);
                    for (const auto& [cm2, c2] : coact_terms(m0))
                        rhs.emplace_back((c * nu + cm2 / nm) * nm + cm2 % nm, coeff * c2);
                }
                sv_canonicalize(lhs);
                sv_canonicalize(rhs);
                if (triple.q().project_sparse(lhs) != triple.q().project_sparse(rhs))
                    throw AxiomViolation("comodule coassociativity", d_->M.label(m));
            }
        }

        // A-linearity and the full identity Δ_M(amb) = s(a) m_(−1) s(b) ⊗ m_(0)
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < na; ++b)
                for (int m = 0; m < nm; ++m) {
                    SparseVec<K> amb_m;
                    for (const auto& [y, v] : d_->rightA.act_basis(b, m))
                        for (const auto& [z, w] : d_->leftA.act_basis(a, y)) amb_m.emplace_back(z, v * w);
                    sv_canonicalize(amb_m);
                    std::vector<K> lhs = d_->coaction.mat().apply_sparse(amb_m);

                    SparseVec<K> rhs;
                    for (const auto& [cm, coeff] : coact_terms(m)) {
                        SparseVec<K> mid = U.mul_sparse(U.mul_sparse(ring.s_of(a), e(cm / nm)), ring.s_of(b));
                        for (const auto& [i, x] : mid) rhs.emplace_back(i * nm + cm % nm, coeff * x);
                    }
                    sv_canonicalize(rhs);
                    if (lhs != d_->UAM.q().project_sparse(rhs))
                        throw AxiomViolation("comodule A^e-linearity",
                                             A.space().label(a) + "," + A.space().label(b) + "," + d_->M.label(m));
                }

        // m_(−1) ⊗ m_(0)a = m_(−1)t(a) ⊗ m_(0)
        for (int a = 0; a < na; ++a)
            for (int m = 0; m < nm; ++m) {
                SparseVec<K> lhs, rhs;
                for (const auto& [cm, coeff] : coact_terms(m)) {
                    int c = cm / nm, m0 = cm % nm;
                    for (const auto& [y, v] : d_->rightA.act_basis(a, m0))
                        lhs.emplace_back(c * nm + y, coeff * v);
                    for (const auto& [i, x] : U.mul_sparse(e(c), ring.t_of(a)))
                        rhs.emplace_back(i * nm + m0, coeff * x);
                }
                sv_canonicalize(lhs);
                sv_canonicalize(rhs);
                if (d_->UAM.q().project_sparse(lhs) != d_->UAM.q().project_sparse(rhs))
                    throw AxiomViolation("coaction right-action exchange",
                                         A.space().label(a) + "," + d_->M.label(m));
            }

        // Takeuchi: Δ_M lands in U ×_A M
        if (auto w = takeuchi_defect(d_->UAM, ring.blact(), d_->rightA, d_->coaction))
            throw AxiomViolation("coaction Takeuchi", *w);
    }
};

/// Verified flag with a witness describing the first failure.
struct Flag {
    bool value = false;
    std::string witness; // empty when the flag holds

    explicit operator bool() const { return value; }
};

/// One space carrying both a right U-action and a left U-coaction, with the
/// compatibility flags computed eagerly.
template<exact_field K>
class ModComodPair {
    struct Data {
        LeftHopfAlgebroid<K> hopf;
        RightUModule<K> module;
        LeftUComodule<K> comodule;
        Flag left_compatible, campanilla, ayd, stable;
        Matrix<K> stability; // m ↦ m_(0)m_(−1)
    };
    std::shared_ptr<const Data> d_;

public:
    ModComodPair() = default;

    const LeftHopfAlgebroid<K>& hopf() const { return d_->hopf; }
    const RightUModule<K>& module() const { return d_->module; }
    const LeftUComodule<K>& comodule() const { return d_->comodule; }
    const VectorSpace& M() const { return d_->module.M(); }
    const Flag& left_compatible() const { return d_->left_compatible; }
    const Flag& campanilla() const { return d_->campanilla; }
    const Flag& ayd() const { return d_->ayd; }
    const Flag& stable() const { return d_->stable; }
    const Matrix<K>& stability_op() const { return d_->stability; }

    static ModComodPair check(LeftHopfAlgebroid<K> hopf, RightUModule<K> module, LeftUComodule<K> comodule) {
        if (module.M().dim() != comodule.M().dim())
            throw Error("module and comodule must share the underlying space");
        auto d = std::make_shared<Data>();
        d->hopf = std::move(hopf);
        d->module = std::move(module);
        d->comodule = std::move(comodule);
        const AeRing<K>& ring = d->hopf.ring();
        const Algebra<K>& U = ring.U();
        const int nm = d->module.M().dim(), nu = U.dim(), na = ring.A().dim();

        // left_compatible: am = a ▶ m for all basis a, m
        d->left_compatible = Flag{true, ""};
        for (int a = 0; a < na && d->left_compatible.value; ++a)
            if (d->comodule.leftA().of(a) != d->module.blact().of(a)) {
                int m = 0;
                for (; m < nm; ++m)
                    if (d->comodule.leftA().act_basis(a, m) != d->module.blact().act_basis(a, m)) break;
                d->left_compatible = Flag{false, "a=" + ring.A().space().label(a) + ", m=" + d->module.M().label(m)};
            }

        // campanilla: amb (comodule left + induced right) = a ▶ m ◀ b (module)
        d->campanilla = Flag{true, ""};
        for (int a = 0; a < na && d->campanilla.value; ++a)
            for (int b = 0; b < na && d->campanilla.value; ++b) {
                Matrix<K> lhs = d->comodule.leftA().of(a) * d->comodule.rightA().of(b);
                Matrix<K> rhs = d->module.blact().of(a) * d->module.bract().of(b);
                if (lhs != rhs) {
                    int m = 0;
                    for (; m < nm; ++m)
                        if (lhs.column(m) != rhs.column(m)) break;
                    d->campanilla = Flag{false, "a=" + ring.A().space().label(a) + ", b=" + ring.A().space().label(b) +
                                                    ", m=" + d->module.M().label(m)};
                }
            }

        // aYD: campanilla together with Δ_M(mu) = u_− m_(−1) u_{+(1)} ⊗ m_(0) u_{+(2)}
        Flag huho{true, ""};
        for (int u = 0; u < nu && huho.value; ++u) {
            for (int m = 0; m < nm && huho.value; ++m) {
                std::vector<K> lhs = d->comodule.coaction().mat().apply_sparse(d->module.act_basis(m, u));
                SparseVec<K> rhs;
                for (const auto& [pq, c1] : d->hopf.trans_terms(u)) {
                    int p = pq / nu, q = pq % nu;
                    for (const auto& [cd, c2] : d->hopf.bi().delta_terms(p)) {
                        int p1 = cd / nu, p2 = cd % nu;
                        for (const auto& [cm, c3] : d->comodule.coact_terms(m)) {
                            SparseVec<K> first = U.mul_sparse(U.mul_sparse(SparseVec<K>{{q, K(1)}}, SparseVec<K>{{cm / nm, K(1)}}),
                                                              SparseVec<K>{{p1, K(1)}});
                            SparseVec<K> second = d->module.act_basis(cm % nm, p2);
                            for (const auto& [i, x] : first)
                                for (const auto& [j, y] : second)
                                    rhs.emplace_back(i * nm + j, c1 * c2 * c3 * x * y);
                        }
                    }
                }
                sv_canonicalize(rhs);
                if (lhs != d->comodule.UAM().q().project_sparse(rhs))
                    huho = Flag{false, "u=" + U.space().label(u) + ", m=" + d->module.M().label(m)};
            }
        }
        d->ayd = d->campanilla.value ? huho
                                     : Flag{false, huho.value ? "campanilla fails: " + d->campanilla.witness
                                                              : huho.witness};

        // stability: m_(0)m_(−1) = m
        Matrix<K> stab(nm, nm);
        for (int m = 0; m < nm; ++m) {
            std::vector<K> acc(static_cast<std::size_t>(nm), K(0));
            for (const auto& [cm, coeff] : d->comodule.coact_terms(m))
                for (const auto& [y, v] : d->module.act_basis(cm % nm, cm / nm))
                    acc[static_cast<std::size_t>(y)] += coeff * v;
            stab.set_column(m, acc);
        }
        d->stability = stab;
        if (stab.is_identity()) d->stable = Flag{true, ""};
        else {
            int m = 0;
            for (; m < nm; ++m)
                if (stab.column(m) != sv_to_dense(SparseVec<K>{{m, K(1)}}, nm)) break;
            d->stable = Flag{false, "m=" + d->module.M().label(m)};
        }

        ModComodPair p;
        p.d_ = std::move(d);
        return p;
    }

    bool is_sayd() const { return d_->ayd.value && d_->stable.value; }
};

template<exact_field K>
ModComodPair<K> check_pair(LeftHopfAlgebroid<K> hopf, RightUModule<K> module, LeftUComodule<K> comodule) {
    return ModComodPair<K>::check(std::move(hopf), std::move(module), std::move(comodule));
}

/// Right A-action induced on a comodule by its coaction (already computed at
/// construction; exposed under the spec's operation name).
template<exact_field K>
const ActionSpec<K>& induced_right_action(const LeftUComodule<K>& c) {
    return c.rightA();
}

} // namespace hopfcyc
