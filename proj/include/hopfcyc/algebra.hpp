#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace hopfcyc {

// Finite-dimensional k-algebras presented by structure constants, algebra
// morphisms, action specifications and balanced tensor products.

/// Unital associative algebra: e_i · e_j = Σ_k c[i][j][k] e_k.
template<exact_field K>
class Algebra {
    struct Data {
        std::string name;
        VectorSpace space;
        std::vector<K> c; // flat (i * d + j) * d + k
        std::vector<K> unit;
        std::vector<Matrix<K>> lmul; // lmul[i]: x ↦ e_i · x
        std::vector<Matrix<K>> rmul; // rmul[j]: x ↦ x · e_j
    };
    std::shared_ptr<const Data> d_;

public:
    Algebra() = default;

    static Algebra make(std::string name, VectorSpace space,
                        const std::function<SparseVec<K>(int, int)>& mul_basis,
                        std::vector<K> unit, bool verify = true) {
        auto d = std::make_shared<Data>();
        d->name = std::move(name);
        d->space = space;
        const int n = space.dim();
        d->c.assign(static_cast<std::size_t>(n) * n * n, K(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (const auto& [k, v] : mul_basis(i, j))
                    d->c[(static_cast<std::size_t>(i) * n + j) * n + k] = v;
        if (static_cast<int>(unit.size()) != n) throw Error("unit vector has wrong dimension");
        d->unit = std::move(unit);
        for (int i = 0; i < n; ++i) {
            Matrix<K> l(n, n), r(n, n);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    l(k, j) = d->c[(static_cast<std::size_t>(i) * n + j) * n + k];
                    r(k, j) = d->c[(static_cast<std::size_t>(j) * n + i) * n + k];
                }
            d->lmul.push_back(std::move(l));
            d->rmul.push_back(std::move(r));
        }
        Algebra a;
        a.d_ = std::move(d);
        if (verify) a.verify_axioms();
        return a;
    }

    const std::string& name() const { return d_->name; }
    const VectorSpace& space() const { return d_->space; }
    int dim() const { return d_->space.dim(); }
    const std::vector<K>& unit() const { return d_->unit; }
    const K& sc(int i, int j, int k) const {
        const int n = dim();
        return d_->c[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
    const Matrix<K>& lmul(int i) const { return d_->lmul[static_cast<std::size_t>(i)]; }
    const Matrix<K>& rmul(int i) const { return d_->rmul[static_cast<std::size_t>(i)]; }

    SparseVec<K> mul_basis(int i, int j) const {
        SparseVec<K> v;
        for (int k = 0; k < dim(); ++k)
            if (!sc(i, j, k).is_zero()) v.emplace_back(k, sc(i, j, k));
        return v;
    }
    std::vector<K> mul(const std::vector<K>& x, const std::vector<K>& y) const {
        std::vector<K> r(static_cast<std::size_t>(dim()), K(0));
        for (int i = 0; i < dim(); ++i) {
            if (x[static_cast<std::size_t>(i)].is_zero()) continue;
            for (int j = 0; j < dim(); ++j) {
                if (y[static_cast<std::size_t>(j)].is_zero()) continue;
                K f = x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
                for (int k = 0; k < dim(); ++k)
                    if (!sc(i, j, k).is_zero()) r[static_cast<std::size_t>(k)] += f * sc(i, j, k);
            }
        }
        return r;
    }
    SparseVec<K> mul_sparse(const SparseVec<K>& x, const SparseVec<K>& y) const {
        SparseVec<K> r;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) {
                K f = a * b;
                for (int k = 0; k < dim(); ++k)
                    if (!sc(i, j, k).is_zero()) r.emplace_back(k, f * sc(i, j, k));
            }
        sv_canonicalize(r);
        return r;
    }

    /// x ↦ a · x as a matrix.
    Matrix<K> lmul_by(const std::vector<K>& a) const {
        Matrix<K> m(dim(), dim());
        for (int i = 0; i < dim(); ++i)
            if (!a[static_cast<std::size_t>(i)].is_zero()) m = m + lmul(i).scaled(a[static_cast<std::size_t>(i)]);
        return m;
    }
    Matrix<K> rmul_by(const std::vector<K>& a) const {
        Matrix<K> m(dim(), dim());
        for (int i = 0; i < dim(); ++i)
            if (!a[static_cast<std::size_t>(i)].is_zero()) m = m + rmul(i).scaled(a[static_cast<std::size_t>(i)]);
        return m;
    }

    bool commutative() const {
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < i; ++j)
                if (mul_basis(i, j) != mul_basis(j, i)) return false;
        return true;
    }

    bool same_structure(const Algebra& o) const {
        return dim() == o.dim() && d_->c == o.d_->c && d_->unit == o.d_->unit;
    }

    void verify_axioms() const {
        const int n = dim();
        Matrix<K> lu = lmul_by(unit());
        if (!lu.is_identity())
            throw AxiomViolation("algebra unitality (left), " + name(), first_bad_column(lu));
        Matrix<K> ru = rmul_by(unit());
        if (!ru.is_identity())
            throw AxiomViolation("algebra unitality (right), " + name(), first_bad_column(ru));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                SparseVec<K> ij = mul_basis(i, j);
                for (int k = 0; k < n; ++k) {
                    SparseVec<K> jk = mul_basis(j, k);
                    SparseVec<K> lhs = mul_sparse(ij, SparseVec<K>{{k, K(1)}});
                    SparseVec<K> rhs = mul_sparse(SparseVec<K>{{i, K(1)}}, jk);
                    if (lhs != rhs)
                        throw AxiomViolation("algebra associativity, " + name(),
                                             space().label(i) + "," + space().label(j) + "," + space().label(k));
                }
            }
    }

private:
    std::string first_bad_column(const Matrix<K>& m) const {
        for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i < m.rows(); ++i) {
                K want = (i == j) ? K(1) : K(0);
                if (m(i, j) != want) return space().label(j);
            }
        return "?";
    }
};

template<exact_field K>
Algebra<K> opposite(const Algebra<K>& a) {
    return Algebra<K>::make(a.name() + "^op", a.space(),
                            [&](int i, int j) { return a.mul_basis(j, i); }, a.unit(), false);
}

/// A^e = A ⊗_k A^op with (a⊗b)(a'⊗b') = aa' ⊗ b'b; basis labels "a_i⊗b_j".
template<exact_field K>
Algebra<K> enveloping(const Algebra<K>& a) {
    const int n = a.dim();
    VectorSpace sp = tensor_space({a.space(), a.space()});
    TensorShape sh{{n, n}};
    std::vector<K> unit(static_cast<std::size_t>(n) * n, K(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            unit[static_cast<std::size_t>(sh.flatten(std::vector<int>{i, j}))] =
                a.unit()[static_cast<std::size_t>(i)] * a.unit()[static_cast<std::size_t>(j)];
    auto mul = [&a, n, sh](int p, int q) {
        auto pt = sh.unflatten(p);
        auto qt = sh.unflatten(q);
        SparseVec<K> left = a.mul_basis(pt[0], qt[0]);
        SparseVec<K> right = a.mul_basis(qt[1], pt[1]); // reversed factor
        SparseVec<K> out;
        for (const auto& [i, x] : left)
            for (const auto& [j, y] : right)
                out.emplace_back(sh.flatten(std::vector<int>{i, j}), x * y);
        sv_canonicalize(out);
        return out;
    };
    return Algebra<K>::make(a.name() + "^e", sp, mul, std::move(unit), false);
}

/// A linear map between algebras that respects unit and multiplication.
template<exact_field K>
struct AlgebraMorphism {
    Algebra<K> source;
    Algebra<K> target;
    LinearMap<K> map;

    AlgebraMorphism() = default;
    AlgebraMorphism(Algebra<K> src, Algebra<K> tgt, LinearMap<K> f, bool verify = true)
        : source(std::move(src)), target(std::move(tgt)), map(std::move(f)) {
        if (map.mat().rows() != target.dim() || map.mat().cols() != source.dim())
            throw Error("morphism matrix shape mismatch");
        if (verify) verify_axioms();
    }

    void verify_axioms() const {
        if (map.apply(source.unit()) != target.unit())
            throw AxiomViolation("morphism unitality, " + source.name() + "→" + target.name(), "1");
        for (int i = 0; i < source.dim(); ++i)
            for (int j = 0; j < source.dim(); ++j) {
                std::vector<K> lhs = map.mat().apply_sparse(source.mul_basis(i, j));
                std::vector<K> rhs = target.mul(map.mat().column(i), map.mat().column(j));
                if (lhs != rhs)
                    throw AxiomViolation("morphism multiplicativity, " + source.name() + "→" + target.name(),
                                         source.space().label(i) + "," + source.space().label(j));
            }
    }
};

// ---------------------------------------------------------------------------
// Actions.

enum class Side { Left, Right };

/// An action of an algebra on a space, stored as the full bilinear map plus
/// cached per-basis matrices.  Left: (a ⊗ x) ↦ a·x; right: (x ⊗ a) ↦ x·a.
template<exact_field K>
class ActionSpec {
    struct Data {
        Algebra<K> algebra;
        VectorSpace space;
        Side side = Side::Left;
        LinearMap<K> action;
        std::vector<Matrix<K>> by; // by[a]: space → space
    };
    std::shared_ptr<const Data> d_;

public:
    ActionSpec() = default;

    static ActionSpec make(Algebra<K> alg, VectorSpace space, Side side,
                           const std::function<SparseVec<K>(int, int)>& act_basis, // (alg idx, space idx)
                           bool verify = true) {
        auto d = std::make_shared<Data>();
        d->algebra = std::move(alg);
        d->space = space;
        d->side = side;
        const int na = d->algebra.dim(), ns = space.dim();
        for (int a = 0; a < na; ++a) {
            Matrix<K> m(ns, ns);
            for (int x = 0; x < ns; ++x)
                for (const auto& [y, c] : act_basis(a, x)) m(y, x) = c;
            d->by.push_back(std::move(m));
        }
        // assemble the full bilinear map; domain ordering matches the side
        VectorSpace dom = side == Side::Left ? tensor_space({d->algebra.space(), space})
                                             : tensor_space({space, d->algebra.space()});
        Matrix<K> full(ns, dom.dim());
        for (int a = 0; a < na; ++a)
            for (int x = 0; x < ns; ++x) {
                int col = side == Side::Left ? a * ns + x : x * na + a;
                for (int y = 0; y < ns; ++y) full(y, col) = d->by[static_cast<std::size_t>(a)](y, x);
            }
        d->action = LinearMap<K>(dom, space, std::move(full));
        ActionSpec s;
        s.d_ = std::move(d);
        if (verify) s.verify_axioms();
        return s;
    }

    static ActionSpec from_matrix(Algebra<K> alg, VectorSpace space, Side side,
                                  const Matrix<K>& full, bool verify = true) {
        const int na = alg.dim(), ns = space.dim();
        if (full.rows() != ns || full.cols() != na * ns) throw Error("action matrix shape mismatch");
        return make(std::move(alg), space, side,
                    [&full, na, ns, side](int a, int x) {
                        int col = side == Side::Left ? a * ns + x : x * na + a;
                        return full.column_sparse(col);
                    },
                    verify);
    }

    const Algebra<K>& algebra() const { return d_->algebra; }
    const VectorSpace& space() const { return d_->space; }
    Side side() const { return d_->side; }
    const LinearMap<K>& action() const { return d_->action; }
    const Matrix<K>& of(int a) const { return d_->by[static_cast<std::size_t>(a)]; }

    SparseVec<K> act_basis(int a, int x) const { return of(a).column_sparse(x); }

    Matrix<K> of_element(const std::vector<K>& a) const {
        Matrix<K> m(space().dim(), space().dim());
        for (int i = 0; i < algebra().dim(); ++i)
            if (!a[static_cast<std::size_t>(i)].is_zero()) m = m + of(i).scaled(a[static_cast<std::size_t>(i)]);
        return m;
    }

    void verify_axioms() const {
        Matrix<K> u = of_element(algebra().unit());
        if (!u.is_identity()) throw AxiomViolation("action unitality", algebra().name());
        for (int a = 0; a < algebra().dim(); ++a)
            for (int b = 0; b < algebra().dim(); ++b) {
                // left: a·(b·x) = (ab)·x ; right: (x·a)·b = x·(ab)
                Matrix<K> lhs = d_->side == Side::Left ? of(a) * of(b) : of(b) * of(a);
                Matrix<K> rhs(space().dim(), space().dim());
                for (const auto& [k, c] : algebra().mul_basis(a, b)) rhs = rhs + of(k).scaled(c);
                if (lhs != rhs)
                    throw AxiomViolation("action associativity",
                                         algebra().space().label(a) + "," + algebra().space().label(b));
            }
    }
};

// ---------------------------------------------------------------------------
// Balanced tensor products.

/// One internal tensor cut: the right action of `over` on the left factor and
/// the left action of `over` on the right factor are identified.
template<exact_field K>
struct CutSpec {
    Algebra<K> over;
    ActionSpec<K> right_of_left; // right action on factor i
    ActionSpec<K> left_of_right; // left action on factor i+1
};

/// Quotient of a k-tensor power by the bimodule-balancing relations
/// span{ x·a ⊗ y − x ⊗ a·y } for every cut.
template<exact_field K>
class BalancedTensorSpace {
    struct Data {
        std::vector<VectorSpace> factors;
        TensorShape shape;
        std::vector<CutSpec<K>> cuts;
        QuotientSpace<K> q;
    };
    std::shared_ptr<const Data> d_;

public:
    BalancedTensorSpace() = default;

    static BalancedTensorSpace make(std::vector<VectorSpace> factors, std::vector<CutSpec<K>> cuts) {
        if (cuts.size() + 1 != factors.size() && !(factors.size() == 1 && cuts.empty()))
            throw Error("balanced tensor: need one cut per adjacent factor pair");
        auto d = std::make_shared<Data>();
        d->factors = std::move(factors);
        for (const auto& f : d->factors) d->shape.dims.push_back(f.dim());
        d->cuts = std::move(cuts);

        VectorSpace ambient = tensor_space(d->factors);
        std::vector<SparseVec<K>> rels;
        const int total = d->shape.size();
        for (std::size_t c = 0; c < d->cuts.size(); ++c) {
            const auto& cut = d->cuts[c];
            if (cut.right_of_left.space().dim() != d->factors[c].dim() ||
                cut.left_of_right.space().dim() != d->factors[c + 1].dim())
                throw Error("cut actions do not match factor spaces");
            for (int a = 0; a < cut.over.dim(); ++a) {
                const Matrix<K>& ra = cut.right_of_left.of(a);
                const Matrix<K>& la = cut.left_of_right.of(a);
                for (int idx = 0; idx < total; ++idx) {
                    std::vector<int> t = d->shape.unflatten(idx);
                    SparseVec<K> gen;
                    int xi = t[c];
                    for (int y = 0; y < ra.rows(); ++y) {
                        if (ra(y, xi).is_zero()) continue;
                        std::vector<int> t2 = t;
                        t2[c] = y;
                        gen.emplace_back(d->shape.flatten(t2), ra(y, xi));
                    }
                    int yi = t[c + 1];
                    for (int y = 0; y < la.rows(); ++y) {
                        if (la(y, yi).is_zero()) continue;
                        std::vector<int> t2 = t;
                        t2[c + 1] = y;
                        gen.emplace_back(d->shape.flatten(t2), -la(y, yi));
                    }
                    sv_canonicalize(gen);
                    if (!gen.empty()) rels.push_back(std::move(gen));
                }
            }
        }
        d->q = quotient_by_sparse(ambient, std::move(rels));
        BalancedTensorSpace b;
        b.d_ = std::move(d);
        return b;
    }

    const std::vector<VectorSpace>& factors() const { return d_->factors; }
    const TensorShape& shape() const { return d_->shape; }
    const std::vector<CutSpec<K>>& cuts() const { return d_->cuts; }
    const QuotientSpace<K>& q() const { return d_->q; }
    const VectorSpace& space() const { return d_->q.space; }
    const VectorSpace& ambient() const { return d_->q.ambient; }
    int dim() const { return d_->q.dim(); }
};

/// A factor together with the actions used on its two sides.
template<exact_field K>
struct BtFactor {
    VectorSpace space;
    std::optional<ActionSpec<K>> left_action;  // used for the cut to the left
    std::optional<ActionSpec<K>> right_action; // used for the cut to the right
};

/// Spec-level entry point: all cuts over the same algebra.
template<exact_field K>
BalancedTensorSpace<K> balanced_tensor(const std::vector<BtFactor<K>>& factors, const Algebra<K>& over) {
    std::vector<VectorSpace> spaces;
    std::vector<CutSpec<K>> cuts;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        spaces.push_back(factors[i].space);
        if (i + 1 < factors.size()) {
            if (!factors[i].right_action || !factors[i + 1].left_action)
                throw ActionMismatch("missing action for tensor cut " + std::to_string(i));
            if (!factors[i].right_action->algebra().same_structure(over) ||
                !factors[i + 1].left_action->algebra().same_structure(over))
                throw ActionMismatch("cut " + std::to_string(i) + " action algebra differs from the base");
            cuts.push_back(CutSpec<K>{over, *factors[i].right_action, *factors[i + 1].left_action});
        }
    }
    return BalancedTensorSpace<K>::make(std::move(spaces), std::move(cuts));
}

} // namespace hopfcyc
