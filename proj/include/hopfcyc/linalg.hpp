#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace hopfcyc {

// Finite-dimensional exact linear algebra: spaces with labelled bases, maps
// as dense matrices, and quotient spaces with deterministic sections.  All
// pivoting is leftmost-nonzero in basis order so that every downstream
// operator matrix is reproducible bit for bit.

/// A k-vector space given by a labelled ordered basis.
class VectorSpace {
    int dim_ = 0;
    std::shared_ptr<const std::vector<std::string>> labels_;

public:
    VectorSpace() = default;
    VectorSpace(int dim, std::vector<std::string> labels) : dim_(dim) {
        if (static_cast<int>(labels.size()) != dim)
            throw Error("basis label count does not match dimension");
        std::set<std::string> seen(labels.begin(), labels.end());
        if (static_cast<int>(seen.size()) != dim)
            throw Error("basis labels must be distinct");
        labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
    }

    static VectorSpace indexed(int dim, const std::string& stem) {
        std::vector<std::string> ls;
        ls.reserve(dim);
        for (int i = 0; i < dim; ++i) ls.push_back(stem + std::to_string(i));
        return VectorSpace(dim, std::move(ls));
    }

    int dim() const { return dim_; }
    const std::string& label(int i) const { return (*labels_)[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& labels() const { return *labels_; }
};

/// Shape of an iterated k-tensor product; the first factor varies slowest.
struct TensorShape {
    std::vector<int> dims;

    int size() const {
        long long s = 1;
        for (int d : dims) s *= d;
        return static_cast<int>(s);
    }
    int flatten(std::span<const int> tuple) const {
        int idx = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + tuple[i];
        return idx;
    }
    std::vector<int> unflatten(int idx) const {
        std::vector<int> t(dims.size());
        for (std::size_t i = dims.size(); i-- > 0;) {
            t[i] = idx % dims[i];
            idx /= dims[i];
        }
        return t;
    }
};

inline VectorSpace tensor_space(const std::vector<VectorSpace>& factors) {
    if (factors.empty()) throw Error("tensor of zero factors");
    TensorShape sh;
    for (const auto& f : factors) sh.dims.push_back(f.dim());
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(sh.size()));
    for (int idx = 0; idx < sh.size(); ++idx) {
        auto t = sh.unflatten(idx);
        std::string l = factors[0].label(t[0]);
        for (std::size_t i = 1; i < t.size(); ++i) l += "⊗" + factors[i].label(t[i]);
        labels.push_back(std::move(l));
    }
    return VectorSpace(sh.size(), std::move(labels));
}

// ---------------------------------------------------------------------------
// Sparse vectors: sorted (index, coefficient) pairs without zeros.

template<exact_field K>
using SparseVec = std::vector<std::pair<int, K>>;

template<exact_field K>
void sv_canonicalize(SparseVec<K>& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec<K> out;
    out.reserve(v.size());
    for (auto& [i, c] : v) {
        if (!out.empty() && out.back().first == i) out.back().second += c;
        else out.emplace_back(i, c);
    }
    std::erase_if(out, [](const auto& e) { return e.second.is_zero(); });
    v = std::move(out);
}

/// dst += coeff * src  (both canonical; result canonical)
template<exact_field K>
void sv_axpy(SparseVec<K>& dst, const K& coeff, const SparseVec<K>& src) {
    if (coeff.is_zero() || src.empty()) return;
    SparseVec<K> out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(dst[i++]);
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            K c = coeff * src[j].second;
            if (!c.is_zero()) out.emplace_back(src[j].first, std::move(c));
            ++j;
        } else {
            K c = dst[i].second + coeff * src[j].second;
            if (!c.is_zero()) out.emplace_back(dst[i].first, std::move(c));
            ++i; ++j;
        }
    }
    dst = std::move(out);
}

template<exact_field K>
std::vector<K> sv_to_dense(const SparseVec<K>& v, int dim) {
    std::vector<K> d(static_cast<std::size_t>(dim), K(0));
    for (const auto& [i, c] : v) d[static_cast<std::size_t>(i)] = c;
    return d;
}

template<exact_field K>
SparseVec<K> sv_from_dense(const std::vector<K>& d) {
    SparseVec<K> v;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!d[i].is_zero()) v.emplace_back(static_cast<int>(i), d[i]);
    return v;
}

// ---------------------------------------------------------------------------
// Dense matrices.

template<exact_field K>
class Matrix {
    int rows_ = 0, cols_ = 0;
    std::vector<K> a_;

public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, K(0)) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = K(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    K& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const K& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](const K& x) { return x.is_zero(); });
    }
    bool is_identity() const {
        if (rows_ != cols_) return false;
        return *this == identity(rows_);
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw Error("matrix product shape mismatch");
        Matrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const K& x = (*this)(i, k);
                if (x.is_zero()) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    const K& y = o(k, j);
                    if (!y.is_zero()) r(i, j) += x * y;
                }
            }
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix sum shape mismatch");
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix difference shape mismatch");
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }
    Matrix scaled(const K& c) const {
        Matrix r = *this;
        for (auto& x : r.a_) x *= c;
        return r;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw Error("matrix apply shape mismatch");
        std::vector<K> r(static_cast<std::size_t>(rows_), K(0));
        for (int j = 0; j < cols_; ++j) {
            if (v[static_cast<std::size_t>(j)].is_zero()) continue;
            for (int i = 0; i < rows_; ++i) {
                const K& m = (*this)(i, j);
                if (!m.is_zero()) r[static_cast<std::size_t>(i)] += m * v[static_cast<std::size_t>(j)];
            }
        }
        return r;
    }
    std::vector<K> apply_sparse(const SparseVec<K>& v) const {
        std::vector<K> r(static_cast<std::size_t>(rows_), K(0));
        for (const auto& [j, c] : v)
            for (int i = 0; i < rows_; ++i) {
                const K& m = (*this)(i, j);
                if (!m.is_zero()) r[static_cast<std::size_t>(i)] += m * c;
            }
        return r;
    }

    std::vector<K> column(int j) const {
        std::vector<K> v(static_cast<std::size_t>(rows_), K(0));
        for (int i = 0; i < rows_; ++i) v[static_cast<std::size_t>(i)] = (*this)(i, j);
        return v;
    }
    SparseVec<K> column_sparse(int j) const {
        SparseVec<K> v;
        for (int i = 0; i < rows_; ++i)
            if (!(*this)(i, j).is_zero()) v.emplace_back(i, (*this)(i, j));
        return v;
    }
    void set_column(int j, const std::vector<K>& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[static_cast<std::size_t>(i)];
    }

    Matrix pow(int e) const {
        if (rows_ != cols_) throw Error("power of non-square matrix");
        Matrix acc = identity(rows_);
        for (int i = 0; i < e; ++i) acc = acc * *this;
        return acc;
    }
};

// ---------------------------------------------------------------------------
// Gauss-Jordan reduction, kernels, inverses.  Pivot choice is always the
// first row with a nonzero entry in the leftmost unresolved column.

template<exact_field K>
struct RrefResult {
    Matrix<K> r;
    std::vector<int> pivot_cols;
    int rank() const { return static_cast<int>(pivot_cols.size()); }
};

template<exact_field K>
RrefResult<K> rref(Matrix<K> m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int sel = -1;
        for (int i = row; i < m.rows(); ++i)
            if (!m(i, col).is_zero()) { sel = i; break; }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(sel, j));
        K inv = m(row, col).inv();
        for (int j = 0; j < m.cols(); ++j) m(row, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            K f = m(i, col);
            for (int j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

template<exact_field K>
int rank(const Matrix<K>& m) {
    return rref(m).rank();
}

/// Kernel basis in reduced echelon form, leading coefficients 1, ordered by
/// leading index.
template<exact_field K>
std::vector<std::vector<K>> kernel_basis(const Matrix<K>& m) {
    RrefResult<K> rr = rref(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (int p : rr.pivot_cols) is_pivot[static_cast<std::size_t>(p)] = true;

    Matrix<K> gens(m.cols() == 0 ? 0 : m.cols() - rr.rank(), m.cols());
    int g = 0;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        gens(g, f) = K(1);
        for (int r = 0; r < rr.rank(); ++r) gens(g, rr.pivot_cols[static_cast<std::size_t>(r)]) = -rr.r(r, f);
        ++g;
    }
    RrefResult<K> canon = rref(std::move(gens));
    std::vector<std::vector<K>> out;
    for (int r = 0; r < canon.rank(); ++r) {
        std::vector<K> v(static_cast<std::size_t>(m.cols()), K(0));
        for (int j = 0; j < m.cols(); ++j) v[static_cast<std::size_t>(j)] = canon.r(r, j);
        out.push_back(std::move(v));
    }
    return out;
}

template<exact_field K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    int n = m.rows();
    Matrix<K> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = K(1);
    }
    RrefResult<K> rr = rref(std::move(aug));
    if (rr.rank() != n || rr.pivot_cols[static_cast<std::size_t>(n - 1)] != n - 1) return std::nullopt;
    Matrix<K> inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = rr.r(i, n + j);
    return inv;
}

// ---------------------------------------------------------------------------
// Linear maps between labelled spaces.

template<exact_field K>
class LinearMap {
    VectorSpace domain_, codomain_;
    Matrix<K> mat_; // codomain.dim × domain.dim

public:
    LinearMap() = default;
    LinearMap(VectorSpace dom, VectorSpace cod, Matrix<K> m)
        : domain_(std::move(dom)), codomain_(std::move(cod)), mat_(std::move(m)) {
        if (mat_.rows() != codomain_.dim() || mat_.cols() != domain_.dim())
            throw Error("linear map shape mismatch");
    }

    static LinearMap identity(const VectorSpace& s) {
        return LinearMap(s, s, Matrix<K>::identity(s.dim()));
    }
    static LinearMap zero(const VectorSpace& dom, const VectorSpace& cod) {
        return LinearMap(dom, cod, Matrix<K>(cod.dim(), dom.dim()));
    }

    const VectorSpace& domain() const { return domain_; }
    const VectorSpace& codomain() const { return codomain_; }
    const Matrix<K>& mat() const { return mat_; }
    Matrix<K>& mat() { return mat_; }

    std::vector<K> apply(const std::vector<K>& v) const { return mat_.apply(v); }

    /// Composition (f * g)(x) = f(g(x)).
    friend LinearMap operator*(const LinearMap& f, const LinearMap& g) {
        if (g.codomain_.dim() != f.domain_.dim()) throw Error("composition: inner spaces do not match");
        return LinearMap(g.domain_, f.codomain_, f.mat_ * g.mat_);
    }
    friend LinearMap operator+(const LinearMap& f, const LinearMap& g) {
        return LinearMap(f.domain_, f.codomain_, f.mat_ + g.mat_);
    }
    friend LinearMap operator-(const LinearMap& f, const LinearMap& g) {
        return LinearMap(f.domain_, f.codomain_, f.mat_ - g.mat_);
    }
    LinearMap scaled(const K& c) const { return LinearMap(domain_, codomain_, mat_.scaled(c)); }

    bool operator==(const LinearMap& o) const { return mat_ == o.mat_; }
    bool operator!=(const LinearMap& o) const { return mat_ != o.mat_; }
};

/// (rank, kernel basis) of a map, kernel in canonical reduced echelon form.
template<exact_field K>
std::pair<int, std::vector<std::vector<K>>> rank_kernel(const LinearMap<K>& f) {
    auto ker = kernel_basis(f.mat());
    int rk = f.domain().dim() - static_cast<int>(ker.size());
    return {rk, std::move(ker)};
}

/// dim ker(d_out) − rank(d_in), with the complex property checked exactly.
template<exact_field K>
int homology_at(const LinearMap<K>& d_in, const LinearMap<K>& d_out) {
    if (!(d_out * d_in).mat().is_zero())
        throw NotAComplex("homology_at: d_out ∘ d_in ≠ 0");
    int ker = d_out.domain().dim() - rank(d_out.mat());
    return ker - rank(d_in.mat());
}

// ---------------------------------------------------------------------------
// Sparse echelon bases, used to reduce the large balancing-relation spans.

template<exact_field K>
class SparseEchelon {
    std::map<int, SparseVec<K>> rows_; // pivot index → row with leading coefficient 1

public:
    /// Fully reduce v against the current rows.
    void reduce(SparseVec<K>& v) const {
        bool changed = true;
        while (changed && !v.empty()) {
            changed = false;
            for (std::size_t i = 0; i < v.size(); ++i) {
                auto it = rows_.find(v[i].first);
                if (it != rows_.end()) {
                    K c = -v[i].second;
                    sv_axpy(v, c, it->second);
                    changed = true;
                    break;
                }
            }
        }
    }

    /// Insert v into the span; returns true if the rank grew.
    bool insert(SparseVec<K> v) {
        reduce(v);
        if (v.empty()) return false;
        K lead_inv = v.front().second.inv();
        for (auto& [i, c] : v) c *= lead_inv;
        int pivot = v.front().first;
        rows_.emplace(pivot, std::move(v));
        return true;
    }

    /// Back-substitute so the rows form the canonical RREF of the span.
    void make_reduced() {
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            SparseVec<K> head{{it->first, K(1)}};
            SparseVec<K> tail(it->second.begin() + 1, it->second.end());
            bool changed = true;
            while (changed && !tail.empty()) {
                changed = false;
                for (std::size_t i = 0; i < tail.size(); ++i) {
                    auto jt = rows_.find(tail[i].first);
                    if (jt != rows_.end() && jt->first != it->first) {
                        K c = -tail[i].second;
                        sv_axpy(tail, c, jt->second);
                        changed = true;
                        break;
                    }
                }
            }
            SparseVec<K> full = std::move(head);
            for (auto& e : tail) full.push_back(std::move(e));
            sv_canonicalize(full);
            it->second = std::move(full);
        }
    }

    int rank() const { return static_cast<int>(rows_.size()); }
    const std::map<int, SparseVec<K>>& rows() const { return rows_; }
};

// ---------------------------------------------------------------------------
// Quotient spaces.

/// An explicit quotient of an ambient space, with a chosen section.  The
/// quotient basis consists of the ambient basis vectors at the non-pivot
/// positions of the reduced relation span.
template<exact_field K>
struct QuotientSpace {
    VectorSpace ambient;
    VectorSpace space;
    LinearMap<K> projection; // ambient → space
    LinearMap<K> section;    // space → ambient
    std::vector<SparseVec<K>> relations; // the generating relation vectors
    std::vector<int> kept;               // ambient indices of the quotient basis

    int dim() const { return space.dim(); }

    std::vector<K> project_sparse(const SparseVec<K>& v) const {
        std::vector<K> out(static_cast<std::size_t>(space.dim()), K(0));
        const Matrix<K>& p = projection.mat();
        for (const auto& [j, c] : v)
            for (int i = 0; i < p.rows(); ++i) {
                const K& m = p(i, j);
                if (!m.is_zero()) out[static_cast<std::size_t>(i)] += m * c;
            }
        return out;
    }
};

template<exact_field K>
QuotientSpace<K> quotient_by_sparse(const VectorSpace& ambient, std::vector<SparseVec<K>> relations) {
    SparseEchelon<K> ech;
    for (const auto& r : relations) {
        for (const auto& [i, c] : r)
            if (i < 0 || i >= ambient.dim()) throw Error("relation vector outside ambient space");
        ech.insert(r);
    }
    ech.make_reduced();

    std::vector<bool> is_pivot(static_cast<std::size_t>(ambient.dim()), false);
    for (const auto& [p, row] : ech.rows()) is_pivot[static_cast<std::size_t>(p)] = true;

    std::vector<int> kept;
    std::vector<std::string> labels;
    for (int i = 0; i < ambient.dim(); ++i)
        if (!is_pivot[static_cast<std::size_t>(i)]) {
            kept.push_back(i);
            labels.push_back(ambient.label(i));
        }
    std::vector<int> pos(static_cast<std::size_t>(ambient.dim()), -1);
    for (std::size_t q = 0; q < kept.size(); ++q) pos[static_cast<std::size_t>(kept[q])] = static_cast<int>(q);

    VectorSpace qspace(static_cast<int>(kept.size()), std::move(labels));

    Matrix<K> proj(qspace.dim(), ambient.dim());
    for (int q = 0; q < qspace.dim(); ++q) proj(q, kept[static_cast<std::size_t>(q)]) = K(1);
    for (const auto& [p, row] : ech.rows())
        for (std::size_t i = 1; i < row.size(); ++i)
            proj(pos[static_cast<std::size_t>(row[i].first)], p) = -row[i].second;

    Matrix<K> sect(ambient.dim(), qspace.dim());
    for (int q = 0; q < qspace.dim(); ++q) sect(kept[static_cast<std::size_t>(q)], q) = K(1);

    return QuotientSpace<K>{ambient, qspace,
                            LinearMap<K>(ambient, qspace, std::move(proj)),
                            LinearMap<K>(qspace, ambient, std::move(sect)),
                            std::move(relations), std::move(kept)};
}

/// "3·u⊗x − 1/2·x⊗u" style rendering, for witnesses and reports.
template<exact_field K>
std::string format_vector(const VectorSpace& sp, const std::vector<K>& v) {
    std::string out;
    for (int i = 0; i < sp.dim(); ++i) {
        const K& c = v[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (!(c == K(1))) out += c.str() + "·";
        out += sp.label(i);
    }
    return out.empty() ? "0" : out;
}

template<exact_field K>
QuotientSpace<K> quotient_by(const VectorSpace& ambient, const std::vector<std::vector<K>>& relations) {
    std::vector<SparseVec<K>> sparse;
    sparse.reserve(relations.size());
    for (const auto& r : relations) {
        if (static_cast<int>(r.size()) != ambient.dim())
            throw Error("relation vector outside ambient space");
        sparse.push_back(sv_from_dense(r));
    }
    return quotient_by_sparse(ambient, std::move(sparse));
}

} // namespace hopfcyc
