#include "propcalc/linalg.hpp"

#include <algorithm>

namespace propcalc {

bool vec_is_zero(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw input_error("vec_add: size mismatch");
    Vec r = a;
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Vec vec_scaled(const Vec& a, const Rational& c) {
    Vec r = a;
    for (auto& x : r) x *= c;
    return r;
}

int GradedSpace::add_element(const std::string& name, int degree) {
    if (name.empty()) throw input_error("graded space: empty basis name");
    if (index_.count(name)) throw input_error("graded space: duplicate basis name '" + name + "'");
    int idx = dim();
    names_.push_back(name);
    degs_.push_back(degree);
    index_[name] = idx;
    return idx;
}

int GradedSpace::index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw input_error("graded space: unknown basis name '" + name + "'");
    return it->second;
}

std::vector<int> GradedSpace::indices_of_degree(int d) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
        if (degs_[i] == d) out.push_back(i);
    return out;
}

std::vector<int> GradedSpace::degrees_present() const {
    std::vector<int> out = degs_;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

GradedSpace tensor_space(const GradedSpace& a, const GradedSpace& b) {
    GradedSpace t;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            t.add_element(a.name(i) + "|" + b.name(j), a.degree(i) + b.degree(j));
    return t;
}

void LinearMap::set_entry(int row, int col, const Rational& v) {
    if (row < 0 || row >= dst_.dim() || col < 0 || col >= src_.dim())
        throw input_error("linear map: entry index out of range");
    if (dst_.degree(row) != src_.degree(col) + degree_)
        throw input_error("linear map: entry violates degree homogeneity");
    if (v.is_zero())
        entries_.erase({row, col});
    else
        entries_[{row, col}] = v;
}

void LinearMap::add_entry(int row, int col, const Rational& v) {
    set_entry(row, col, entry(row, col) + v);
}

Rational LinearMap::entry(int row, int col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? Rational(0) : it->second;
}

Vec LinearMap::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != src_.dim())
        throw input_error("linear map: vector size mismatch");
    Vec y(dst_.dim(), Rational(0));
    for (const auto& [rc, v] : entries_) {
        if (!x[rc.second].is_zero()) y[rc.first] += v * x[rc.second];
    }
    return y;
}

LinearMap LinearMap::compose(const LinearMap& inner) const {
    if (!(inner.dst_ == src_)) throw input_error("linear map: compose space mismatch");
    LinearMap out(inner.src_, dst_, degree_ + inner.degree_);
    for (const auto& [rc1, v1] : entries_)
        for (const auto& [rc2, v2] : inner.entries_)
            if (rc1.second == rc2.first) out.add_entry(rc1.first, rc2.second, v1 * v2);
    return out;
}

LinearMap LinearMap::scaled(const Rational& c) const {
    LinearMap out(src_, dst_, degree_);
    if (c.is_zero()) return out;
    for (const auto& [rc, v] : entries_) out.entries_[rc] = v * c;
    return out;
}

LinearMap operator+(const LinearMap& a, const LinearMap& b) {
    if (!(a.src_ == b.src_) || !(a.dst_ == b.dst_) || a.degree_ != b.degree_)
        throw input_error("linear map: sum shape mismatch");
    LinearMap out = a;
    for (const auto& [rc, v] : b.entries_) out.add_entry(rc.first, rc.second, v);
    return out;
}

LinearMap operator-(const LinearMap& a, const LinearMap& b) {
    return a + b.scaled(Rational(-1));
}

LinearMap koszul_tensor(const LinearMap& f, const LinearMap& g) {
    GradedSpace src = tensor_space(f.src(), g.src());
    GradedSpace dst = tensor_space(f.dst(), g.dst());
    LinearMap out(src, dst, f.degree() + g.degree());
    int gs = g.src().dim(), gd = g.dst().dim();
    for (const auto& [rcf, vf] : f.entries()) {
        int sgn = koszul_sign(g.degree() * f.src().degree(rcf.second));
        for (const auto& [rcg, vg] : g.entries()) {
            int row = rcf.first * gd + rcg.first;
            int col = rcf.second * gs + rcg.second;
            out.add_entry(row, col, vf * vg * Rational(sgn));
        }
    }
    return out;
}

RrefResult rref(Matrix m) {
    int nrows = static_cast<int>(m.size());
    int ncols = nrows ? static_cast<int>(m[0].size()) : 0;
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < ncols && r < nrows; ++c) {
        int pr = -1;
        for (int i = r; i < nrows; ++i)
            if (!m[i][c].is_zero()) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(m[r], m[pr]);
        Rational inv = Rational(1) / m[r][c];
        for (int j = c; j < ncols; ++j) m[r][j] *= inv;
        for (int i = 0; i < nrows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (int j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

int matrix_rank(const Matrix& m) {
    return static_cast<int>(rref(m).pivot_cols.size());
}

std::optional<Vec> solve_linear(const Matrix& a, const Vec& b) {
    int nrows = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != nrows) throw input_error("solve: rhs size mismatch");
    int ncols = nrows ? static_cast<int>(a[0].size()) : 0;
    Matrix aug = a;
    for (int i = 0; i < nrows; ++i) aug[i].push_back(b[i]);
    RrefResult r = rref(std::move(aug));
    Vec x(ncols, Rational(0));
    for (size_t k = 0; k < r.pivot_cols.size(); ++k) {
        if (r.pivot_cols[k] == ncols) return std::nullopt; // pivot in rhs column
        x[r.pivot_cols[k]] = r.mat[k][ncols];
    }
    return x;
}

std::vector<Vec> kernel_basis(const Matrix& a, int ncols) {
    RrefResult r = rref(a);
    std::vector<bool> is_pivot(ncols, false);
    for (int c : r.pivot_cols) is_pivot[c] = true;
    std::vector<Vec> out;
    for (int c = 0; c < ncols; ++c) {
        if (is_pivot[c]) continue;
        Vec v(ncols, Rational(0));
        v[c] = Rational(1);
        for (size_t k = 0; k < r.pivot_cols.size(); ++k)
            v[r.pivot_cols[k]] = -r.mat[k][c];
        out.push_back(std::move(v));
    }
    return out;
}

ChainComplex::ChainComplex(GradedSpace space, LinearMap d)
    : space_(std::move(space)), d_(std::move(d)) {
    if (!(d_.src() == space_) || !(d_.dst() == space_))
        throw input_error("chain complex: differential must be an endomorphism");
    if (d_.degree() != 1 && d_.degree() != -1)
        throw input_error("chain complex: differential degree must be +1 or -1");
    if (!d_.compose(d_).is_zero())
        throw math_error("chain complex: differential does not square to zero");
}

Homology homology(const ChainComplex& c, int q) {
    const GradedSpace& s = c.space();
    int e = c.d().degree();
    std::vector<int> bq = s.indices_of_degree(q);
    std::vector<int> bq_out = s.indices_of_degree(q + e);
    std::vector<int> bq_in = s.indices_of_degree(q - e);
    int nq = static_cast<int>(bq.size());

    // kernel of d restricted to degree q
    Matrix a(bq_out.size(), Vec(nq, Rational(0)));
    for (int j = 0; j < nq; ++j)
        for (size_t i = 0; i < bq_out.size(); ++i)
            a[i][j] = c.d().entry(bq_out[i], bq[j]);
    std::vector<Vec> cycles = kernel_basis(a, nq);

    // image of d from degree q - e, in degree-q coordinates
    std::vector<Vec> boundaries;
    for (int j : bq_in) {
        Vec col(nq, Rational(0));
        bool nz = false;
        for (int i = 0; i < nq; ++i) {
            col[i] = c.d().entry(bq[i], j);
            nz = nz || !col[i].is_zero();
        }
        if (nz) boundaries.push_back(std::move(col));
    }

    // columns: boundaries first, then cycles; cycle columns that become
    // pivots represent nonzero homology classes
    int ncols = static_cast<int>(boundaries.size() + cycles.size());
    Matrix stacked(nq, Vec(ncols, Rational(0)));
    for (size_t j = 0; j < boundaries.size(); ++j)
        for (int i = 0; i < nq; ++i) stacked[i][j] = boundaries[j][i];
    for (size_t j = 0; j < cycles.size(); ++j)
        for (int i = 0; i < nq; ++i) stacked[i][boundaries.size() + j] = cycles[j][i];
    RrefResult r = rref(stacked);

    Homology h;
    for (int pc : r.pivot_cols) {
        if (pc < static_cast<int>(boundaries.size())) continue;
        const Vec& cyc = cycles[pc - boundaries.size()];
        Vec full(s.dim(), Rational(0));
        for (int i = 0; i < nq; ++i) full[bq[i]] = cyc[i];
        h.representatives.push_back(std::move(full));
        ++h.dim;
    }
    return h;
}

int graded_perm_sign(const std::vector<int>& degs, const std::vector<int>& perm) {
    if (degs.size() != perm.size()) throw input_error("graded perm sign: size mismatch");
    int parity = 0;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j] && (degs[i] % 2 != 0) && (degs[j] % 2 != 0)) ++parity;
    return koszul_sign(parity);
}

int perm_sign(const std::vector<int>& perm) {
    int parity = 0;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++parity;
    return koszul_sign(parity);
}

} // namespace propcalc
