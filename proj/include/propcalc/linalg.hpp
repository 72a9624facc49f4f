#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "propcalc/rational.hpp"

namespace propcalc {

using Vec = std::vector<Rational>;
using Matrix = std::vector<std::vector<Rational>>; // row-major

bool vec_is_zero(const Vec& v);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_scaled(const Vec& a, const Rational& c);

// Finite-dimensional graded vector space with a named, ordered basis.
class GradedSpace {
  public:
    GradedSpace() = default;

    int add_element(const std::string& name, int degree);

    int dim() const { return static_cast<int>(names_.size()); }
    int degree(int i) const { return degs_.at(i); }
    const std::string& name(int i) const { return names_.at(i); }
    int index(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) > 0; }

    std::vector<int> indices_of_degree(int d) const;
    std::vector<int> degrees_present() const; // sorted, unique

    friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
        return a.names_ == b.names_ && a.degs_ == b.degs_;
    }

  private:
    std::vector<std::string> names_;
    std::vector<int> degs_;
    std::map<std::string, int> index_;
};

// basis names of the tensor product are "a|b"
GradedSpace tensor_space(const GradedSpace& a, const GradedSpace& b);

// Sparse degree-homogeneous linear map between graded spaces.
// Entries are keyed (dst index, src index).
class LinearMap {
  public:
    LinearMap() = default;
    LinearMap(GradedSpace src, GradedSpace dst, int degree)
        : src_(std::move(src)), dst_(std::move(dst)), degree_(degree) {}

    const GradedSpace& src() const { return src_; }
    const GradedSpace& dst() const { return dst_; }
    int degree() const { return degree_; }

    void set_entry(int row, int col, const Rational& v);
    void add_entry(int row, int col, const Rational& v);
    Rational entry(int row, int col) const;
    const std::map<std::pair<int, int>, Rational>& entries() const { return entries_; }

    bool is_zero() const { return entries_.empty(); }

    Vec apply(const Vec& x) const;
    LinearMap compose(const LinearMap& inner) const; // (*this) after inner
    LinearMap scaled(const Rational& c) const;

    friend LinearMap operator+(const LinearMap& a, const LinearMap& b);
    friend LinearMap operator-(const LinearMap& a, const LinearMap& b);
    friend bool operator==(const LinearMap& a, const LinearMap& b) {
        return a.degree_ == b.degree_ && a.src_ == b.src_ && a.dst_ == b.dst_ &&
               a.entries_ == b.entries_;
    }

  private:
    GradedSpace src_, dst_;
    int degree_ = 0;
    std::map<std::pair<int, int>, Rational> entries_;
};

// (f (x) g)(x (x) y) = (-1)^{deg(g) * deg(x)} f(x) (x) g(y)
LinearMap koszul_tensor(const LinearMap& f, const LinearMap& g);

// Row-reduce in place semantics: returns reduced matrix and pivot columns.
// Pivots are chosen left to right (lexicographic column order), rows in
// order of first nonzero entry. Fully deterministic, exact arithmetic.
struct RrefResult {
    Matrix mat;
    std::vector<int> pivot_cols;
};
RrefResult rref(Matrix m);

int matrix_rank(const Matrix& m);

// Solve A x = b. Returns the canonical solution with all free variables
// set to zero, or nullopt if inconsistent.
std::optional<Vec> solve_linear(const Matrix& a, const Vec& b);

// Basis of the null space, one vector per free column, deterministic order.
std::vector<Vec> kernel_basis(const Matrix& a, int ncols);

// Differential on a graded space, degree +1 or -1; d.d = 0 checked.
class ChainComplex {
  public:
    ChainComplex(GradedSpace space, LinearMap d);
    const GradedSpace& space() const { return space_; }
    const LinearMap& d() const { return d_; }

  private:
    GradedSpace space_;
    LinearMap d_;
};

struct Homology {
    int dim = 0;
    std::vector<Vec> representatives; // cycles spanning homology, full-space coords
};
Homology homology(const ChainComplex& c, int q);

// Koszul sign of permuting homogeneous factors of the given degrees;
// perm[i] is the new position of factor i. Only odd-odd inversions count.
int graded_perm_sign(const std::vector<int>& degs, const std::vector<int>& perm);

// plain permutation parity sign
int perm_sign(const std::vector<int>& perm);

} // namespace propcalc
