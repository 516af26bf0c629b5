#pragma once

// Exact integer / rational linear algebra over arbitrary-precision numbers:
// Hermite and Smith normal forms, kernels, saturations, lattice indices and
// canonical linear solving.  Everything here is deterministic; no floating
// point is used anywhere.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "conecalc/errors.hpp"

namespace conecalc {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

Rat to_rat(const Int& z);
Int rat_num(const Rat& q);
Int rat_den(const Rat& q);
// Exact conversion; throws InvalidArgument if q is not an integer.
Int rat_to_int(const Rat& q);

// Dense row-major matrix over T (T = Int or Rat).
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, T init = T(0))
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, init) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty()) return Matrix(0, 0);
        Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows(); ++i) {
            if (static_cast<int>(rows[i].size()) != m.cols())
                throw InvalidArgument("ragged rows in matrix literal");
            for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix from_cols(const std::vector<std::vector<T>>& cols) {
        if (cols.empty()) return Matrix(0, 0);
        Matrix m(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
        for (int j = 0; j < m.cols(); ++j) {
            if (static_cast<int>(cols[j].size()) != m.rows())
                throw InvalidArgument("ragged columns in matrix literal");
            for (int i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    std::vector<T> row(int i) const {
        std::vector<T> r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    std::vector<T> col(int j) const {
        std::vector<T> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_row(int i, const std::vector<T>& r) {
        for (int j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
    }
    void set_col(int j, const std::vector<T>& c) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }
    // Matrix applied to a column vector.
    std::vector<T> apply(const std::vector<T>& x) const {
        if (static_cast<int>(x.size()) != cols_) throw InvalidArgument("apply: size mismatch");
        std::vector<T> y(rows_, T(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw InvalidArgument("matmul: size mismatch");
        Matrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        Matrix r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j) - o(i, j);
        return r;
    }
    bool is_zero() const {
        for (const T& v : data_) if (v != 0) return false;
        return true;
    }

private:
    int rows_, cols_;
    std::vector<T> data_;
};

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

RatMat to_rat(const IntMat& m);
// Exact conversion; throws InvalidArgument on non-integer entries.
IntMat to_int(const RatMat& m);
std::string to_string(const IntMat& m);
std::string to_string(const RatMat& m);

// ---------------------------------------------------------------------------
// Normal forms

// Row-style Hermite normal form: H = U * M with U unimodular, H in row echelon
// form with positive pivots and entries above each pivot reduced into
// [0, pivot).  Zero rows come last.  H is the canonical representative of the
// row space of M.
struct HnfResult {
    IntMat H;
    IntMat U;
    int rank = 0;
    std::vector<int> pivot_cols;  // size == rank, strictly increasing
};
HnfResult hnf(const IntMat& M);

// Smith normal form: S = U * M * V diagonal with d_1 | d_2 | ... | d_r > 0.
struct SnfResult {
    IntMat S;
    IntMat U;
    IntMat V;
    std::vector<Int> divisors;  // the nonzero diagonal entries
};
SnfResult snf(const IntMat& M);

// ---------------------------------------------------------------------------
// Lattice utilities.  Lattices are given by generator matrices whose COLUMNS
// are the generators.

// Basis of {x in Z^n : M x = 0}, returned as columns; the kernel is saturated
// by construction.  Deterministic canonical basis.
IntMat kernel(const IntMat& M);

// Canonical basis (columns) of the lattice generated by the columns of G:
// unique column-HNF shaped basis of the Z-span.
IntMat lattice_basis(const IntMat& G);
RatMat lattice_basis(const RatMat& G);

// Canonical basis (columns) of Z^n  ∩  Q-span(columns of G).
IntMat saturation(const IntMat& G);

// Index of the Z-span of G inside its saturation; 1 iff saturated.
Int index_in_saturation(const IntMat& G);

// Rank of the column span.
int rank(const IntMat& M);
int rank(const RatMat& M);

// Index of Z-span(sub) inside Z-span(super) for lattices given by generator
// columns.  Throws NotASublattice if some generator of sub is not an integral
// combination of super's generators.  Returns nullopt ("infinite") when the
// rank of sub is strictly smaller than the rank of super.
std::optional<Int> sublattice_index(const IntMat& sub, const IntMat& super);
std::optional<Int> sublattice_index(const RatMat& sub, const RatMat& super);

// v / gcd(v), sign pattern preserved.  Throws ZeroVector on v == 0.
IntVec primitive(const IntVec& v);
// Scale a nonzero rational vector to the primitive integer vector on the same
// ray (positive scaling only).
IntVec primitive_direction(const RatVec& v);

enum class SolveMode { Rational, Integral };

// Canonical solution of A x = b (A rational, m x n).  The solution is pinned
// by the Hermite form of the cleared-denominator system: free coordinates of
// the transformed system are set to zero, making the output deterministic.
// Returns nullopt when no solution exists in the requested mode.
std::optional<RatVec> solve_linear(const RatMat& A, const RatVec& b, SolveMode mode);

// Projection Z^n -> Z^(n-r) with kernel exactly the saturated sublattice
// spanned by the columns of S (a basis).  lift is a right inverse of proj
// (proj * lift = identity).  Throws NotSaturated if S is not saturated and
// InvalidArgument if its columns are dependent.
struct QuotientProjection {
    IntMat proj;
    IntMat lift;
    int quotient_rank = 0;
};
QuotientProjection quotient_projection(int n, const IntMat& S);

// Determinant via fraction-free (Bareiss) elimination.
Int det(const IntMat& M);
Rat det(const RatMat& M);

// Inverse of a nonsingular rational matrix (exact Gauss-Jordan).
RatMat inverse(const RatMat& M);
// Inverse of a unimodular integer matrix (integer entries guaranteed).
IntMat inverse_unimodular(const IntMat& U);

// lcm of denominators of all entries (>= 1).
Int denominator_lcm(const RatMat& M);
Int denominator_lcm(const RatVec& v);

// Helpers shared by higher layers.
RatVec apply_rat(const IntMat& M, const RatVec& x);
RatVec scale(const Rat& c, const RatVec& x);
RatVec add(const RatVec& a, const RatVec& b);
RatVec sub(const RatVec& a, const RatVec& b);
bool is_zero(const RatVec& v);
bool is_zero(const IntVec& v);
Rat dot_product(const RatVec& a, const RatVec& b);

}  // namespace conecalc
