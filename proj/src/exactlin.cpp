#include "conecalc/exactlin.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace conecalc {

Rat to_rat(const Int& z) { return Rat(z); }
Int rat_num(const Rat& q) { return numerator(q); }
Int rat_den(const Rat& q) { return denominator(q); }

Int rat_to_int(const Rat& q) {
    if (denominator(q) != 1) throw InvalidArgument("expected integer, got " + q.str());
    return numerator(q);
}

RatMat to_rat(const IntMat& m) {
    RatMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

IntMat to_int(const RatMat& m) {
    IntMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = rat_to_int(m(i, j));
    return r;
}

template <class T>
static std::string render(const Matrix<T>& m) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < m.rows(); ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    }
    os << "]";
    return os.str();
}
std::string to_string(const IntMat& m) { return render(m); }
std::string to_string(const RatMat& m) { return render(m); }

// ---------------------------------------------------------------------------
// Hermite normal form

HnfResult hnf(const IntMat& M) {
    HnfResult res;
    res.H = M;
    res.U = IntMat::identity(M.rows());
    IntMat& H = res.H;
    IntMat& U = res.U;
    const int m = M.rows(), n = M.cols();

    auto row_sub = [&](int dst, int src, const Int& q) {
        if (q == 0) return;
        for (int j = 0; j < n; ++j) H(dst, j) -= q * H(src, j);
        for (int j = 0; j < m; ++j) U(dst, j) -= q * U(src, j);
    };
    auto row_swap = [&](int a, int b) {
        if (a == b) return;
        for (int j = 0; j < n; ++j) std::swap(H(a, j), H(b, j));
        for (int j = 0; j < m; ++j) std::swap(U(a, j), U(b, j));
    };
    auto row_negate = [&](int i) {
        for (int j = 0; j < n; ++j) H(i, j) = -H(i, j);
        for (int j = 0; j < m; ++j) U(i, j) = -U(i, j);
    };

    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        // Reduce column c below row r until a single nonzero remains.
        for (;;) {
            int best = -1;
            for (int i = r; i < m; ++i) {
                if (H(i, c) == 0) continue;
                if (best < 0 || abs(H(i, c)) < abs(H(best, c))) best = i;
            }
            if (best < 0) break;  // column is zero below r
            row_swap(r, best);
            bool cleared = true;
            for (int i = r + 1; i < m; ++i) {
                if (H(i, c) == 0) continue;
                Int q = H(i, c) / H(r, c);  // truncated division is fine here
                row_sub(i, r, q);
                if (H(i, c) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (H(r, c) == 0) continue;
        if (H(r, c) < 0) row_negate(r);
        // Reduce the entries above the pivot into [0, pivot).
        for (int i = 0; i < r; ++i) {
            Int q = H(i, c) / H(r, c);
            if (H(i, c) - q * H(r, c) < 0) q -= 1;  // floor division
            row_sub(i, r, q);
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

// ---------------------------------------------------------------------------
// Smith normal form

SnfResult snf(const IntMat& M) {
    SnfResult res;
    res.S = M;
    res.U = IntMat::identity(M.rows());
    res.V = IntMat::identity(M.cols());
    IntMat& S = res.S;
    IntMat& U = res.U;
    IntMat& V = res.V;
    const int m = M.rows(), n = M.cols();

    auto row_sub = [&](int dst, int src, const Int& q) {
        if (q == 0) return;
        for (int j = 0; j < n; ++j) S(dst, j) -= q * S(src, j);
        for (int j = 0; j < m; ++j) U(dst, j) -= q * U(src, j);
    };
    auto col_sub = [&](int dst, int src, const Int& q) {
        if (q == 0) return;
        for (int i = 0; i < m; ++i) S(i, dst) -= q * S(i, src);
        for (int i = 0; i < n; ++i) V(i, dst) -= q * V(i, src);
    };
    auto row_swap = [&](int a, int b) {
        if (a == b) return;
        for (int j = 0; j < n; ++j) std::swap(S(a, j), S(b, j));
        for (int j = 0; j < m; ++j) std::swap(U(a, j), U(b, j));
    };
    auto col_swap = [&](int a, int b) {
        if (a == b) return;
        for (int i = 0; i < m; ++i) std::swap(S(i, a), S(i, b));
        for (int i = 0; i < n; ++i) std::swap(V(i, a), V(i, b));
    };
    auto row_negate = [&](int i) {
        for (int j = 0; j < n; ++j) S(i, j) = -S(i, j);
        for (int j = 0; j < m; ++j) U(i, j) = -U(i, j);
    };

    const int t_max = std::min(m, n);
    for (int t = 0; t < t_max; ++t) {
        // Find the nonzero entry of minimal absolute value in the working block.
        for (;;) {
            int pi = -1, pj = -1;
            for (int i = t; i < m; ++i)
                for (int j = t; j < n; ++j) {
                    if (S(i, j) == 0) continue;
                    if (pi < 0 || abs(S(i, j)) < abs(S(pi, pj))) { pi = i; pj = j; }
                }
            if (pi < 0) goto done;  // block is zero
            row_swap(t, pi);
            col_swap(t, pj);
            bool clean = true;
            for (int i = t + 1; i < m; ++i) {
                Int q = S(i, t) / S(t, t);
                row_sub(i, t, q);
                if (S(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                Int q = S(t, j) / S(t, t);
                col_sub(j, t, q);
                if (S(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // Enforce divisibility of the remaining block by S(t,t).
            bool divisible = true;
            for (int i = t + 1; i < m && divisible; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        row_sub(t, i, Int(-1));  // fold row i into row t, retry
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (S(t, t) < 0) row_negate(t);
    }
done:
    for (int t = 0; t < t_max; ++t)
        if (S(t, t) != 0) res.divisors.push_back(S(t, t));
    return res;
}

// ---------------------------------------------------------------------------
// Kernels, saturations, indices

IntMat kernel(const IntMat& M) {
    // Left kernel of M^T equals {x : M x = 0}; rows of U aligned with zero
    // rows of H = U * M^T give a saturated basis.
    HnfResult h = hnf(M.transpose());
    const int n = M.cols();
    std::vector<std::vector<Int>> gens;
    for (int i = h.rank; i < n; ++i) gens.push_back(h.U.row(i));
    IntMat K = gens.empty() ? IntMat(n, 0) : IntMat::from_cols(gens);
    return lattice_basis(K);
}

IntMat lattice_basis(const IntMat& G) {
    if (G.cols() == 0) return IntMat(G.rows(), 0);
    HnfResult h = hnf(G.transpose());
    std::vector<std::vector<Int>> rows;
    for (int i = 0; i < h.rank; ++i) rows.push_back(h.H.row(i));
    if (rows.empty()) return IntMat(G.rows(), 0);
    return IntMat::from_rows(rows).transpose();
}

RatMat lattice_basis(const RatMat& G) {
    if (G.cols() == 0) return RatMat(G.rows(), 0);
    Int m = denominator_lcm(G);
    IntMat scaled(G.rows(), G.cols());
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) scaled(i, j) = rat_to_int(G(i, j) * Rat(m));
    IntMat B = lattice_basis(scaled);
    RatMat out(B.rows(), B.cols());
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j) out(i, j) = Rat(B(i, j), m);
    return out;
}

IntMat saturation(const IntMat& G) {
    // sat(L) = (L^perp)^perp where perp is the integral orthogonal complement.
    IntMat K = kernel(G.transpose());
    return kernel(K.transpose());
}

Int index_in_saturation(const IntMat& G) {
    SnfResult s = snf(G);
    Int idx = 1;
    for (const Int& d : s.divisors) idx *= d;
    return idx;
}

int rank(const IntMat& M) { return hnf(M).rank; }

int rank(const RatMat& M) {
    Int m = denominator_lcm(M);
    IntMat scaled(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) scaled(i, j) = rat_to_int(M(i, j) * Rat(m));
    return rank(scaled);
}

std::optional<Int> sublattice_index(const IntMat& sub, const IntMat& super) {
    return sublattice_index(to_rat(sub), to_rat(super));
}

std::optional<Int> sublattice_index(const RatMat& sub, const RatMat& super) {
    if (sub.rows() != super.rows()) throw InvalidArgument("sublattice_index: ambient mismatch");
    RatMat B = lattice_basis(super);  // basis of Z-span(super), rank r columns
    const int r = B.cols();
    // Express each generator of sub integrally in the basis B.
    IntMat T(r, sub.cols());
    for (int j = 0; j < sub.cols(); ++j) {
        auto x = solve_linear(B, sub.col(j), SolveMode::Integral);
        if (!x) throw NotASublattice("generator " + std::to_string(j) +
                                     " is not in the super lattice");
        for (int i = 0; i < r; ++i) T(i, j) = rat_to_int((*x)[i]);
    }
    if (rank(T) < r) return std::nullopt;  // infinite index
    SnfResult s = snf(T);
    Int idx = 1;
    for (const Int& d : s.divisors) idx *= d;
    return idx;
}

IntVec primitive(const IntVec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    if (g == 0) throw ZeroVector("primitive of zero vector");
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
    return out;
}

IntVec primitive_direction(const RatVec& v) {
    Int m = denominator_lcm(v);
    IntVec scaled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = rat_to_int(v[i] * Rat(m));
    return primitive(scaled);
}

// ---------------------------------------------------------------------------
// Canonical linear solving

std::optional<RatVec> solve_linear(const RatMat& A, const RatVec& b, SolveMode mode) {
    if (static_cast<int>(b.size()) != A.rows()) throw InvalidArgument("solve_linear: size mismatch");
    const int m = A.rows(), n = A.cols();
    // Clear denominators row by row (scaling an equation does not change the
    // solution set, and keeps integrality of x meaningful).
    IntMat Ai(m, n);
    IntVec bi(m);
    for (int i = 0; i < m; ++i) {
        Int l = 1;
        for (int j = 0; j < n; ++j) l = lcm(l, rat_den(A(i, j)));
        l = lcm(l, rat_den(b[i]));
        for (int j = 0; j < n; ++j) Ai(i, j) = rat_to_int(A(i, j) * Rat(l));
        bi[i] = rat_to_int(b[i] * Rat(l));
    }
    // x solves A x = b  iff  z H = b^T where H = U A^T and x = (z U)^T.
    HnfResult h = hnf(Ai.transpose());
    RatVec z(n, Rat(0));
    for (int k = 0; k < h.rank; ++k) {
        int c = h.pivot_cols[k];
        Rat acc(bi[c]);
        for (int i = 0; i < k; ++i) acc -= z[i] * Rat(h.H(i, c));
        Rat piv(h.H(k, c));
        Rat val = acc / piv;
        if (mode == SolveMode::Integral && rat_den(val) != 1) return std::nullopt;
        z[k] = val;
    }
    // Consistency on every column (non-pivot columns included).
    for (int c = 0; c < m; ++c) {
        Rat acc(0);
        for (int i = 0; i < h.rank; ++i) acc += z[i] * Rat(h.H(i, c));
        if (acc != Rat(bi[c])) return std::nullopt;
    }
    RatVec x(n, Rat(0));
    for (int j = 0; j < n; ++j) {
        Rat acc(0);
        for (int i = 0; i < n; ++i) acc += z[i] * Rat(h.U(i, j));
        x[j] = acc;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Quotient projections

QuotientProjection quotient_projection(int n, const IntMat& S) {
    if (S.rows() != n) throw InvalidArgument("quotient_projection: ambient mismatch");
    const int r = S.cols();
    if (r > 0) {
        if (rank(S) != r) throw InvalidArgument("quotient_projection: columns are dependent");
        if (index_in_saturation(S) != 1)
            throw NotSaturated("sublattice is not saturated in Z^" + std::to_string(n));
    }
    QuotientProjection out;
    out.quotient_rank = n - r;
    if (r == 0) {
        out.proj = IntMat::identity(n);
        out.lift = IntMat::identity(n);
        return out;
    }
    SnfResult s = snf(S);
    // U*S*V = diag(1..1) since S is saturated, so U maps the sublattice onto
    // the first r coordinates; the last n-r rows of U give the projection.
    IntMat Uinv = inverse_unimodular(s.U);
    out.proj = IntMat(n - r, n);
    out.lift = IntMat(n, n - r);
    for (int i = 0; i < n - r; ++i)
        for (int j = 0; j < n; ++j) out.proj(i, j) = s.U(r + i, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n - r; ++j) out.lift(i, j) = Uinv(i, r + j);
    return out;
}

// ---------------------------------------------------------------------------
// Determinants and inverses

Int det(const IntMat& M) {
    if (M.rows() != M.cols()) throw InvalidArgument("det: not square");
    const int n = M.rows();
    if (n == 0) return 1;
    IntMat A = M;
    Int denom = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (A(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (A(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                A(i, j) = (A(i, j) * A(k, k) - A(i, k) * A(k, j)) / denom;
            }
        denom = A(k, k);
    }
    return sign > 0 ? A(n - 1, n - 1) : -A(n - 1, n - 1);
}

Rat det(const RatMat& M) {
    if (M.rows() != M.cols()) throw InvalidArgument("det: not square");
    Int m = denominator_lcm(M);
    IntMat scaled(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) scaled(i, j) = rat_to_int(M(i, j) * Rat(m));
    Rat d(det(scaled));
    Rat denom = Rat(1);
    for (int i = 0; i < M.rows(); ++i) denom *= Rat(m);
    return d / denom;
}

RatMat inverse(const RatMat& M) {
    if (M.rows() != M.cols()) throw InvalidArgument("inverse: not square");
    const int n = M.rows();
    RatMat A = M;
    RatMat B = RatMat::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (A(i, c) != 0) { p = i; break; }
        if (p < 0) throw InvalidArgument("inverse: singular matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) { std::swap(A(c, j), A(p, j)); std::swap(B(c, j), B(p, j)); }
        Rat piv = A(c, c);
        for (int j = 0; j < n; ++j) { A(c, j) /= piv; B(c, j) /= piv; }
        for (int i = 0; i < n; ++i) {
            if (i == c || A(i, c) == 0) continue;
            Rat f = A(i, c);
            for (int j = 0; j < n; ++j) { A(i, j) -= f * A(c, j); B(i, j) -= f * B(c, j); }
        }
    }
    return B;
}

IntMat inverse_unimodular(const IntMat& U) {
    RatMat inv = inverse(to_rat(U));
    return to_int(inv);
}

Int denominator_lcm(const RatMat& M) {
    Int l = 1;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) l = lcm(l, rat_den(M(i, j)));
    return l;
}

Int denominator_lcm(const RatVec& v) {
    Int l = 1;
    for (const Rat& q : v) l = lcm(l, rat_den(q));
    return l;
}

RatVec apply_rat(const IntMat& M, const RatVec& x) {
    if (static_cast<int>(x.size()) != M.cols()) throw InvalidArgument("apply_rat: size mismatch");
    RatVec y(M.rows(), Rat(0));
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            if (M(i, j) != 0) y[i] += Rat(M(i, j)) * x[j];
    return y;
}

RatVec scale(const Rat& c, const RatVec& x) {
    RatVec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
    return y;
}

RatVec add(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw InvalidArgument("add: size mismatch");
    RatVec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] + b[i];
    return y;
}

RatVec sub(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw InvalidArgument("sub: size mismatch");
    RatVec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] - b[i];
    return y;
}

bool is_zero(const RatVec& v) {
    for (const Rat& q : v) if (q != 0) return false;
    return true;
}

bool is_zero(const IntVec& v) {
    for (const Int& q : v) if (q != 0) return false;
    return true;
}

Rat dot_product(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw InvalidArgument("dot_product: size mismatch");
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace conecalc
