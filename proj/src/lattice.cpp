#include "orbispace/lattice.hpp"

#include <algorithm>

namespace orbi::lin {

namespace {

void swap_rows(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, a), m.at(i, b));
}

// row[a] += f * row[b]
void add_row(IntMat& m, std::size_t a, std::size_t b, const Int& f) {
    for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) += f * m.at(b, j);
}

void add_col(IntMat& m, std::size_t a, std::size_t b, const Int& f) {
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, a) += f * m.at(i, b);
}

void negate_row(IntMat& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) = -m.at(a, j);
}

void negate_col(IntMat& m, std::size_t a) {
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, a) = -m.at(i, a);
}

}  // namespace

SnfResult smith_normal_form(const IntMat& input) {
    SnfResult r{IntMat::identity(input.rows), input, IntMat::identity(input.cols)};
    IntMat& s = r.s;
    std::size_t t = 0;
    std::size_t limit = std::min(s.rows, s.cols);

    while (t < limit) {
        // Find a nonzero entry in the remaining block to move to (t, t).
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < s.rows && !found; ++i)
            for (std::size_t j = t; j < s.cols && !found; ++j)
                if (s.at(i, j) != 0) {
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        if (pi != t) {
            swap_rows(s, pi, t);
            swap_rows(r.u, pi, t);
        }
        if (pj != t) {
            swap_cols(s, pj, t);
            swap_cols(r.v, pj, t);
        }

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < s.rows; ++i) {
                if (s.at(i, t) == 0) continue;
                Int q = s.at(i, t) / s.at(t, t);
                add_row(s, i, t, -q);
                add_row(r.u, i, t, -q);
                if (s.at(i, t) != 0) {
                    swap_rows(s, i, t);
                    swap_rows(r.u, i, t);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < s.cols; ++j) {
                if (s.at(t, j) == 0) continue;
                Int q = s.at(t, j) / s.at(t, t);
                add_col(s, j, t, -q);
                add_col(r.v, j, t, -q);
                if (s.at(t, j) != 0) {
                    swap_cols(s, j, t);
                    swap_cols(r.v, j, t);
                    clean = false;
                }
            }
        }

        // Enforce the divisibility chain: fold any non-divisible entry into
        // the pivot position and redo the elimination of this block.
        bool redo = false;
        for (std::size_t i = t + 1; i < s.rows && !redo; ++i)
            for (std::size_t j = t + 1; j < s.cols && !redo; ++j)
                if (s.at(i, j) % s.at(t, t) != 0) {
                    add_row(s, t, i, 1);
                    add_row(r.u, t, i, 1);
                    redo = true;
                }
        if (redo) continue;

        if (s.at(t, t) < 0) {
            negate_row(s, t);
            negate_row(r.u, t);
        }
        ++t;
    }
    return r;
}

std::vector<std::vector<Int>> hermite_row_basis(std::vector<std::vector<Int>> rows) {
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const std::vector<Int>& r) {
                                  return std::all_of(r.begin(), r.end(),
                                                     [](const Int& x) { return x == 0; });
                              }),
               rows.end());
    if (rows.empty()) return rows;
    std::size_t n = rows[0].size();

    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < rows.size(); ++col) {
        // gcd all entries of this column into `row` by euclidean row steps
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = row; i < rows.size(); ++i)
                if (rows[i][col] != 0 &&
                    (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])))
                    best = i;
            if (best == rows.size()) break;  // column zero from `row` on
            std::swap(rows[row], rows[best]);
            bool reduced = true;
            for (std::size_t i = row + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                Int q = rows[i][col] / rows[row][col];
                for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[row][j];
                if (rows[i][col] != 0) reduced = false;
            }
            if (reduced) break;
        }
        if (rows[row][col] == 0) continue;
        if (rows[row][col] < 0)
            for (std::size_t j = 0; j < n; ++j) rows[row][j] = -rows[row][j];
        // reduce the entries above the pivot into [0, pivot)
        for (std::size_t i = 0; i < row; ++i) {
            Int q = rows[i][col] / rows[row][col];
            if (rows[i][col] < 0 && q * rows[row][col] != rows[i][col]) --q;
            if (q != 0)
                for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[row][j];
        }
        ++row;
    }
    rows.resize(row);
    return rows;
}

Lattice integer_kernel(const IntMat& m) {
    // d^T m = 0  <=>  m^T d = 0; with u m^T v = s, kernel = columns of v
    // hitting zero diagonal entries. v unimodular makes the result saturated.
    IntMat mt(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) mt.at(j, i) = m.at(i, j);
    SnfResult snf = smith_normal_form(mt);

    std::size_t n = m.rows;
    std::vector<std::vector<Int>> rows;
    for (std::size_t j = 0; j < n; ++j) {
        bool zero_diag = j >= std::min(mt.rows, mt.cols) || snf.s.at(j, j) == 0;
        if (!zero_diag) continue;
        std::vector<Int> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = snf.v.at(i, j);
        rows.push_back(std::move(col));
    }
    Lattice lat;
    lat.ambient_dim = n;
    lat.basis = hermite_row_basis(std::move(rows));
    lat.saturated = true;
    return lat;
}

bool in_subtorus(const std::vector<Rat>& delta, const Lattice& d) {
    if (!d.saturated)
        throw Error(ErrorCode::NonSaturatedLattice, "in_subtorus requires a saturated lattice");
    if (delta.size() != d.ambient_dim)
        throw Error(ErrorCode::InvalidInput, "in_subtorus dimension mismatch");
    for (const auto& row : d.basis) {
        Rat dot = 0;
        for (std::size_t j = 0; j < delta.size(); ++j)
            if (row[j] != 0) dot += Rat(row[j]) * delta[j];
        if (!is_integer(dot)) return false;
    }
    return true;
}

bool lattice_member(const std::vector<Int>& v, const std::vector<std::vector<Int>>& rows) {
    if (rows.empty())
        return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
    // Solve x * rows = v over the rationals, then require integrality.
    std::size_t k = rows.size(), n = rows[0].size();
    RatMatrix aug(n, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug.at(i, j) = Rat(rows[j][i]);
        aug.at(i, k) = Rat(v[i]);
    }
    RrefResult r = rref(aug);
    for (std::size_t p : r.pivots)
        if (p == k) return false;  // inconsistent
    std::vector<Rat> x(k);
    for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = r.reduced.at(i, k);
    for (const Rat& c : x)
        if (!is_integer(c)) return false;
    return true;
}

std::vector<std::vector<Int>> lattice_intersection(const std::vector<std::vector<Int>>& a,
                                                   const std::vector<std::vector<Int>>& b,
                                                   std::size_t ambient_dim) {
    if (a.empty() || b.empty()) return {};
    // Pairs (u, w) with u*a == w*b form the integer kernel of the stacked
    // matrix [a; -b]; the intersection is the image of the u-part.
    std::size_t ka = a.size(), kb = b.size();
    IntMat stacked(ka + kb, ambient_dim);
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < ambient_dim; ++j) stacked.at(i, j) = a[i][j];
    for (std::size_t i = 0; i < kb; ++i)
        for (std::size_t j = 0; j < ambient_dim; ++j) stacked.at(ka + i, j) = -b[i][j];
    Lattice ker = integer_kernel(stacked);
    std::vector<std::vector<Int>> gens;
    for (const auto& w : ker.basis) {
        std::vector<Int> g(ambient_dim);
        for (std::size_t i = 0; i < ka; ++i)
            for (std::size_t j = 0; j < ambient_dim; ++j) g[j] += w[i] * a[i][j];
        gens.push_back(std::move(g));
    }
    return hermite_row_basis(std::move(gens));
}

bool lattice_is_saturated(const std::vector<std::vector<Int>>& rows, std::size_t ambient_dim) {
    if (rows.empty()) return true;
    IntMat m(rows.size(), ambient_dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < ambient_dim; ++j) m.at(i, j) = rows[i][j];
    SnfResult snf = smith_normal_form(m);
    for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i) {
        if (snf.s.at(i, i) == 0) break;
        if (snf.s.at(i, i) != 1) return false;
    }
    return true;
}

std::vector<Rat> TorusSolution::at(const std::vector<Rat>& e) const {
    std::vector<Rat> delta(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rat acc = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (v.at(i, j) != 0 && e[j] != 0) acc += Rat(v.at(i, j)) * e[j];
        delta[i] = mod1(acc);
    }
    return delta;
}

std::optional<TorusSolution> solve_torus_congruences(const IntMat& a, const std::vector<Rat>& b) {
    if (b.size() != a.rows) throw Error(ErrorCode::InvalidInput, "congruence shape mismatch");
    std::size_t n = a.cols;
    SnfResult snf = smith_normal_form(a);

    std::vector<Rat> c(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.rows; ++j)
            if (snf.u.at(i, j) != 0) c[i] += Rat(snf.u.at(i, j)) * b[j];

    TorusSolution sol;
    sol.n = n;
    sol.v = snf.v;
    std::vector<Rat> e(n);
    std::size_t diag = std::min(a.rows, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        Int s = i < diag ? snf.s.at(i, i) : Int(0);
        if (s == 0) {
            if (!is_integer(c[i])) return std::nullopt;
        } else {
            e[i] = mod1(c[i] / Rat(s));
            if (s > 1) sol.torsion.emplace_back(i, s);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool pinned = i < diag && snf.s.at(i, i) != 0;
        if (!pinned) sol.free_idx.push_back(i);
    }
    sol.particular = sol.at(e);
    return sol;
}

std::vector<std::vector<Rat>> enumerate_finite_solutions(const TorusSolution& sol, std::size_t cap) {
    if (!sol.free_idx.empty())
        throw Error(ErrorCode::InvalidInput, "solution set is not finite");
    Int count = 1;
    for (const auto& [idx, order] : sol.torsion) {
        count *= order;
        if (count > cap)
            throw Error(ErrorCode::CapExceeded, "too many torsion solutions to enumerate");
    }
    std::vector<std::vector<Rat>> out;
    std::vector<Rat> shift(sol.n);
    std::size_t k = sol.torsion.size();
    std::vector<Int> counter(k, 0);
    while (true) {
        for (std::size_t i = 0; i < sol.n; ++i) shift[i] = 0;
        for (std::size_t t = 0; t < k; ++t)
            shift[sol.torsion[t].first] = Rat(counter[t], sol.torsion[t].second);
        std::vector<Rat> delta = sol.at(shift);
        for (std::size_t i = 0; i < sol.n; ++i) delta[i] = mod1(delta[i] + sol.particular[i]);
        out.push_back(std::move(delta));
        // odometer over torsion choices
        std::size_t t = 0;
        while (t < k) {
            counter[t] += 1;
            if (counter[t] < sol.torsion[t].second) break;
            counter[t] = 0;
            ++t;
        }
        if (t == k) break;
    }
    return out;
}

}  // namespace orbi::lin
