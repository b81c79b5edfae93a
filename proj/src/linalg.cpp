#include "fibsite/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace fibsite {

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InputError("ragged matrix literal");
        for (long long v : r) data_.emplace_back(v);
    }
}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool IntegerMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x == 0; });
}

IntegerMatrix IntegerMatrix::transpose() const {
    IntegerMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    }
    return t;
}

std::string IntegerMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < rows_; ++r) {
        os << (r ? ",[" : "[");
        for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << at(r, c);
        os << ']';
    }
    os << ']';
    return os.str();
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols() != b.rows()) throw InputError("matrix product: dimension mismatch");
    IntegerMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const BigInt& x = a.at(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (b.at(k, j) != 0) out.at(i, j) += x * b.at(k, j);
            }
        }
    }
    return out;
}

BigInt determinant(const IntegerMatrix& m) {
    if (m.rows() != m.cols()) throw InputError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    // Bareiss fraction-free elimination
    IntegerMatrix a = m;
    BigInt sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a.at(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
            }
        }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

// ---------------------------------------------------------------------------

namespace {

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

/// In-place Smith reduction of d; u and v receive the row and column operations
/// when non-null.
void smith_reduce(IntegerMatrix& d, IntegerMatrix* u, IntegerMatrix* v) {
    const std::size_t rows = d.rows();
    const std::size_t cols = d.cols();
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols; ++j) std::swap(d.at(a, j), d.at(b, j));
        if (u) {
            for (std::size_t j = 0; j < rows; ++j) std::swap(u->at(a, j), u->at(b, j));
        }
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows; ++i) std::swap(d.at(i, a), d.at(i, b));
        if (v) {
            for (std::size_t i = 0; i < cols; ++i) std::swap(v->at(i, a), v->at(i, b));
        }
    };
    // row target -= q * row source
    auto row_axpy = [&](std::size_t target, std::size_t source, const BigInt& q) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (d.at(source, j) != 0) d.at(target, j) -= q * d.at(source, j);
        }
        if (u) {
            for (std::size_t j = 0; j < rows; ++j) {
                if (u->at(source, j) != 0) u->at(target, j) -= q * u->at(source, j);
            }
        }
    };
    auto col_axpy = [&](std::size_t target, std::size_t source, const BigInt& q) {
        for (std::size_t i = 0; i < rows; ++i) {
            if (d.at(i, source) != 0) d.at(i, target) -= q * d.at(i, source);
        }
        if (v) {
            for (std::size_t i = 0; i < cols; ++i) {
                if (v->at(i, source) != 0) v->at(i, target) -= q * v->at(i, source);
            }
        }
    };

    const std::size_t limit = std::min(rows, cols);
    for (std::size_t t = 0; t < limit; ++t) {
        // least absolute nonzero entry of the trailing block
        std::size_t pr = rows, pc = cols;
        BigInt best;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (d.at(i, j) == 0) continue;
                BigInt a = abs_big(d.at(i, j));
                if (pr == rows || a < best) {
                    best = a;
                    pr = i;
                    pc = j;
                    if (best == 1) break;
                }
            }
            if (pr != rows && best == 1) break;
        }
        if (pr == rows) break;
        swap_rows(t, pr);
        swap_cols(t, pc);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (d.at(i, t) == 0) continue;
                row_axpy(i, t, BigInt(d.at(i, t) / d.at(t, t)));
                if (d.at(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (d.at(t, j) == 0) continue;
                col_axpy(j, t, BigInt(d.at(t, j) / d.at(t, t)));
                if (d.at(t, j) != 0) clean = false;
            }
            if (!clean) {
                // move the least remainder in row/column t to the pivot
                std::size_t br = t, bc = t;
                BigInt b = abs_big(d.at(t, t));
                for (std::size_t i = t + 1; i < rows; ++i) {
                    if (d.at(i, t) != 0 && abs_big(d.at(i, t)) < b) {
                        b = abs_big(d.at(i, t));
                        br = i;
                        bc = t;
                    }
                }
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (d.at(t, j) != 0 && abs_big(d.at(t, j)) < b) {
                        b = abs_big(d.at(t, j));
                        br = t;
                        bc = j;
                    }
                }
                swap_rows(t, br);
                swap_cols(t, bc);
                continue;
            }
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad == rows) break;
            row_axpy(t, bad, BigInt(-1));
        }
        if (d.at(t, t) < 0) {
            for (std::size_t j = 0; j < cols; ++j) d.at(t, j) = -d.at(t, j);
            if (u) {
                for (std::size_t j = 0; j < rows; ++j) u->at(t, j) = -u->at(t, j);
            }
        }
    }
}

}  // namespace

std::size_t SmithForm::rank() const { return diagonal().size(); }

std::vector<BigInt> SmithForm::diagonal() const {
    std::vector<BigInt> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) {
        if (d.at(i, i) != 0) out.push_back(d.at(i, i));
    }
    return out;
}

SmithForm smith_normal_form(const IntegerMatrix& m) {
    SmithForm s{m, IntegerMatrix::identity(m.rows()), IntegerMatrix::identity(m.cols())};
    smith_reduce(s.d, &s.u, &s.v);
    return s;
}

// ---------------------------------------------------------------------------

void SparseMatrix::add(std::size_t r, std::size_t c, std::int64_t v) {
    if (r >= rows_ || c >= cols_) throw InputError("sparse entry out of range");
    if (v != 0) entries_[r].emplace_back(c, v);
}

std::vector<std::pair<std::size_t, std::int64_t>> SparseMatrix::row(std::size_t r) const {
    auto e = entries_.at(r);
    std::sort(e.begin(), e.end());
    std::vector<std::pair<std::size_t, std::int64_t>> out;
    for (const auto& [c, v] : e) {
        if (!out.empty() && out.back().first == c) {
            out.back().second += v;
        } else {
            out.emplace_back(c, v);
        }
    }
    std::erase_if(out, [](const auto& p) { return p.second == 0; });
    return out;
}

IntegerMatrix SparseMatrix::dense() const {
    IntegerMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (const auto& [c, v] : row(r)) m.at(r, c) = v;
    }
    return m;
}

namespace {

struct Overflow {};

inline std::int64_t sub_mul(std::int64_t a, std::int64_t b, std::int64_t c) {
    std::int64_t p, out;
    if (__builtin_mul_overflow(b, c, &p) || __builtin_sub_overflow(a, p, &out)) throw Overflow{};
    return out;
}
inline BigInt sub_mul(const BigInt& a, const BigInt& b, const BigInt& c) { return a - b * c; }

inline bool is_unit(std::int64_t x) { return x == 1 || x == -1; }
inline bool is_unit(const BigInt& x) { return x == 1 || x == -1; }

inline std::int64_t remainder(std::int64_t a, std::int64_t b) { return a % b; }
inline BigInt remainder(const BigInt& a, const BigInt& b) { return a % b; }
inline std::int64_t quotient(std::int64_t a, std::int64_t b) { return a / b; }
inline BigInt quotient(const BigInt& a, const BigInt& b) { return a / b; }
inline BigInt magnitude(std::int64_t a) { return a < 0 ? -BigInt(a) : BigInt(a); }
inline BigInt magnitude(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

/// Rearranges nonzero diagonal entries into invariant factors d1 | d2 | ...
std::vector<BigInt> divisibility_chain(std::vector<BigInt> d) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const BigInt g = boost::multiprecision::gcd(d[i], d[j]);
            d[j] = d[i] / g * d[j];
            d[i] = g;
        }
    }
    std::erase_if(d, [](const BigInt& x) { return x == 1; });
    return d;
}

/// Sparse elimination. Unit pivots are used while they exist; otherwise a
/// column is reduced by Euclid's algorithm on rows and its pivot row modulo
/// the pivot by column operations, until an entry is isolated.
template <typename T>
MatrixInvariants eliminate(std::size_t nrows, std::size_t ncols,
                           std::vector<std::vector<std::pair<std::size_t, T>>> rows) {
    using Row = std::vector<std::pair<std::size_t, T>>;
    std::vector<std::vector<std::size_t>> colrows(ncols);
    for (std::size_t r = 0; r < nrows; ++r) {
        for (const auto& e : rows[r]) colrows[e.first].push_back(r);
    }
    std::vector<char> row_live(nrows, 1), col_live(ncols, 1);
    auto entry = [&](std::size_t r, std::size_t c) -> const T* {
        const Row& row = rows[r];
        auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& p, std::size_t x) { return p.first < x; });
        return (it != row.end() && it->first == c) ? &it->second : nullptr;
    };
    auto refresh = [&](std::size_t c) {
        auto& list = colrows[c];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        std::erase_if(list, [&](std::size_t r) { return !row_live[r] || entry(r, c) == nullptr; });
    };
    Row scratch;
    // rows[r] -= factor * rows[p]
    auto row_sub = [&](std::size_t r, const T& factor, std::size_t p) {
        scratch.clear();
        const Row& row = rows[r];
        const Row& prow = rows[p];
        std::size_t i = 0, j = 0;
        while (i < row.size() || j < prow.size()) {
            if (j == prow.size() || (i < row.size() && row[i].first < prow[j].first)) {
                scratch.push_back(row[i++]);
            } else if (i == row.size() || prow[j].first < row[i].first) {
                T v = sub_mul(T(0), factor, prow[j].second);
                colrows[prow[j].first].push_back(r);
                scratch.emplace_back(prow[j].first, std::move(v));
                ++j;
            } else {
                T v = sub_mul(row[i].second, factor, prow[j].second);
                if (v != 0) scratch.emplace_back(row[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        rows[r].swap(scratch);
    };
    auto retire = [&](std::size_t r, std::size_t c) {
        row_live[r] = 0;
        col_live[c] = 0;
        rows[r].clear();
    };
    MatrixInvariants out;
    std::vector<BigInt> diagonal;
    // unit pivot in column c, if any: eliminates the column and returns true
    auto unit_step = [&](std::size_t c) {
        std::size_t pivot = nrows;
        for (std::size_t r : colrows[c]) {
            if (is_unit(*entry(r, c)) && (pivot == nrows || rows[r].size() < rows[pivot].size())) pivot = r;
        }
        if (pivot == nrows) return false;
        const T u = *entry(pivot, c);
        for (std::size_t r : colrows[c]) {
            if (r != pivot) row_sub(r, sub_mul(T(0), *entry(r, c), sub_mul(T(0), u, T(1))), pivot);  // a·u = a/u
        }
        retire(pivot, c);
        ++out.rank;
        return true;
    };
    auto gcd_step = [&](std::size_t c) {
        for (;;) {
            refresh(c);
            if (unit_step(c)) return;
            std::size_t pivot = colrows[c].front();
            for (std::size_t r : colrows[c]) {
                if (magnitude(*entry(r, c)) < magnitude(*entry(pivot, c))) pivot = r;
            }
            const T v = *entry(pivot, c);
            bool single = true;
            for (std::size_t r : colrows[c]) {
                if (r == pivot) continue;
                row_sub(r, quotient(*entry(r, c), v), pivot);
                if (entry(r, c) != nullptr) single = false;
            }
            if (!single) continue;
            // column c is v at the pivot row only: reduce the row modulo v by column operations
            std::size_t next = ncols;
            std::erase_if(rows[pivot], [&](auto& e) {
                if (e.first == c) return false;
                e.second = remainder(e.second, v);
                return e.second == 0;
            });
            for (const auto& e : rows[pivot]) {
                if (e.first != c && (next == ncols || magnitude(e.second) < magnitude(*entry(pivot, next)))) next = e.first;
            }
            if (next == ncols) {
                diagonal.push_back(magnitude(v));
                retire(pivot, c);
                ++out.rank;
                return;
            }
            c = next;
        }
    };
    auto live_order = [&] {
        std::vector<std::size_t> order;
        for (std::size_t c = 0; c < ncols; ++c) {
            if (col_live[c]) order.push_back(c);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return colrows[a].size() < colrows[b].size(); });
        return order;
    };
    for (bool any = true; any;) {
        for (bool progress = true; progress;) {
            progress = false;
            for (std::size_t c : live_order()) {
                if (!col_live[c]) continue;
                refresh(c);
                if (colrows[c].empty()) {
                    col_live[c] = 0;
                } else if (unit_step(c)) {
                    progress = true;
                }
            }
        }
        any = false;
        for (std::size_t c : live_order()) {
            if (!col_live[c]) continue;
            refresh(c);
            if (colrows[c].empty()) {
                col_live[c] = 0;
                continue;
            }
            if (!unit_step(c)) gcd_step(c);
            any = true;
        }
    }
    out.torsion = divisibility_chain(std::move(diagonal));
    return out;
}

}  // namespace

MatrixInvariants matrix_invariants(const SparseMatrix& m) {
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> rows(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows[r] = m.row(r);
    try {
        return eliminate<std::int64_t>(m.rows(), m.cols(), rows);
    } catch (const Overflow&) {
        std::vector<std::vector<std::pair<std::size_t, BigInt>>> big(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (const auto& [c, v] : rows[r]) big[r].emplace_back(c, BigInt(v));
        }
        return eliminate<BigInt>(m.rows(), m.cols(), std::move(big));
    }
}

MatrixInvariants matrix_invariants(const IntegerMatrix& m) {
    std::vector<std::vector<std::pair<std::size_t, BigInt>>> rows(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (m.at(r, c) != 0) rows[r].emplace_back(c, m.at(r, c));
        }
    }
    return eliminate<BigInt>(m.rows(), m.cols(), std::move(rows));
}

// ---------------------------------------------------------------------------

FgAbelianGroup FgAbelianGroup::free(std::size_t rank) {
    return FgAbelianGroup{std::vector<BigInt>(rank, BigInt(0))};
}

FgAbelianGroup FgAbelianGroup::from_cyclic(const std::vector<BigInt>& orders) {
    IntegerMatrix rel(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 0) throw InputError("negative cyclic order");
        rel.at(i, i) = orders[i];
    }
    return cokernel(rel);
}

FgAbelianGroup FgAbelianGroup::cokernel(const IntegerMatrix& relations) {
    const MatrixInvariants inv = matrix_invariants(relations);
    FgAbelianGroup g;
    g.factors = inv.torsion;
    g.factors.resize(g.factors.size() + (relations.rows() - inv.rank), BigInt(0));
    return g;
}

std::size_t FgAbelianGroup::free_rank() const {
    return static_cast<std::size_t>(std::count(factors.begin(), factors.end(), BigInt(0)));
}

std::vector<BigInt> FgAbelianGroup::torsion() const {
    std::vector<BigInt> t;
    for (const auto& f : factors) {
        if (f != 0) t.push_back(f);
    }
    return t;
}

std::string FgAbelianGroup::to_string() const {
    std::vector<std::string> parts;
    const std::size_t r = free_rank();
    if (r == 1) parts.emplace_back("Z");
    if (r > 1) parts.push_back("Z^" + std::to_string(r));
    for (const auto& t : torsion()) parts.push_back("Z/" + t.str());
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += " ⊕ " + parts[i];
    return out;
}

BigInt parse_cyclic(const std::string& token) {
    if (token == "Z") return 0;
    if (token == "0") return 1;
    if (token.size() > 2 && token.compare(0, 2, "Z/") == 0) {
        const std::string n = token.substr(2);
        if (!n.empty() && std::all_of(n.begin(), n.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
            BigInt v(n);
            if (v >= 1) return v;
        }
    }
    throw InputError("not a cyclic group: '" + token + "'");
}

}  // namespace fibsite
