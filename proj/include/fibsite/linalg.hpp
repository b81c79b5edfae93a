#pragma once

// Exact integer linear algebra: dense Smith normal form with transforms,
// sparse invariant-factor computation, finitely generated abelian groups.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fibsite/errors.hpp"

namespace fibsite {

using BigInt = boost::multiprecision::cpp_int;

class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntegerMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    BigInt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const BigInt& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const;
    IntegerMatrix transpose() const;
    bool operator==(const IntegerMatrix& o) const = default;

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
BigInt determinant(const IntegerMatrix& m);

/// U·M·V = D with D diagonal, d1 | d2 | ... and U, V unimodular.
struct SmithForm {
    IntegerMatrix d;
    IntegerMatrix u;
    IntegerMatrix v;

    std::size_t rank() const;
    /// Nonzero diagonal entries in order.
    std::vector<BigInt> diagonal() const;
};

SmithForm smith_normal_form(const IntegerMatrix& m);

/// Sparse integer matrix assembled from (row, col, value) triples; duplicates add.
class SparseMatrix {
public:
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows) {}

    void add(std::size_t r, std::size_t c, std::int64_t v);
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    /// Row r as (col, value) pairs, sorted, without zeros.
    std::vector<std::pair<std::size_t, std::int64_t>> row(std::size_t r) const;
    IntegerMatrix dense() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> entries_;
};

struct MatrixInvariants {
    std::size_t rank = 0;
    std::vector<BigInt> torsion;  // invariant factors > 1, ascending
};

/// Rank and nontrivial invariant factors. Unit pivots are eliminated sparsely;
/// the remaining block goes through dense Smith reduction.
MatrixInvariants matrix_invariants(const SparseMatrix& m);
MatrixInvariants matrix_invariants(const IntegerMatrix& m);

// ---------------------------------------------------------------------------

/// Invariant-factor form: torsion factors t1 | t2 | ... (each > 1) followed by
/// zeros, one per infinite cyclic summand.
struct FgAbelianGroup {
    std::vector<BigInt> factors;

    static FgAbelianGroup free(std::size_t rank);
    /// Direct sum of cyclic groups Z/n (n = 0 for Z, n = 1 ignored).
    static FgAbelianGroup from_cyclic(const std::vector<BigInt>& orders);
    /// coker of a relation matrix whose columns are relations among `rows` generators.
    static FgAbelianGroup cokernel(const IntegerMatrix& relations);

    std::size_t free_rank() const;
    std::vector<BigInt> torsion() const;
    bool is_zero() const { return factors.empty(); }
    /// "0", "Z", "Z^2 ⊕ Z/2", ...
    std::string to_string() const;

    bool operator==(const FgAbelianGroup&) const = default;
};

/// Parses "Z", "Z/2", "0" into a cyclic order (0 for Z); throws InputError.
BigInt parse_cyclic(const std::string& token);

}  // namespace fibsite
