#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace dwkit {

struct SparseEntry {
  int32_t col;
  int64_t val;
};

/// Sparse integer matrix, row-major.  modulus == 0 means entries in Z,
/// otherwise entries are kept reduced to [0, modulus).
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols, int64_t modulus = 0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int64_t modulus() const { return mod_; }

  /// Accumulates v into entry (r, c).
  void add(int r, int c, int64_t v);
  int64_t at(int r, int c) const;
  const std::vector<SparseEntry>& row(int r) const { return data_[r]; }
  /// Appends an empty row and returns its index.
  int add_row();
  size_t nonzeros() const;

  static IntMatrix from_dense(const std::vector<std::vector<int64_t>>& d, int64_t modulus = 0);
  std::vector<std::vector<int64_t>> to_dense() const;
  std::vector<int64_t> apply(const std::vector<int64_t>& x) const;

 private:
  int rows_ = 0, cols_ = 0;
  int64_t mod_ = 0;
  std::vector<std::vector<SparseEntry>> data_;
};

/// Unimodular 2x2 operation on indices i, j.  As a row op:
///   row_i <- a row_i + b row_j,  row_j <- c row_i + d row_j.
/// As a column op it right-multiplies by F with F[i][i]=a, F[i][j]=b,
/// F[j][i]=c, F[j][j]=d.  i == j encodes scaling index i by the unit a.
struct Op2 {
  int i, j;
  int64_t a, b, c, d;
};

struct EliminationOptions {
  bool parallel = true;
  // Rows of the Schur complement are produced in chunks of this size.
  int chunk = 4096;
};

/// Normal-form engine shared by the Smith form and the linear solvers.
///
/// Unit pivots are peeled off first: a row whose only undecided column has a
/// unit coefficient pivots on it, and when no such row exists a column is
/// declared free.  The pivot block is then unit lower triangular, and only the
/// Schur complement on the free columns is reduced densely.  Right-hand sides
/// ride along with every row operation, so no row transform is stored.
class Elimination {
 public:
  Elimination(const IntMatrix& a, std::vector<std::vector<int64_t>> rhs = {},
              EliminationOptions opt = {});

  int64_t modulus() const { return mod_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int peeled() const { return static_cast<int>(pivot_col_.size()); }
  int free_columns() const { return static_cast<int>(free_col_.size()); }
  /// Nonzero, pairwise distinct Schur complement rows fed to the dense phase.
  int schur_rows() const { return schur_rows_; }

  /// Diagonal of U A V, length min(rows, cols): the peeled pivots (ones)
  /// followed by the dense block.  Over Z the entries are nonnegative and
  /// form a divisibility chain.
  std::vector<int64_t> diagonal() const;
  /// Column of V belonging to diagonal position `pos`, so that
  /// A * v_column(pos) = diagonal()[pos] * (U^{-1} e_pos).
  std::vector<int64_t> v_column(int pos) const;

  int rhs_count() const { return static_cast<int>(rhs_bad_.size()); }
  bool consistent(int k) const;
  std::optional<std::vector<int64_t>> solution(int k) const;
  /// Generators of {x : A x = 0}.
  std::vector<std::vector<int64_t>> kernel_basis() const;

 private:
  void peel(const IntMatrix& a);
  void expand(const IntMatrix& a);
  void reduce_dense(const IntMatrix& a, const std::vector<std::vector<int64_t>>& rhs,
                    const EliminationOptions& opt);
  std::vector<int64_t> lift_free(const std::vector<int64_t>& x_free,
                                 const std::vector<int64_t>* y) const;
  std::vector<int64_t> apply_v(std::vector<int64_t> z) const;

  int64_t mod_ = 0;
  int rows_ = 0, cols_ = 0;
  // Peeling.
  std::vector<int> pivot_row_, pivot_col_;  // by step
  std::vector<int> col_step_;               // step of a pivot column, -1 otherwise
  std::vector<int> free_col_;               // free column by local index
  std::vector<int> col_free_;               // local index of a free column, -1 otherwise
  std::vector<int64_t> pivot_inv_;          // inverse of the unit pivot
  std::vector<std::vector<int64_t>> exp_;   // A_PP^{-1} A_PF, dense over free columns
  std::vector<std::vector<int64_t>> y_;     // A_PP^{-1} b_P per right-hand side
  // Dense phase.
  int schur_rows_ = 0;
  std::vector<std::vector<int64_t>> block_;  // diagonalized block with riding rhs
  std::vector<int64_t> diag_;
  std::vector<Op2> col_log_;
  std::vector<bool> rhs_bad_;
};

struct SmithForm {
  std::vector<int64_t> factors;  // length min(rows, cols)
  std::vector<std::vector<int64_t>> U, V;
};

/// Dense Smith normal form over Z with explicit transforms, U A V = diag(factors).
/// Meant for small matrices; throws ArithmeticOverflow if int64 overflows.
SmithForm smith_normal_form(const IntMatrix& a);

/// Diagonal of the normal form computed by the sparse engine.
std::vector<int64_t> invariant_factors(const IntMatrix& a);

struct SolveResult {
  std::optional<std::vector<int64_t>> solution;
  std::vector<std::vector<int64_t>> kernel;
};

/// Solves A x = b over Z (A.modulus() == 0) or over Z/m.
SolveResult solve_linear(const IntMatrix& a, const std::vector<int64_t>& b);

/// Schur complement rows S_q = A_QF(q) - sum_p A_QP(q,p) Exp(p), for the
/// benchmark and tests; `parallel` selects the OpenMP kernel.
std::vector<std::vector<int64_t>> schur_complement(const IntMatrix& a, const std::vector<int>& q_rows,
                                                   const std::vector<int>& col_step,
                                                   const std::vector<int>& col_free,
                                                   const std::vector<std::vector<int64_t>>& exp,
                                                   int free_count, bool parallel);

}  // namespace dwkit
