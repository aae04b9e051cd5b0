#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calderon/geometry.hpp"
#include "calderon/types.hpp"

namespace calderon {

/// One term c * xi^powers * |xi|^norm_power of a positively homogeneous
/// entry. Plain polynomial symbols have norm_power = 0; projector-type
/// symbols on the cosphere use negative |xi| powers (e.g. |xi'|^-1).
struct Monomial {
  std::vector<int> powers;  // nonnegative, one per covector component
  int norm_power = 0;
  Complex coef;

  int degree() const {
    int d = norm_power;
    for (int p : powers) d += p;
    return d;
  }
};

/// A single matrix entry: finite sum of monomials sharing one homogeneity
/// degree. An empty entry is structurally zero and has no degree.
struct SymbolEntry {
  std::vector<Monomial> monomials;

  bool empty() const { return monomials.empty(); }
  std::optional<int> degree() const;
  Complex eval(const std::vector<double>& covector) const;
};

/// Matrix of homogeneous entries in the boundary covector. The per-entry
/// degrees form the matrix used by Douglis-Nirenberg order checks.
class SymbolMatrix {
 public:
  SymbolMatrix() = default;
  SymbolMatrix(int rows, int cols, int covector_dim);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int covector_dim() const { return dim_; }

  SymbolEntry& at(int r, int c);
  const SymbolEntry& at(int r, int c) const;

  /// Adds c * xi^powers * |xi|^norm_power to entry (r, c). Throws if this
  /// would mix homogeneity degrees within the entry.
  void add_term(int r, int c, std::vector<int> powers, Complex coef, int norm_power = 0);

  /// Degree of entry (r, c); nullopt for a structurally zero entry.
  std::optional<int> degree(int r, int c) const;

  /// Entrywise evaluation at scale * covector.
  CMatrix eval(const std::vector<double>& covector, double scale = 1.0) const;
  CMatrix eval(const CospherePoint& p, double scale = 1.0) const;

  /// Pointwise product (composition of principal symbols). Degrees add.
  SymbolMatrix operator*(const SymbolMatrix& rhs) const;
  SymbolMatrix operator+(const SymbolMatrix& rhs) const;
  SymbolMatrix scaled(Complex factor) const;

  /// Hermitian adjoint: transpose + conjugated coefficients. Valid for real
  /// covectors (the only place symbols are evaluated).
  SymbolMatrix hermitian_adjoint() const;

  static SymbolMatrix constant(const CMatrix& value, int covector_dim);

 private:
  int rows_ = 0, cols_ = 0, dim_ = 0;
  std::vector<SymbolEntry> entries_;
};

struct DnViolation {
  int row = 0, col = 0;
  int expected = 0;
  int actual = 0;
};

struct DnVerdict {
  bool pass = true;
  std::vector<DnViolation> violations;
};

/// Checks degree[j][k] == declared_order - col_weights[k] + row_weights[j]
/// for every structurally nonzero entry. Weight vectors may be given per
/// scalar row/column, or per block of size rows/weights.size() (they are
/// expanded by repetition).
DnVerdict dn_order_check(const SymbolMatrix& s, int declared_order,
                         const std::vector<int>& row_weights,
                         const std::vector<int>& col_weights);

}  // namespace calderon
