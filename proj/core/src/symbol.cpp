#include "calderon/symbol.hpp"

#include <cmath>

#include "calderon/errors.hpp"

namespace calderon {

std::optional<int> SymbolEntry::degree() const {
  if (monomials.empty()) return std::nullopt;
  return monomials.front().degree();
}

Complex SymbolEntry::eval(const std::vector<double>& covector) const {
  Complex acc = 0.0;
  double norm2 = 0;
  for (double x : covector) norm2 += x * x;
  double norm = std::sqrt(norm2);
  for (const Monomial& mono : monomials) {
    double v = 1.0;
    for (std::size_t i = 0; i < mono.powers.size(); ++i)
      for (int p = 0; p < mono.powers[i]; ++p) v *= covector[i];
    if (mono.norm_power != 0) {
      if (norm == 0.0 && mono.norm_power < 0)
        throw NumericalError("symbol-core", "eval_symbol",
                             "negative |xi| power evaluated at xi = 0");
      v *= std::pow(norm, mono.norm_power);
    }
    acc += mono.coef * v;
  }
  return acc;
}

SymbolMatrix::SymbolMatrix(int rows, int cols, int covector_dim)
    : rows_(rows), cols_(cols), dim_(covector_dim), entries_(rows * cols) {
  if (rows < 1 || cols < 1)
    throw InputError("SymbolMatrix", "rows and cols must be positive");
  if (covector_dim < 0) throw InputError("SymbolMatrix", "covector_dim negative");
}

SymbolEntry& SymbolMatrix::at(int r, int c) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw InputError("SymbolMatrix", "entry index out of range");
  return entries_[r * cols_ + c];
}

const SymbolEntry& SymbolMatrix::at(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw InputError("SymbolMatrix", "entry index out of range");
  return entries_[r * cols_ + c];
}

void SymbolMatrix::add_term(int r, int c, std::vector<int> powers, Complex coef,
                            int norm_power) {
  if (static_cast<int>(powers.size()) != dim_)
    throw InputError("SymbolMatrix", "monomial power count does not match covector_dim");
  for (int p : powers)
    if (p < 0) throw InputError("SymbolMatrix", "monomial powers must be nonnegative");
  if (coef == 0.0) return;
  Monomial mono{std::move(powers), norm_power, coef};
  SymbolEntry& e = at(r, c);
  if (!e.empty() && e.degree() != std::optional<int>(mono.degree()))
    throw InputError("SymbolMatrix", "mixed homogeneity degrees in one entry");
  e.monomials.push_back(std::move(mono));
}

std::optional<int> SymbolMatrix::degree(int r, int c) const { return at(r, c).degree(); }

CMatrix SymbolMatrix::eval(const std::vector<double>& covector, double scale) const {
  if (static_cast<int>(covector.size()) != dim_)
    throw InputError("SymbolMatrix", "covector dimension mismatch");
  std::vector<double> xi(covector);
  for (double& x : xi) x *= scale;
  CMatrix out(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = at(r, c).eval(xi);
  return out;
}

CMatrix SymbolMatrix::eval(const CospherePoint& p, double scale) const {
  return eval(p.covector, scale);
}

SymbolMatrix SymbolMatrix::operator*(const SymbolMatrix& rhs) const {
  if (cols_ != rhs.rows_ || dim_ != rhs.dim_)
    throw InputError("SymbolMatrix", "dimension mismatch in symbol product");
  SymbolMatrix out(rows_, rhs.cols_, dim_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < rhs.cols_; ++c)
      for (int k = 0; k < cols_; ++k)
        for (const Monomial& a : at(r, k).monomials)
          for (const Monomial& b : rhs.at(k, c).monomials) {
            std::vector<int> powers(dim_);
            for (int i = 0; i < dim_; ++i) powers[i] = a.powers[i] + b.powers[i];
            out.add_term(r, c, std::move(powers), a.coef * b.coef,
                         a.norm_power + b.norm_power);
          }
  return out;
}

SymbolMatrix SymbolMatrix::operator+(const SymbolMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || dim_ != rhs.dim_)
    throw InputError("SymbolMatrix", "dimension mismatch in symbol sum");
  SymbolMatrix out = *this;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      for (const Monomial& b : rhs.at(r, c).monomials)
        out.add_term(r, c, b.powers, b.coef, b.norm_power);
  return out;
}

SymbolMatrix SymbolMatrix::scaled(Complex factor) const {
  SymbolMatrix out(rows_, cols_, dim_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      for (const Monomial& m : at(r, c).monomials)
        out.add_term(r, c, m.powers, factor * m.coef, m.norm_power);
  return out;
}

SymbolMatrix SymbolMatrix::hermitian_adjoint() const {
  SymbolMatrix out(cols_, rows_, dim_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      for (const Monomial& m : at(r, c).monomials)
        out.add_term(c, r, m.powers, std::conj(m.coef), m.norm_power);
  return out;
}

SymbolMatrix SymbolMatrix::constant(const CMatrix& value, int covector_dim) {
  SymbolMatrix out(static_cast<int>(value.rows()), static_cast<int>(value.cols()),
                   covector_dim);
  std::vector<int> zero(covector_dim, 0);
  for (int r = 0; r < value.rows(); ++r)
    for (int c = 0; c < value.cols(); ++c)
      if (value(r, c) != 0.0) out.add_term(r, c, zero, value(r, c), 0);
  return out;
}

namespace {
std::vector<int> expand_weights(const std::vector<int>& w, int n, const char* side) {
  if (static_cast<int>(w.size()) == n) return w;
  if (n % static_cast<int>(w.size()) == 0) {
    // block weights: repeat each weight over the fiber rank
    int rank = n / static_cast<int>(w.size());
    std::vector<int> out;
    out.reserve(n);
    for (int wj : w)
      for (int i = 0; i < rank; ++i) out.push_back(wj);
    return out;
  }
  throw InputError("dn_order_check",
                   std::string(side) + " weight count does not divide matrix size");
}
}  // namespace

DnVerdict dn_order_check(const SymbolMatrix& s, int declared_order,
                         const std::vector<int>& row_weights,
                         const std::vector<int>& col_weights) {
  std::vector<int> rw = expand_weights(row_weights, s.rows(), "row");
  std::vector<int> cw = expand_weights(col_weights, s.cols(), "column");
  DnVerdict verdict;
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c) {
      auto deg = s.degree(r, c);
      if (!deg) continue;  // structural zero satisfies any order
      int expected = declared_order - cw[c] + rw[r];
      if (*deg != expected) {
        verdict.pass = false;
        verdict.violations.push_back({r, c, expected, *deg});
      }
    }
  return verdict;
}

}  // namespace calderon
