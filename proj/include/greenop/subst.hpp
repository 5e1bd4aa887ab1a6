#ifndef GREENOP_SUBST_HPP
#define GREENOP_SUBST_HPP

#include <string>
#include <vector>

#include "greenop/scalar.hpp"

namespace greenop {

/// Variable index. 0 is the lead variable t, 1.. are the space variables.
using VarIndex = int;

/// An affine substitution x |-> M x + b on the variable space, stored as a
/// square dim x dim matrix plus shift and extended by the identity beyond
/// dim: coordinates the matrix does not mention pass through unchanged.
/// The action on functions is u |-> u(Mx + b).
///
/// Instances are canonicalized on construction by trimming trailing
/// pass-through coordinates, so structural equality coincides with equality
/// of the represented maps.
class LinearSubst {
 public:
  /// The identity map.
  LinearSubst() = default;
  /// Zero matrix, zero shift on dim coordinates (annihilates them).
  explicit LinearSubst(int dim);

  static LinearSubst identity() { return LinearSubst(); }
  /// E_i: identity with row i zeroed; evaluation at x_i = 0.
  static LinearSubst eval_at_zero(VarIndex i);
  /// Constant map onto the given point (zero matrix, shift = point).
  static LinearSubst point(const std::vector<Complex>& p);
  static LinearSubst from_rows(const std::vector<std::vector<Complex>>& rows,
                               const std::vector<Complex>& shift = {});

  int dim() const { return dim_; }
  bool is_identity() const { return dim_ == 0; }
  bool is_linear() const;

  /// Entry with the identity extension applied outside the stored block.
  Complex entry(int i, int j) const;
  Complex shift(int i) const;

  void set(int i, int j, const Complex& v);
  void set_shift(int i, const Complex& v);
  /// Trim trailing pass-through coordinates; call after a series of set()s.
  void canonicalize();

  /// Map composition (*this)(other(x)).
  LinearSubst after(const LinearSubst& other) const;
  /// Exact inverse; throws SingularMatrixError.
  LinearSubst inverse() const;
  /// Image of the point x under the map (x padded/truncated to any length).
  std::vector<Complex> apply_point(std::vector<Complex> x, int out_dim) const;

  bool operator==(const LinearSubst& o) const;
  bool operator!=(const LinearSubst& o) const { return !(*this == o); }
  bool operator<(const LinearSubst& o) const;

  /// "subst[[1,0],[-2,1]]" with "@[s0,s1]" appended for a nonzero shift.
  std::string str() const;

 private:
  void grow(int dim);

  int dim_ = 0;
  std::vector<Complex> mat_;    // row-major dim_ x dim_
  std::vector<Complex> shift_;  // size dim_
};

/// Solves A x = rhs exactly by Gauss-Jordan elimination.
/// Throws SingularMatrixError when A is singular.
std::vector<Complex> solve_linear_system(std::vector<std::vector<Complex>> a,
                                         std::vector<Complex> rhs);

}  // namespace greenop

#endif
