#include "greenop/subst.hpp"

#include <utility>

#include "greenop/errors.hpp"

namespace greenop {

LinearSubst::LinearSubst(int dim) : dim_(dim), mat_(dim * dim), shift_(dim) {
  if (dim < 0) throw DimensionError("negative dimension");
}

LinearSubst LinearSubst::eval_at_zero(VarIndex i) {
  LinearSubst s(i + 1);
  for (int k = 0; k < i; ++k) s.set(k, k, Complex(1));
  // row i stays zero
  s.canonicalize();
  return s;
}

LinearSubst LinearSubst::point(const std::vector<Complex>& p) {
  LinearSubst s(static_cast<int>(p.size()));
  for (int k = 0; k < static_cast<int>(p.size()); ++k) s.set_shift(k, p[k]);
  s.canonicalize();
  return s;
}

LinearSubst LinearSubst::from_rows(const std::vector<std::vector<Complex>>& rows,
                                   const std::vector<Complex>& shift) {
  int d = static_cast<int>(rows.size());
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != d)
      throw DimensionError("substitution matrix must be square");
  if (!shift.empty() && static_cast<int>(shift.size()) != d)
    throw DimensionError("substitution shift length mismatch");
  LinearSubst s(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s.set(i, j, rows[i][j]);
  for (int i = 0; i < static_cast<int>(shift.size()); ++i) s.set_shift(i, shift[i]);
  s.canonicalize();
  return s;
}

bool LinearSubst::is_linear() const {
  for (const auto& v : shift_)
    if (!v.is_zero()) return false;
  return true;
}

Complex LinearSubst::entry(int i, int j) const {
  if (i < dim_ && j < dim_) return mat_[i * dim_ + j];
  return Complex(i == j ? 1 : 0);
}

Complex LinearSubst::shift(int i) const {
  if (i < dim_) return shift_[i];
  return Complex(0);
}

void LinearSubst::grow(int dim) {
  if (dim <= dim_) return;
  std::vector<Complex> m(dim * dim), s(dim);
  for (int i = 0; i < dim; ++i) {
    s[i] = shift(i);
    for (int j = 0; j < dim; ++j) m[i * dim + j] = entry(i, j);
  }
  dim_ = dim;
  mat_ = std::move(m);
  shift_ = std::move(s);
}

void LinearSubst::set(int i, int j, const Complex& v) {
  grow(std::max(i, j) + 1);
  mat_[i * dim_ + j] = v;
}

void LinearSubst::set_shift(int i, const Complex& v) {
  grow(i + 1);
  shift_[i] = v;
}

void LinearSubst::canonicalize() {
  while (dim_ > 0) {
    int r = dim_ - 1;
    bool pass_through = shift_[r].is_zero() && mat_[r * dim_ + r].is_one();
    for (int k = 0; pass_through && k < r; ++k)
      pass_through = mat_[r * dim_ + k].is_zero() && mat_[k * dim_ + r].is_zero();
    if (!pass_through) break;
    int d = dim_ - 1;
    std::vector<Complex> m(d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i * d + j] = mat_[i * dim_ + j];
    mat_ = std::move(m);
    shift_.resize(d);
    dim_ = d;
  }
}

LinearSubst LinearSubst::after(const LinearSubst& other) const {
  int d = std::max(dim_, other.dim_);
  LinearSubst r(d);
  for (int i = 0; i < d; ++i) {
    Complex s = shift(i);
    for (int k = 0; k < d; ++k) {
      const Complex e = entry(i, k);
      if (e.is_zero()) continue;
      s += e * other.shift(k);
      for (int j = 0; j < d; ++j) {
        const Complex g = other.entry(k, j);
        if (!g.is_zero()) r.set(i, j, r.entry(i, j) + e * g);
      }
    }
    r.set_shift(i, s);
  }
  r.canonicalize();
  return r;
}

std::vector<Complex> solve_linear_system(std::vector<std::vector<Complex>> a,
                                         std::vector<Complex> rhs) {
  const int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (!a[row][col].is_zero()) {
        pivot = row;
        break;
      }
    if (pivot < 0) throw SingularMatrixError("singular matrix");
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    Complex inv = a[col][col].inverse();
    for (int j = col; j < n; ++j) a[col][j] *= inv;
    rhs[col] *= inv;
    for (int row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      Complex f = a[row][col];
      for (int j = col; j < n; ++j) a[row][j] -= f * a[col][j];
      rhs[row] -= f * rhs[col];
    }
  }
  return rhs;
}

LinearSubst LinearSubst::inverse() const {
  const int n = dim_;
  if (n == 0) return LinearSubst();
  // Gauss-Jordan on [M | I], then invert the shift: x = M^-1 (y - b).
  std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n));
  std::vector<std::vector<Complex>> inv(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i) {
    inv[i][i] = Complex(1);
    for (int j = 0; j < n; ++j) a[i][j] = mat_[i * n + j];
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (!a[row][col].is_zero()) {
        pivot = row;
        break;
      }
    if (pivot < 0) throw SingularMatrixError("substitution matrix not invertible");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Complex s = a[col][col].inverse();
    for (int j = 0; j < n; ++j) {
      a[col][j] *= s;
      inv[col][j] *= s;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      Complex f = a[row][col];
      for (int j = 0; j < n; ++j) {
        a[row][j] -= f * a[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }
  LinearSubst r(n);
  for (int i = 0; i < n; ++i) {
    Complex s(0);
    for (int j = 0; j < n; ++j) {
      r.set(i, j, inv[i][j]);
      s -= inv[i][j] * shift_[j];
    }
    r.set_shift(i, s);
  }
  r.canonicalize();
  return r;
}

std::vector<Complex> LinearSubst::apply_point(std::vector<Complex> x, int out_dim) const {
  int d = std::max({dim_, out_dim, static_cast<int>(x.size())});
  x.resize(d);
  std::vector<Complex> y(out_dim);
  for (int i = 0; i < out_dim; ++i) {
    Complex v = shift(i);
    for (int j = 0; j < d; ++j) {
      const Complex e = entry(i, j);
      if (!e.is_zero()) v += e * x[j];
    }
    y[i] = v;
  }
  return y;
}

bool LinearSubst::operator==(const LinearSubst& o) const {
  return dim_ == o.dim_ && mat_ == o.mat_ && shift_ == o.shift_;
}

bool LinearSubst::operator<(const LinearSubst& o) const {
  if (dim_ != o.dim_) return dim_ < o.dim_;
  if (mat_ != o.mat_)
    return std::lexicographical_compare(mat_.begin(), mat_.end(), o.mat_.begin(), o.mat_.end());
  return std::lexicographical_compare(shift_.begin(), shift_.end(), o.shift_.begin(),
                                      o.shift_.end());
}

std::string LinearSubst::str() const {
  std::string out = "subst[";
  for (int i = 0; i < dim_; ++i) {
    if (i) out += ",";
    out += "[";
    for (int j = 0; j < dim_; ++j) {
      if (j) out += ",";
      out += mat_[i * dim_ + j].str();
    }
    out += "]";
  }
  out += "]";
  if (!is_linear()) {
    out += "@[";
    for (int i = 0; i < dim_; ++i) {
      if (i) out += ",";
      out += shift_[i].str();
    }
    out += "]";
  }
  return out;
}

}  // namespace greenop
