#pragma once

// Exact arithmetic over Q(i) and sparse linear algebra on top of it.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace mhd {

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An element re + im*i of Q(i). Both parts are kept canonical by GMP.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar i() { return Scalar(0, 1); }
  static Scalar fraction(long num, long den) {
    if (den == 0) throw ArithmeticError("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(q);
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  Scalar inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero");
    mpq_class n = norm();
    return Scalar(re_ / n, -im_ / n);
  }

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Text form: "a/b", "c/d*i" or "a/b+c/d*i".
  std::string str() const {
    if (sgn(im_) == 0) return re_.get_str();
    std::string imag;
    if (im_ == 1) {
      imag = "i";
    } else if (im_ == -1) {
      imag = "-i";
    } else {
      imag = im_.get_str() + "*i";
    }
    if (sgn(re_) == 0) return imag;
    if (sgn(im_) > 0) return re_.get_str() + "+" + imag;
    return re_.get_str() + imag;
  }

  static Scalar parse(std::string_view text) {
    std::string s;
    for (char c : text) {
      if (c != ' ') s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty scalar");
    auto rational = [&](const std::string& part) {
      if (part.empty() || part == "+") return mpq_class(1);
      if (part == "-") return mpq_class(-1);
      std::string body = part[0] == '+' ? part.substr(1) : part;
      for (char c : body) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-')) {
          throw std::invalid_argument("malformed scalar: " + std::string(text));
        }
      }
      mpq_class q;
      if (q.set_str(body, 10) != 0) {
        throw std::invalid_argument("malformed scalar: " + std::string(text));
      }
      if (q.get_den() == 0) throw ArithmeticError("zero denominator in " + std::string(text));
      q.canonicalize();
      return q;
    };
    if (s.back() != 'i') return Scalar(rational(s));
    std::string imag = s.substr(0, s.size() - 1);
    if (!imag.empty() && imag.back() == '*') imag.pop_back();
    // Split at the last sign that is not the leading character.
    std::size_t split = std::string::npos;
    for (std::size_t k = imag.size(); k-- > 1;) {
      if (imag[k] == '+' || imag[k] == '-') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) return Scalar(0, rational(imag));
    return Scalar(rational(imag.substr(0, split)), rational(imag.substr(split)));
  }

 private:
  mpq_class re_;
  mpq_class im_;
};

// Sparse vector: entries sorted by index, no stored zeros.
class Vec {
 public:
  using Entry = std::pair<std::size_t, Scalar>;

  Vec() = default;
  explicit Vec(std::size_t size) : size_(size) {}

  static Vec unit(std::size_t size, std::size_t k, Scalar v = 1) {
    Vec out(size);
    if (!v.is_zero()) out.entries_.emplace_back(k, std::move(v));
    return out;
  }
  static Vec from_dense(const std::vector<Scalar>& xs) {
    Vec out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (!xs[k].is_zero()) out.entries_.emplace_back(k, xs[k]);
    }
    return out;
  }
  // Entries may be unsorted and repeated; they are summed.
  static Vec from_entries(std::size_t size, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Vec out(size);
    for (auto& [k, v] : entries) {
      if (k >= size) throw DimensionMismatch("vector index out of range");
      if (!out.entries_.empty() && out.entries_.back().first == k) {
        out.entries_.back().second += v;
        if (out.entries_.back().second.is_zero()) out.entries_.pop_back();
      } else if (!v.is_zero()) {
        out.entries_.emplace_back(k, std::move(v));
      }
    }
    return out;
  }

  std::size_t size() const { return size_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }

  Scalar at(std::size_t k) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, std::size_t key) { return e.first < key; });
    if (it != entries_.end() && it->first == k) return it->second;
    return Scalar();
  }

  std::vector<Scalar> dense() const {
    std::vector<Scalar> out(size_);
    for (const auto& [k, v] : entries_) out[k] = v;
    return out;
  }

  // this += c * other
  void axpy(const Scalar& c, const Vec& other) {
    if (other.size_ != size_) throw DimensionMismatch("vector sizes differ");
    if (c.is_zero() || other.entries_.empty()) return;
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        merged.push_back(std::move(*a));
        ++a;
      } else if (a == entries_.end() || b->first < a->first) {
        merged.emplace_back(b->first, c * b->second);
        ++b;
      } else {
        Scalar v = a->second + c * b->second;
        if (!v.is_zero()) merged.emplace_back(a->first, std::move(v));
        ++a;
        ++b;
      }
    }
    entries_ = std::move(merged);
  }

  Vec scaled(const Scalar& c) const {
    Vec out(size_);
    if (c.is_zero()) return out;
    out.entries_.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.entries_.emplace_back(k, v * c);
    return out;
  }
  Vec conj() const {
    Vec out(size_);
    out.entries_.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.entries_.emplace_back(k, v.conj());
    return out;
  }

  friend Vec operator+(Vec a, const Vec& b) {
    a.axpy(1, b);
    return a;
  }
  friend Vec operator-(Vec a, const Vec& b) {
    a.axpy(-1, b);
    return a;
  }
  friend bool operator==(const Vec& a, const Vec& b) {
    return a.size_ == b.size_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }

  // Bilinear sum of products (no conjugation).
  Scalar dot(const Vec& other) const {
    Scalar acc;
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() && b != other.entries_.end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        acc += a->second * b->second;
        ++a;
        ++b;
      }
    }
    return acc;
  }

  // Tensor product with index i * other.size() + j.
  Vec kron(const Vec& other) const {
    Vec out(size_ * other.size_);
    out.entries_.reserve(entries_.size() * other.entries_.size());
    for (const auto& [i, a] : entries_) {
      for (const auto& [j, b] : other.entries_) {
        out.entries_.emplace_back(i * other.size_ + j, a * b);
      }
    }
    return out;
  }

  std::string str() const {
    std::string out = "[";
    bool first = true;
    for (const auto& [k, v] : entries_) {
      if (!first) out += ", ";
      first = false;
      out += std::to_string(k) + ":" + v.str();
    }
    return out + "]";
  }

 private:
  std::size_t size_ = 0;
  std::vector<Entry> entries_;
};

// Sparse matrix stored by columns.
class Matrix {
 public:
  using Triplet = std::tuple<std::size_t, std::size_t, Scalar>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), columns_(cols, Vec(rows)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.columns_[k] = Vec::unit(n, k);
    return m;
  }
  static Matrix from_columns(std::size_t rows, std::vector<Vec> cols) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionMismatch("column has wrong length");
      m.columns_[j] = std::move(cols[j]);
    }
    return m;
  }
  static Matrix from_rows(std::size_t cols, const std::vector<Vec>& rows) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("row has wrong length");
      for (const auto& [j, v] : rows[i].entries()) t.emplace_back(i, j, v);
    }
    return from_triplets(rows.size(), cols, std::move(t));
  }
  static Matrix from_dense(const std::vector<std::vector<Scalar>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows[0].size();
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged dense matrix");
      for (std::size_t j = 0; j < c; ++j) {
        if (!rows[i][j].is_zero()) t.emplace_back(i, j, rows[i][j]);
      }
    }
    return from_triplets(r, c, std::move(t));
  }
  static Matrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
    std::vector<std::vector<Vec::Entry>> per_col(cols);
    for (auto& [i, j, v] : triplets) {
      if (i >= rows || j >= cols) throw DimensionMismatch("triplet out of range");
      per_col[j].emplace_back(i, std::move(v));
    }
    Matrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) m.columns_[j] = Vec::from_entries(rows, std::move(per_col[j]));
    return m;
  }
  static Matrix row(const Vec& v) {
    Matrix m(1, v.size());
    for (const auto& [j, x] : v.entries()) m.columns_[j] = Vec::unit(1, 0, x);
    return m;
  }
  static Matrix column(const Vec& v) { return from_columns(v.size(), {v}); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Vec& col(std::size_t j) const { return columns_.at(j); }
  Scalar at(std::size_t i, std::size_t j) const { return columns_.at(j).at(i); }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.nnz();
    return n;
  }
  bool is_zero() const {
    return std::all_of(columns_.begin(), columns_.end(), [](const Vec& c) { return c.is_zero(); });
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < cols_; ++j) {
      for (const auto& [i, v] : columns_[j].entries()) t.emplace_back(i, j, v);
    }
    return t;
  }

  std::vector<Vec> row_vectors() const {
    std::vector<std::vector<Vec::Entry>> per_row(rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
      for (const auto& [i, v] : columns_[j].entries()) per_row[i].emplace_back(j, v);
    }
    std::vector<Vec> out;
    out.reserve(rows_);
    for (auto& r : per_row) out.push_back(Vec::from_entries(cols_, std::move(r)));
    return out;
  }

  Vec operator*(const Vec& x) const {
    if (x.size() != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
    std::vector<Vec::Entry> acc;
    for (const auto& [j, v] : x.entries()) {
      for (const auto& [i, a] : columns_[j].entries()) acc.emplace_back(i, a * v);
    }
    return Vec::from_entries(rows_, std::move(acc));
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionMismatch("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
    }
    Matrix out(a.rows_, b.cols_);
    for (std::size_t j = 0; j < b.cols_; ++j) out.columns_[j] = a * b.columns_[j];
    return out;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix out = a;
    for (std::size_t j = 0; j < a.cols_; ++j) out.columns_[j].axpy(1, b.columns_[j]);
    return out;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix out = a;
    for (std::size_t j = 0; j < a.cols_; ++j) out.columns_[j].axpy(-1, b.columns_[j]);
    return out;
  }
  Matrix scaled(const Scalar& c) const {
    Matrix out = *this;
    for (auto& col : out.columns_) col = col.scaled(c);
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.columns_ == b.columns_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    auto rs = row_vectors();
    for (std::size_t i = 0; i < rows_; ++i) out.columns_[i] = std::move(rs[i]);
    return out;
  }
  Matrix conj() const {
    Matrix out = *this;
    for (auto& col : out.columns_) col = col.conj();
    return out;
  }
  Matrix adjoint() const { return transpose().conj(); }

  Matrix submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
    std::vector<long> where(rows_, -1);
    for (std::size_t k = 0; k < row_idx.size(); ++k) where.at(row_idx[k]) = static_cast<long>(k);
    Matrix out(row_idx.size(), col_idx.size());
    for (std::size_t c = 0; c < col_idx.size(); ++c) {
      std::vector<Vec::Entry> es;
      for (const auto& [i, v] : columns_.at(col_idx[c]).entries()) {
        if (where[i] >= 0) es.emplace_back(static_cast<std::size_t>(where[i]), v);
      }
      out.columns_[c] = Vec::from_entries(row_idx.size(), std::move(es));
    }
    return out;
  }

  std::vector<std::vector<Scalar>> dense() const {
    std::vector<std::vector<Scalar>> out(rows_, std::vector<Scalar>(cols_));
    for (std::size_t j = 0; j < cols_; ++j) {
      for (const auto& [i, v] : columns_[j].entries()) out[i][j] = v;
    }
    return out;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) {
      throw DimensionMismatch("matrix shapes differ: " + shape() + " vs " + b.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Vec> columns_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  std::size_t bc = b.cols();
  std::vector<Vec> cols;
  cols.reserve(a.cols() * bc);
  for (std::size_t ja = 0; ja < a.cols(); ++ja) {
    for (std::size_t jb = 0; jb < bc; ++jb) cols.push_back(a.col(ja).kron(b.col(jb)));
  }
  return Matrix::from_columns(a.rows() * b.rows(), std::move(cols));
}

inline Matrix kron(const std::vector<Matrix>& factors) {
  if (factors.empty()) return Matrix::identity(1);
  Matrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

// Linear map V_0 (x) ... (x) V_{k-1} -> V_{order[0]} (x) ... (x) V_{order[k-1]}.
inline Matrix permute_legs(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& order) {
  std::size_t k = dims.size();
  if (order.size() != k) throw DimensionMismatch("leg permutation has wrong length");
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::size_t> out_dims(k);
  for (std::size_t t = 0; t < k; ++t) out_dims[t] = dims.at(order[t]);
  std::vector<Vec> cols;
  cols.reserve(total);
  std::vector<std::size_t> digit(k, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t t = k; t-- > 0;) {
      digit[t] = rem % dims[t];
      rem /= dims[t];
    }
    std::size_t target = 0;
    for (std::size_t t = 0; t < k; ++t) target = target * out_dims[t] + digit[order[t]];
    cols.push_back(Vec::unit(total, target));
  }
  return Matrix::from_columns(total, std::move(cols));
}

// Row echelon form built one row at a time; suited to tall sparse systems.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t ncols) : ncols_(ncols) {}

  std::size_t ncols() const { return ncols_; }
  std::size_t rank() const { return pivots_.size(); }

  // Returns true when the row enlarged the row space.
  bool add(Vec row) {
    if (row.size() != ncols_) throw DimensionMismatch("row has wrong length");
    reduce(row);
    if (row.is_zero()) return false;
    Scalar lead = row.entries().front().second;
    std::size_t c = row.entries().front().first;
    pivots_.emplace(c, row.scaled(lead.inverse()));
    reduced_ = false;
    return true;
  }

  void reduce(Vec& row) const {
    // Pivot rows only carry entries right of their lead, so a left-to-right
    // sweep never revisits a column.
    std::size_t pos = 0;
    while (pos < row.entries().size()) {
      std::size_t c = row.entries()[pos].first;
      auto it = pivots_.find(c);
      if (it == pivots_.end() || !reduced_lead_only(it->second, c)) {
        ++pos;
        continue;
      }
      Scalar coef = row.entries()[pos].second;
      row.axpy(-coef, it->second);
      const auto& es = row.entries();
      pos = static_cast<std::size_t>(
          std::lower_bound(es.begin(), es.end(), c + 1,
                           [](const Vec::Entry& e, std::size_t key) { return e.first < key; }) -
          es.begin());
    }
  }

  // Bring to reduced row echelon form.
  void finish() {
    if (reduced_) return;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      Vec& r = it->second;
      std::vector<std::pair<std::size_t, Scalar>> hits;
      for (const auto& [c, v] : r.entries()) {
        if (c != it->first && pivots_.count(c) != 0) hits.emplace_back(c, v);
      }
      for (const auto& [c, v] : hits) r.axpy(-v, pivots_.at(c));
    }
    reduced_ = true;
  }

  const std::map<std::size_t, Vec>& pivots() const { return pivots_; }

  // Kernel of the system restricted to the first nvars columns.
  std::vector<Vec> kernel(std::size_t nvars) {
    finish();
    std::vector<Vec> out;
    for (std::size_t f = 0; f < nvars; ++f) {
      if (pivots_.count(f) != 0) continue;
      std::vector<Vec::Entry> es{{f, Scalar(1)}};
      for (const auto& [c, r] : pivots_) {
        if (c >= nvars) continue;
        Scalar v = r.at(f);
        if (!v.is_zero()) es.emplace_back(c, -v);
      }
      out.push_back(Vec::from_entries(nvars, std::move(es)));
    }
    return out;
  }

 private:
  static bool reduced_lead_only(const Vec& pivot_row, std::size_t c) {
    return !pivot_row.is_zero() && pivot_row.entries().front().first == c;
  }

  std::size_t ncols_;
  std::map<std::size_t, Vec> pivots_;
  bool reduced_ = true;
};

inline std::size_t rank(const Matrix& m) {
  // Eliminate along the shorter side.
  if (m.cols() < m.rows()) {
    RowEchelon e(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) e.add(m.col(j));
    return e.rank();
  }
  RowEchelon e(m.cols());
  for (auto& r : m.row_vectors()) e.add(std::move(r));
  return e.rank();
}

inline std::vector<Vec> kernel(const Matrix& m) {
  RowEchelon e(m.cols());
  for (auto& r : m.row_vectors()) e.add(std::move(r));
  return e.kernel(m.cols());
}

struct LinearSolution {
  Matrix particular;  // cols(m) x cols(rhs)
  std::vector<Vec> kernel;
};

// Solves m * X = rhs. Returns nullopt when some column is inconsistent.
inline std::optional<LinearSolution> solve_linear(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != rhs.rows()) throw DimensionMismatch("solve_linear: rhs row count differs");
  std::size_t n = m.cols();
  std::size_t k = rhs.cols();
  RowEchelon e(n + k);
  auto mrows = m.row_vectors();
  auto rrows = rhs.row_vectors();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Vec::Entry> es = mrows[i].entries();
    for (const auto& [j, v] : rrows[i].entries()) es.emplace_back(n + j, v);
    e.add(Vec::from_entries(n + k, std::move(es)));
  }
  e.finish();
  for (const auto& [c, r] : e.pivots()) {
    if (c >= n) return std::nullopt;
  }
  std::vector<Matrix::Triplet> t;
  for (const auto& [c, r] : e.pivots()) {
    for (const auto& [j, v] : r.entries()) {
      if (j >= n) t.emplace_back(c, j - n, v);
    }
  }
  LinearSolution sol{Matrix::from_triplets(n, k, std::move(t)), e.kernel(n)};
  return sol;
}

inline bool is_bijective(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  auto sol = solve_linear(m, Matrix::identity(m.rows()));
  if (!sol || !sol->kernel.empty()) return std::nullopt;
  return sol->particular;
}

class NotHermitian : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Decides positive semidefiniteness of a Hermitian matrix by symmetric
// elimination with diagonal pivoting.
inline bool hermitian_psd(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_psd: matrix not square");
  if (m != m.adjoint()) throw NotHermitian("hermitian_psd: matrix is not Hermitian");
  auto a = m.dense();
  std::size_t n = m.rows();
  std::vector<bool> active(n, true);
  for (std::size_t step = 0; step < n; ++step) {
    long pivot = -1;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k]) continue;
      if (sgn(a[k][k].re()) < 0) return false;
      if (pivot < 0 && sgn(a[k][k].re()) > 0) pivot = static_cast<long>(k);
    }
    if (pivot < 0) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (active[i] && active[j] && !a[i][j].is_zero()) return false;
        }
      }
      return true;
    }
    auto p = static_cast<std::size_t>(pivot);
    active[p] = false;
    Scalar inv = a[p][p].inverse();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || a[i][p].is_zero()) continue;
      Scalar f = a[i][p] * inv;
      for (std::size_t j = 0; j < n; ++j) {
        if (active[j] && !a[p][j].is_zero()) a[i][j] -= f * a[p][j];
      }
    }
  }
  return true;
}

// Square root of a nonnegative rational whose numerator and denominator are
// perfect squares; nullopt otherwise.
inline std::optional<Scalar> rational_sqrt(const Scalar& x) {
  if (!x.is_real() || sgn(x.re()) < 0) return std::nullopt;
  const mpz_class& num = x.re().get_num();
  const mpz_class& den = x.re().get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  mpq_class r(rn, rd);
  r.canonicalize();
  return Scalar(r);
}

}  // namespace mhd
