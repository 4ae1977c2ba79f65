#include "nlgqkd/qmath.hpp"

#include <cmath>
#include <stdexcept>

namespace nlgqkd::qmath {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::zeros(int r, int c) { return CMatrix(r, c); }

CMatrix CMatrix::dagger() const {
  CMatrix m(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(j, i) = std::conj(at(i, j));
  return m;
}

cplx CMatrix::trace() const {
  if (rows != cols) throw std::invalid_argument("trace: matrix not square");
  cplx t = 0.0;
  for (int i = 0; i < rows; ++i) t += at(i, i);
  return t;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  if (rows != o.rows || cols != o.cols)
    throw std::invalid_argument("matrix add: dimension mismatch");
  CMatrix m(rows, cols);
  for (size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] + o.a[k];
  return m;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  if (rows != o.rows || cols != o.cols)
    throw std::invalid_argument("matrix sub: dimension mismatch");
  CMatrix m(rows, cols);
  for (size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] - o.a[k];
  return m;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols != o.rows) throw std::invalid_argument("matrix mul: dimension mismatch");
  CMatrix m(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const cplx v = at(i, k);
      if (v == cplx(0.0)) continue;
      for (int j = 0; j < o.cols; ++j) m.at(i, j) += v * o.at(k, j);
    }
  return m;
}

CMatrix CMatrix::operator*(cplx s) const {
  CMatrix m(rows, cols);
  for (size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] * s;
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows != o.rows || cols != o.cols)
    throw std::invalid_argument("matrix add: dimension mismatch");
  for (size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
  return *this;
}

CMatrix operator*(cplx s, const CMatrix& m) { return m * s; }

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double d = 0.0;
  for (size_t k = 0; k < a.a.size(); ++k) d = std::max(d, std::abs(a.a[k] - b.a[k]));
  return d;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows != m.cols) return false;
  for (int i = 0; i < m.rows; ++i)
    for (int j = i; j < m.cols; ++j)
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol) return false;
  return true;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix m(a.rows * b.rows, a.cols * b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) {
      const cplx v = a.at(i, j);
      if (v == cplx(0.0)) continue;
      for (int k = 0; k < b.rows; ++k)
        for (int l = 0; l < b.cols; ++l)
          m.at(i * b.rows + k, j * b.cols + l) = v * b.at(k, l);
    }
  return m;
}

CMatrix pauli(char name) {
  CMatrix m(2, 2);
  switch (name) {
    case 'I': m.at(0, 0) = 1.0; m.at(1, 1) = 1.0; break;
    case 'X': m.at(0, 1) = 1.0; m.at(1, 0) = 1.0; break;
    case 'Y': m.at(0, 1) = cplx(0.0, -1.0); m.at(1, 0) = cplx(0.0, 1.0); break;
    case 'Z': m.at(0, 0) = 1.0; m.at(1, 1) = -1.0; break;
    default: throw std::invalid_argument(std::string("pauli: unknown name '") + name + "'");
  }
  return m;
}

void QState::validate() const {
  if (dim <= 0 || density.rows != dim || density.cols != dim)
    throw std::invalid_argument("QState: bad dimensions");
  if (!is_hermitian(density, kAlgebraicTol))
    throw std::invalid_argument("QState: density not Hermitian");
  if (std::abs(density.trace() - cplx(1.0)) > kAlgebraicTol)
    throw std::invalid_argument("QState: trace != 1");
  // Positivity witness: every diagonal entry of a PSD matrix is >= 0 and
  // |m_ij|^2 <= m_ii * m_jj. Cheap necessary conditions, adequate for the
  // states constructed here (explicit mixtures of pure states).
  for (int i = 0; i < dim; ++i)
    if (density.at(i, i).real() < -kStructuralTol)
      throw std::invalid_argument("QState: negative diagonal entry");
}

std::vector<EigProjector> eig_projectors(const CMatrix& observable) {
  if (observable.rows != observable.cols)
    throw std::invalid_argument("eig_projectors: not square");
  if (!is_hermitian(observable, kStructuralTol))
    throw std::invalid_argument("eig_projectors: not Hermitian");
  const CMatrix sq = observable * observable;
  const CMatrix id = CMatrix::identity(observable.rows);
  if (max_abs_diff(sq, id) > kStructuralTol)
    throw std::invalid_argument("eig_projectors: observable is not an involution");
  std::vector<EigProjector> out;
  out.push_back({+1.0, (id + observable) * 0.5});
  out.push_back({-1.0, (id - observable) * 0.5});
  return out;
}

double expectation(const QState& state, const CMatrix& op) {
  if (op.rows != state.dim || op.cols != state.dim)
    throw std::invalid_argument("expectation: dimension mismatch");
  cplx t = 0.0;
  for (int i = 0; i < state.dim; ++i)
    for (int k = 0; k < state.dim; ++k) t += state.density.at(i, k) * op.at(k, i);
  if (std::abs(t.imag()) > kStructuralTol)
    throw std::invalid_argument("expectation: imaginary residue too large");
  return t.real();
}

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<int>& traced) {
  int total = 1;
  for (int d : dims) total *= d;
  if (m.rows != total || m.cols != total)
    throw std::invalid_argument("partial_trace: dims do not match matrix");
  const int ns = static_cast<int>(dims.size());
  std::vector<bool> is_traced(ns, false);
  for (int t : traced) {
    if (t < 0 || t >= ns) throw std::invalid_argument("partial_trace: bad subsystem index");
    is_traced[t] = true;
  }
  std::vector<int> keep;
  int kept_dim = 1, traced_dim = 1;
  for (int s = 0; s < ns; ++s) {
    if (is_traced[s]) traced_dim *= dims[s];
    else { keep.push_back(s); kept_dim *= dims[s]; }
  }
  // stride of subsystem s in the row-major multi-index
  std::vector<int> stride(ns, 1);
  for (int s = ns - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

  CMatrix out(kept_dim, kept_dim);
  // enumerate kept multi-indices (i, j) and traced multi-index t
  std::vector<int> kidx(keep.size(), 0), jidx(keep.size(), 0), tidx;
  std::vector<int> tsys;
  for (int s = 0; s < ns; ++s) if (is_traced[s]) tsys.push_back(s);
  tidx.assign(tsys.size(), 0);

  auto offset = [&](const std::vector<int>& sys, const std::vector<int>& idx) {
    int off = 0;
    for (size_t s = 0; s < sys.size(); ++s) off += idx[s] * stride[sys[s]];
    return off;
  };
  auto advance = [&](std::vector<int>& idx, const std::vector<int>& sys) {
    for (int s = static_cast<int>(sys.size()) - 1; s >= 0; --s) {
      if (++idx[s] < dims[sys[s]]) return true;
      idx[s] = 0;
    }
    return false;
  };

  for (int i = 0; i < kept_dim; ++i) {
    for (int j = 0; j < kept_dim; ++j) {
      const int ri = offset(keep, kidx), cj = offset(keep, jidx);
      cplx sum = 0.0;
      std::fill(tidx.begin(), tidx.end(), 0);
      for (int t = 0; t < traced_dim; ++t) {
        const int off = offset(tsys, tidx);
        sum += m.at(ri + off, cj + off);
        advance(tidx, tsys);
      }
      out.at(i, j) = sum;
      advance(jidx, keep);
    }
    advance(kidx, keep);
  }
  return out;
}

}  // namespace nlgqkd::qmath
